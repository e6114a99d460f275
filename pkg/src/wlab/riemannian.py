"""Real exterior algebra over Euclidean R^d and the Betti-number predicate.

Forms are stored on the orthonormal basis dx^I (I strictly increasing,
0-based), so the inner product is the plain dot product of coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import multiindex as mi

VANISHES = "vanishes"
PARALLEL_ONLY = "parallel-only"
NO_CLAIM = "no-claim"


@dataclass(frozen=True, eq=False)
class RealForm:
    d: int
    k: int
    coeffs: np.ndarray

    def __post_init__(self):
        if not 0 <= self.k <= self.d:
            raise ValueError(f"degree {self.k} outside 0..{self.d}")
        c = np.array(self.coeffs, dtype=float).reshape(-1)
        if c.shape != (len(mi.combos(self.d, self.k)),):
            raise ValueError("coefficient vector has the wrong length")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def zero(cls, d: int, k: int) -> "RealForm":
        return cls(d, k, np.zeros(len(mi.combos(d, k))))

    @classmethod
    def basis(cls, d: int, I) -> "RealForm":
        I = mi.check(I, d)
        out = np.zeros(len(mi.combos(d, len(I))))
        out[mi.positions(d, len(I))[I]] = 1.0
        return cls(d, len(I), out)

    @classmethod
    def random(cls, d: int, k: int, rng) -> "RealForm":
        return cls(d, k, rng.normal(size=len(mi.combos(d, k))))

    def __add__(self, other: "RealForm") -> "RealForm":
        _same(self, other)
        return RealForm(self.d, self.k, self.coeffs + other.coeffs)

    def __sub__(self, other: "RealForm") -> "RealForm":
        _same(self, other)
        return RealForm(self.d, self.k, self.coeffs - other.coeffs)

    def __neg__(self) -> "RealForm":
        return RealForm(self.d, self.k, -self.coeffs)

    def __mul__(self, c: float) -> "RealForm":
        return RealForm(self.d, self.k, c * self.coeffs)

    __rmul__ = __mul__

    def __getitem__(self, I) -> float:
        return float(self.coeffs[mi.positions(self.d, self.k)[mi.check(I, self.d)]])

    def norm2(self) -> float:
        return float(self.coeffs @ self.coeffs)

    def __repr__(self) -> str:
        terms = [f"{c:.6g}*" + ("^".join(f"dx{i}" for i in I) or "1")
                 for I, c in zip(mi.combos(self.d, self.k), self.coeffs) if abs(c) > 1e-14]
        return f"RealForm({self.k}: " + (" + ".join(terms) or "0") + ")"


def _same(a: RealForm, b: RealForm) -> None:
    if a.d != b.d or a.k != b.k:
        raise ValueError(f"shape mismatch: (d={a.d}, k={a.k}) vs (d={b.d}, k={b.k})")


def dx(d: int, i: int) -> RealForm:
    return RealForm.basis(d, (i,))


def volume(d: int) -> RealForm:
    return RealForm.basis(d, tuple(range(d)))


def real_wedge(a: RealForm, b: RealForm) -> RealForm:
    if a.d != b.d:
        raise ValueError("forms over different dimensions")
    k = a.k + b.k
    if k > a.d:
        raise ValueError(f"wedge degree {k} exceeds d={a.d}")
    out = np.zeros(len(mi.combos(a.d, k)))
    pos = mi.positions(a.d, k)
    for I, x in zip(mi.combos(a.d, a.k), a.coeffs):
        if x == 0:
            continue
        for J, y in zip(mi.combos(b.d, b.k), b.coeffs):
            sign, res = mi.merge(I, J)
            if sign and y != 0:
                out[pos[res]] += sign * x * y
    return RealForm(a.d, k, out)


def contraction_matrix(d: int, k: int, X) -> np.ndarray:
    """Matrix of I_X from degree k to degree k-1 for a vector X in R^d."""
    X = np.asarray(X, dtype=float)
    if X.shape != (d,):
        raise ValueError("vector has the wrong dimension")
    return sum(x * mi.annihilation(d, k, i) for i, x in enumerate(X))


def real_contract(X, a: RealForm) -> RealForm:
    """I_X a; X is a vector in R^d or an integer selecting e_i.  Functions map to 0."""
    if isinstance(X, (int, np.integer)):
        X = np.eye(a.d)[X]
    if a.k == 0:
        np.asarray(X, dtype=float).reshape(a.d)
        return RealForm.zero(a.d, 0)
    return RealForm(a.d, a.k - 1, contraction_matrix(a.d, a.k, X) @ a.coeffs)


def real_inner(a: RealForm, b: RealForm) -> float:
    _same(a, b)
    return float(a.coeffs @ b.coeffs)


def betti_prediction(d: int, k: int, p_level, strict: bool = True) -> str:
    """Vanishing predicate for b_k from p-positivity (strict) or p-semipositivity.

    p-positive: b_k = 0 when k <= d - p or k >= p, and for every 1 <= k <= d-1
    once 2p <= d.  p-semipositive: harmonic k-forms are parallel on the same
    ranges.  ``p_level=None`` means no positivity is known.
    """
    if not 1 <= k <= d - 1:
        raise ValueError(f"k must lie in 1..{d - 1}")
    if p_level is None:
        return NO_CLAIM
    p = int(p_level)
    if p < 1:
        raise ValueError("positivity level must be >= 1")
    in_range = k <= d - p or k >= p
    if strict:
        return VANISHES if (2 * p <= d or in_range) else NO_CLAIM
    return PARALLEL_ONLY if in_range else NO_CLAIM
