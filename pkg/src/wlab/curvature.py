"""Algebraic curvature tensors and their induced self-adjoint operators.

Index conventions (0-based):

* ``KaehlerCurvature.R[i, j, k, l]`` is R_{i jbar k lbar}.
* ``BundleCurvature.RE[i, j, a, b]`` is R^E_{i jbar a bbar}.
* ``RiemCurvature.R[i, j, k, l]`` is R(e_i, e_j, e_k, e_l) = g(R(e_i, e_j) e_k, e_l),
  so the unit sphere is R_{ijkl} = d_jk d_il - d_ik d_jl and the curvature
  operator, defined by g(F(X^Y), Z^W) = R(X, Y, W, Z), is the identity there.

Operator matrices are written in orthonormal bases built from the unitary frame
of the context, so their spectra are the eigenvalues that the positivity
hypotheses refer to.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

import numpy as np

from .exterior import AlgebraContext

SYMMETRY_TOL = 1e-10


class CurvatureSymmetryError(ValueError):
    """A curvature tensor violates one of its algebraic symmetries."""

    def __init__(self, message: str, index: tuple | None = None):
        super().__init__(message if index is None else f"{message} at index {index}")
        self.index = index


def _worst(diff: np.ndarray, scale: float, label: str, tol: float) -> None:
    if diff.size == 0:
        return
    k = int(np.argmax(np.abs(diff)))
    if abs(diff.flat[k]) > tol * scale:
        raise CurvatureSymmetryError(label, tuple(int(x) for x in np.unravel_index(k, diff.shape)))


def _scale(T: np.ndarray) -> float:
    return max(1.0, float(np.abs(T).max(initial=0.0)))


# ---------------------------------------------------------------------------
# symmetric-square bookkeeping


@lru_cache(maxsize=None)
def sym2_pairs(n: int) -> tuple[tuple[int, int], ...]:
    """Labels (a, b), a <= b, of the orthonormal Sym^2 basis in storage order."""
    return tuple((a, b) for a in range(n) for b in range(a, n))


@lru_cache(maxsize=None)
def sym2_basis(n: int) -> np.ndarray:
    """P[A, a, b]: e_a (x) e_a on the diagonal and (e_a (x) e_b + e_b (x) e_a)/sqrt 2 otherwise."""
    pairs = sym2_pairs(n)
    P = np.zeros((len(pairs), n, n))
    for A, (a, b) in enumerate(pairs):
        if a == b:
            P[A, a, a] = 1.0
        else:
            P[A, a, b] = P[A, b, a] = 2 ** -0.5
    P.setflags(write=False)
    return P


def sym2_dim(n: int) -> int:
    return n * (n + 1) // 2


# ---------------------------------------------------------------------------
# tensor types


@dataclass(frozen=True, eq=False)
class KaehlerCurvature:
    ctx: AlgebraContext
    R: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=complex)
        n = self.ctx.n
        if R.shape != (n, n, n, n):
            raise ValueError(f"Kaehler curvature must have shape {(n,) * 4}")
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    @property
    def n(self) -> int:
        return self.ctx.n

    def validate(self, tol: float = SYMMETRY_TOL) -> "KaehlerCurvature":
        R, s = self.R, _scale(self.R)
        _worst(R - R.transpose(2, 1, 0, 3), s, "R_{i jb k lb} != R_{k jb i lb}", tol)
        _worst(R - R.transpose(0, 3, 2, 1), s, "R_{i jb k lb} != R_{i lb k jb}", tol)
        _worst(R.conj() - R.transpose(1, 0, 3, 2), s, "conj R_{i jb k lb} != R_{j ib l kb}", tol)
        return self

    def is_valid(self, tol: float = SYMMETRY_TOL) -> bool:
        try:
            self.validate(tol)
        except CurvatureSymmetryError:
            return False
        return True

    def on_frame(self) -> np.ndarray:
        """Components R(f_a, fbar_b, f_c, fbar_d) in the unitary frame of ``ctx``."""
        E = self.ctx.frame
        return np.einsum("ijkl,ia,jb,kc,ld->abcd", self.R, E, E.conj(), E, E.conj(), optimize=True)

    def __add__(self, other: "KaehlerCurvature") -> "KaehlerCurvature":
        return KaehlerCurvature(self.ctx, self.R + other.R)

    def __mul__(self, c: float) -> "KaehlerCurvature":
        return KaehlerCurvature(self.ctx, c * self.R)

    __rmul__ = __mul__


@dataclass(frozen=True, eq=False)
class BundleCurvature:
    ctx: AlgebraContext
    RE: np.ndarray

    def __post_init__(self):
        RE = np.array(self.RE, dtype=complex)
        n, r = self.ctx.n, self.ctx.r
        if RE.shape != (n, n, r, r):
            raise ValueError(f"bundle curvature must have shape {(n, n, r, r)}")
        RE.setflags(write=False)
        object.__setattr__(self, "RE", RE)

    def validate(self, tol: float = SYMMETRY_TOL) -> "BundleCurvature":
        RE = self.RE
        _worst(RE.conj() - RE.transpose(1, 0, 3, 2), _scale(RE),
               "conj R^E_{i jb a bb} != R^E_{j ib b ab}", tol)
        return self

    def on_frame(self) -> np.ndarray:
        E, F = self.ctx.frame, self.ctx.bundle_frame
        return np.einsum("ijxy,ia,jb,xc,yd->abcd", self.RE, E, E.conj(), F, F.conj(), optimize=True)


@dataclass(frozen=True, eq=False)
class RiemCurvature:
    d: int
    R: np.ndarray

    def __post_init__(self):
        R = np.array(self.R, dtype=float)
        if R.shape != (self.d,) * 4:
            raise ValueError(f"Riemannian curvature must have shape {(self.d,) * 4}")
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    def validate(self, tol: float = SYMMETRY_TOL) -> "RiemCurvature":
        R, s = self.R, _scale(self.R)
        _worst(R + R.transpose(1, 0, 2, 3), s, "R_{ijkl} != -R_{jikl}", tol)
        _worst(R + R.transpose(0, 1, 3, 2), s, "R_{ijkl} != -R_{ijlk}", tol)
        _worst(R - R.transpose(2, 3, 0, 1), s, "R_{ijkl} != R_{klij}", tol)
        _worst(bianchi_residual(R), s, "first Bianchi identity fails", tol)
        return self

    def is_valid(self, tol: float = SYMMETRY_TOL) -> bool:
        try:
            self.validate(tol)
        except CurvatureSymmetryError:
            return False
        return True


def bianchi_residual(R: np.ndarray) -> np.ndarray:
    """R_{ijkl} + R_{jkil} + R_{kijl}."""
    return R + R.transpose(1, 2, 0, 3) + R.transpose(2, 0, 1, 3)


# ---------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class Spectrum:
    """Ascending eigenvalues of a self-adjoint curvature operator."""

    eigenvalues: tuple

    def __post_init__(self):
        vals = tuple(self.eigenvalues)
        if any(b < a for a, b in zip(vals, vals[1:])):
            vals = tuple(sorted(vals))
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def of(cls, M: np.ndarray) -> "Spectrum":
        return cls(tuple(float(x) for x in np.linalg.eigvalsh(M)))

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)

    def prefix_sum(self, m: int):
        return sum(self.eigenvalues[:m])

    def is_m_positive(self, m: int) -> bool:
        return self.prefix_sum(m) > 0

    def is_m_semipositive(self, m: int) -> bool:
        return self.prefix_sum(m) >= 0

    @property
    def m_level(self):
        return m_positivity_level(self)


def m_positivity_level(s: Spectrum):
    """Smallest m with lambda_1 + ... + lambda_m > 0, or None when there is none."""
    if not s.eigenvalues:
        raise ValueError("empty spectrum")
    total = 0
    for m, lam in enumerate(s.eigenvalues, start=1):
        total += lam
        if total > 0:
            return m
    return None


def partial_trace_check(A: np.ndarray, frame: np.ndarray, k: int, slack: float = 1e-9) -> bool:
    """sum_{s<k} <A e_s, e_s> >= lambda_1 + ... + lambda_k for orthonormal e_s."""
    A = np.asarray(A)
    frame = np.asarray(frame)
    if frame.shape[1] < k:
        raise ValueError("frame has fewer than k columns")
    cols = frame[:, :k]
    if np.abs(cols.conj().T @ cols - np.eye(k)).max() > 1e-9:
        raise ValueError("frame columns are not orthonormal")
    lhs = float(np.real(np.einsum("is,ij,js->", cols.conj(), A, cols)))
    rhs = float(np.sum(np.linalg.eigvalsh(A)[:k]))
    return lhs - rhs >= -slack


# ---------------------------------------------------------------------------
# operators


def sym_curv_operator(Rc: KaehlerCurvature) -> np.ndarray:
    """Matrix of the symmetrized curvature operator on Sym^2 T^{1,0} (orthonormal basis)."""
    Rc.validate()
    P = sym2_basis(Rc.n)
    return np.einsum("abcd,Aac,Bbd->BA", Rc.on_frame(), P, P, optimize=True)


def reduced_curv_operator(Rc: KaehlerCurvature) -> np.ndarray:
    """Matrix on T^{1,0} (x) T^{0,1} in the basis f_a (x) fbar_b, index a*n + b.

    Entry [(d, c), (a, b)] is R(f_a, fbar_b, f_c, fbar_d).
    """
    Rc.validate()
    n = Rc.n
    return Rc.on_frame().transpose(3, 2, 0, 1).reshape(n * n, n * n)


def riem_curv_operator(Rr: RiemCurvature) -> np.ndarray:
    """Matrix on Lambda^2 in the basis e_i ^ e_j (i < j); entry [(k,l),(i,j)] = R_{ijlk}."""
    Rr.validate()
    pairs = list(combinations(range(Rr.d), 2))
    I = np.array([p[0] for p in pairs], dtype=int)
    J = np.array([p[1] for p in pairs], dtype=int)
    return Rr.R[I[None, :], J[None, :], J[:, None], I[:, None]]


def bundle_curv_operator(Re: BundleCurvature) -> np.ndarray:
    """Matrix on T^{1,0} (x) E in the basis f_a (x) eps_alpha, index a*r + alpha."""
    Re.validate()
    n, r = Re.ctx.n, Re.ctx.r
    return Re.on_frame().transpose(1, 3, 0, 2).reshape(n * r, n * r)


# ---------------------------------------------------------------------------
# models and generators


def model_fubini_study(n: int, ctx: AlgebraContext | None = None) -> KaehlerCurvature:
    """R = g_{i jb} g_{k lb} + g_{i lb} g_{k jb}, normalised so the operator is 2 Id."""
    ctx = ctx or AlgebraContext(n)
    g = ctx.g
    return KaehlerCurvature(ctx, np.einsum("ij,kl->ijkl", g, g) + np.einsum("il,kj->ijkl", g, g))


def model_hyperquadric(n: int) -> Spectrum:
    """Spectrum-level model (2 - n, 2, ..., 2) of the hyperquadric."""
    if n < 2:
        raise ValueError("hyperquadric model needs n >= 2")
    return Spectrum((2 - n,) + (2,) * (sym2_dim(n) - 1))


def hyperquadric_tensor(n: int, ctx: AlgebraContext | None = None) -> KaehlerCurvature:
    """Tensor model via the Gauss equation: Fubini-Study minus A_{ik} conj(A_{jl}).

    The second fundamental form A of the quadric is taken as the identity in a
    unitary frame, so the operator is 2 Id minus a rank-one term of size n.
    """
    if n < 2:
        raise ValueError("hyperquadric model needs n >= 2")
    ctx = ctx or AlgebraContext(n)
    fs = model_fubini_study(n, ctx)
    A = ctx.coframe.T @ ctx.coframe  # identity on the unitary frame, pulled back to coordinates
    return KaehlerCurvature(ctx, fs.R - np.einsum("ik,jl->ijkl", A, A.conj()))


def model_round_sphere(d: int) -> RiemCurvature:
    """Unit sphere, R_{ijkl} = d_jk d_il - d_ik d_jl."""
    I = np.eye(d)
    return RiemCurvature(d, np.einsum("jk,il->ijkl", I, I) - np.einsum("ik,jl->ijkl", I, I))


def random_kaehler(n: int, seed=0, signs=None, ctx: AlgebraContext | None = None) -> KaehlerCurvature:
    """sum_a s_a S^a_{ik} conj(S^a_{jl}) with random complex symmetric S^a.

    With all signs positive the symmetrized operator is a Gram matrix, hence PSD.
    """
    ctx = ctx or AlgebraContext(n)
    rng = np.random.default_rng(seed)
    signs = np.ones(sym2_dim(n)) if signs is None else np.asarray(signs, dtype=float)
    S = rng.normal(size=(len(signs), n, n)) + 1j * rng.normal(size=(len(signs), n, n))
    S = (S + S.transpose(0, 2, 1)) / 2
    R = np.einsum("a,aik,ajl->ijkl", signs, S, S.conj())
    return KaehlerCurvature(ctx, R)


def random_bundle(ctx: AlgebraContext, seed=0, signs=None, shift: float = 0.0) -> BundleCurvature:
    """sum_a s_a W^a_{i alpha} conj(W^a_{j beta}) + shift * g_{i jb} h_{alpha bb}."""
    n, r = ctx.n, ctx.r
    rng = np.random.default_rng(seed)
    signs = np.ones(n * r) if signs is None else np.asarray(signs, dtype=float)
    W = rng.normal(size=(len(signs), n, r)) + 1j * rng.normal(size=(len(signs), n, r))
    RE = np.einsum("s,sia,sjb->ijab", signs, W, W.conj()) + shift * np.einsum("ij,ab->ijab", ctx.g, ctx.h)
    return BundleCurvature(ctx, RE)


def kulkarni_nomizu(h: np.ndarray, k: np.ndarray) -> np.ndarray:
    """(h o k)(X,Y,Z,W) = h(X,W)k(Y,Z) + h(Y,Z)k(X,W) - h(X,Z)k(Y,W) - h(Y,W)k(X,Z)."""
    return (np.einsum("il,jk->ijkl", h, k) + np.einsum("jk,il->ijkl", h, k)
            - np.einsum("ik,jl->ijkl", h, k) - np.einsum("jl,ik->ijkl", h, k))


def random_riemannian(d: int, seed=0, terms: int | None = None) -> RiemCurvature:
    """Random combination of Kulkarni-Nomizu squares (h o h)/2 of symmetric h."""
    if d < 2:
        raise ValueError("need d >= 2")
    rng = np.random.default_rng(seed)
    terms = terms or d * (d - 1) // 2 + 1
    R = np.zeros((d,) * 4)
    for c in rng.normal(size=terms):
        h = rng.normal(size=(d, d))
        h = (h + h.T) / 2
        R += c * kulkarni_nomizu(h, h) / 2
    return RiemCurvature(d, R)


def project_riemannian(R: np.ndarray) -> RiemCurvature:
    """Project an arbitrary 4-tensor onto algebraic curvature tensors."""
    R = np.asarray(R, dtype=float)
    R = (R - R.transpose(1, 0, 2, 3)) / 2
    R = (R - R.transpose(0, 1, 3, 2)) / 2
    R = (R + R.transpose(2, 3, 0, 1)) / 2
    R = R - bianchi_residual(R) / 3
    return RiemCurvature(R.shape[0], R)


def kaehler_from_operator(M: np.ndarray, ctx: AlgebraContext) -> KaehlerCurvature:
    """Inverse of sym_curv_operator: the unique Kaehler tensor with the given operator matrix."""
    n = ctx.n
    M = np.asarray(M, dtype=complex)
    if M.shape != (sym2_dim(n),) * 2:
        raise ValueError("operator has the wrong size")
    P = sym2_basis(n)
    Rf = np.einsum("BA,Aac,Bbd->abcd", M, P, P, optimize=True)
    T = ctx.coframe
    R = np.einsum("abcd,ai,bj,ck,dl->ijkl", Rf, T, T.conj(), T, T.conj(), optimize=True)
    return KaehlerCurvature(ctx, R)


def spectral_surgery(Rc: KaehlerCurvature, eigenvalues) -> KaehlerCurvature:
    """Keep the eigenvectors of the symmetrized operator and replace its eigenvalues."""
    vals = np.sort(np.asarray(eigenvalues, dtype=float))
    _, U = np.linalg.eigh(sym_curv_operator(Rc))
    return kaehler_from_operator(U @ np.diag(vals) @ U.conj().T, Rc.ctx)


def exact_m_positive_spectrum(N: int, m: int, rng) -> tuple[float, ...]:
    """Random ascending spectrum whose m-positivity level is exactly m."""
    if not 1 <= m <= N:
        raise ValueError("need 1 <= m <= N")
    c = rng.uniform(0.5, 1.5)
    if m == 1:
        return tuple(np.sort(rng.uniform(0.1, 2.0, size=N)))
    mids = np.sort(rng.uniform(0.0, c, size=m - 2))
    # lambda_1 chosen so the first m-1 sum to -delta with 0 < delta < c
    delta = rng.uniform(0.05, 0.95) * c
    lam1 = -float(np.sum(mids)) - delta
    rest = np.sort(rng.uniform(c, c + 2.0, size=N - m))
    return tuple([lam1, *mids, c, *rest])


# ---------------------------------------------------------------------------
# JSON documents


def curvature_to_json(obj, tol: float = 0.0) -> dict:
    """{kind, n | d, r, entries: [[i, j, k, l, re, im], ...]} with 0-based indices."""
    if isinstance(obj, KaehlerCurvature):
        doc, T = {"kind": "kaehler", "n": obj.n, "r": 1}, obj.R
    elif isinstance(obj, BundleCurvature):
        doc, T = {"kind": "bundle", "n": obj.ctx.n, "r": obj.ctx.r}, obj.RE
    elif isinstance(obj, RiemCurvature):
        doc, T = {"kind": "riemannian", "d": obj.d, "r": 1}, obj.R
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    T = np.asarray(T, dtype=complex)
    doc["entries"] = [[*map(int, idx), float(T[idx].real), float(T[idx].imag)]
                      for idx in zip(*np.nonzero(np.abs(T) > tol))]
    return doc


def curvature_from_json(doc) -> KaehlerCurvature | BundleCurvature | RiemCurvature:
    """Parse and validate a curvature document (a dict or a JSON string)."""
    if isinstance(doc, (str, bytes)):
        doc = json.loads(doc)
    if not isinstance(doc, dict) or "kind" not in doc or "entries" not in doc:
        raise ValueError("curvature document needs 'kind' and 'entries'")
    kind = doc["kind"]
    if kind == "riemannian":
        shape = (int(doc["d"]),) * 4
    elif kind == "kaehler":
        shape = (int(doc["n"]),) * 4
    elif kind == "bundle":
        n, r = int(doc["n"]), int(doc.get("r", 1))
        shape = (n, n, r, r)
    else:
        raise ValueError(f"unknown curvature kind {kind!r}")
    T = np.zeros(shape, dtype=complex)
    for entry in doc["entries"]:
        if len(entry) not in (5, 6):
            raise ValueError(f"malformed entry {entry!r}")
        idx = tuple(int(x) for x in entry[:4])
        if any(not 0 <= x < s for x, s in zip(idx, shape)):
            raise ValueError(f"entry index {idx} out of range")
        T[idx] += complex(float(entry[4]), float(entry[5]) if len(entry) == 6 else 0.0)
    if kind == "riemannian":
        if np.abs(T.imag).max(initial=0.0) > 0:
            raise ValueError("Riemannian curvature must be real")
        return RiemCurvature(shape[0], T.real).validate()
    if kind == "kaehler":
        return KaehlerCurvature(AlgebraContext(shape[0]), T).validate()
    return BundleCurvature(AlgebraContext(shape[0], shape[2]), T).validate()


def exact_prefix_level(eigenvalues) -> int | None:
    """m-positivity level computed in exact rational arithmetic."""
    return m_positivity_level(Spectrum(tuple(Fraction(x) for x in eigenvalues)))
