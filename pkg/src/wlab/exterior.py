"""Pointwise complexified exterior algebra with values in a Hermitian bundle.

A (p,q)-form is stored by its coefficients on the basis
``dz^I ^ dzbar^J (x) e_alpha`` with I, J strictly increasing (0-based) and the
holomorphic factors written first.  Internally the algebra is the exterior
algebra on 2n generators ``dz^0..dz^{n-1}, dzbar^0..dzbar^{n-1}``; the (p,q)
grading is a block of it, so wedge and contraction signs come from the shared
multi-index core.

Inner products follow the 1/(p!q!)-normalised contraction of skew coefficients
against the inverse metric, which makes the basis orthonormal for identity
metrics.  The dual Lefschetz operator is computed as the metric adjoint of L
from the Gram matrices, never from an index formula.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import multiindex as mi

HERMITIAN_TOL = 1e-10


class DegreeError(ValueError):
    """An operation would leave the range 0 <= p, q <= n."""


class ContextMismatch(ValueError):
    """Operands live over different base points, metrics or bundles."""


def _check_hpd(name: str, M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"{name} must be a square matrix")
    scale = max(1.0, float(np.abs(M).max()))
    if np.abs(M - M.conj().T).max() > HERMITIAN_TOL * scale:
        raise ValueError(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(M).min() <= 0:
        raise ValueError(f"{name} is not positive definite")
    M = (M + M.conj().T) / 2
    M.setflags(write=False)
    return M


def _on_frame(M: np.ndarray) -> np.ndarray:
    # columns f_a with f_a^T M conj(f_b) = delta_ab
    C = np.linalg.cholesky(M)
    return np.linalg.inv(C.T)


@dataclass(frozen=True, eq=False)
class AlgebraContext:
    """Base point data: complex dimension n, bundle rank r, metrics g and h.

    ``g[i, j]`` is g_{i jbar} and ``h[a, b]`` is h_{a bbar}; both default to the
    identity.  Derived quantities (inverse metric, unitary frames, Gram matrices
    and operator matrices) are memoised on the instance.
    """

    n: int
    r: int = 1
    g: np.ndarray | None = None
    h: np.ndarray | None = None
    _memo: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        if int(self.n) < 1 or int(self.r) < 1:
            raise ValueError("n and r must be positive integers")
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "r", int(self.r))
        g = np.eye(self.n) if self.g is None else self.g
        h = np.eye(self.r) if self.h is None else self.h
        object.__setattr__(self, "g", _check_hpd("g", g))
        object.__setattr__(self, "h", _check_hpd("h", h))
        if self.g.shape != (self.n, self.n) or self.h.shape != (self.r, self.r):
            raise ValueError("metric shapes do not match (n, r)")

    @classmethod
    def random(cls, n: int, r: int = 1, seed=0, eps: float = 0.3) -> "AlgebraContext":
        """Metrics of the form Id + eps * A A^* with Gaussian complex A."""
        rng = np.random.default_rng(seed)

        def draw(k):
            A = rng.normal(size=(k, k)) + 1j * rng.normal(size=(k, k))
            return np.eye(k) + eps * A @ A.conj().T

        return cls(n, r, draw(n), draw(r))

    def _cached(self, key, build):
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = build()
            return value

    @property
    def is_flat(self) -> bool:
        return bool(np.array_equal(self.g, np.eye(self.n)) and np.array_equal(self.h, np.eye(self.r)))

    @property
    def g_inv(self) -> np.ndarray:
        """g^{i jbar} as a matrix, so that sum_j g^{i jbar} g_{k jbar} = delta_ik."""
        return self._cached("g_inv", lambda: np.linalg.inv(self.g).T)

    @property
    def frame(self) -> np.ndarray:
        """Columns are a g-unitary frame f_a = sum_i frame[i, a] d/dz^i."""
        return self._cached("frame", lambda: _on_frame(self.g))

    @property
    def coframe(self) -> np.ndarray:
        """Rows are the dual coframe theta^a = sum_i coframe[a, i] dz^i."""
        return self._cached("coframe", lambda: np.linalg.inv(self.frame))

    @property
    def bundle_frame(self) -> np.ndarray:
        """Columns are an h-unitary frame of the bundle fibre."""
        return self._cached("bundle_frame", lambda: _on_frame(self.h))

    def scalar(self) -> "AlgebraContext":
        """The same base point with the trivial line bundle."""
        if self.r == 1 and np.array_equal(self.h, np.eye(1)):
            return self
        return self._cached("scalar", lambda: AlgebraContext(self.n, 1, self.g))

    def with_bundle(self, r: int, h=None) -> "AlgebraContext":
        return AlgebraContext(self.n, r, self.g, h)

    def same_base(self, other: "AlgebraContext") -> bool:
        return self is other or (self.n == other.n and np.array_equal(self.g, other.g))

    def same(self, other: "AlgebraContext") -> bool:
        return self is other or (self.same_base(other) and self.r == other.r
                                 and np.array_equal(self.h, other.h))

    def shape(self, p: int, q: int) -> tuple[int, int, int]:
        check_bidegree(self.n, p, q)
        return len(mi.combos(self.n, p)), len(mi.combos(self.n, q)), self.r

    def dim(self, p: int, q: int) -> int:
        a, b, c = self.shape(p, q)
        return a * b * c

    def basis(self, p: int, q: int) -> list[tuple[mi.MultiIndex, mi.MultiIndex, int]]:
        """Basis labels (I, J, alpha) in the lexicographic storage order."""
        return [(I, J, a) for I in mi.combos(self.n, p)
                for J in mi.combos(self.n, q) for a in range(self.r)]

    def gram(self, p: int, q: int) -> np.ndarray:
        """Gram matrix G[x, y] = <e_x, e_y> of the (p,q) basis."""

        def build():
            G_hol = mi.minors(self.g_inv, p)
            G_anti = mi.minors(self.g_inv.T, q)
            G = np.kron(np.kron(G_hol, G_anti), self.h)
            G.setflags(write=False)
            return G

        check_bidegree(self.n, p, q)
        return self._cached(("gram", p, q), build)


def check_bidegree(n: int, p: int, q: int) -> None:
    if not (0 <= p <= n and 0 <= q <= n):
        raise DegreeError(f"bidegree ({p},{q}) outside 0..{n}")


# ---------------------------------------------------------------------------
# metric-free elementary operators on the scalar (p,q) block


def _flat(n: int, I, J, q: int) -> int:
    return mi.positions(n, len(I))[I] * len(mi.combos(n, q)) + mi.positions(n, q)[J]


def _split(n: int, gens: mi.MultiIndex):
    I = tuple(a for a in gens if a < n)
    J = tuple(a - n for a in gens if a >= n)
    return I, J


@lru_cache(maxsize=None)
def creation(n: int, p: int, q: int, a: int) -> np.ndarray:
    """``e_a ^ .`` on scalar (p,q)-forms; generators a < n are dz, a >= n are dzbar."""
    p2, q2 = (p + 1, q) if a < n else (p, q + 1)
    out = np.zeros((len(mi.combos(n, p2)) * len(mi.combos(n, q2)),
                    len(mi.combos(n, p)) * len(mi.combos(n, q))))
    if p2 > n or q2 > n:
        return out
    col = 0
    for I in mi.combos(n, p):
        for J in mi.combos(n, q):
            sign, res = mi.insert(a, I + tuple(n + j for j in J))
            if sign:
                I2, J2 = _split(n, res)
                out[_flat(n, I2, J2, q2), col] = sign
            col += 1
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def annihilation(n: int, p: int, q: int, a: int) -> np.ndarray:
    """Contraction with d/dz^a (a < n) or d/dzbar^{a-n} on scalar (p,q)-forms."""
    p2, q2 = (p - 1, q) if a < n else (p, q - 1)
    rows = len(mi.combos(n, p2)) * len(mi.combos(n, q2)) if p2 >= 0 and q2 >= 0 else 0
    out = np.zeros((rows, len(mi.combos(n, p)) * len(mi.combos(n, q))))
    if rows == 0:
        return out
    col = 0
    for I in mi.combos(n, p):
        for J in mi.combos(n, q):
            sign, res = mi.remove(a, I + tuple(n + j for j in J))
            if sign:
                I2, J2 = _split(n, res)
                out[_flat(n, I2, J2, q2), col] = sign
            col += 1
    out.setflags(write=False)
    return out


@lru_cache(maxsize=None)
def wedge_tensor(n: int, pa: int, qa: int, pb: int, qb: int) -> np.ndarray:
    """W[o, x, y]: coefficient of basis o in (basis x of (pa,qa)) ^ (basis y of (pb,qb))."""
    p, q = pa + pb, qa + qb
    out = np.zeros((len(mi.combos(n, p)) * len(mi.combos(n, q)),
                    len(mi.combos(n, pa)) * len(mi.combos(n, qa)),
                    len(mi.combos(n, pb)) * len(mi.combos(n, qb))))
    x = 0
    for Ia in mi.combos(n, pa):
        for Ja in mi.combos(n, qa):
            left = Ia + tuple(n + j for j in Ja)
            y = 0
            for Ib in mi.combos(n, pb):
                for Jb in mi.combos(n, qb):
                    sign, res = mi.merge(left, Ib + tuple(n + j for j in Jb))
                    if sign:
                        I, J = _split(n, res)
                        out[_flat(n, I, J, q), x, y] = sign
                    y += 1
            x += 1
    out.setflags(write=False)
    return out


def lift(M: np.ndarray, r: int) -> np.ndarray:
    """Extend a scalar-form operator to E-valued forms (identity on the fibre)."""
    return M if r == 1 else np.kron(M, np.eye(r))


def adjoint(M: np.ndarray, G_in: np.ndarray, G_out: np.ndarray) -> np.ndarray:
    """Matrix of the metric adjoint: <M x, y>_out = <x, M^+ y>_in with <x,y> = x^T G conj(y)."""
    return np.linalg.solve(G_in.T, M.conj().T @ G_out.T)


def lefschetz_matrix(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """L = omega ^ . from (p,q) to (p+1,q+1), omega = sqrt(-1) g_{i jbar} dz^i ^ dzbar^j."""

    def build():
        n = ctx.n
        M = np.zeros((len(mi.combos(n, p + 1)) * len(mi.combos(n, q + 1)),
                      len(mi.combos(n, p)) * len(mi.combos(n, q))), dtype=complex)
        for i in range(n):
            for j in range(n):
                if ctx.g[i, j] != 0:
                    M += 1j * ctx.g[i, j] * (creation(n, p, q + 1, i) @ creation(n, p, q, n + j))
        return lift(M, ctx.r)

    if p + 1 > ctx.n or q + 1 > ctx.n:
        raise DegreeError(f"L maps ({p},{q}) beyond top degree for n={ctx.n}")
    return ctx._cached(("L", p, q), build)


def dual_lefschetz_matrix(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Lambda from (p,q) to (p-1,q-1), the adjoint of L under the form inner product."""
    if p < 1 or q < 1:
        raise DegreeError("Lambda needs p, q >= 1")
    return ctx._cached(("Lambda", p, q), lambda: adjoint(
        lefschetz_matrix(ctx, p - 1, q - 1), ctx.gram(p - 1, q - 1), ctx.gram(p, q)))


# ---------------------------------------------------------------------------
# forms


@dataclass(frozen=True, eq=False)
class PqForm:
    """An E-valued (p,q)-form at a point.

    ``coeffs`` has shape (C(n,p), C(n,q), r) indexed by (I, J, alpha) in
    lexicographic order.
    """

    ctx: AlgebraContext
    p: int
    q: int
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        shape = self.ctx.shape(self.p, self.q)
        if c.shape != shape:
            c = c.reshape(shape)
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # constructors

    @classmethod
    def zero(cls, ctx: AlgebraContext, p: int, q: int) -> "PqForm":
        return cls(ctx, p, q, np.zeros(ctx.shape(p, q), dtype=complex))

    @classmethod
    def from_vector(cls, ctx: AlgebraContext, p: int, q: int, vec) -> "PqForm":
        return cls(ctx, p, q, np.asarray(vec, dtype=complex).reshape(ctx.shape(p, q)))

    @classmethod
    def monomial(cls, ctx: AlgebraContext, I=(), J=(), alpha: int = 0, coeff=1.0) -> "PqForm":
        """``coeff * dz^I ^ dzbar^J (x) e_alpha``; unsorted indices are sorted with sign."""
        n = ctx.n
        gens = tuple(int(i) for i in I) + tuple(n + int(j) for j in J)
        if any(a < 0 or a >= 2 * n for a in gens):
            raise ValueError("index out of range")
        p, q = len(tuple(I)), len(tuple(J))
        out = np.zeros(ctx.shape(p, q), dtype=complex)
        if len(set(gens)) == len(gens):
            order = sorted(range(len(gens)), key=gens.__getitem__)
            sign = _perm_sign(order)
            I2, J2 = _split(n, tuple(sorted(gens)))
            out[mi.positions(n, p)[I2], mi.positions(n, q)[J2], alpha] = sign * coeff
        return cls(ctx, p, q, out)

    @classmethod
    def one(cls, ctx: AlgebraContext, alpha: int = 0) -> "PqForm":
        return cls.monomial(ctx, (), (), alpha)

    @classmethod
    def random(cls, ctx: AlgebraContext, p: int, q: int, rng) -> "PqForm":
        shape = ctx.shape(p, q)
        return cls(ctx, p, q, rng.normal(size=shape) + 1j * rng.normal(size=shape))

    # linear structure

    @property
    def vec(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.p, self.q

    def _like(self, other: "PqForm") -> None:
        if not self.ctx.same(other.ctx):
            raise ContextMismatch("forms live in different contexts")
        if self.bidegree != other.bidegree:
            raise DegreeError(f"bidegrees {self.bidegree} and {other.bidegree} differ")

    def __add__(self, other: "PqForm") -> "PqForm":
        self._like(other)
        return PqForm(self.ctx, self.p, self.q, self.coeffs + other.coeffs)

    def __sub__(self, other: "PqForm") -> "PqForm":
        self._like(other)
        return PqForm(self.ctx, self.p, self.q, self.coeffs - other.coeffs)

    def __neg__(self) -> "PqForm":
        return PqForm(self.ctx, self.p, self.q, -self.coeffs)

    def __mul__(self, c) -> "PqForm":
        return PqForm(self.ctx, self.p, self.q, c * self.coeffs)

    __rmul__ = __mul__

    def __getitem__(self, key) -> complex:
        I, J, *alpha = key
        n = self.ctx.n
        return self.coeffs[mi.positions(n, self.p)[mi.check(I, n)],
                           mi.positions(n, self.q)[mi.check(J, n)],
                           alpha[0] if alpha else 0]

    def norm2(self) -> float:
        return float(inner_product(self, self).real)

    def norm(self) -> float:
        return float(np.sqrt(max(self.norm2(), 0.0)))

    def is_zero(self, tol: float = 1e-12) -> bool:
        return bool(np.abs(self.coeffs).max(initial=0.0) <= tol)

    def fiber(self, alpha: int) -> "PqForm":
        """The scalar component phi^alpha in the given bundle frame e_alpha."""
        return PqForm(self.ctx.scalar(), self.p, self.q, self.coeffs[..., alpha:alpha + 1])

    def __repr__(self) -> str:
        terms = []
        for (I, J, a), c in zip(self.ctx.basis(self.p, self.q), self.vec):
            if abs(c) > 1e-14:
                terms.append(f"{c:.6g}*{_label(I, J)}" + (f"(x)e{a}" if self.ctx.r > 1 else ""))
        return f"PqForm(({self.p},{self.q}): " + (" + ".join(terms) or "0") + ")"


def _label(I, J) -> str:
    parts = [f"dz{i}" for i in I] + [f"dzb{j}" for j in J]
    return "^".join(parts) or "1"


def _perm_sign(order) -> int:
    sign, seen = 1, list(order)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def dz(ctx: AlgebraContext, i: int) -> PqForm:
    return PqForm.monomial(ctx, (i,), ())


def dzbar(ctx: AlgebraContext, j: int) -> PqForm:
    return PqForm.monomial(ctx, (), (j,))


@dataclass(frozen=True)
class TangentVector:
    """``sum_i components[i] d/dz^i``, or ``d/dzbar^i`` when antiholomorphic."""

    components: tuple
    antiholomorphic: bool = False

    @classmethod
    def d_z(cls, n: int, i: int) -> "TangentVector":
        c = [0.0] * n
        c[i] = 1.0
        return cls(tuple(c))

    @classmethod
    def d_zbar(cls, n: int, i: int) -> "TangentVector":
        c = [0.0] * n
        c[i] = 1.0
        return cls(tuple(c), True)


# ---------------------------------------------------------------------------
# operations


def wedge(a: PqForm, b: PqForm) -> PqForm:
    """Exterior product; at most one operand may carry a bundle of rank > 1."""
    if not a.ctx.same_base(b.ctx):
        raise ContextMismatch("forms live over different base points")
    if a.ctx.r > 1 and b.ctx.r > 1:
        raise ContextMismatch("cannot wedge two bundle-valued forms")
    p, q = a.p + b.p, a.q + b.q
    n = a.ctx.n
    if p > n or q > n:
        raise DegreeError(f"wedge of ({a.p},{a.q}) and ({b.p},{b.q}) exceeds n={n}")
    W = wedge_tensor(n, a.p, a.q, b.p, b.q)
    ctx = a.ctx if a.ctx.r > 1 or b.ctx.r == 1 else b.ctx
    x = a.coeffs.reshape(-1, a.ctx.r)
    y = b.coeffs.reshape(-1, b.ctx.r)
    out = np.einsum("oxy,xa,yb->oab", W, x, y).reshape(W.shape[0], ctx.r)
    return PqForm(ctx, p, q, out)


def contraction_matrix(ctx: AlgebraContext, X: TangentVector, p: int, q: int) -> np.ndarray:
    n = ctx.n
    comps = np.asarray(X.components, dtype=complex)
    if comps.shape != (n,):
        raise ContextMismatch("tangent vector has the wrong dimension")
    offset = n if X.antiholomorphic else 0
    M = sum(c * annihilation(n, p, q, offset + i) for i, c in enumerate(comps) if c != 0)
    if isinstance(M, int):
        M = annihilation(n, p, q, offset) * 0
    return lift(M, ctx.r)


def contract(X: TangentVector, a: PqForm) -> PqForm:
    """Interior product I_X; a zero form when the matching degree is already 0.

    In that degenerate case the zero form is returned at the unchanged bidegree.
    """
    p, q = (a.p - 1, a.q) if not X.antiholomorphic else (a.p, a.q - 1)
    if p < 0 or q < 0:
        if len(X.components) != a.ctx.n:
            raise ContextMismatch("tangent vector has the wrong dimension")
        return PqForm.zero(a.ctx, a.p, a.q)
    M = contraction_matrix(a.ctx, X, a.p, a.q)
    return PqForm.from_vector(a.ctx, p, q, M @ a.vec)


def inner_product(a: PqForm, b: PqForm) -> complex:
    """Pointwise Hermitian inner product, linear in ``a``."""
    a._like(b)
    return complex(a.vec @ a.ctx.gram(a.p, a.q) @ b.vec.conj())


def kaehler_form(ctx: AlgebraContext) -> PqForm:
    return lefschetz_L(PqForm.one(ctx.scalar()))


def lefschetz_L(a: PqForm) -> PqForm:
    M = lefschetz_matrix(a.ctx, a.p, a.q)
    return PqForm.from_vector(a.ctx, a.p + 1, a.q + 1, M @ a.vec)


def lefschetz_dual(a: PqForm) -> PqForm:
    """Lambda, the adjoint of L.  Forms with p = 0 or q = 0 map to the zero form
    (reported at the unchanged bidegree since (p-1, q-1) does not exist)."""
    if a.p < 1 or a.q < 1:
        return PqForm.zero(a.ctx, a.p, a.q)
    M = dual_lefschetz_matrix(a.ctx, a.p, a.q)
    return PqForm.from_vector(a.ctx, a.p - 1, a.q - 1, M @ a.vec)


def commutator_matrix(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Matrix of Lambda L - L Lambda on (p,q)-forms."""
    d = ctx.dim(p, q)
    out = np.zeros((d, d), dtype=complex)
    if p < ctx.n and q < ctx.n:
        out += dual_lefschetz_matrix(ctx, p + 1, q + 1) @ lefschetz_matrix(ctx, p, q)
    if p > 0 and q > 0:
        out -= lefschetz_matrix(ctx, p - 1, q - 1) @ dual_lefschetz_matrix(ctx, p, q)
    return out


def commutator_defect(a: PqForm) -> PqForm:
    """(Lambda L - L Lambda) a - (n - p - q) a, which vanishes identically."""
    M = commutator_matrix(a.ctx, a.p, a.q)
    return PqForm.from_vector(a.ctx, a.p, a.q, M @ a.vec - (a.ctx.n - a.p - a.q) * a.vec)
