"""Estimate machinery: Takagi factorization, the C^k_{p,q} combinatorics,
operator-norm bounds for T and Y, the index-pair decomposition, compound
matrices and the skew spectrum."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import multiindex as mi
from .contraction import c_matrices, t_apply, t_riem, sym2_norm2, y_matrices
from .exterior import AlgebraContext, PqForm
from .lefschetz import NotPrimitiveError, primitive_decompose
from .riemannian import RealForm

BOUND_SLACK = 1e-9


# ---------------------------------------------------------------------------
# Takagi


@dataclass(frozen=True)
class TakagiFactorization:
    U: np.ndarray
    Lambda: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return self.U @ np.diag(self.Lambda) @ self.U.T


def takagi(V, tol: float = 1e-10) -> TakagiFactorization:
    """V = U diag(Lambda) U^T with U unitary and Lambda >= 0 (descending).

    Uses the real symmetric embedding [[A, B], [B, -A]] of V = A + iB: an
    eigenvector (x, y) with eigenvalue s > 0 gives u = x + iy with V conj(u) = s u.
    The null space is completed by an orthonormal complement.
    """
    V = np.asarray(V, dtype=complex)
    n = V.shape[0]
    if V.shape != (n, n):
        raise ValueError("V must be square")
    if np.abs(V - V.T).max(initial=0.0) > tol * max(1.0, np.abs(V).max()):
        raise ValueError("V must be symmetric")
    A, B = V.real, V.imag
    S = np.block([[A, B], [B, -A]])
    w, X = np.linalg.eigh((S + S.T) / 2)
    cutoff = 1e-13 * max(1.0, float(np.abs(w).max(initial=0.0)))
    order = [i for i in np.argsort(-w) if w[i] > cutoff]
    U = X[:n, order] + 1j * X[n:, order]
    lam = w[order]
    if len(order) < n:
        # complete with an orthonormal basis of the complement (a null space of V)
        Q, _ = np.linalg.qr(np.hstack([U, np.eye(n, dtype=complex)]))
        U = np.hstack([U, Q[:, len(order):n]])
        lam = np.concatenate([lam, np.zeros(n - len(order))])
    return TakagiFactorization(U, lam)


# ---------------------------------------------------------------------------
# combinatorics (exact)


def _check_pqk(n: int, p: int, q: int) -> None:
    if not (0 <= p < n and 0 < q <= n):
        raise ValueError(f"need 0 <= p < n and 0 < q <= n, got n={n}, p={p}, q={q}")


def c_pq_k(n: int, p: int, q: int, k: int) -> Fraction:
    """C^k_{p,q} = (n - p + k + 1)(p + q - 2k) / (2(p + 1 - k))."""
    _check_pqk(n, p, q)
    if not 0 <= k <= min(p, q - 1):
        raise ValueError(f"k must lie in 0..{min(p, q - 1)}")
    return Fraction((n - p + k + 1) * (p + q - 2 * k), 2 * (p + 1 - k))


def c_pq_min(n: int, p: int, q: int) -> tuple[Fraction, int]:
    """Minimum over k by the case analysis: k = 0 when q >= p + 2 or p > n/2,
    otherwise (q <= p + 1 and p <= n/2) k = q - 1."""
    _check_pqk(n, p, q)
    k = 0 if (q >= p + 2 or 2 * p > n) else q - 1
    return c_pq_k(n, p, q, k), k


def c_pq_min_exhaustive(n: int, p: int, q: int) -> Fraction:
    return min(c_pq_k(n, p, q, k) for k in range(min(p, q - 1) + 1))


# ---------------------------------------------------------------------------
# T bounds


def t_bound_factor(p: int, q: int, k: int | None = None) -> Fraction:
    """4(p+1)q/(p+q), or the improved 4(p-k+1)(q-k)/(p+q-2k) for L^k-primitive forms."""
    if k is None:
        return Fraction(4 * (p + 1) * q, p + q)
    if p + q - 2 * k == 0:
        raise ValueError("the improved estimate excludes k = (p+q)/2")
    return Fraction(4 * (p - k + 1) * (q - k), p + q - 2 * k)


def check_l_primitive(phi: PqForm, k: int, tol: float = 1e-8) -> None:
    """Raise unless phi = L^k psi with psi primitive."""
    dec = primitive_decompose(phi)
    scale = max(1.0, phi.norm())
    for j, part in enumerate(dec.parts):
        if j != k and part.norm() > tol * scale:
            raise NotPrimitiveError(f"form has a nonzero L^{j} component")


def t_norm_bound_defect(phi: PqForm, v, k_primitive: int | None = None) -> float:
    """max(0, |T_phi(v)|^2 - factor * |v|^2 |phi|^2)."""
    p, q = phi.p, phi.q
    if q == 0 or p == phi.ctx.n:
        return 0.0
    if k_primitive is not None:
        check_l_primitive(phi, k_primitive)
    factor = float(t_bound_factor(p, q, k_primitive))
    lhs = t_apply(phi, v).norm2()
    return max(0.0, lhs - factor * sym2_norm2(phi.ctx, v) * phi.norm2())


def t_of_v_matrix(ctx: AlgebraContext, p: int, q: int, v) -> np.ndarray:
    """Matrix of phi -> T_phi(v) from (p,q) to (p+1,q-1)."""
    return 2 * np.einsum("ij,ijxy->xy", np.asarray(v, dtype=complex), c_matrices(ctx, p, q))


# ---------------------------------------------------------------------------
# index-pair decomposition


@dataclass(frozen=True)
class IndexPairDecomposition:
    n: int
    p: int
    q: int
    pairs: tuple
    bases: tuple

    def dimension(self, i: int) -> int:
        return self.bases[i].shape[1]


def subspace_decomposition(n: int, p: int, q: int) -> IndexPairDecomposition:
    """Split the (p,q) coordinate basis (identity metric) by K2 = I & J and K1 = I ^ J."""
    groups: dict = {}
    d = len(mi.combos(n, q))
    for a, I in enumerate(mi.combos(n, p)):
        for b, J in enumerate(mi.combos(n, q)):
            K2 = tuple(sorted(set(I) & set(J)))
            K1 = tuple(sorted(set(I) ^ set(J)))
            groups.setdefault((K1, K2), []).append(a * d + b)
    total = len(mi.combos(n, p)) * d
    pairs, bases = [], []
    for key in sorted(groups, key=lambda k: (len(k[1]), k)):
        cols = np.zeros((total, len(groups[key])))
        cols[groups[key], range(len(groups[key]))] = 1.0
        pairs.append(key)
        bases.append(cols)
    return IndexPairDecomposition(n, p, q, tuple(pairs), tuple(bases))


def restricted_t_norm(n: int, p: int, q: int, K1, K2, v) -> float:
    """Largest singular value of phi -> T_phi(v) on V^{p,q}_{(K1,K2)} (identity metric)."""
    if q == 0 or p == n:
        return 0.0
    dec = subspace_decomposition(n, p, q)
    key = (tuple(K1), tuple(K2))
    basis = dec.bases[dec.pairs.index(key)]
    M = t_of_v_matrix(AlgebraContext(n), p, q, v) @ basis
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def claim_pairs(n: int):
    """All (p, q, K1, K2) with K2 nonempty, for comparison against (p0, q0, K1, ())."""
    for p in range(n + 1):
        for q in range(n + 1):
            for (K1, K2) in subspace_decomposition(n, p, q).pairs:
                if K2:
                    yield p, q, K1, K2


# ---------------------------------------------------------------------------
# compound matrices and skew spectra


def compound_matrix(A, p: int) -> np.ndarray:
    """Derivation extension of A to Lambda^p: sum_{ij} A[j, i] e_j ^ I_{e_i}."""
    A = np.asarray(A)
    n = A.shape[0]
    if not 1 <= p <= n:
        raise ValueError("need 1 <= p <= n")
    dim = len(mi.combos(n, p))
    out = np.zeros((dim, dim), dtype=np.result_type(A, float))
    for i in range(n):
        ann = mi.annihilation(n, p, i)
        for j in range(n):
            if A[j, i] != 0:
                out += A[j, i] * (mi.creation(n, p - 1, j) @ ann)
    return out


@dataclass(frozen=True)
class SkewSpectrum:
    """Lambda_1 >= ... >= 0, padded with zeros to the dimension d."""

    Lambdas: tuple

    @property
    def rank(self) -> int:
        return 2 * sum(1 for x in self.Lambdas if x > 0)


def _check_antisymmetric(v, tol: float = 1e-12) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 2 or v.shape[0] != v.shape[1]:
        raise ValueError("v must be square")
    if np.abs(v + v.T).max(initial=0.0) > tol * max(1.0, np.abs(v).max()):
        raise ValueError("v must be antisymmetric")
    return v


def skew_spectrum(v, tol: float = 1e-12) -> SkewSpectrum:
    v = _check_antisymmetric(v)
    d = v.shape[0]
    w = np.sort(np.linalg.eigvalsh(1j * v))[::-1]
    lam = [float(x) if x > tol * max(1.0, abs(w[0])) else 0.0 for x in w[: d // 2]]
    return SkewSpectrum(tuple(lam + [0.0] * (d - len(lam))))


def t_k_extremes(v, k: int) -> float:
    """min{2(Lambda_1 + ... + Lambda_k), 2(Lambda_1 + ... + Lambda_{d-k})}."""
    lam = skew_spectrum(v).Lambdas
    d = len(lam)
    return min(2 * sum(lam[:k]), 2 * sum(lam[: d - k]))


def t_k_matrix(v, k: int) -> np.ndarray:
    """T_k(v) = compound of T_1(v) = 2v on k-forms."""
    return compound_matrix(2 * _check_antisymmetric(v), k)


def riem_t_bound_defect(omega: RealForm, v) -> float:
    """max(0, |T_omega(v)|^2 - 2 min{k, d-k} |omega|^2 |v|^2) with |v|^2 = sum_ij v_ij^2."""
    v = _check_antisymmetric(v)
    k, d = omega.k, omega.d
    lhs = t_riem(omega, v).norm2()
    return max(0.0, lhs - 2 * min(k, d - k) * omega.norm2() * float(np.sum(v * v)))


# ---------------------------------------------------------------------------
# Y bound


def y_operator_norm2(phi: PqForm) -> float:
    """sup over unit v in T^{1,0} (x) T^{0,1} of |Y_phi(v)|^2."""
    y = y_matrices(phi.ctx, phi.p, phi.q) @ phi.vec
    H = np.einsum("bx,xy,ay->ab", y, phi.ctx.gram(phi.p, phi.q), y.conj())
    return float(np.linalg.eigvalsh((H + H.conj().T) / 2).max())


def y_norm_bound_defect(phi: PqForm, k_primitive: int = 0) -> float:
    """max(0, sup_v |Y_phi(v)|^2/|v|^2 - (p + q - 2k)|phi|^2) for phi = L^k psi, psi primitive."""
    check_l_primitive(phi, k_primitive)
    bound = (phi.p + phi.q - 2 * k_primitive) * phi.norm2()
    return max(0.0, y_operator_norm2(phi) - bound)
