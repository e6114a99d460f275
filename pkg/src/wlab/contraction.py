"""Quadratic contraction operators and the curvature terms they package.

Every operator is available in two forms: a per-form function returning
PqForm / TensorValuedForm values, and a ``*_matrices`` builder returning a
stack of matrices acting on coefficient vectors.  The verification suites use
the stacks to evaluate thousands of samples at once.

Carrier bases are orthonormal:

* Sym^2 T^{1,0}: the basis P_A of ``curvature.sym2_basis`` in the unitary frame.
* T^{1,0} (x) E: f_a (x) eps_alpha, index a*r + alpha.
* T^{1,0} (x) T^{0,1}: f_a (x) fbar_b, index a*n + b.
* Lambda^2 R^d: e_i ^ e_j with i < j.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import multiindex as mi
from .curvature import (BundleCurvature, KaehlerCurvature, RiemCurvature, bundle_curv_operator,
                        reduced_curv_operator, riem_curv_operator, sym2_basis, sym_curv_operator)
from .exterior import AlgebraContext, ContextMismatch, PqForm, annihilation, creation, lefschetz_matrix
from .riemannian import RealForm

SYMMETRY_TOL = 1e-12

KINDS = ("Sym2", "VecBundle", "Bivector", "Mixed")


@dataclass(frozen=True, eq=False)
class TensorValuedForm:
    """Forms indexed by an orthonormal carrier basis; ``components[A]`` pairs with basis A."""

    kind: str
    components: tuple

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        object.__setattr__(self, "components", tuple(self.components))

    def __len__(self) -> int:
        return len(self.components)

    def __getitem__(self, A):
        return self.components[A]

    def norm2(self) -> float:
        return float(sum(c.norm2() for c in self.components))


# ---------------------------------------------------------------------------
# matrix builders (complex)


def _ann_bar(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Stack over j of I_{d/dzbar^j} on scalar (p,q)-forms."""
    return np.stack([annihilation(ctx.n, p, q, ctx.n + j) for j in range(ctx.n)])


def c_matrices(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """C[i, m] = g^{i jbar} I_{jbar}(dz^m ^ .), mapping (p,q) to (p+1,q-1), lifted to E."""

    def build():
        n = ctx.n
        cre = np.stack([creation(n, p, q, m) for m in range(n)])
        ann = np.einsum("ij,jxy->ixy", ctx.g_inv, _ann_bar(ctx, p + 1, q))
        C = np.einsum("ixy,myz->imxz", ann, cre)
        if ctx.r > 1:
            C = np.einsum("imxz,ab->imxazb", C, np.eye(ctx.r)).reshape(
                n, n, C.shape[2] * ctx.r, C.shape[3] * ctx.r)
        C.setflags(write=False)
        return C

    _need_t(ctx.n, p, q)
    return ctx._cached(("C", p, q), build)


def sym2_coordinate_basis(ctx: AlgebraContext) -> np.ndarray:
    """V[A] = Theta^T P_A Theta: the coordinate coefficients v_ij of the unitary basis element A."""
    T = ctx.coframe
    return ctx._cached("V", lambda: np.einsum("ai,Aab,bj->Aij", T, sym2_basis(ctx.n), T))


def t_matrices(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Stack T[A] with component A of T_phi equal to T[A] @ phi.vec."""

    def build():
        C = c_matrices(ctx, p, q)
        S = C + C.transpose(1, 0, 2, 3)
        out = np.einsum("Aij,ijxy->Axy", sym2_coordinate_basis(ctx), S, optimize=True)
        out.setflags(write=False)
        return out

    return ctx._cached(("T", p, q), build)


def s_matrices(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Stack S[(a, alpha)] mapping an E-valued (p,q)-vector to a scalar (p,q-1)-vector."""

    def build():
        ann = np.einsum("ja,jxy->axy", ctx.frame.conj(), _ann_bar(ctx, p, q))
        Th = np.linalg.inv(ctx.bundle_frame)
        out = np.einsum("axy,bc->abxyc", ann, Th).reshape(
            ctx.n * ctx.r, ann.shape[1], ann.shape[2] * ctx.r)
        out.setflags(write=False)
        return out

    if q < 1:
        raise ValueError("S needs q >= 1")
    return ctx._cached(("S", p, q), build)


def y_matrices(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Stack Y[a*n + b] = thetabar^b ^ I_{fbar_a} - theta^a ^ I_{f_b} on scalar (p,q)-forms."""

    def build():
        n, E, T = ctx.n, ctx.frame, ctx.coframe
        d = ctx.dim(p, q)
        out = np.zeros((n, n, d, d), dtype=complex)
        if q >= 1:
            cre_bar = np.stack([creation(n, p, q - 1, n + j) for j in range(n)])
            ann_bar = np.einsum("ja,jxy->axy", E.conj(), _ann_bar(ctx, p, q))
            out += np.einsum("bj,jxy,ayz->abxz", T.conj(), cre_bar, ann_bar)
        if p >= 1:
            cre = np.stack([creation(n, p - 1, q, i) for i in range(n)])
            ann = np.einsum("ib,ixy->bxy", E, np.stack([annihilation(n, p, q, i) for i in range(n)]))
            out -= np.einsum("ai,ixy,byz->abxz", T, cre, ann)
        out = out.reshape(n * n, d, d)
        out.setflags(write=False)
        return out

    if ctx.r != 1:
        raise ContextMismatch("Y is defined for scalar-valued forms only")
    return ctx._cached(("Y", p, q), build)


def _need_t(n: int, p: int, q: int) -> None:
    if q < 1 or p > n - 1:
        raise ValueError(f"T needs q >= 1 and p <= n-1, got ({p},{q}) with n={n}")


def _pair_matrix(M: np.ndarray, stack: np.ndarray, G: np.ndarray) -> np.ndarray:
    """K with sum_{A,B} M[B,A] <stack[A] x, stack[B] y> = x^T K conj(y)."""
    return np.einsum("BA,Aox,op,Bpy->xy", M, stack, G, stack.conj(), optimize=True)


# ---------------------------------------------------------------------------
# T


def t_apply(phi: PqForm, v) -> PqForm:
    """T_phi(v) = sum_ij v_ij T_phi(dz^i, dz^j) = 2 sum_ij v_ij g^{i kbar} I_{kbar}(dz^j ^ phi).

    Returns the zero form at the clamped bidegree when q = 0 or p = n.
    """
    v = np.asarray(v, dtype=complex)
    n = phi.ctx.n
    if v.shape != (n, n):
        raise ValueError("v must be an n x n matrix")
    if np.abs(v - v.T).max(initial=0.0) > SYMMETRY_TOL * max(1.0, np.abs(v).max()):
        raise ValueError("v must be symmetric")
    if phi.q == 0 or phi.p == n:
        return PqForm.zero(phi.ctx, min(phi.p + 1, n), max(phi.q - 1, 0))
    C = c_matrices(phi.ctx, phi.p, phi.q)
    out = 2 * np.einsum("ij,ijxy,y->x", v, C, phi.vec)
    return PqForm.from_vector(phi.ctx, phi.p + 1, phi.q - 1, out)


def t_operator(phi: PqForm) -> TensorValuedForm:
    ctx, n = phi.ctx, phi.ctx.n
    N = n * (n + 1) // 2
    if phi.q == 0 or phi.p == n:
        zero = PqForm.zero(ctx, min(phi.p + 1, n), max(phi.q - 1, 0))
        return TensorValuedForm("Sym2", (zero,) * N)
    comps = t_matrices(ctx, phi.p, phi.q) @ phi.vec
    return TensorValuedForm("Sym2", (PqForm.from_vector(ctx, phi.p + 1, phi.q - 1, c) for c in comps))


def sym2_coefficients(ctx: AlgebraContext, v) -> np.ndarray:
    """c_A with v = sum_A c_A V[A]; |v|^2 = sum |c_A|^2."""
    v = np.asarray(v, dtype=complex)
    E = ctx.frame
    return np.einsum("Aab,ab->A", sym2_basis(ctx.n), E.T @ v @ E)


def sym2_norm2(ctx: AlgebraContext, v) -> float:
    E = ctx.frame
    return float(np.sum(np.abs(E.T @ np.asarray(v) @ E) ** 2))


def contract_sym2(tv: TensorValuedForm, ctx: AlgebraContext, v) -> PqForm:
    """Reassemble T_phi(v) from the orthonormal components."""
    c = sym2_coefficients(ctx, v)
    out = c[0] * tv.components[0]
    for cA, comp in zip(c[1:], tv.components[1:]):
        out = out + cA * comp
    return out


# ---------------------------------------------------------------------------
# S and Y


def s_operator(phi: PqForm) -> TensorValuedForm:
    """Components I_{fbar_a} phi^(alpha), phi^(alpha) in the h-unitary frame; zero when q = 0."""
    ctx = phi.ctx
    sc = ctx.scalar()
    if phi.q == 0:
        return TensorValuedForm("VecBundle", (PqForm.zero(sc, phi.p, 0),) * (ctx.n * ctx.r))
    comps = s_matrices(ctx, phi.p, phi.q) @ phi.vec
    return TensorValuedForm("VecBundle", (PqForm.from_vector(sc, phi.p, phi.q - 1, c) for c in comps))


def y_operator(phi: PqForm) -> TensorValuedForm:
    if phi.ctx.r != 1:
        raise ContextMismatch("Y is defined for scalar-valued forms only")
    comps = y_matrices(phi.ctx, phi.p, phi.q) @ phi.vec
    return TensorValuedForm("Mixed", (PqForm.from_vector(phi.ctx, phi.p, phi.q, c) for c in comps))


# ---------------------------------------------------------------------------
# B and the curvature actions


def b_matrix(ctx: AlgebraContext, p: int, q: int, Rc: KaehlerCurvature) -> np.ndarray:
    """K with B(psi, eta) = psi.vec^T K conj(eta.vec).  Zero when q = 0 or p = n."""
    d = ctx.dim(p, q)
    if q == 0 or p == ctx.n:
        return np.zeros((d, d), dtype=complex)
    if not Rc.ctx.same_base(ctx):
        raise ContextMismatch("curvature and forms live over different base points")
    return _pair_matrix(sym_curv_operator(Rc), t_matrices(ctx, p, q), ctx.gram(p + 1, q - 1))


def b_form(phi: PqForm, psi: PqForm, Rc: KaehlerCurvature) -> complex:
    """B(phi, psi) = <(R (x) Id) T_phi, T_psi>, linear in phi."""
    phi._like(psi)
    K = b_matrix(phi.ctx, phi.p, phi.q, Rc)
    return complex(phi.vec @ K @ psi.vec.conj())


def bundle_term_matrix(ctx: AlgebraContext, p: int, q: int, Re: BundleCurvature) -> np.ndarray:
    """K with bundle_term(phi) = phi.vec^T K conj(phi.vec)."""
    d = ctx.dim(p, q)
    if q == 0:
        return np.zeros((d, d), dtype=complex)
    if not Re.ctx.same(ctx):
        raise ContextMismatch("bundle curvature and form use different contexts")
    G = ctx.scalar().gram(p, q - 1)
    return _pair_matrix(bundle_curv_operator(Re), s_matrices(ctx, p, q), G)


def bundle_term(phi: PqForm, Re: BundleCurvature) -> complex:
    """<(F^E (x) Id) S_phi, S_phi> on the orthonormal carrier basis."""
    K = bundle_term_matrix(phi.ctx, phi.p, phi.q, Re)
    return complex(phi.vec @ K @ phi.vec.conj())


def curvature_action_matrix(ctx: AlgebraContext, p: int, q: int, Rc: KaehlerCurvature,
                            Re: BundleCurvature | None = None) -> np.ndarray:
    """K with curvature_action(phi) = phi.vec^T K conj(phi.vec), built in coordinates:

    h_{a bbar} R_{i kbar m nbar} <X^{im} phi^a, X^{kn} phi^b>
      + R^E_{i kbar a bbar} <g^{i jbar} I_{jbar} phi^a, g^{k lbar} I_{lbar} phi^b>

    with X^{im} = g^{i jbar} I_{jbar}(dz^m ^ .).  No unitary frame is used,
    which keeps this path independent of B and F^E.
    """
    sc = ctx.scalar()
    d0, r = sc.dim(p, q), ctx.r
    K = np.zeros((d0, r, d0, r), dtype=complex)
    if q >= 1 and p < ctx.n:
        if not Rc.ctx.same_base(ctx):
            raise ContextMismatch("curvature and forms live over different base points")
        C = c_matrices(sc, p, q)
        base = np.einsum("ikmn,imxX,xz,knzZ->XZ", Rc.R, C, sc.gram(p + 1, q - 1), C.conj(), optimize=True)
        K += np.einsum("XZ,ab->XaZb", base, ctx.h)
    if Re is not None and q >= 1:
        if not Re.ctx.same(ctx):
            raise ContextMismatch("bundle curvature and form use different contexts")
        S = np.einsum("ij,jxy->ixy", ctx.g_inv, _ann_bar(sc, p, q))
        K += np.einsum("ikab,ixX,xz,kzZ->XaZb", Re.RE, S, sc.gram(p, q - 1), S.conj(), optimize=True)
    return K.reshape(d0 * r, d0 * r)


def curvature_action(phi: PqForm, Rc: KaehlerCurvature, Re: BundleCurvature | None = None) -> complex:
    """<(Delta_E - Delta_F) phi, phi> from its coordinate pairing form (see curvature_action_matrix)."""
    K = curvature_action_matrix(phi.ctx, phi.p, phi.q, Rc, Re)
    return complex(phi.vec @ K @ phi.vec.conj())


def y_pairing_matrix(ctx: AlgebraContext, p: int, q: int, Rc: KaehlerCurvature) -> np.ndarray:
    return _pair_matrix(reduced_curv_operator(Rc), y_matrices(ctx, p, q), ctx.gram(p, q))


def y_curvature_pairing(phi: PqForm, Rc: KaehlerCurvature) -> float:
    """<(R_red (x) Id) Y_phi, Y_phi>."""
    if phi.ctx.r != 1:
        raise ContextMismatch("Y is defined for scalar-valued forms only")
    val = phi.vec @ y_pairing_matrix(phi.ctx, phi.p, phi.q, Rc) @ phi.vec.conj()
    return float(val.real)


def complex_frame_curvature(ctx: AlgebraContext, Rc: KaehlerCurvature):
    """The complexified Riemann tensor on the 2n-generator frame (dz, dzbar) and
    the inverse of the complex-bilinear metric."""
    n = ctx.n
    R = Rc.R
    Rf = np.zeros((2 * n,) * 4, dtype=complex)
    h, a = slice(0, n), slice(n, 2 * n)
    Rf[h, a, h, a] = R
    Rf[a, h, h, a] = -R.transpose(1, 0, 2, 3)
    Rf[h, a, a, h] = -R.transpose(0, 1, 3, 2)
    Rf[a, h, a, h] = R.transpose(1, 0, 3, 2)
    Ginv = np.zeros((2 * n, 2 * n), dtype=complex)
    Ginv[h, a] = np.linalg.inv(ctx.g).T
    Ginv[a, h] = np.linalg.inv(ctx.g)
    return Rf, Ginv


def _embed(n: int, p: int, q: int) -> np.ndarray:
    """Isometric inclusion of the (p,q) block into degree p+q forms on 2n generators."""
    pos = mi.positions(2 * n, p + q)
    out = np.zeros((len(pos), len(mi.combos(n, p)) * len(mi.combos(n, q))))
    col = 0
    for I in mi.combos(n, p):
        for J in mi.combos(n, q):
            out[pos[I + tuple(n + j for j in J)], col] = 1.0
            col += 1
    return out


def kaehler_weitzenbock_matrix(ctx: AlgebraContext, p: int, q: int, Rc: KaehlerCurvature) -> np.ndarray:
    """K with kaehler_weitzenbock_term(phi) = Re(phi.vec^T K conj(phi.vec))."""
    if ctx.r != 1:
        raise ContextMismatch("scalar-valued forms only")
    n, k = ctx.n, p + q
    d = ctx.dim(p, q)
    if k == 0 or k == 2 * n:
        return np.zeros((d, d), dtype=complex)

    Rf, Ginv = complex_frame_curvature(ctx, Rc)
    m = 2 * n
    X = np.stack([np.stack([mi.creation(m, k - 1, A) @ mi.annihilation(m, k, C) for C in range(m)])
                  for A in range(m)])
    Rmix = np.einsum("baef,fd->baed", Rf, Ginv)
    K = -np.einsum("bc,baed,acxy,edyz->xz", Ginv, Rmix, X, X, optimize=True)
    H1 = np.zeros((m, m), dtype=complex)
    H1[:n, :n] = ctx.g_inv
    H1[n:, n:] = ctx.g_inv.T
    G = mi.minors(H1, k) * ctx.h[0, 0].real
    emb = _embed(n, p, q)
    return emb.T @ K.T @ G @ emb


def kaehler_weitzenbock_term(phi: PqForm, Rc: KaehlerCurvature) -> float:
    """<sum g^{BC} dZ^A ^ I_C (R(d_B, d_A) phi), phi> in the complex frame.

    This is the zeroth-order part of Delta_d - D^*D obtained by complexifying
    the Riemannian expression; R(X, Y) acts on 1-forms by
    R(X,Y) dZ^D = -R(X, Y, d_E, d_F) g^{FD} dZ^E and on forms as a derivation.
    """
    K = kaehler_weitzenbock_matrix(phi.ctx, phi.p, phi.q, Rc)
    return float(np.real(phi.vec @ K @ phi.vec.conj()))


def norm_t_identity_defect(phi: PqForm) -> float:
    """| |T_phi|^2 - 2(q+1)(n-p)|phi|^2 + 2<Lambda L phi, phi> |."""
    ctx, p, q, n = phi.ctx, phi.p, phi.q, phi.ctx.n
    lhs = t_operator(phi).norm2()
    lam_l = 0.0
    if p < n and q < n:
        Lphi = lefschetz_matrix(ctx, p, q) @ phi.vec
        lam_l = float(np.real(Lphi @ ctx.gram(p + 1, q + 1) @ Lphi.conj()))
    return abs(lhs - 2 * (q + 1) * (n - p) * phi.norm2() + 2 * lam_l)


# ---------------------------------------------------------------------------
# real T and the Riemannian curvature term


def _real_k(d: int, k: int) -> np.ndarray:
    """K[i, j] = dx^i ^ I_{e_j} on degree-k forms."""
    if k == 0:
        return np.zeros((d, d, 1, 1))
    return np.stack([np.stack([mi.creation(d, k - 1, i) @ mi.annihilation(d, k, j) for j in range(d)])
                     for i in range(d)])


def t_riem_pair(omega: RealForm, i: int, j: int) -> RealForm:
    """T_omega(dx^i, dx^j) = dx^i ^ I_j omega - dx^j ^ I_i omega."""
    K = _real_k(omega.d, omega.k)
    return RealForm(omega.d, omega.k, (K[i, j] - K[j, i]) @ omega.coeffs)


def t_riem_matrices(d: int, k: int) -> np.ndarray:
    """Stack over pairs i < j of T(dx^i, dx^j) on degree-k forms (e_i ^ e_j orthonormal)."""
    K = _real_k(d, k)
    return np.stack([K[i, j] - K[j, i] for i, j in combinations(range(d), 2)])


def t_riem(omega: RealForm, v) -> RealForm:
    """T_omega(v) = sum_ij v_ij T_omega(dx^i, dx^j) = T_k(v) omega for antisymmetric v."""
    v = np.asarray(v, dtype=float)
    d = omega.d
    if v.shape != (d, d):
        raise ValueError("v must be d x d")
    if np.abs(v + v.T).max(initial=0.0) > SYMMETRY_TOL * max(1.0, np.abs(v).max()):
        raise ValueError("v must be antisymmetric")
    K = _real_k(d, omega.k)
    return RealForm(d, omega.k, 2 * np.einsum("ij,ijxy,y->x", v, K, omega.coeffs))


def t_riem_operator(omega: RealForm) -> TensorValuedForm:
    comps = t_riem_matrices(omega.d, omega.k) @ omega.coeffs
    return TensorValuedForm("Bivector", (RealForm(omega.d, omega.k, c) for c in comps))


def riem_pairing_matrix(d: int, k: int, Rr: RiemCurvature) -> np.ndarray:
    """Q with riem_curvature_pairing(omega) = omega^T Q omega."""
    K = _real_k(d, k)
    # R(e_j, e_i) omega = -sum R_{j i c m} dx^c ^ I_m omega
    return np.einsum("jicm,ijxy,cmxz->yz", Rr.R, K, K, optimize=True)


def riem_curvature_pairing(omega: RealForm, Rr: RiemCurvature) -> float:
    """-sum_ij <dx^i ^ I_j omega, R(e_j, e_i) omega>."""
    if Rr.d != omega.d:
        raise ValueError("dimension mismatch")
    return float(omega.coeffs @ riem_pairing_matrix(omega.d, omega.k, Rr) @ omega.coeffs)


def riem_t_pairing(omega: RealForm, Rr: RiemCurvature) -> float:
    """<(F (x) Id) T_omega, T_omega> on the orthonormal bivector basis."""
    T = t_riem_matrices(omega.d, omega.k) @ omega.coeffs
    return float(np.einsum("BA,Ax,Bx->", riem_curv_operator(Rr), T, T))
