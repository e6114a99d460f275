"""Primitive (Lefschetz) decomposition and the c_k constants."""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

import numpy as np

from .contraction import b_form
from .exterior import AlgebraContext, PqForm, dual_lefschetz_matrix, lefschetz_matrix

PRIMITIVE_TOL = 1e-9
KERNEL_CUTOFF = 1e-10


class NotPrimitiveError(ValueError):
    pass


def c_constant(n: int, p: int, q: int, k: int) -> int:
    """c_k = prod_{i=1..k} i (n - p - q - i + 1), so that Lambda^k L^k psi = c_k psi on primitives."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return prod(i * (n - p - q - i + 1) for i in range(1, k + 1))


def l_power_norm_constant(n: int, a: int, b: int, k: int) -> int:
    """prod_{i=1..k} i (n + 1 - a - b - i), the factor in |L^k eta|^2 for primitive eta."""
    return prod(i * (n + 1 - a - b - i) for i in range(1, k + 1))


def primitive_basis(ctx: AlgebraContext, p: int, q: int) -> np.ndarray:
    """Columns span the kernel of Lambda on (p,q)-forms (all forms when p or q is 0)."""

    def build():
        d = ctx.dim(p, q)
        if p == 0 or q == 0:
            return np.eye(d, dtype=complex)
        if p + q > ctx.n:
            return np.zeros((d, 0), dtype=complex)
        M = dual_lefschetz_matrix(ctx, p, q)
        _, s, Vh = np.linalg.svd(M)
        rank = int(np.sum(s > KERNEL_CUTOFF * s.max())) if s.size else 0
        return Vh[rank:].conj().T

    return ctx._cached(("primitive", p, q), build)


def _power_matrix(ctx: AlgebraContext, p: int, q: int, k: int):
    """Matrix of L^k from (p,q); None when the target degree leaves the range."""
    if p + k > ctx.n or q + k > ctx.n:
        return None
    M = np.eye(ctx.dim(p, q), dtype=complex)
    for i in range(k):
        M = lefschetz_matrix(ctx, p + i, q + i) @ M
    return M


def _dual_power_matrix(ctx: AlgebraContext, p: int, q: int, k: int) -> np.ndarray:
    M = np.eye(ctx.dim(p, q), dtype=complex)
    for i in range(k):
        M = dual_lefschetz_matrix(ctx, p - i, q - i) @ M
    return M


def l_power(phi: PqForm, k: int) -> PqForm:
    """L^k phi; the zero form at the clamped bidegree when L^k overflows."""
    M = _power_matrix(phi.ctx, phi.p, phi.q, k)
    n = phi.ctx.n
    if M is None:
        return PqForm.zero(phi.ctx, min(phi.p + k, n), min(phi.q + k, n))
    return PqForm.from_vector(phi.ctx, phi.p + k, phi.q + k, M @ phi.vec)


def is_primitive(psi: PqForm, tol: float = PRIMITIVE_TOL) -> bool:
    if psi.p == 0 or psi.q == 0:
        return True
    lam = PqForm.from_vector(psi.ctx, psi.p - 1, psi.q - 1,
                             dual_lefschetz_matrix(psi.ctx, psi.p, psi.q) @ psi.vec)
    return lam.norm() <= tol * max(psi.norm(), 1e-300) or psi.is_zero()


def _require_primitive(psi: PqForm) -> None:
    if not is_primitive(psi):
        raise NotPrimitiveError("input form is not primitive")


@dataclass(frozen=True)
class PrimitiveDecomposition:
    """``parts[k]`` is the primitive form psi_k of bidegree (p-k, q-k)."""

    parts: tuple

    def reconstruct(self) -> PqForm:
        out = None
        for k, psi in enumerate(self.parts):
            term = l_power(psi, k)
            out = term if out is None else out + term
        return out


def _blocks(ctx: AlgebraContext, p: int, q: int):
    """(k, L^k N_k) for every k where L^k is injective on primitive (p-k, q-k)-forms."""
    for k in range(min(p, q) + 1):
        a, b = p - k, q - k
        N = primitive_basis(ctx, a, b)
        if N.shape[1] == 0 or c_constant(ctx.n, a, b, k) <= 0:
            continue
        yield k, N, _power_matrix(ctx, a, b, k) @ N


def primitive_decompose_batch(ctx: AlgebraContext, p: int, q: int, X) -> list:
    """Primitive parts for many (p,q) coefficient vectors at once.

    ``X`` has one form per row; returns ``parts`` with ``parts[k]`` of shape
    (rows, dim(p-k, q-k)).  No reconstruction check is made here.
    """
    if ctx.r != 1:
        raise ValueError("primitive decomposition is for scalar-valued forms")
    X = np.atleast_2d(np.asarray(X, dtype=complex))
    blocks = list(_blocks(ctx, p, q))
    parts = [np.zeros((X.shape[0], ctx.dim(p - k, q - k)), dtype=complex) for k in range(min(p, q) + 1)]
    if blocks:
        A = np.hstack([B for _, _, B in blocks])
        sol, *_ = np.linalg.lstsq(A, X.T, rcond=None)
        start = 0
        for k, N, B in blocks:
            w = N.shape[1]
            parts[k] = (N @ sol[start:start + w]).T
            start += w
    return parts


def primitive_decompose(Phi: PqForm, tol: float = 1e-9) -> PrimitiveDecomposition:
    """Solve Phi = sum_k L^k psi_k with psi_k primitive as one least-squares system."""
    ctx, p, q = Phi.ctx, Phi.p, Phi.q
    rows = primitive_decompose_batch(ctx, p, q, Phi.vec)
    dec = PrimitiveDecomposition(tuple(PqForm.from_vector(ctx, p - k, q - k, r[0]) for k, r in enumerate(rows)))
    err = (dec.reconstruct() - Phi).norm()
    if err > tol * max(1.0, Phi.norm()):
        raise ArithmeticError(f"primitive decomposition failed to reconstruct (residual {err:.3e})")
    return dec


def lambda_l_power_defect(psi: PqForm, k: int) -> float:
    """|Lambda^k L^k psi - c_k psi| for primitive psi."""
    _require_primitive(psi)
    ck = c_constant(psi.ctx.n, psi.p, psi.q, k)
    M = _power_matrix(psi.ctx, psi.p, psi.q, k)
    if M is None:
        return (ck * psi).norm()
    back = _dual_power_matrix(psi.ctx, psi.p + k, psi.q + k, k) @ (M @ psi.vec)
    return (PqForm.from_vector(psi.ctx, psi.p, psi.q, back) - ck * psi).norm()


def l_power_norm_defect(eta: PqForm, k: int) -> float:
    """| |L^k eta|^2 - prod i(n+1-a-b-i) |eta|^2 | for primitive eta of bidegree (a,b)."""
    _require_primitive(eta)
    const = l_power_norm_constant(eta.ctx.n, eta.p, eta.q, k)
    lhs = l_power(eta, k).norm2()
    return abs(lhs - const * eta.norm2())


def b_decomposition_defect(Phi: PqForm, Rc) -> float:
    """|B(Phi,Phi) - sum_k c_k B(psi_k, psi_k)|."""
    dec = primitive_decompose(Phi)
    n = Phi.ctx.n
    rhs = sum(c_constant(n, psi.p, psi.q, k) * b_form(psi, psi, Rc) for k, psi in enumerate(dec.parts))
    return abs(b_form(Phi, Phi, Rc) - rhs)


__all__ = ["NotPrimitiveError", "PrimitiveDecomposition", "b_decomposition_defect", "c_constant",
           "is_primitive", "l_power", "l_power_norm_constant", "l_power_norm_defect",
           "lambda_l_power_defect", "primitive_basis", "primitive_decompose", "primitive_decompose_batch"]
