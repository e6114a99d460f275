"""Verification suites: batched property sweeps over the algebraic identities
and estimates, each summarised as one VerificationReport.

Every suite draws its randomness from ``np.random.default_rng([seed, suite_id, ...])``
so reports are reproducible cell by cell.  Samples are evaluated in batches
through the cached operator matrices; the per-form library functions are
exercised separately by the unit tests.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from math import ceil

import numpy as np

from . import predictor as pr
from .contraction import (_real_k, b_matrix, bundle_term_matrix, c_matrices, curvature_action_matrix,
                          kaehler_weitzenbock_matrix, riem_pairing_matrix, s_matrices, t_matrices,
                          t_riem_matrices, y_matrices, y_pairing_matrix)
from .curvature import (Spectrum, bundle_curv_operator, exact_m_positive_spectrum, exact_prefix_level,
                        hyperquadric_tensor, model_fubini_study, model_hyperquadric, random_bundle,
                        random_kaehler, random_riemannian, reduced_curv_operator, riem_curv_operator,
                        spectral_surgery, sym2_dim, sym_curv_operator)
from .exterior import AlgebraContext, PqForm, dual_lefschetz_matrix, lefschetz_matrix
from .lefschetz import (_power_matrix, primitive_decompose_batch, b_decomposition_defect, c_constant, is_primitive, l_power_norm_defect,
                        l_power_norm_constant, lambda_l_power_defect, primitive_basis, primitive_decompose)
from .riemannian import RealForm
from .spectral import (c_pq_k, c_pq_min, c_pq_min_exhaustive, claim_pairs, compound_matrix, restricted_t_norm,
                       t_bound_factor, t_k_extremes, t_k_matrix, takagi)

INEQUALITY_SLACK = 1e-9
TAKAGI_PER_SIZE = 126  # two ranks per size, 8 sizes: just over 10^3 matrices


@dataclass(frozen=True)
class RunConfig:
    tolerance: float = 1e-9
    identity_samples: int = 1000
    inequality_samples: int = 10000
    seed: int = 42
    n_max: int = 4
    d_max: int = 5
    r_max: int = 2
    n_values: tuple | None = None
    curvature_draws: int = 8
    timing: bool = False

    def __post_init__(self):
        if not 0 < self.tolerance < 1e-3:
            raise ValueError("tolerance must lie in (0, 1e-3)")
        for name in ("identity_samples", "inequality_samples", "n_max", "d_max", "r_max", "curvature_draws"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        if self.d_max < 2:
            raise ValueError("d_max must be at least 2")
        if self.n_values is not None and any(n < 1 for n in self.n_values):
            raise ValueError("dimensions must be positive")

    def dims(self, lo: int, hi: int) -> list[int]:
        """Complex dimensions in lo..hi, intersected with the --n filter when given."""
        ns = range(lo, hi + 1)
        return [n for n in ns if self.n_values is None or n in self.n_values]


@dataclass
class VerificationReport:
    suite: str
    params: dict
    samples: int
    seed: int
    max_residual: float
    violations: int
    status: str
    runtime_ms: int

    def to_dict(self) -> dict:
        return {"suite": self.suite, "params": self.params, "samples": self.samples, "seed": self.seed,
                "max_residual": self.max_residual, "violations": self.violations,
                "status": self.status, "runtime_ms": self.runtime_ms}


@dataclass
class Check:
    """Running maximum and violation count for one named property."""

    tolerance: float
    max_residual: float = 0.0
    violations: int = 0
    samples: int = 0

    def add(self, residuals, bad=None) -> None:
        r = np.atleast_1d(np.asarray(residuals, dtype=float))
        if r.size == 0:
            return
        self.samples += r.size
        if np.isnan(r).any():
            self.violations += int(np.isnan(r).sum())
            r = np.nan_to_num(r, nan=np.inf)
        self.max_residual = max(self.max_residual, float(r.max()))
        bad = r >= self.tolerance if bad is None else np.atleast_1d(bad)
        self.violations += int(np.count_nonzero(bad))

    def fail(self, count: int = 1) -> None:
        self.violations += count


@dataclass
class SuiteResult:
    params: dict
    checks: dict = field(default_factory=dict)

    def check(self, name: str, tolerance: float) -> Check:
        return self.checks.setdefault(name, Check(tolerance))


# ---------------------------------------------------------------------------
# helpers


def _cvec(rng, *shape) -> np.ndarray:
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


def _quad(X: np.ndarray, K: np.ndarray) -> np.ndarray:
    """x^T K conj(x) for each row x of X."""
    return np.einsum("sx,xy,sy->s", X, K, X.conj(), optimize=True)


def _normalize(X: np.ndarray, G: np.ndarray) -> np.ndarray:
    return X / np.sqrt(_quad(X, G).real)[:, None]


def _signs(rng, k: int) -> np.ndarray:
    return rng.choice([-1.0, 1.0], size=k)


def _seed(rng) -> int:
    return int(rng.integers(2**32))


def _opnorm(M: np.ndarray) -> float:
    return float(np.linalg.norm(M, 2)) if M.size else 0.0


def _random_sym(rng, s: int, n: int) -> np.ndarray:
    """Half full-rank complex symmetric matrices, half rank-one u u^T."""
    A = _cvec(rng, s, n, n)
    A = A + A.transpose(0, 2, 1)
    u = _cvec(rng, s, n)
    A[s // 2:] = np.einsum("si,sj->sij", u[s // 2:], u[s // 2:])
    return A


def _sym_norm2(ctx: AlgebraContext, V: np.ndarray) -> np.ndarray:
    E = ctx.frame
    return np.sum(np.abs(np.einsum("ia,sij,jb->sab", E, V, E)) ** 2, axis=(1, 2))


def _primitive_power_batch(ctx, p, q, k, s, rng):
    """Unit-norm forms L^k psi with psi primitive of bidegree (p-k, q-k); None if that space is zero."""
    a, b = p - k, q - k
    N = primitive_basis(ctx, a, b)
    if N.shape[1] == 0 or c_constant(ctx.n, a, b, k) <= 0:
        return None
    M = _power_matrix(ctx, a, b, k)
    X = _cvec(rng, s, N.shape[1]) @ (M @ N).T
    return _normalize(X, ctx.gram(p, q))


# ---------------------------------------------------------------------------
# suites


def suite_fubini_study(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, 6)
    res = SuiteResult({"n": ns, "metrics": ["identity", "random"]})
    chk = res.check("operator-equals-2Id", 1e-12)
    for n in ns:
        rng = rng_for(n)
        for ctx in (AlgebraContext(n), AlgebraContext.random(n, seed=_seed(rng))):
            M = sym_curv_operator(model_fubini_study(n, ctx))
            chk.add(np.abs(M - 2 * np.eye(len(M))).max())
    return res


def suite_hyperquadric(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(2, 8)
    res = SuiteResult({"n": ns})
    golden = res.check("model-spectrum", 0.5)
    level = res.check("m-level", 0.5)
    tensor = res.check("tensor-spectrum", 1e-9)
    for n in ns:
        rng = rng_for(n)
        N = sym2_dim(n)
        expected = (2 - n,) + (2,) * (N - 1)
        model = model_hyperquadric(n)
        golden.add(float(model.eigenvalues != expected))
        want = n // 2 + 1
        level.add(float(model.m_level != want))
        for ctx in (AlgebraContext(n), AlgebraContext.random(n, seed=_seed(rng))):
            vals = np.array(Spectrum.of(sym_curv_operator(hyperquadric_tensor(n, ctx))).eigenvalues)
            tensor.add(np.abs(vals - np.array(expected)).max())
            rounded = [int(round(x)) for x in vals]
            level.add(float(exact_prefix_level(rounded) != want))
    return res


def suite_bochner_kodaira(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, cfg.n_max)
    rs = list(range(1, cfg.r_max + 1))
    res = SuiteResult({"n": ns, "r": rs, "bidegrees": "all", "per_bidegree": cfg.identity_samples})
    chk = res.check("curvature-action", cfg.tolerance)
    per_draw = ceil(cfg.identity_samples / cfg.curvature_draws)
    for n in ns:
        N = sym2_dim(n)
        for r in rs:
            for p in range(n + 1):
                for q in range(n + 1):
                    rng = rng_for(n, p, q, r)
                    for _ in range(cfg.curvature_draws):
                        ctx = AlgebraContext.random(n, r, seed=_seed(rng))
                        Rc = random_kaehler(n, _seed(rng), _signs(rng, N), ctx)
                        Re = random_bundle(ctx, _seed(rng), _signs(rng, n * r))
                        coord = curvature_action_matrix(ctx, p, q, Rc, Re)
                        frame = 0.25 * b_matrix(ctx, p, q, Rc) + bundle_term_matrix(ctx, p, q, Re)
                        scale = _opnorm(sym_curv_operator(Rc)) + _opnorm(bundle_curv_operator(Re))
                        X = _normalize(_cvec(rng, per_draw, ctx.dim(p, q)), ctx.gram(p, q))
                        chk.add(np.abs(_quad(X, coord) - _quad(X, frame)) / scale)
    return res


def suite_norm_identities(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, cfg.n_max)
    rs = list(range(1, cfg.r_max + 1))
    s = cfg.identity_samples
    res = SuiteResult({"n": ns, "r": rs, "bidegrees": "all", "per_bidegree": s})
    s_chk = res.check("S-norm", cfg.tolerance)
    t_chk = res.check("T-norm", cfg.tolerance)
    k_chk = res.check("T-norm-primitive-power", cfg.tolerance)
    for n in ns:
        for r in rs:
            for p in range(n + 1):
                for q in range(n + 1):
                    rng = rng_for(n, p, q, r)
                    ctx = AlgebraContext.random(n, r, seed=_seed(rng))
                    X = _normalize(_cvec(rng, s, ctx.dim(p, q)), ctx.gram(p, q))
                    s_chk.add(np.abs(_s_norm2(ctx, p, q, X) - q))
                    lam_l = _l_norm2(ctx, p, q, X)
                    t_chk.add(np.abs(_t_norm2(ctx, p, q, X) - (2 * (q + 1) * (n - p) - 2 * lam_l)))
                    if r != 1:
                        continue
                    for k in range(min(p, q) + 1):
                        Y = _primitive_power_batch(ctx, p, q, k, s, rng)
                        if Y is not None:
                            k_chk.add(np.abs(_t_norm2(ctx, p, q, Y) - 2 * (q - k) * (n - p + k + 1)))
    return res


def _s_norm2(ctx, p, q, X):
    if q == 0:
        return np.zeros(len(X))
    S = np.einsum("Axy,sy->sAx", s_matrices(ctx, p, q), X)
    return np.einsum("sAx,xy,sAy->s", S, ctx.scalar().gram(p, q - 1), S.conj()).real


def _t_norm2(ctx, p, q, X):
    if q == 0 or p == ctx.n:
        return np.zeros(len(X))
    T = np.einsum("Axy,sy->sAx", t_matrices(ctx, p, q), X)
    return np.einsum("sAx,xy,sAy->s", T, ctx.gram(p + 1, q - 1), T.conj()).real


def _l_norm2(ctx, p, q, X):
    if p == ctx.n or q == ctx.n:
        return np.zeros(len(X))
    LX = X @ lefschetz_matrix(ctx, p, q).T
    return _quad(LX, ctx.gram(p + 1, q + 1)).real


def suite_t_bound(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, cfg.n_max)
    s = cfg.inequality_samples
    res = SuiteResult({"n": ns, "bidegrees": "q >= 1, p < n", "per_bidegree": s,
                       "slack": INEQUALITY_SLACK})
    gen = res.check("general-bound", INEQUALITY_SLACK)
    imp = res.check("improved-bound", INEQUALITY_SLACK)
    for n in ns:
        for p in range(n):
            for q in range(1, n + 1):
                rng = rng_for(n, p, q)
                ctx = AlgebraContext.random(n, seed=_seed(rng))
                X = _normalize(_cvec(rng, s, ctx.dim(p, q)), ctx.gram(p, q))
                gen.add(_t_excess(ctx, p, q, X, float(t_bound_factor(p, q)), rng))
                for k in range(min(p, q) + 1):
                    if p + q == 2 * k:
                        continue
                    Y = _primitive_power_batch(ctx, p, q, k, s, rng)
                    if Y is not None:
                        imp.add(_t_excess(ctx, p, q, Y, float(t_bound_factor(p, q, k)), rng))
    return res


def _t_excess(ctx, p, q, X, factor, rng):
    """|T_phi(v)|^2 - factor for unit phi and unit v (per sample)."""
    V = _random_sym(rng, len(X), ctx.n)
    V = V / np.sqrt(_sym_norm2(ctx, V))[:, None, None]
    C = c_matrices(ctx, p, q)
    T = 2 * np.einsum("sij,ijxy,sy->sx", V, C, X, optimize=True)
    return np.maximum(_quad(T, ctx.gram(p + 1, q - 1)).real - factor, 0.0)


def _batch_decomposition(ctx, p, q, rng, count, rec, prim) -> None:
    """Decompose ``count`` unit forms at once; rebuild with explicit L matrices."""
    X = _normalize(_cvec(rng, count, ctx.dim(p, q)), ctx.gram(p, q))
    parts = primitive_decompose_batch(ctx, p, q, X)
    total = np.zeros_like(X)
    for k, Y in enumerate(parts):
        a, b = p - k, q - k
        Z = Y.T
        for i in range(k):
            Z = lefschetz_matrix(ctx, a + i, b + i) @ Z
        total += Z.T
        if a > 0 and b > 0 and Y.size:
            lam = (dual_lefschetz_matrix(ctx, a, b) @ Y.T).T
            prim.add(np.sqrt(np.abs(_quad(lam, ctx.gram(a - 1, b - 1)))))
        if a + b > ctx.n:
            prim.add(np.abs(Y).max(axis=1))
    D = total - X
    rec.add(np.sqrt(np.abs(_quad(D, ctx.gram(p, q)))))


def suite_lefschetz(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, cfg.n_max)
    s = max(1, cfg.identity_samples // 50)
    res = SuiteResult({"n": ns, "bidegrees": "all", "per_bidegree": s,
                       "batch_per_bidegree": cfg.identity_samples})
    rec = res.check("decomposition-reconstruction", cfg.tolerance)
    brec = res.check("batch-reconstruction", cfg.tolerance)
    bprim = res.check("batch-parts-primitive", cfg.tolerance)
    prim = res.check("parts-primitive", 0.5)
    ck = res.check("lambda-k-l-k", cfg.tolerance)
    lk = res.check("l-power-norm", cfg.tolerance)
    bd = res.check("b-decomposition", 1e-8)
    for n in ns:
        N = sym2_dim(n)
        for p in range(n + 1):
            for q in range(n + 1):
                rng = rng_for(n, p, q)
                ctx = AlgebraContext.random(n, seed=_seed(rng))
                Rc = random_kaehler(n, _seed(rng), _signs(rng, N), ctx)
                scale = _opnorm(sym_curv_operator(Rc))
                P = primitive_basis(ctx, p, q)
                _batch_decomposition(ctx, p, q, rng, cfg.identity_samples, brec, bprim)
                for _ in range(s):
                    phi = PqForm.random(ctx, p, q, rng)
                    phi = phi * (1 / phi.norm())
                    try:
                        dec = primitive_decompose(phi)
                    except ArithmeticError:
                        rec.fail()
                        continue
                    rec.add((dec.reconstruct() - phi).norm())
                    prim.add(float(not all(is_primitive(part) for part in dec.parts)))
                    bd.add(b_decomposition_defect(phi, Rc) / scale)
                    if P.shape[1] == 0:
                        continue
                    psi = PqForm.from_vector(ctx, p, q, P @ _cvec(rng, P.shape[1]))
                    psi = psi * (1 / psi.norm())
                    for k in range(1, n + 1):
                        ck.add(lambda_l_power_defect(psi, k) / max(1, abs(c_constant(n, p, q, k))))
                        lk.add(l_power_norm_defect(psi, k) / max(1, abs(l_power_norm_constant(n, p, q, k))))
    return res


def suite_operator_norm_claim(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, min(3, cfg.n_max))
    draws = 3
    res = SuiteResult({"n": ns, "enumeration": "exhaustive", "diagonal_v_per_pair": draws})
    chk = res.check("restricted-norm-equality", 1e-8)
    for n in ns:
        rng = rng_for(n)
        for p, q, K1, K2 in claim_pairs(n):
            p0, q0 = p - len(K2), q - len(K2)
            for _ in range(draws):
                v = np.diag(_cvec(rng, n))
                a = restricted_t_norm(n, p, q, K1, K2, v)
                b = restricted_t_norm(n, p0, q0, K1, (), v)
                chk.add(abs(a - b) / max(a, b, 1e-300) if max(a, b) > 1e-12 else 0.0)
    return res


def suite_riemannian(cfg: RunConfig, rng_for) -> SuiteResult:
    ds = list(range(2, cfg.d_max + 1))
    s_id, s_in = cfg.identity_samples, cfg.inequality_samples
    res = SuiteResult({"d": ds, "degrees": "all", "identity_per_degree": s_id,
                       "inequality_per_degree": s_in, "takagi_sizes": list(range(1, 9)),
                       "takagi_per_size": TAKAGI_PER_SIZE})
    ident = res.check("curvature-term-identity", cfg.tolerance)
    bound = res.check("t-bound", INEQUALITY_SLACK)
    comp = res.check("compound-additivity", 1e-8)
    ext = res.check("compound-extremes", 1e-8)
    tak = res.check("takagi-reconstruction", 1e-10)
    for d in ds:
        for k in range(d + 1):
            rng = rng_for(d, k)
            dim = RealForm.zero(d, k).coeffs.size
            per_draw = ceil(s_id / cfg.curvature_draws)
            for _ in range(cfg.curvature_draws):
                Rr = random_riemannian(d, _seed(rng))
                Q1 = riem_pairing_matrix(d, k, Rr)
                T = t_riem_matrices(d, k)
                Q2 = np.einsum("BA,Axy,Bxz->yz", riem_curv_operator(Rr), T, T)
                W = rng.normal(size=(per_draw, dim))
                W /= np.linalg.norm(W, axis=1)[:, None]
                diff = np.einsum("sx,xy,sy->s", W, Q1 - Q2, W)
                ident.add(np.abs(diff) / max(_opnorm(riem_curv_operator(Rr)), 1e-300))
            W = rng.normal(size=(s_in, dim))
            W /= np.linalg.norm(W, axis=1)[:, None]
            V = rng.normal(size=(s_in, d, d))
            a, b = rng.normal(size=(2, s_in // 2, d))
            V[: s_in // 2] = np.einsum("si,sj->sij", a, b)
            V = V - V.transpose(0, 2, 1)
            V /= np.sqrt(np.sum(V * V, axis=(1, 2)))[:, None, None]
            out = 2 * np.einsum("sij,ijxy,sy->sx", V, _real_k(d, k), W, optimize=True)
            bound.add(np.maximum(np.sum(out * out, axis=1) - 2 * min(k, d - k), 0.0))
            if k == 0:
                continue
            for _ in range(5):
                v = rng.normal(size=(d, d))
                v = v - v.T
                w = np.linalg.eigvals(2 * v)
                sums = np.array([sum(w[list(c)]) for c in combinations(range(d), k)])
                got = np.linalg.eigvals(compound_matrix(2 * v, k))
                comp.add(_multiset_distance(got, sums) / max(1.0, np.abs(sums).max()))
                top = np.abs(np.linalg.eigvals(t_k_matrix(v, k))).max()
                ext.add(abs(top - t_k_extremes(v, k)) / max(1.0, top))
    rng = rng_for(0)
    for size in range(1, 9):
        for rank in sorted({size, max(size - 2, 0)}):
            for _ in range(TAKAGI_PER_SIZE // 2):
                B = _cvec(rng, size, rank)
                V = B @ B.T if rank else np.zeros((size, size), dtype=complex)
                if rank == size:
                    V = _cvec(rng, size, size)
                    V = V + V.T
                f = takagi(V)
                err = np.abs(f.reconstruct() - V).max() / max(1.0, np.abs(V).max())
                unit = np.abs(f.U.conj().T @ f.U - np.eye(size)).max()
                tak.add(max(err, unit))
    return res


def _multiset_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Greedy matching distance between two equal-size multisets of complex numbers."""
    b = list(b)
    worst = 0.0
    for x in a:
        j = int(np.argmin([abs(x - y) for y in b]))
        worst = max(worst, abs(x - b.pop(j)))
    return worst


def suite_kaehler_weitzenbock(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, cfg.n_max)
    s = cfg.identity_samples
    draws = max(1, cfg.curvature_draws // 2)
    res = SuiteResult({"n": ns, "bidegrees": "all", "per_bidegree": s, "bound_reading": "operator norm in v"})
    ident = res.check("y-pairing-identity", cfg.tolerance)
    bound = res.check("y-bound", INEQUALITY_SLACK)
    for n in ns:
        N = sym2_dim(n)
        for p in range(n + 1):
            for q in range(n + 1):
                rng = rng_for(n, p, q)
                for _ in range(draws):
                    ctx = AlgebraContext.random(n, seed=_seed(rng))
                    Rc = random_kaehler(n, _seed(rng), _signs(rng, N), ctx)
                    K_y = y_pairing_matrix(ctx, p, q, Rc)
                    K_w = kaehler_weitzenbock_matrix(ctx, p, q, Rc)
                    X = _normalize(_cvec(rng, ceil(s / draws), ctx.dim(p, q)), ctx.gram(p, q))
                    scale = _opnorm(reduced_curv_operator(Rc))
                    ident.add(np.abs(_quad(X, K_y).real - _quad(X, K_w).real) / scale)
                ctx = AlgebraContext.random(n, seed=_seed(rng))
                Y = y_matrices(ctx, p, q)
                G = ctx.gram(p, q)
                for k in range(min(p, q) + 1):
                    X = _primitive_power_batch(ctx, p, q, k, s, rng)
                    if X is None:
                        continue
                    YX = np.einsum("Axy,sy->sAx", Y, X)
                    H = np.einsum("sbx,xy,say->sab", YX, G, YX.conj())
                    top = np.linalg.eigvalsh((H + H.conj().transpose(0, 2, 1)) / 2)[:, -1]
                    bound.add(np.maximum(top - (p + q - 2 * k), 0.0))
    return res


def suite_combinatorics(cfg: RunConfig, rng_for) -> SuiteResult:
    res = SuiteResult({"n": [1, 12], "arithmetic": "exact rational"})
    chk = res.check("case-analysis-vs-exhaustive", 0.5)
    for n in range(1, 13):
        for p in range(n):
            for q in range(1, n + 1):
                value, k = c_pq_min(n, p, q)
                ok = value == c_pq_min_exhaustive(n, p, q) and value == c_pq_k(n, p, q, k)
                chk.add(float(not ok))
    return res


def suite_predictor(cfg: RunConfig, rng_for) -> SuiteResult:
    res = SuiteResult({"diamond_n": [2, 8], "symmetry_n": [1, 8], "m": "1..n"})
    diamond = res.check("projective-space-diamond", 0.5)
    quadric = res.check("hyperquadric-not-full-diamond", 0.5)
    low = res.check("diamond-up-to-half-n", 0.5)
    dual = res.check("duality-symmetry", 0.5)
    route = res.check("positivity-route", 0.5)
    for n in range(2, 9):
        fs = Spectrum.of(sym_curv_operator(model_fubini_study(n)))
        diamond.add(float(not pr.is_projective_space_diamond(pr.hodge_diamond_report(n, fs))))
        for m in range(1, n // 2 + 1):
            low.add(float(not pr.is_projective_space_diamond(pr.hodge_diamond_report(n, m))))
        quadric.add(float(pr.is_projective_space_diamond(pr.hodge_diamond_report(n, model_hyperquadric(n)))))
    for n in range(1, 9):
        for p in range(n + 1):
            for q in range(n + 1):
                for m in range(1, n + 1):
                    a = pr.vanishing_hodge(n, p, q, m)
                    dual.add(float(a.verdict != pr.vanishing_hodge(n, n - p, n - q, m).verdict))
                    if a.rule in ("hodge-1", "hodge-2"):
                        cls = pr.b_positivity_class(n, *a.positivity_cell, m)
                        route.add(float(cls.kind != pr.POSITIVE))
    return res


def suite_cross_check(cfg: RunConfig, rng_for) -> SuiteResult:
    ns = cfg.dims(1, min(3, cfg.n_max))
    cells: dict = {}
    for n in ns:
        for p in range(n + 1):
            for q in range(1, n + 1):
                for m in range(1, sym2_dim(n) + 1):
                    cls = pr.b_positivity_class(n, p, q, m)
                    if cls.kind != pr.NO_CLAIM:
                        cells.setdefault(cls.rule, []).append((n, p, q, m, cls.kind))
    res = SuiteResult({"n": ns, "per_clause": cfg.identity_samples,
                       "clauses": {rule: len(v) for rule, v in sorted(cells.items())}})
    sign = res.check("b-sign", 1e-8)
    surgery = res.check("surgery-level", 0.5)
    eig = res.check("b-min-eigenvalue", 1e-8)
    for rule in sorted(cells):
        per_cell = max(50, ceil(cfg.identity_samples / len(cells[rule])))
        for n, p, q, m, kind in cells[rule]:
            rng = rng_for(n, p, q, m)
            N = sym2_dim(n)
            ctx = AlgebraContext.random(n, seed=_seed(rng))
            base = random_kaehler(n, _seed(rng), _signs(rng, N), ctx)
            Rc = spectral_surgery(base, exact_m_positive_spectrum(N, m, rng))
            level = Spectrum.of(sym_curv_operator(Rc)).m_level
            surgery.add(float(level != m))
            K = b_matrix(ctx, p, q, Rc)
            G = ctx.gram(p, q)
            X = _normalize(_cvec(rng, per_cell, ctx.dim(p, q)), G)
            B = _quad(X, K).real
            if kind == pr.POSITIVE:
                sign.add(np.maximum(-B, 0.0), bad=B <= 0)
            else:
                sign.add(np.maximum(-B, 0.0), bad=B < -1e-8)
            L = np.linalg.cholesky(G)
            Li = np.linalg.inv(L)
            H = Li.conj() @ K @ Li.T
            lam = np.linalg.eigvalsh((H + H.conj().T) / 2)[0]
            eig.add(max(-lam, 0.0))
    return res


SUITES = {
    "fubini-study": suite_fubini_study,
    "hyperquadric": suite_hyperquadric,
    "bochner-kodaira": suite_bochner_kodaira,
    "norm-identities": suite_norm_identities,
    "t-bound": suite_t_bound,
    "lefschetz": suite_lefschetz,
    "operator-norm-claim": suite_operator_norm_claim,
    "riemannian": suite_riemannian,
    "kaehler-weitzenbock": suite_kaehler_weitzenbock,
    "combinatorics": suite_combinatorics,
    "predictor": suite_predictor,
    "cross-check": suite_cross_check,
}


def run_suite(name: str, cfg: RunConfig) -> VerificationReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}")
    suite_id = list(SUITES).index(name)

    def rng_for(*cell):
        return np.random.default_rng([cfg.seed, suite_id, *cell])

    start = time.perf_counter()
    result = SUITES[name](cfg, rng_for)
    elapsed = int(round((time.perf_counter() - start) * 1000)) if cfg.timing else 0
    checks = result.checks
    violations = sum(c.violations for c in checks.values())
    max_residual = max((c.max_residual for c in checks.values()), default=0.0)
    tolerance = max((c.tolerance for c in checks.values()), default=cfg.tolerance)
    samples = sum(c.samples for c in checks.values())
    # an empty sweep (for example a --n filter outside the suite's range) proves nothing
    ok = samples > 0 and violations == 0 and max_residual < tolerance
    params = dict(result.params)
    params["checks"] = {k: {"max_residual": c.max_residual, "tolerance": c.tolerance,
                            "violations": c.violations, "samples": c.samples} for k, c in checks.items()}
    return VerificationReport(name, params, samples, cfg.seed,
                              max_residual, violations, "pass" if ok else "fail", elapsed)
