import numpy as np
import pytest

from oracles import dense_contract, dense_inner, dense_to_vec, dense_wedge, form_to_dense, generator_metric
from wlab.exterior import (AlgebraContext, ContextMismatch, DegreeError, PqForm, TangentVector,
                           commutator_defect, contract, dz, dzbar, inner_product, kaehler_form,
                           lefschetz_dual, lefschetz_L, wedge)


def scalar_random_ctx(n, seed):
    # random base metric with the trivial line bundle
    return AlgebraContext(n, 1, AlgebraContext.random(n, seed=seed).g)


# ---------------------------------------------------------------------------
# context and storage


def test_context_rejects_non_hermitian_metric():
    with pytest.raises(ValueError):
        AlgebraContext(2, 1, np.array([[1.0, 0.5], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        AlgebraContext(2, 1, -np.eye(2))


def test_inverse_metric_and_frame():
    ctx = AlgebraContext.random(4, 2, seed=3)
    assert np.allclose(ctx.g @ ctx.g_inv.T, np.eye(4))
    E = ctx.frame
    # the frame is g-unitary: g(f_a, f_b) = delta
    assert np.allclose(E.T @ ctx.g @ E.conj(), np.eye(4))
    assert np.allclose(ctx.coframe @ E, np.eye(4))


@pytest.mark.parametrize("n,p,q,r", [(3, 1, 2, 1), (4, 2, 2, 2), (2, 0, 0, 3)])
def test_coefficient_dimension(n, p, q, r):
    from math import comb
    ctx = AlgebraContext(n, r)
    assert ctx.dim(p, q) == comb(n, p) * comb(n, q) * r
    assert len(ctx.basis(p, q)) == ctx.dim(p, q)


def test_linear_structure():
    ctx = AlgebraContext(3)
    rng = np.random.default_rng(0)
    a, b = PqForm.random(ctx, 1, 1, rng), PqForm.random(ctx, 1, 1, rng)
    assert np.allclose((a + 2 * b).coeffs, a.coeffs + 2 * b.coeffs)
    assert np.allclose((a - b).coeffs, a.coeffs - b.coeffs)
    with pytest.raises(DegreeError):
        a + PqForm.zero(ctx, 1, 0)
    with pytest.raises(ContextMismatch):
        a + PqForm.zero(AlgebraContext(3, 2), 1, 1)


def test_monomial_sorts_with_sign():
    ctx = AlgebraContext(3)
    f = PqForm.monomial(ctx, (2, 0), (1,))
    assert f[(0, 2), (1,)] == -1
    assert PqForm.monomial(ctx, (1, 1), ()).is_zero()


# ---------------------------------------------------------------------------
# wedge


def test_wedge_basis_product():
    ctx = AlgebraContext(2)
    f = wedge(dz(ctx, 0), dzbar(ctx, 1))
    assert f.bidegree == (1, 1)
    assert f[(0,), (1,)] == 1
    assert np.count_nonzero(f.coeffs) == 1


def test_wedge_self_is_zero():
    ctx = AlgebraContext(2)
    assert wedge(dz(ctx, 0), dz(ctx, 0)).is_zero()


def test_wedge_bilinear():
    ctx = AlgebraContext(2)
    lhs = wedge(dz(ctx, 0) + dz(ctx, 1), dzbar(ctx, 0))
    rhs = wedge(dz(ctx, 0), dzbar(ctx, 0)) + wedge(dz(ctx, 1), dzbar(ctx, 0))
    assert np.array_equal(lhs.coeffs, rhs.coeffs)


def test_wedge_overflow_raises():
    ctx = AlgebraContext(2)
    with pytest.raises(DegreeError):
        wedge(wedge(dz(ctx, 0), dz(ctx, 1)), dz(ctx, 0))


@pytest.mark.parametrize("pa,qa,pb,qb", [(1, 0, 1, 2), (1, 1, 1, 1), (0, 2, 2, 0), (2, 1, 0, 1)])
def test_wedge_matches_dense_oracle(pa, qa, pb, qb):
    ctx = AlgebraContext(3)
    rng = np.random.default_rng(pa * 7 + qa * 5 + pb * 3 + qb)
    a, b = PqForm.random(ctx, pa, qa, rng), PqForm.random(ctx, pb, qb, rng)
    dense = dense_wedge(form_to_dense(a), form_to_dense(b))
    assert np.allclose(wedge(a, b).vec, dense_to_vec(dense, 3, pa + pb, qa + qb))


def test_wedge_graded_commutative():
    ctx = AlgebraContext(3)
    rng = np.random.default_rng(1)
    a, b = PqForm.random(ctx, 1, 1, rng), PqForm.random(ctx, 1, 0, rng)
    # degrees 2 and 1 commute
    assert np.allclose(wedge(a, b).coeffs, wedge(b, a).coeffs)
    c = PqForm.random(ctx, 0, 1, rng)
    assert np.allclose(wedge(b, c).coeffs, -wedge(c, b).coeffs)


# ---------------------------------------------------------------------------
# contraction


def test_contract_basis():
    ctx = AlgebraContext(3)
    f = contract(TangentVector.d_zbar(3, 0), PqForm.monomial(ctx, (), (0, 1)))
    assert np.array_equal(f.coeffs, dzbar(ctx, 1).coeffs)


def test_contract_disjoint_index():
    ctx = AlgebraContext(3)
    assert contract(TangentVector.d_z(3, 0), dz(ctx, 1)).is_zero()


def test_contract_sign_rule():
    ctx = AlgebraContext(3)
    # dz^2 ^ dz^1 ^ dzbar^3 in 1-based labels
    a = PqForm.monomial(ctx, (1, 0), (2,))
    out = contract(TangentVector.d_z(3, 0), a)
    expected = -PqForm.monomial(ctx, (1,), (2,))
    assert np.allclose(out.coeffs, expected.coeffs)


def test_contract_on_degree_zero_is_zero_form():
    ctx = AlgebraContext(2)
    out = contract(TangentVector.d_z(2, 0), dzbar(ctx, 0))
    assert out.bidegree == (0, 1) and out.is_zero()


@pytest.mark.parametrize("anti", [False, True])
def test_contract_matches_dense_oracle(anti):
    ctx = AlgebraContext(3)
    rng = np.random.default_rng(4)
    a = PqForm.random(ctx, 2, 2, rng)
    X = rng.normal(size=3) + 1j * rng.normal(size=3)
    vec = np.zeros(6, dtype=complex)
    if anti:
        vec[3:] = X
    else:
        vec[:3] = X
    out = contract(TangentVector(tuple(X), anti), a)
    dense = dense_contract(vec, form_to_dense(a))
    assert np.allclose(out.vec, dense_to_vec(dense, 3, *out.bidegree))


def test_contract_is_antiderivation():
    ctx = AlgebraContext(3)
    rng = np.random.default_rng(5)
    a, b = PqForm.random(ctx, 1, 1, rng), PqForm.random(ctx, 0, 1, rng)
    X = TangentVector.d_zbar(3, 1)
    lhs = contract(X, wedge(a, b))
    rhs = wedge(contract(X, a), b) + wedge(a, contract(X, b))  # deg a = 2
    assert np.allclose(lhs.coeffs, rhs.coeffs)


# ---------------------------------------------------------------------------
# inner product


def test_inner_product_orthonormal_basis():
    ctx = AlgebraContext(2)
    f = wedge(dz(ctx, 0), dzbar(ctx, 1))
    assert inner_product(f, f) == pytest.approx(1.0)
    assert inner_product(dz(ctx, 0), dz(ctx, 1)) == 0


@pytest.mark.parametrize("p,q", [(0, 0), (1, 0), (1, 1), (2, 1), (2, 2), (3, 1)])
def test_inner_product_matches_dense_oracle(p, q):
    ctx = scalar_random_ctx(3, seed=p + 3 * q)
    rng = np.random.default_rng(10 + p + q)
    a, b = PqForm.random(ctx, p, q, rng), PqForm.random(ctx, p, q, rng)
    want = dense_inner(form_to_dense(a), form_to_dense(b), generator_metric(ctx))
    assert inner_product(a, b) == pytest.approx(want, rel=1e-12)


def test_inner_product_hermitian_and_positive():
    ctx = AlgebraContext.random(3, 2, seed=8)
    rng = np.random.default_rng(8)
    a, b = PqForm.random(ctx, 2, 1, rng), PqForm.random(ctx, 2, 1, rng)
    assert inner_product(a, b) == pytest.approx(np.conj(inner_product(b, a)))
    assert a.norm2() > 0


# ---------------------------------------------------------------------------
# Lefschetz operators


def test_kaehler_form_identity_metric():
    ctx = AlgebraContext(2)
    w = lefschetz_L(PqForm.one(ctx))
    expected = 1j * (wedge(dz(ctx, 0), dzbar(ctx, 0)) + wedge(dz(ctx, 1), dzbar(ctx, 1)))
    assert np.allclose(w.coeffs, expected.coeffs)


def test_kaehler_form_uses_metric():
    ctx = scalar_random_ctx(3, seed=2)
    w = kaehler_form(ctx)
    for i in range(3):
        for j in range(3):
            assert w[(i,), (j,)] == pytest.approx(1j * ctx.g[i, j])


@pytest.mark.parametrize("n", [1, 2, 4])
def test_kaehler_form_norm_is_n(n):
    assert kaehler_form(scalar_random_ctx(n, seed=n)).norm2() == pytest.approx(n)


def test_l_power_overflow():
    ctx = AlgebraContext(2)
    f = PqForm.one(ctx)
    for _ in range(2):
        f = lefschetz_L(f)
    with pytest.raises(DegreeError):
        lefschetz_L(f)


def test_lambda_of_omega():
    ctx = scalar_random_ctx(3, seed=6)
    out = lefschetz_dual(kaehler_form(ctx))
    assert np.allclose(out.coeffs, 3 * PqForm.one(ctx).coeffs)


def test_lambda_kills_offdiagonal_monomial():
    ctx = AlgebraContext(2)
    assert lefschetz_dual(wedge(dz(ctx, 0), dzbar(ctx, 1))).is_zero()


def test_lambda_is_adjoint_of_l():
    ctx = AlgebraContext.random(3, 2, seed=1)
    rng = np.random.default_rng(2)
    a, b = PqForm.random(ctx, 2, 2, rng), PqForm.random(ctx, 1, 1, rng)
    assert inner_product(lefschetz_dual(a), b) == pytest.approx(inner_product(a, lefschetz_L(b)), rel=1e-12)


def test_lambda_on_pure_type_is_zero():
    ctx = AlgebraContext(3)
    out = lefschetz_dual(PqForm.random(ctx, 2, 0, np.random.default_rng(0)))
    assert out.bidegree == (2, 0) and out.is_zero()


def test_commutator_on_one():
    ctx = AlgebraContext(3)
    assert commutator_defect(PqForm.one(ctx)).is_zero(1e-12)


@pytest.mark.parametrize("n,p,q,seed,tol", [(2, 1, 1, None, 1e-12), (4, 2, 1, 7, 1e-10), (3, 0, 2, 3, 1e-10),
                                            (4, 3, 3, 5, 1e-10)])
def test_commutator_identity(n, p, q, seed, tol):
    ctx = AlgebraContext(n) if seed is None else AlgebraContext.random(n, 2, seed=seed)
    a = PqForm.random(ctx, p, q, np.random.default_rng(n + p + q))
    assert commutator_defect(a).is_zero(tol * max(1.0, np.abs(a.coeffs).max()))
