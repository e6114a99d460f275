import numpy as np
import pytest

from oracles import dense_contract, dense_to_vec, dense_wedge, form_to_dense
from wlab.contraction import (TensorValuedForm, b_form, bundle_term, contract_sym2, curvature_action,
                              kaehler_weitzenbock_term, norm_t_identity_defect, riem_curvature_pairing,
                              riem_pairing_matrix, riem_t_pairing, s_operator, sym2_coordinate_basis, t_apply,
                              t_operator, t_riem, t_riem_operator, t_riem_pair, y_curvature_pairing,
                              y_operator, y_pairing_matrix)
from wlab.curvature import (BundleCurvature, KaehlerCurvature, RiemCurvature, model_fubini_study,
                            model_round_sphere, random_bundle, random_kaehler, random_riemannian,
                            reduced_curv_operator)
from wlab.exterior import (AlgebraContext, ContextMismatch, PqForm, dz, dzbar, kaehler_form, lefschetz_dual,
                           lefschetz_L)
from wlab.lefschetz import l_power, primitive_basis
from wlab.riemannian import RealForm, dx, volume


def scalar_ctx(n, seed):
    return AlgebraContext(n, 1, AlgebraContext.random(n, seed=seed).g)


def random_sym(rng, n):
    v = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return v + v.T


def random_primitive(ctx, p, q, rng):
    N = primitive_basis(ctx, p, q)
    return PqForm.from_vector(ctx, p, q, N @ (rng.normal(size=N.shape[1]) + 1j * rng.normal(size=N.shape[1])))


# ---------------------------------------------------------------------------
# tensor-valued forms


def test_carrier_dimensions():
    ctx = AlgebraContext(3, 2)
    phi = PqForm.random(ctx, 1, 2, np.random.default_rng(0))
    assert len(t_operator(phi)) == 6
    assert len(s_operator(phi)) == 6
    sc = AlgebraContext(3)
    assert len(y_operator(PqForm.random(sc, 1, 1, np.random.default_rng(0)))) == 9
    assert len(t_riem_operator(dx(4, 0))) == 6
    with pytest.raises(ValueError):
        TensorValuedForm("Nope", ())


def test_norm_is_sum_of_component_norms():
    phi = PqForm.random(AlgebraContext.random(3, seed=1), 1, 1, np.random.default_rng(1))
    tv = t_operator(phi)
    assert tv.norm2() == pytest.approx(sum(c.norm2() for c in tv.components))


# ---------------------------------------------------------------------------
# T


def t_dense(phi, v):
    """2 sum v_ij g^{i kbar} I_{d/dzbar^k}(dz^j ^ phi) with dense tensors."""
    ctx, n = phi.ctx, phi.ctx.n
    F = form_to_dense(phi)
    out = 0
    for i in range(n):
        X = np.zeros(2 * n, dtype=complex)
        X[n:] = ctx.g_inv[i]
        for j in range(n):
            if v[i, j] == 0:
                continue
            e = np.zeros(2 * n, dtype=complex)
            e[j] = 1
            out = out + 2 * v[i, j] * dense_contract(X, dense_wedge(e, F))
    return dense_to_vec(out, n, phi.p + 1, phi.q - 1)


def test_t_apply_example():
    ctx = AlgebraContext(2)
    v = np.zeros((2, 2))
    v[0, 0] = 1
    out = t_apply(dzbar(ctx, 0), v)
    assert np.allclose(out.coeffs, (-2 * dz(ctx, 0)).coeffs)
    assert np.allclose(out.vec, t_dense(dzbar(ctx, 0), v))


@pytest.mark.parametrize("p,q", [(0, 1), (1, 1), (0, 3), (2, 2), (1, 3)])
def test_t_apply_matches_dense_oracle(p, q):
    ctx = scalar_ctx(3, seed=p + q)
    rng = np.random.default_rng(p * 10 + q)
    phi, v = PqForm.random(ctx, p, q, rng), random_sym(rng, 3)
    assert np.allclose(t_apply(phi, v).vec, t_dense(phi, v))


def test_t_apply_degenerate_degrees():
    ctx = AlgebraContext(2)
    rng = np.random.default_rng(0)
    assert t_apply(PqForm.random(ctx, 1, 0, rng), random_sym(rng, 2)).is_zero()
    assert t_apply(PqForm.random(ctx, 2, 1, rng), random_sym(rng, 2)).is_zero()


def test_t_apply_linear_in_v():
    ctx = AlgebraContext.random(3, 2, seed=3)
    rng = np.random.default_rng(3)
    phi = PqForm.random(ctx, 1, 2, rng)
    v1, v2 = random_sym(rng, 3), random_sym(rng, 3)
    lhs = t_apply(phi, v1 + v2)
    assert np.allclose(lhs.coeffs, (t_apply(phi, v1) + t_apply(phi, v2)).coeffs)


def test_t_apply_rejects_non_symmetric():
    with pytest.raises(ValueError):
        t_apply(dzbar(AlgebraContext(2), 0), np.array([[0, 1], [0, 0]]))


def test_t_operator_reconstructs_t_apply():
    ctx = AlgebraContext.random(3, 1, seed=4)
    rng = np.random.default_rng(4)
    phi, v = PqForm.random(ctx, 1, 2, rng), random_sym(rng, 3)
    assert np.allclose(contract_sym2(t_operator(phi), ctx, v).coeffs, t_apply(phi, v).coeffs)


def test_t_operator_components_are_unit_basis_evaluations():
    ctx = scalar_ctx(2, seed=5)
    phi = PqForm.random(ctx, 0, 2, np.random.default_rng(5))
    tv = t_operator(phi)
    for A, V in enumerate(sym2_coordinate_basis(ctx)):
        assert np.allclose(tv[A].vec, t_dense(phi, V))


def test_t_norm_example():
    ctx = AlgebraContext(2)
    phi = dzbar(ctx, 0)
    # 2(q+1)(n-p)|phi|^2 - 2<Lambda L phi, phi> = 8 - 2 (n - 1)
    assert t_operator(phi).norm2() == pytest.approx(6)
    assert norm_t_identity_defect(phi) < 1e-12


def test_t_operator_of_zero():
    tv = t_operator(PqForm.zero(AlgebraContext(3), 1, 1))
    assert all(c.is_zero() for c in tv.components)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_norm_t_identity_random(n):
    rng = np.random.default_rng(n)
    for ctx in (AlgebraContext(n), AlgebraContext.random(n, 2, seed=n)):
        for p in range(n + 1):
            for q in range(n + 1):
                phi = PqForm.random(ctx, p, q, rng)
                assert norm_t_identity_defect(phi) < 1e-10 * max(1, phi.norm2())
    assert norm_t_identity_defect(PqForm.zero(AlgebraContext(n), 0, 0)) == 0


@pytest.mark.parametrize("n,p,q,k", [(3, 1, 1, 1), (4, 2, 2, 1), (4, 2, 3, 2), (3, 0, 2, 0)])
def test_norm_t_on_primitive_powers(n, p, q, k):
    ctx = scalar_ctx(n, seed=7)
    psi = random_primitive(ctx, p - k, q - k, np.random.default_rng(k))
    phi = l_power(psi, k)
    assert t_operator(phi).norm2() == pytest.approx(2 * (q - k) * (n - p + k + 1) * phi.norm2(), rel=1e-10)


# ---------------------------------------------------------------------------
# S


def test_s_example():
    assert s_operator(dzbar(AlgebraContext(2), 0)).norm2() == pytest.approx(1)


def test_s_of_functions_is_zero():
    tv = s_operator(PqForm.random(AlgebraContext(2), 1, 0, np.random.default_rng(0)))
    assert tv.norm2() == 0


@pytest.mark.parametrize("r", [1, 2, 3])
def test_s_norm_identity(r):
    ctx = AlgebraContext.random(3, r, seed=r)
    rng = np.random.default_rng(r)
    for p in range(4):
        for q in range(4):
            phi = PqForm.random(ctx, p, q, rng)
            assert s_operator(phi).norm2() == pytest.approx(q * phi.norm2(), rel=1e-10, abs=1e-12)


# ---------------------------------------------------------------------------
# Y


def test_y_of_one_and_omega():
    ctx = scalar_ctx(3, seed=1)
    assert y_operator(PqForm.one(ctx)).norm2() == 0
    assert y_operator(kaehler_form(ctx)).norm2() < 1e-24


def test_y_requires_scalar_forms():
    with pytest.raises(ContextMismatch):
        y_operator(PqForm.zero(AlgebraContext(2, 2), 1, 1))


def test_y_full_norm_on_primitive():
    # the summed norm obeys (p+q) |phi|^2 times the number of directions only;
    # the per-direction operator norm bound is checked in test_spectral
    ctx = scalar_ctx(3, seed=2)
    rng = np.random.default_rng(2)
    for p, q in [(1, 0), (0, 2), (1, 1), (2, 1)]:
        phi = random_primitive(ctx, p, q, rng)
        assert y_operator(phi).norm2() <= 3 * (p + q) * phi.norm2() * (1 + 1e-10)


# ---------------------------------------------------------------------------
# B and the curvature action


def test_b_form_fubini_study_is_twice_t_norm():
    ctx = scalar_ctx(3, seed=3)
    Rc = model_fubini_study(3, ctx)
    rng = np.random.default_rng(3)
    for p, q in [(0, 1), (1, 1), (1, 2), (2, 3)]:
        phi = PqForm.random(ctx, p, q, rng)
        assert b_form(phi, phi, Rc) == pytest.approx(2 * t_operator(phi).norm2(), rel=1e-12)


def test_b_form_is_real_on_the_diagonal():
    ctx = AlgebraContext.random(3, 2, seed=5)
    Rc = random_kaehler(3, 5, signs=[1, -1, 1, -1, 1, -1], ctx=ctx)
    phi = PqForm.random(ctx, 1, 2, np.random.default_rng(5))
    val = b_form(phi, phi, Rc)
    assert abs(val.imag) < 1e-10 * abs(val)


def test_b_form_intertwines_l_and_lambda():
    ctx = scalar_ctx(3, seed=6)
    Rc = random_kaehler(3, 6, signs=[1, -1, 1, 1, -1, 1], ctx=ctx)
    rng = np.random.default_rng(6)
    psi, phi = PqForm.random(ctx, 0, 1, rng), PqForm.random(ctx, 1, 2, rng)
    lhs = b_form(lefschetz_L(psi), phi, Rc)
    rhs = b_form(psi, lefschetz_dual(phi), Rc)
    assert lhs == pytest.approx(rhs, rel=1e-10)


def test_curvature_action_of_zero_curvature():
    ctx = AlgebraContext(2, 2)
    phi = PqForm.random(ctx, 1, 1, np.random.default_rng(0))
    Rc = KaehlerCurvature(ctx, np.zeros((2,) * 4))
    Re = BundleCurvature(ctx, np.zeros((2, 2, 2, 2)))
    assert curvature_action(phi, Rc, Re) == 0


def test_curvature_action_vanishes_in_degree_q0():
    ctx = AlgebraContext.random(3, 2, seed=2)
    Rc = random_kaehler(3, 2, ctx=ctx)
    Re = random_bundle(ctx, 2, shift=1.0)
    phi = PqForm.random(ctx, 2, 0, np.random.default_rng(2))
    assert curvature_action(phi, Rc, Re) == 0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_curvature_action_is_ricci_on_01_forms(n):
    # Bochner on (0,1)-forms with the trivial bundle: the curvature term is Ric(phi, phi)
    ctx = AlgebraContext(n)
    Rc = random_kaehler(n, n, signs=np.resize([1, -1], n * (n + 1) // 2), ctx=ctx)
    for j in range(n):
        ric = sum(Rc.R[j, j, m, m] for m in range(n))
        assert curvature_action(dzbar(ctx, j), Rc) == pytest.approx(ric, rel=1e-12)
    fs = model_fubini_study(n, ctx)
    assert curvature_action(dzbar(ctx, 0), fs) == pytest.approx(n + 1)


@pytest.mark.parametrize("r", [1, 2])
def test_bochner_kodaira_identity(r):
    rng = np.random.default_rng(r)
    for n in (2, 3):
        ctx = AlgebraContext.random(n, r, seed=n + r)
        N = n * (n + 1) // 2
        Rc = random_kaehler(n, n, signs=rng.choice([-1, 1], N), ctx=ctx)
        Re = random_bundle(ctx, n, signs=rng.choice([-1, 1], n * r))
        for p in range(n + 1):
            for q in range(n + 1):
                phi = PqForm.random(ctx, p, q, rng)
                lhs = curvature_action(phi, Rc, Re)
                rhs = 0.25 * b_form(phi, phi, Rc) + bundle_term(phi, Re)
                assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(lhs))


# ---------------------------------------------------------------------------
# Y pairing and the complexified Weitzenboeck term


def test_y_pairing_of_zero_curvature():
    ctx = AlgebraContext(2)
    phi = PqForm.random(ctx, 1, 1, np.random.default_rng(0))
    assert y_curvature_pairing(phi, KaehlerCurvature(ctx, np.zeros((2,) * 4))) == 0


def test_y_pairing_matrix_is_hermitian():
    ctx = scalar_ctx(3, seed=1)
    K = y_pairing_matrix(ctx, 1, 2, random_kaehler(3, 1, signs=[1, -1, 1, -1, 1, -1], ctx=ctx))
    assert np.abs(K - K.conj().T).max() < 1e-12


def test_y_pairing_double_sum_oracle_fubini_study():
    ctx = scalar_ctx(3, seed=2)
    Rc = model_fubini_study(3, ctx)
    M = reduced_curv_operator(Rc)
    phi = random_primitive(ctx, 1, 1, np.random.default_rng(2))
    Y = y_operator(phi).components
    from wlab.exterior import inner_product
    want = sum(M[B, A] * inner_product(Y[A], Y[B]) for A in range(9) for B in range(9))
    assert y_curvature_pairing(phi, Rc) == pytest.approx(want.real, rel=1e-12)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_y_pairing_equals_weitzenboeck_term(n):
    ctx = scalar_ctx(n, seed=n)
    rng = np.random.default_rng(n)
    Rc = random_kaehler(n, n, signs=rng.choice([-1, 1], n * (n + 1) // 2), ctx=ctx)
    for p in range(n + 1):
        for q in range(n + 1):
            phi = PqForm.random(ctx, p, q, rng)
            assert y_curvature_pairing(phi, Rc) == pytest.approx(kaehler_weitzenbock_term(phi, Rc),
                                                                 rel=1e-9, abs=1e-12)


def test_weitzenboeck_term_needs_scalar_forms():
    ctx = AlgebraContext(2, 2)
    with pytest.raises(ContextMismatch):
        kaehler_weitzenbock_term(PqForm.zero(ctx, 1, 1), random_kaehler(2, 0, ctx=ctx))


# ---------------------------------------------------------------------------
# real T and the Riemannian curvature term


def test_t_riem_pair_example():
    out = t_riem_pair(dx(3, 0), 0, 1)
    assert np.allclose(out.coeffs, (-dx(3, 1)).coeffs)


def test_t_riem_full_matrix_counts_both_orders():
    v = np.zeros((3, 3))
    v[0, 1], v[1, 0] = 1, -1
    assert np.allclose(t_riem(dx(3, 0), v).coeffs, (-2 * dx(3, 1)).coeffs)


def test_t_riem_volume_form_is_zero():
    rng = np.random.default_rng(0)
    v = rng.normal(size=(4, 4))
    assert np.allclose(t_riem(volume(4), v - v.T).coeffs, 0)


def test_t_riem_pair_antisymmetric():
    w = RealForm.random(4, 2, np.random.default_rng(1))
    assert np.allclose(t_riem_pair(w, 1, 3).coeffs, -t_riem_pair(w, 3, 1).coeffs)


def test_t_riem_rejects_symmetric_v():
    with pytest.raises(ValueError):
        t_riem(dx(2, 0), np.eye(2))


def test_riem_pairing_zero_and_sphere():
    assert riem_curvature_pairing(dx(3, 0), RiemCurvature(3, np.zeros((3,) * 4))) == 0
    w = dx(3, 0)
    S = model_round_sphere(3)
    assert riem_curvature_pairing(w, S) == pytest.approx(t_riem_operator(w).norm2())
    assert riem_curvature_pairing(w, S) == pytest.approx(2)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_riem_pairing_on_one_forms_is_ricci(d):
    Rr = random_riemannian(d, seed=d)
    for a in range(d):
        ric = sum(Rr.R[i, a, a, i] for i in range(d))
        assert riem_curvature_pairing(dx(d, a), Rr) == pytest.approx(ric, rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_riem_pairing_identity(d):
    rng = np.random.default_rng(d)
    Rr = random_riemannian(d, seed=100 + d)
    for k in range(d + 1):
        w = RealForm.random(d, k, rng)
        assert riem_curvature_pairing(w, Rr) == pytest.approx(riem_t_pairing(w, Rr), rel=1e-9, abs=1e-12)


def test_riem_pairing_matrix_symmetric():
    Q = riem_pairing_matrix(4, 2, random_riemannian(4, 3))
    assert np.abs(Q - Q.T).max() < 1e-12
