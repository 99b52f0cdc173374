import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gnat.base_manifolds import NamedField, SpaceForm, skew_basis
from gnat.core_tensor import christoffel, ricci
from gnat.errors import (ChartBreakdown, ConstraintViolation, DegenerateSpec, InvalidSpec,
                         InvariantViolation, NotKKType)
from gnat.tangent_bundle import LiftedField, classical_lift_metric, complete_lift_TM
from gnat.unit_tangent import (HVFrameVector, KKSpec, T1Point, chart_for, complete_lift_T1, field_to_chart,
                               horizontal_field, identity_residuals, induced_metric_T1, iota_tilde,
                               levi_civita_closed, lie_closed_T1, metric_on_frame, ricci_closed,
                               sample_t1_points, t1_chart, tangent_basis, tangential_lift)
from gnat.verify import random_kk_spec, run_suite

FLAT2 = SpaceForm(2, 0.0)
SPHERE2 = SpaceForm(2, 1.0)


# --- specs and points -------------------------------------------------------

@pytest.mark.parametrize("abcd,exc", [((0, 0, 1, 1), InvalidSpec), ((1, 1, 0, 0), DegenerateSpec),
                                      ((1, 0, 0, -1), DegenerateSpec), ((1, 0, -1, 2), DegenerateSpec)])
def test_kk_spec_validation(abcd, exc):
    with pytest.raises(exc):
        KKSpec(*abcd)


def test_kk_spec_derived_constants():
    kk = KKSpec(2.0, 0.5, 1.0, -0.5)
    assert kk.alpha == pytest.approx(5.75)
    assert kk.phi == pytest.approx(2.5)
    assert not kk.kk_type
    with pytest.raises(NotKKType):
        kk.require_kk()


def test_t1_point_validation():
    pt = T1Point.make(SPHERE2, [0.5, 0.0], [0.0, 3.0], normalize=True)
    assert pt.solved_index == 1
    with pytest.raises(InvariantViolation):
        T1Point.make(FLAT2, [0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ChartBreakdown):
        T1Point.make(FLAT2, [0.0, 0.0], [1.0, 0.0], solved_index=1)


# --- chart -----------------------------------------------------------------

def test_chart_solves_unit_constraint_flat():
    ch = t1_chart(FLAT2, solved_index=1)
    assert np.allclose(ch.embed([0.0, 0.0, 0.0])[1], [0.0, 1.0])
    assert np.allclose(ch.embed([0.0, 0.0, 0.6])[1], [0.6, 0.8])


def test_chart_solves_conformal_constraint():
    ch = t1_chart(SPHERE2, solved_index=1)
    x, u = ch.embed([0.8, -0.4, 0.3])
    lam = SPHERE2.conformal_factor(x)
    assert lam ** 2 * float(u @ u) == pytest.approx(1.0, abs=1e-14)


def test_chart_breakdown_near_equator():
    ch = t1_chart(FLAT2, solved_index=1)
    with pytest.raises(ChartBreakdown):
        ch.embed([0.0, 0.0, 0.999])
    assert not ch.contains([0.0, 0.0, 0.999])


def test_negative_sheet_chart():
    ch = t1_chart(FLAT2, solved_index=0, sign=-1)
    assert np.allclose(ch.embed([0.0, 0.0, 0.6])[1], [-0.8, 0.6])


def test_chart_jacobian_matches_finite_difference():
    ch = t1_chart(SPHERE2, solved_index=0)
    q = np.array([0.3, -0.5, 0.4])
    x, u = ch.embed(q)
    J = ch.jacobian(x, u)
    h = 1e-6
    fd = np.column_stack([(np.concatenate(ch.embed(q + h * e)) - np.concatenate(ch.embed(q - h * e))) / (2 * h)
                          for e in np.eye(3)])
    assert np.allclose(J, fd, atol=1e-7)


# --- metric ----------------------------------------------------------------

def test_sasaki_kk_is_induced_sasaki():
    base = SPHERE2.metric()
    ch = t1_chart(base, 1)
    q = np.array([0.3, 0.2, 0.4])
    x, u = ch.embed(q)
    J = ch.jacobian(x, u)
    Gs = classical_lift_metric("sasaki", base)(np.concatenate([x, u]))
    assert np.allclose(induced_metric_T1(KKSpec.sasaki(), ch)(q), J.T @ Gs @ J, atol=1e-12)


@pytest.mark.parametrize("seed", range(5))
def test_metric_in_frame_matches_chart_metric(seed):
    rng = np.random.default_rng(seed)
    sf = SpaceForm(3, [-1.0, 0.0, 1.0][seed % 3])
    kk = KKSpec(1.3, 0.4 if seed % 2 else 0.0, 0.2, -0.7)
    ((x, u),) = sample_t1_points(sf, None, 1, rng, 0.8)
    ch = chart_for(sf, u)
    G = induced_metric_T1(kk, ch)(ch.chart_point(x, u))
    Bp = tangent_basis(sf, x, u)
    V = HVFrameVector(rng.normal(size=3), Bp @ rng.normal(size=2))
    W = HVFrameVector(rng.normal(size=3), Bp @ rng.normal(size=2))
    cv = ch.hv_to_chart(x, u, V.horizontal, V.tangential)
    cw = ch.hv_to_chart(x, u, W.horizontal, W.tangential)
    assert float(cv @ G @ cw) == pytest.approx(metric_on_frame(kk, sf.metric_at(x), u, V, W), abs=1e-10)


def test_kk_horizontal_tangential_orthogonal():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u = np.array([0.2, 0.1]), SPHERE2.unit([0.2, 0.1], [0.3, 1.0])
    perp = tangent_basis(SPHERE2, x, u)[:, 0]
    g = SPHERE2.metric_at(x)
    assert metric_on_frame(kk, g, u, HVFrameVector(perp, np.zeros(2)), HVFrameVector(np.zeros(2), perp)) == 0.0


@pytest.mark.parametrize("abcd", [(1, 0, 0, 0), (1, 0.3, 0.5, 0.7), (-2, 0, 1, 0.5)])
def test_geodesic_field_has_length_phi(abcd):
    kk = KKSpec(*abcd)
    x = np.array([0.3, -0.1])
    u = SPHERE2.unit(x, [0.4, 1.0])
    ch = chart_for(SPHERE2, u)
    v = ch.hv_to_chart(x, u, u, np.zeros(2))
    assert float(v @ induced_metric_T1(kk, ch)(ch.chart_point(x, u)) @ v) == pytest.approx(kk.phi, abs=1e-10)


# --- lifts -----------------------------------------------------------------

def _point(sf, seed=0):
    rng = np.random.default_rng(seed)
    ((x, u),) = sample_t1_points(sf, None, 1, rng, 0.8)
    return x, u, chart_for(sf, u)


def test_tangential_lift_of_u_vanishes():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, ch = _point(SPHERE2)
    frame, chart_vec = tangential_lift(kk, ch, x, u, u)
    assert np.allclose(frame.horizontal, 0.0, atol=1e-14)
    assert np.allclose(chart_vec, 0.0, atol=1e-14)


def test_tangential_lift_of_u_is_horizontal_when_b_nonzero():
    kk = KKSpec(1.0, 0.3, 0.5, 0.7)
    x, u, ch = _point(SPHERE2)
    frame, _ = tangential_lift(kk, ch, x, u, u)
    assert np.allclose(frame.horizontal, (kk.b / kk.phi) * u)
    assert np.allclose(frame.tangential, 0.0, atol=1e-14)


def test_tangential_lift_of_orthogonal_vector_is_vertical():
    kk = KKSpec(1.0, 0.3, 0.5, 0.7)
    x, u, ch = _point(SPHERE2)
    w = tangent_basis(SPHERE2, x, u)[:, 0]
    frame, _ = tangential_lift(kk, ch, x, u, w)
    assert np.allclose(frame.horizontal, 0.0)
    assert np.allclose(frame.tangential, w)


def test_tangential_lift_is_linear_for_kk():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, ch = _point(SPHERE2, 1)
    w = tangent_basis(SPHERE2, x, u)[:, 0]
    _, a = tangential_lift(kk, ch, x, u, u + w)
    _, b = tangential_lift(kk, ch, x, u, w)
    assert np.allclose(a, b, atol=1e-12)


def test_complete_lift_of_killing_field_matches_tm_lift():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    xi = NamedField.linear(skew_basis(2)[0])
    x, u, ch = _point(SPHERE2, 2)
    ours = field_to_chart(complete_lift_T1(kk, ch, xi), ch)(ch.chart_point(x, u))
    tm = ch.to_chart(x, u, complete_lift_TM(xi, SPHERE2.metric()).induced(SPHERE2.metric(), x, u))
    assert np.allclose(ours, tm, atol=1e-8)


def test_complete_lift_of_non_killing_field_differs():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    xi = NamedField.linear(np.eye(2))
    x, u, ch = _point(FLAT2, 3)
    ours = field_to_chart(complete_lift_T1(kk, ch, xi), ch)(ch.chart_point(x, u))
    tm = ch.to_chart(x, u, complete_lift_TM(xi, FLAT2.metric()).induced(FLAT2.metric(), x, u))
    assert np.max(np.abs(ours - tm)) > 0.1


def test_iota_of_identity_vanishes():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, ch = _point(SPHERE2, 4)
    V = iota_tilde(kk, ch, np.eye(2))
    assert np.allclose(field_to_chart(V, ch)(ch.chart_point(x, u)), 0.0, atol=1e-14)


def test_complete_lift_of_constant_field_on_flat_base_is_horizontal():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    xi = NamedField.constant([1.0, -2.0])
    x, u, ch = _point(FLAT2, 5)
    q = ch.chart_point(x, u)
    assert np.allclose(field_to_chart(complete_lift_T1(kk, ch, xi), ch)(q),
                       field_to_chart(horizontal_field(xi, 2), ch)(q), atol=1e-9)


def test_field_with_vertical_part_along_u_is_rejected():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, ch = _point(SPHERE2, 6)
    bad = LiftedField(lambda y, v: np.zeros(2), lambda y, v: v)
    with pytest.raises(ConstraintViolation):
        field_to_chart(bad, ch)(ch.chart_point(x, u))
    with pytest.raises(ConstraintViolation):
        lie_closed_T1("general", kk, SPHERE2, x, u, u, u, field=bad)


# --- closed forms ----------------------------------------------------------

def test_closed_forms_reject_b_nonzero():
    kk = KKSpec(1.0, 0.3, 0.5, 0.7)
    x, u, _ = _point(SPHERE2)
    with pytest.raises(NotKKType):
        levi_civita_closed(kk, SPHERE2, "hh", lambda y: u, lambda y: u, x, u)
    with pytest.raises(NotKKType):
        ricci_closed(kk, 2, 1.0, "hh", u, u, SPHERE2.metric_at(x), u)


def test_tangential_connection_block_with_orthogonal_arguments():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, _ = _point(SPHERE2, 7)
    w = tangent_basis(SPHERE2, x, u)[:, 0]
    out = levi_civita_closed(kk, SPHERE2, "tt", lambda y: w, lambda y: w, x, u)
    assert np.allclose(out.tangential, 0.0, atol=1e-12) and np.allclose(out.horizontal, 0.0)


def test_flat_connection_ht_block_without_d():
    kk = KKSpec(1.3, 0.0, 0.5, 0.0)
    sf = SpaceForm(3, 0.0)
    x, u, _ = _point(sf, 8)
    X = lambda y: np.array([1.0, y[0], 0.5])
    Y = lambda y: np.array([y[1] * y[2], 1.0, -y[0]])
    out = levi_civita_closed(kk, sf, "ht", X, Y, x, u)
    nXY = np.array([[0, x[2], x[1]], [0, 0, 0], [-1, 0, 0]]) @ X(x)
    g = sf.metric_at(x)
    assert np.allclose(out.tangential, nXY - float(nXY @ g @ u) * u, atol=1e-8)


def test_ricci_unit_sphere_bundle_values():
    kk = KKSpec.sasaki()
    x, u, _ = _point(SPHERE2, 9)
    g = SPHERE2.metric_at(x)
    w = tangent_basis(SPHERE2, x, u)[:, 0] * 2.0
    gww = float(w @ g @ w)
    assert ricci_closed(kk, 2, 1.0, "hh", w, w, g, u) / gww == pytest.approx(0.5)
    assert ricci_closed(kk, 2, 1.0, "tt", w, w, g, u) / gww == pytest.approx(0.5)
    assert ricci_closed(kk, 2, 1.0, "hh", u, u, g, u) == pytest.approx(0.5)


@pytest.mark.parametrize("seed", range(3))
def test_mixed_ricci_block_vanishes(seed):
    rng = np.random.default_rng(seed)
    sf = SpaceForm(3, 1.0)
    kk = random_kk_spec(rng)
    ((x, u),) = sample_t1_points(sf, None, 1, rng, 0.8)
    ch = chart_for(sf, u)
    R = ricci(induced_metric_T1(kk, ch), ch.chart_point(x, u))
    X = rng.normal(size=3)
    Y = tangent_basis(sf, x, u) @ rng.normal(size=2)
    v, w = ch.hv_to_chart(x, u, X, np.zeros(3)), ch.hv_to_chart(x, u, np.zeros(3), Y)
    assert abs(float(v @ R @ w)) < 1e-3


def test_horizontal_lie_tt_block_vanishes():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, _ = _point(SPHERE2, 10)
    w = tangent_basis(SPHERE2, x, u)[:, 0]
    out = lie_closed_T1("horizontal", kk, SPHERE2, x, u, w, w, xi=lambda y: np.array([y[1], y[0] ** 2]))
    assert out["tt"] == 0.0


def test_tangential_lie_tt_block_with_orthogonal_field():
    kk = KKSpec(1.0, 0.0, 0.5, 0.7)
    x, u, _ = _point(FLAT2, 11)
    w = tangent_basis(FLAT2, x, u)[:, 0]
    out = lie_closed_T1("tangential", kk, FLAT2, x, u, w, w, xi=lambda y: w)
    assert out["tt"] == pytest.approx(0.0, abs=1e-12)


# --- oracle comparisons (small samples; the acceptance suite runs the full grid) ---

@pytest.mark.parametrize("suite", ["connection", "ricci", "lie", "identities"])
@pytest.mark.parametrize("n,kappa", [(2, 1.0), (3, -1.0), (3, 0.0)])
def test_suites_pass_on_sample(suite, n, kappa):
    kk = random_kk_spec(np.random.default_rng(int(10 * kappa) + 10 * n))
    report = run_suite(suite, SpaceForm(n, kappa), kk, samples=10, seed=3)
    assert report.passed, report.to_dict()


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2 ** 31), b=st.sampled_from([0.0, 0.4]))
def test_derivative_rules_on_functions(seed, b):
    rng = np.random.default_rng(seed)
    sf = SpaceForm(3, 1.0)
    kk = KKSpec(1.2, b, 0.3, 0.5)
    ((x, u),) = sample_t1_points(sf, None, 1, rng, 0.8)
    M = rng.normal(size=(3, 3))
    c = rng.normal(size=3)
    f = lambda y: float(y @ M @ y + c @ y ** 3)
    w = tangent_basis(sf, x, u) @ rng.normal(size=2)
    # with b != 0 the rules for X^t need X orthogonal to u at the point
    shift = 0.0 if b else 0.3
    X = lambda y: w + 0.1 * (y - x) + shift * u
    Y = lambda y: np.array([y[0] * y[1], 1.0, np.sin(y[2])])
    res = identity_residuals(kk, chart_for(sf, u), f, X, Y, x, u)
    assert max(res.values()) < 1e-6


def test_oracle_christoffels_are_symmetric_on_T1M():
    x, u, ch = _point(SPHERE2, 12)
    gam = christoffel(induced_metric_T1(KKSpec(1.0, 0.0, 0.5, 0.7), ch), ch.chart_point(x, u))
    assert np.allclose(gam, np.transpose(gam, (0, 2, 1)))
