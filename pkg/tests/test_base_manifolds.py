import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gnat.base_manifolds import (NamedField, SpaceForm, conformal_factor, homothetic_catalog,
                                 sample_chart_points, skew_basis)
from gnat.core_tensor import curvature_operator, riemann, sectional_curvature
from gnat.errors import OutOfDomain


@pytest.mark.parametrize("n", [2, 3, 5])
def test_flat_metric_is_identity(n):
    sf = SpaceForm(n, 0.0)
    rng = np.random.default_rng(1)
    for x in sample_chart_points(sf, 5, rng):
        assert np.array_equal(sf.metric()(x), np.eye(n))


def test_sphere_metric_at_origin():
    assert np.array_equal(SpaceForm(3, 1.0).metric()(np.zeros(3)), np.eye(3))


def test_hyperbolic_chart_domain():
    sf = SpaceForm(2, -1.0)
    assert sf.domain_radius < 2.0
    with pytest.raises(OutOfDomain):
        sf.metric()(np.array([1.99, 0.0]))


def test_space_form_needs_dimension_two():
    with pytest.raises(ValueError):
        SpaceForm(1, 0.0)


@settings(max_examples=20, deadline=None)
@given(kappa=st.sampled_from([-1.0, -0.5, 0.5, 1.0, 2.0]),
       p=st.lists(st.floats(-0.5, 0.5), min_size=2, max_size=2))
def test_sectional_curvature_equals_kappa(kappa, p):
    K = sectional_curvature(SpaceForm(2, kappa).metric(), p, [1.0, 0.3], [-0.2, 1.0])
    assert K == pytest.approx(kappa, abs=1e-4)


@pytest.mark.parametrize("kappa", [-1.0, 0.0, 1.0])
def test_curvature_identity_at_random_points(kappa):
    sf = SpaceForm(3, kappa)
    rng = np.random.default_rng(3)
    for x in sample_chart_points(sf, 20, rng, 0.6):
        g = sf.metric_at(x)
        R = riemann(sf.metric(), x)
        X, Y, Z = rng.normal(size=(3, 3))
        assert np.allclose(curvature_operator(R, X, Y, Z),
                           kappa * ((Y @ g @ Z) * X - (X @ g @ Z) * Y), atol=1e-4)


def test_orthonormal_frame_and_unit():
    sf = SpaceForm(3, 1.0)
    x = np.array([0.4, -0.3, 0.2])
    E = sf.orthonormal_frame(x)
    assert np.allclose(E.T @ sf.metric_at(x) @ E, np.eye(3))
    u = sf.unit(x, [1.0, 2.0, 3.0])
    assert float(u @ sf.metric_at(x) @ u) == pytest.approx(1.0, abs=1e-14)


def test_rotation_is_killing_on_flat_space():
    A = skew_basis(3)[1]
    assert conformal_factor(SpaceForm(3, 0.0), NamedField.linear(A)).kind == "killing"


def test_dilation_is_homothetic_with_factor_one():
    res = conformal_factor(SpaceForm(2, 0.0), NamedField.linear(np.eye(2)))
    assert res.kind == "homothetic"
    assert res.lambda0 == pytest.approx(1.0, abs=1e-8)


def test_rotation_is_killing_on_sphere_chart():
    assert conformal_factor(SpaceForm(2, 1.0), NamedField.linear(skew_basis(2)[0])).kind == "killing"


def test_dilation_is_only_conformal_on_sphere_chart():
    assert conformal_factor(SpaceForm(2, 1.0), NamedField.linear(np.eye(2))).kind == "conformal"


def test_nonconformal_field():
    assert conformal_factor(SpaceForm(2, 0.0), NamedField.linear(np.diag([1.0, 2.0]))).kind == "none"


def test_catalog_flat_requested_factor():
    ((field, lam0),) = homothetic_catalog(SpaceForm(2, 0.0), lambda0=1.0)
    assert lam0 == 1.0
    x = np.array([0.3, -0.8])
    assert np.allclose(field(x), x)


@pytest.mark.parametrize("kappa", [-1.0, 1.0])
def test_catalog_curved_is_killing(kappa):
    sf = SpaceForm(3, kappa)
    entries = homothetic_catalog(sf)
    assert entries and all(lam0 == 0.0 for _, lam0 in entries)
    for field, _ in entries:
        assert conformal_factor(sf, field).kind == "killing"


@pytest.mark.parametrize("n", [2, 3])
def test_catalog_factors_hold(n):
    sf = SpaceForm(n, 0.0)
    for field, lam0 in homothetic_catalog(sf):
        res = conformal_factor(sf, field)
        assert res.lambda0 == pytest.approx(lam0, abs=1e-6)


def test_translation_is_killing():
    res = conformal_factor(SpaceForm(2, 0.0), NamedField.constant([1.0, -2.0]))
    assert res.kind == "killing" and res.lambda0 == 0.0


def test_named_field_algebra():
    f = NamedField.affine(np.eye(2), [1.0, 0.0]) + NamedField.constant([0.0, 1.0]).scaled(2.0)
    assert np.allclose(f([1.0, 1.0]), [2.0, 3.0])
    assert np.allclose(f.jacobian(), np.eye(2))


def test_skew_basis_count():
    B = skew_basis(4)
    assert len(B) == 6
    assert all(np.allclose(E, -E.T) for E in B)
