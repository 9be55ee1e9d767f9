import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from casimir_enz.quadrature import gauss_legendre_unit, integrate_unit_batch


def _plain(fn):
    return lambda owner, v: (fn(owner, v)[:, None], None)


def test_nodes_integrate_polynomials_exactly():
    x, w = gauss_legendre_unit(10)
    assert w.sum() == pytest.approx(1.0, rel=1e-15)
    for k in range(20):
        assert np.dot(w, x**k) == pytest.approx(1.0 / (k + 1), rel=1e-13)


def test_batch_of_monomials():
    powers = np.array([0.0, 1.5, 3.0, 7.25])
    res = integrate_unit_batch(_plain(lambda o, v: v ** powers[o]), 4, 1e-12, 0.0)
    assert res.converged.all()
    np.testing.assert_allclose(res.values[:, 0], 1 / (powers + 1), rtol=1e-11)


@settings(max_examples=40, deadline=None)
@given(k=st.floats(0.5, 200.0))
def test_sharp_exponential(k):
    res = integrate_unit_batch(_plain(lambda o, v: k * np.exp(-k * v)), 1, 1e-10, 0.0)
    exact = -np.expm1(-k)
    assert res.converged[0]
    assert res.values[0, 0] == pytest.approx(exact, rel=1e-9)
    assert abs(res.values[0, 0] - exact) <= res.errors[0, 0] + 1e-15


def test_integrable_endpoint_singularity():
    res = integrate_unit_batch(_plain(lambda o, v: 1 / np.sqrt(v)), 1, 1e-8, 0.0)
    assert res.values[0, 0] == pytest.approx(2.0, rel=1e-7)


def test_vector_components_and_sum_mode():
    def f(owner, v):
        return np.column_stack([np.cos(v), -np.cos(v) + 1e-3 * v]), None
    comp = integrate_unit_batch(f, 1, 1e-10, 0.0, combine="components")
    summed = integrate_unit_batch(f, 1, 1e-6, 0.0, combine="sum")
    assert comp.values[0, 0] == pytest.approx(np.sin(1.0), rel=1e-10)
    assert summed.values[0].sum() == pytest.approx(5e-4, rel=1e-6)


def test_propagated_error_is_reported_not_hidden():
    def f(owner, v):
        return v[:, None], np.full((len(v), 1), 1e-3)
    res = integrate_unit_batch(f, 1, 1e-9, 0.0)
    assert res.errors[0, 0] >= 1e-3 * (1 - 1e-12)
    assert not res.converged[0]


def test_budget_exhaustion():
    res = integrate_unit_batch(_plain(lambda o, v: np.sin(1 / (v + 1e-4))), 1, 1e-14, 0.0, max_evals=2000)
    assert not res.converged[0]
    assert res.evals <= 2000


@pytest.mark.parametrize("kw", [dict(rel_tol=0.0, abs_tol=0.0), dict(rel_tol=1e-6, abs_tol=-1.0)])
def test_rejects_bad_tolerances(kw):
    with pytest.raises(ValueError):
        integrate_unit_batch(_plain(lambda o, v: v), 1, **kw)


def test_rejects_bad_combine():
    with pytest.raises(ValueError):
        integrate_unit_batch(_plain(lambda o, v: v), 1, 1e-6, 0.0, combine="max")
