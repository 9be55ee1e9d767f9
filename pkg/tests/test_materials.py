import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from casimir_enz.materials import ConstantEps, Drude, Vacuum, eps_imag_axis

freqs = st.floats(min_value=1e9, max_value=1e18)


def test_drude_examples():
    wp = 3.7e14
    assert eps_imag_axis(Drude(wp), wp) == 2.0
    assert eps_imag_axis(Drude(0.0, 5e13), 1.3e15) == 1.0
    assert eps_imag_axis(Drude(wp, wp), wp) == 1.5


def test_vacuum_and_constant():
    xi = np.geomspace(1e10, 1e17, 7)
    assert np.all(eps_imag_axis(Vacuum(), xi) == 1.0)
    assert np.all(eps_imag_axis(ConstantEps(0.5), xi) == 0.5)


@pytest.mark.parametrize("xi", [0.0, -1.0, np.nan])
def test_rejects_nonpositive_frequency(xi):
    with pytest.raises(ValueError):
        eps_imag_axis(Drude(1e14), xi)


@pytest.mark.parametrize("bad", [lambda: ConstantEps(0.0), lambda: Drude(-1.0), lambda: Drude(1e14, -1.0)])
def test_invalid_models(bad):
    with pytest.raises(ValueError):
        bad()


@given(wp=freqs, wc=st.floats(min_value=0, max_value=1e16), xi=freqs, factor=st.floats(1.01, 100))
def test_drude_at_least_one_and_decreasing(wp, wc, xi, factor):
    m = Drude(wp, wc)
    lo, hi = eps_imag_axis(m, xi), eps_imag_axis(m, xi * factor)
    assert lo >= 1.0 and hi >= 1.0
    assert hi <= lo
    if (wp / xi) ** 2 > 1e-12:
        assert hi < lo


@given(wp=freqs, xi=freqs)
def test_drude_lossless_closed_form(wp, xi):
    assert eps_imag_axis(Drude(wp), xi) == 1.0 + (wp / xi) ** 2


@given(wc=st.floats(min_value=0, max_value=1e16), xi=freqs)
def test_zero_plasma_frequency_is_vacuum(wc, xi):
    assert eps_imag_axis(Drude(0.0, wc), xi) == eps_imag_axis(Vacuum(), xi)


def test_drude_limits():
    m = Drude(1e14)
    assert eps_imag_axis(m, 1e24) == pytest.approx(1.0, abs=1e-19)
    assert eps_imag_axis(m, 1e-3) > 1e33
