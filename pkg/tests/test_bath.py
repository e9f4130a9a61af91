import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tlfnoise.bath import bath_gamma, gamma_raw, rates_at, signed_frequencies, spectral_function
from tlfnoise.units import BathSpec, Temperature, kelvin_to_omega

# mpmath (40 digits) at omega = +/- omega_t for the single-TLF reference point.
GAMMA_DOWN_GOLDEN = 0.003044312455835730107
GAMMA_UP_GOLDEN = 0.00041200288847127650068


def test_gamma_golden(fig2_tlf, fig2_bath, t40):
    wt = fig2_tlf.omega_t
    assert bath_gamma(wt, fig2_tlf, fig2_bath, t40) == pytest.approx(GAMMA_DOWN_GOLDEN, rel=1e-13)
    assert bath_gamma(-wt, fig2_tlf, fig2_bath, t40) == pytest.approx(GAMMA_UP_GOLDEN, rel=1e-13)


def test_gamma_zero_frequency(fig2_tlf, fig2_bath, t40):
    assert bath_gamma(0.0, fig2_tlf, fig2_bath, t40) == 0.0


@settings(max_examples=300)
@given(x=st.floats(-30, 30).filter(lambda v: abs(v) > 1e-9), t_k=st.floats(1e-3, 10.0))
def test_detailed_balance(x, t_k):
    temp = Temperature(t_k)
    bath = BathSpec(0.05, kelvin_to_omega(470.0))
    w = x * temp.kt
    lhs = gamma_raw(-w, 1.0, bath, temp.beta)
    rhs = gamma_raw(w, 1.0, bath, temp.beta) * math.exp(-x)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=0)


def test_spectral_function_log_branch_continuous():
    bath = BathSpec(1.0, 2.0)
    w = np.array([10.0 - 1e-9, 10.0 + 1e-9])
    j = spectral_function(w, bath)
    assert j[0] == pytest.approx(j[1], rel=1e-8)


def test_spectral_function_far_tail_finite():
    bath = BathSpec(1.0, 1.0)
    assert spectral_function(1e3, bath) == 0.0
    assert np.isfinite(spectral_function(30.0, bath))


def test_spectral_function_rejects_negative():
    with pytest.raises(ValueError):
        spectral_function(-1.0, BathSpec(1.0, 1.0))


def test_low_frequency_gamma_classical_limit():
    # gamma(w) -> 2 pi J0 w^2 k_B T for w << k_B T, omega_D.
    temp = Temperature(1.0)
    bath = BathSpec(0.1, 100.0)
    w = 1e-9
    assert gamma_raw(w, 1.0, bath, temp.beta) == pytest.approx(2 * math.pi * 0.1 * w**2 * temp.kt, rel=1e-6)


def test_rate_set_uses_signed_frequencies(fig2_tlf, fig2_bath, t40):
    wq = 0.7 * fig2_tlf.omega_t
    rates = rates_at(fig2_tlf, wq, fig2_bath, t40)
    for name, w in signed_frequencies(fig2_tlf.omega_t, wq).items():
        assert getattr(rates, name) == pytest.approx(bath_gamma(w, fig2_tlf, fig2_bath, t40), rel=1e-15)
    assert rates.gamma_zero == 0.0
