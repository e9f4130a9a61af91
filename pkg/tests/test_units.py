import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from tlfnoise.units import (
    KELVIN_TO_ANGFREQ,
    UNITS,
    BathSpec,
    SpectatorConfig,
    Temperature,
    TlfParams,
    bose_einstein,
    kelvin_to_omega,
    make_tlf_kelvin,
    omega_to_kelvin,
)

# k_B/hbar * 1e-12 from the exact SI constants, 40-digit mpmath.
K_OVER_HBAR_GOLDEN = 0.13092033920720640688


def test_kelvin_conversion_golden():
    assert KELVIN_TO_ANGFREQ == pytest.approx(K_OVER_HBAR_GOLDEN, rel=1e-15)
    assert UNITS.to_omega(1.0) == KELVIN_TO_ANGFREQ


@given(st.floats(1e-9, 1e4))
def test_kelvin_roundtrip(t):
    assert omega_to_kelvin(kelvin_to_omega(t)) == pytest.approx(t, rel=1e-15)


def test_temperature_beta():
    t = Temperature(0.04)
    assert t.beta * t.kt == pytest.approx(1.0, rel=1e-15)
    assert Temperature.from_mk(40).value == pytest.approx(0.04)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
def test_temperature_rejects(bad):
    with pytest.raises(ValueError):
        Temperature(bad)


def test_tlf_derived_fields():
    tlf = TlfParams(0.3, 0.4)
    assert tlf.omega_t == pytest.approx(0.5)
    assert tlf.cos2 + tlf.sin2 == pytest.approx(1.0)
    assert math.tan(tlf.theta) == pytest.approx(0.4 / 0.3)


@pytest.mark.parametrize("eps,delta", [(0.1, 0.0), (0.1, -1.0), (-0.1, 0.1), (math.nan, 0.1)])
def test_tlf_rejects(eps, delta):
    with pytest.raises(ValueError):
        TlfParams(eps, delta)


def test_pure_tunneling_tlf():
    tlf = make_tlf_kelvin(0.0, 0.08)
    assert tlf.cos2 == 0.0 and tlf.sin2 == 1.0


def test_spectator_weak_coupling_guard():
    SpectatorConfig(1.0, 0.05)
    with pytest.raises(ValueError):
        SpectatorConfig(1.0, 0.2)


def test_bath_rejects():
    with pytest.raises(ValueError):
        BathSpec(0.0, 1.0)
    with pytest.raises(ValueError):
        BathSpec(1.0, -1.0)


@given(st.floats(1e-12, 50.0))
def test_bose_einstein_matches_direct(x):
    t = Temperature(1.0)
    w = x * t.kt
    assert bose_einstein(w, t) == pytest.approx(1.0 / math.expm1(x), rel=1e-9)


def test_bose_einstein_series_branch_continuous():
    t = Temperature(1.0)
    x = np.array([0.999999e-5, 1.000001e-5])
    n = bose_einstein(x * t.kt, t)
    assert n[0] * x[0] == pytest.approx(n[1] * x[1], rel=1e-9)


def test_bose_einstein_rejects_nonpositive():
    with pytest.raises(ValueError):
        bose_einstein(0.0, Temperature(1.0))
