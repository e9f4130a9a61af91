import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tlfnoise.bath import rates_at
from tlfnoise.bloch_redfield import br_rates, s_xx_br, s_zz_br
from tlfnoise.spectator import (
    TlfOccupations,
    qubit_rates_x,
    qubit_rates_z,
    s_components,
    s_tlf,
    s_xx_sq_at,
    s_zz_sq_at,
)
from tlfnoise.units import BathSpec, Temperature, TlfParams, kelvin_to_omega

BATH = BathSpec(0.047, kelvin_to_omega(470.0))


@settings(max_examples=200, deadline=None)
@given(
    x=st.floats(1e-6, 40.0),
    eps=st.floats(0.0, 0.5),
    delta=st.floats(1e-6, 0.5),
    t_k=st.floats(5e-3, 0.5),
)
def test_fdt_each_component(x, eps, delta, t_k):
    temp = Temperature(t_k)
    w = x * temp.kt
    zp, xp = s_components(w, eps, delta, BATH, temp.beta)
    zn, xn = s_components(-w, eps, delta, BATH, temp.beta)
    boltz = math.exp(-x)
    assert zn == pytest.approx(zp * boltz, rel=1e-10)
    assert xn == pytest.approx(xp * boltz, rel=1e-10)


def test_vectorised_matches_rate_formulas(fig2_tlf, fig2_bath, t40):
    tlf = TlfParams(0.6 * fig2_tlf.omega_t, 0.8 * fig2_tlf.omega_t)
    occ = TlfOccupations.thermal(tlf, t40)
    for w in (-2.3e-2, -1e-4, 3e-3, 0.011, 0.5):
        rates = rates_at(tlf, w, fig2_bath, t40)
        z_down = qubit_rates_z(rates, occ, w)[1]
        x_down = qubit_rates_x(rates, tlf, w)[1]
        assert s_zz_sq_at(w, tlf, fig2_bath, t40) == pytest.approx(z_down, rel=1e-12)
        assert s_xx_sq_at(w, tlf, fig2_bath, t40) == pytest.approx(x_down, rel=1e-12)


def test_thermal_occupations_match_rates(fig2_tlf, fig2_bath, t40):
    occ = TlfOccupations.from_rates(rates_at(fig2_tlf, 1e-3, fig2_bath, t40))
    th = TlfOccupations.thermal(fig2_tlf, t40)
    assert occ.p0_eq == pytest.approx(th.p0_eq, rel=1e-13)
    assert occ.p1_eq == pytest.approx(th.p1_eq, rel=1e-12)
    assert th.p0_eq + th.p1_eq == pytest.approx(1.0)


def test_zz_zero_frequency_matches_bloch_redfield(fig2_bath, t40):
    tlf = TlfParams(0.005, 0.008)
    r = br_rates(tlf, fig2_bath, t40)
    assert s_zz_sq_at(1e-14, tlf, fig2_bath, t40) == pytest.approx(float(s_zz_br(0.0, r)), rel=1e-9)


def test_xx_resonance_height_matches_bloch_redfield(fig2_tlf, fig2_bath, t40):
    r = br_rates(fig2_tlf, fig2_bath, t40)
    wt = fig2_tlf.omega_t
    sq = s_xx_sq_at(wt, fig2_tlf, fig2_bath, t40)
    br = float(s_xx_br(wt, fig2_tlf, r))
    assert sq == pytest.approx(br, rel=4 * (r.gamma2 / wt) ** 2)


def test_pure_tunneling_has_no_zz_weight(fig2_tlf, fig2_bath, t40):
    w = np.geomspace(1e-4, 1e-1, 7)
    assert np.allclose(s_tlf(w, fig2_tlf, fig2_bath, t40), s_xx_sq_at(w, fig2_tlf, fig2_bath, t40), rtol=1e-15)


def test_spectra_positive_and_finite(fig2_tlf, fig2_bath, t40):
    w = np.concatenate([-np.geomspace(1e-8, 1.0, 40), np.geomspace(1e-8, 1.0, 40)])
    s = s_tlf(w, TlfParams(0.004, 0.009), fig2_bath, t40)
    assert np.all(np.isfinite(s)) and np.all(s > 0)
