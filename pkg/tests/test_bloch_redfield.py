import math

import numpy as np
import pytest
from scipy.integrate import quad

from tlfnoise.bloch_redfield import (
    br_rates,
    depolarization_rate_closed_form,
    s_br_single,
    s_xx_br,
    s_zz_br,
)
from tlfnoise.units import BathSpec, make_tlf_kelvin, kelvin_to_omega


def test_polarization_is_thermal(fig2_tlf, fig2_bath, t40):
    r = br_rates(fig2_tlf, fig2_bath, t40)
    assert r.sz_eq == pytest.approx(math.tanh(0.5 * t40.beta * fig2_tlf.omega_t), rel=1e-13)
    assert r.gamma2 == 0.5 * r.gamma1


def test_depolarization_matches_closed_form_without_cutoff(fig2_tlf, t40):
    bath = BathSpec(100.0, 1e6)  # cutoff irrelevant
    r = br_rates(fig2_tlf, bath, t40)
    assert r.gamma1 == pytest.approx(depolarization_rate_closed_form(fig2_tlf, bath, t40), rel=1e-9)


def test_xx_peak_ratio(fig2_tlf, fig2_bath, t40):
    r = br_rates(fig2_tlf, fig2_bath, t40)
    wt = fig2_tlf.omega_t
    boltzmann = math.exp(t40.beta * wt)
    assert (1 + r.sz_eq) / (1 - r.sz_eq) == pytest.approx(boltzmann, rel=1e-12)
    # Opposite Lorentzian tail contaminates each peak at order (gamma2/2 omega_t)^2.
    ratio = s_xx_br(wt, fig2_tlf, r) / s_xx_br(-wt, fig2_tlf, r)
    assert ratio == pytest.approx(boltzmann, rel=4 * (r.gamma2 / wt) ** 2)


def _integral(f, centers, width):
    pts = sorted(c + k * width for c in centers for k in (-50, -5, 0, 5, 50))
    total = 0.0
    edges = [-np.inf] + pts + [np.inf]
    for a, b in zip(edges[:-1], edges[1:]):
        total += quad(f, a, b, epsabs=0, epsrel=1e-12, limit=500)[0]
    return total


def test_sum_rules(fig2_tlf, fig2_bath, t40):
    r = br_rates(fig2_tlf, fig2_bath, t40)
    wt = fig2_tlf.omega_t
    zz = _integral(lambda w: s_zz_br(w, r), [0.0], r.gamma1) / (2 * math.pi)
    xx = _integral(lambda w: s_xx_br(w, fig2_tlf, r), [-wt, wt], r.gamma2) / (2 * math.pi)
    assert zz == pytest.approx(1 - r.sz_eq**2, rel=1e-6)
    assert xx == pytest.approx(1.0, rel=1e-6)


def test_zz_is_symmetric(fig2_tlf, fig2_bath, t40):
    r = br_rates(fig2_tlf, fig2_bath, t40)
    w = np.geomspace(1e-6, 1.0, 50)
    assert np.array_equal(s_zz_br(w, r), s_zz_br(-w, r))


def test_total_mixes_by_angle():
    tlf = make_tlf_kelvin(0.06, 0.08)
    bath = BathSpec(0.1, kelvin_to_omega(470))
    from tlfnoise.units import Temperature
    temp = Temperature(0.04)
    r = br_rates(tlf, bath, temp)
    w = np.linspace(-0.05, 0.05, 11)
    expect = tlf.cos2 * s_zz_br(w, r) + tlf.sin2 * s_xx_br(w, tlf, r)
    assert np.allclose(s_br_single(w, tlf, bath, temp), expect, rtol=1e-14)
