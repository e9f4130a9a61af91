import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from tlfnoise.ensemble import (
    EnsembleDist,
    SpectralCurve,
    WindowDetectionError,
    appendix_d_asymptotes,
    asymptote_intersection,
    charge_noise,
    crossover_analytic,
    crossover_numeric,
    default_grid,
    dist_pdf,
    ensemble_curve,
    ensemble_point,
    gamma_cutoffs,
    loglog_slope,
    per_tlf,
)
from tlfnoise.units import BathSpec, Temperature, kelvin_to_omega

# mpmath (40 digits), J0 = 0.047 ps^2, T = 10 mK.
OMEGA_STAR_0 = 3.4245022792689482405e-9
OMEGA_STAR_1 = 7.3366063041759902838e-9
# 279 zeta(5) / (2 pi^4 ln 2)
STAR_RATIO = 2.1423861647252824895
# omega_t = 0.1 K, T = 10 mK, Delta_min = 2 uK.
GAMMA_M = 2.650931569520567284e-16
GAMMA_MAX = 6.6273289238014182101e-7


@settings(max_examples=30, deadline=None)
@given(
    alpha=st.sampled_from([0, 1]),
    e_lo=st.floats(0.0, 1.0),
    e_span=st.floats(0.1, 5.0),
    d_lo=st.floats(1e-7, 1e-2),
    decades=st.floats(0.5, 8.0),
)
def test_pdf_normalised(alpha, e_lo, e_span, d_lo, decades):
    dist = EnsembleDist(alpha, e_lo, e_lo + e_span, d_lo, d_lo * 10**decades)
    eps_part = quad(lambda e: e**alpha, dist.eps_min, dist.eps_max)[0]
    # Delta integral of 1/Delta over the box, in u = ln Delta.
    delta_part = quad(lambda u: dist_pdf(0.5 * (dist.eps_min + dist.eps_max), math.exp(u), dist)
                      * math.exp(u), math.log(dist.delta_min), math.log(dist.delta_max))[0]
    mid = 0.5 * (dist.eps_min + dist.eps_max)
    assert eps_part * delta_part / mid**alpha == pytest.approx(1.0, rel=1e-8)


def test_pdf_zero_outside_box():
    dist = EnsembleDist.from_kelvin(1)
    assert dist_pdf(-1e-3, 1e-3, dist) == 0.0
    assert dist_pdf(0.1, 2 * dist.delta_max, dist) == 0.0
    assert dist_pdf(0.1, 0.5 * dist.delta_min, dist) == 0.0


@pytest.mark.parametrize("kwargs", [
    dict(alpha=2), dict(eps_min=-1.0), dict(delta_min=0.0), dict(delta_min=5.0),
    dict(n_tlf=0.0), dict(dipole_ratio=-1.0), dict(eps_max=math.inf),
])
def test_dist_validation(kwargs):
    base = dict(alpha=0, eps_min=0.0, eps_max=4.0, delta_min=2e-6, delta_max=4.0)
    base.update(kwargs)
    with pytest.raises(ValueError):
        EnsembleDist.from_kelvin(**base)


def test_gamma_cutoffs_golden(ens_bath, t10):
    dist = EnsembleDist.from_kelvin(0)
    gm, gmax = gamma_cutoffs(kelvin_to_omega(0.1), ens_bath, t10, dist)
    assert gm == pytest.approx(GAMMA_M, rel=1e-13)
    assert gmax == pytest.approx(GAMMA_MAX, rel=1e-13)


def test_crossover_analytic_golden(ens_bath, t10):
    assert crossover_analytic(t10, ens_bath, 0) == pytest.approx(OMEGA_STAR_0, rel=1e-13)
    assert crossover_analytic(t10, ens_bath, 1) == pytest.approx(OMEGA_STAR_1, rel=1e-13)
    assert OMEGA_STAR_1 / OMEGA_STAR_0 == pytest.approx(STAR_RATIO, rel=1e-15)


@given(t_k=st.floats(1e-3, 1.0), alpha=st.sampled_from([0, 1]))
def test_crossover_scales_as_cube(t_k, alpha):
    bath = BathSpec(0.047, kelvin_to_omega(470.0))
    a = crossover_analytic(Temperature(t_k), bath, alpha)
    b = crossover_analytic(Temperature(2 * t_k), bath, alpha)
    assert b / a == pytest.approx(8.0, rel=1e-12)


def test_asymptote_intersection_is_closed_form(dist, ens_bath, t10):
    star = asymptote_intersection(t10, ens_bath, dist)
    assert star == pytest.approx(crossover_analytic(t10, ens_bath, dist.alpha), rel=1e-13)
    s1, s2 = appendix_d_asymptotes(star, t10, ens_bath, dist)
    assert s1 == pytest.approx(s2, rel=1e-13)


def test_ensemble_fdt(dist, ens_bath, t10):
    for w in (1e-12, 1e-6, 2e-3, 5e-2):
        plus = ensemble_point(w, dist, ens_bath, t10).total
        minus = ensemble_point(-w, dist, ens_bath, t10).total
        assert minus == pytest.approx(plus * math.exp(-t10.beta * w), rel=1e-10)


def test_error_estimate_and_refinement(dist, ens_bath, t10):
    for w in (3e-9, 1e-4, 1e-2):
        coarse = ensemble_point(w, dist, ens_bath, t10, rtol=1e-4)
        fine = ensemble_point(w, dist, ens_bath, t10, rtol=1e-7)
        assert abs(coarse.total - fine.total) <= max(coarse.error, 1e-6 * fine.total)
        assert coarse.error <= 1e-4 * coarse.total


def test_one_over_f_asymptote(dist, ens_bath, t10):
    w = 1e-5 * crossover_analytic(t10, ens_bath, dist.alpha)
    p = ensemble_point(w, dist, ens_bath, t10)
    s1, _ = appendix_d_asymptotes(w, t10, ens_bath, dist)
    assert p.per_tlf == pytest.approx(s1, rel=0.02)


def test_per_tlf_is_independent_of_count(ens_bath, t10):
    a = EnsembleDist.from_kelvin(1, n_tlf=1000.0)
    b = EnsembleDist.from_kelvin(1, n_tlf=7.0)
    pa = ensemble_point(1e-3, a, ens_bath, t10)
    pb = ensemble_point(1e-3, b, ens_bath, t10)
    assert pa.per_tlf == pytest.approx(pb.per_tlf, rel=1e-14)
    assert pa.total == pytest.approx(1000.0 * pa.per_tlf, rel=1e-14)


def test_br_and_sq_agree_at_low_frequency(dist, ens_bath, t10):
    w = 1e-4 * crossover_analytic(t10, ens_bath, dist.alpha)
    sq = ensemble_point(w, dist, ens_bath, t10, "SQ").total
    br = ensemble_point(w, dist, ens_bath, t10, "BR").total
    assert br == pytest.approx(sq, rel=0.02)


def test_point_validation(ens_bath, t10):
    dist = EnsembleDist.from_kelvin(0)
    for kwargs in (dict(omega=0.0), dict(omega=math.nan), dict(omega=1.0, method="XX"),
                   dict(omega=1.0, rtol=0.0)):
        with pytest.raises(ValueError):
            ensemble_point(dist=dist, bath=ens_bath, temp=t10, **kwargs)


def test_curve_and_charge_noise(ens_bath, t10):
    dist = EnsembleDist.from_kelvin(0, n_tlf=10.0, dipole_ratio=1e-3)
    curve = ensemble_curve([1e-2, -1e-3, 1e-3], dist, ens_bath, t10, workers=1)
    assert np.array_equal(curve.omegas, [-1e-3, 1e-3, 1e-2])
    assert np.allclose(per_tlf(curve) * 10.0, curve.values, rtol=1e-15)
    q = charge_noise(curve, dist)
    assert q.charge_noise and np.allclose(q.values, 1e-6 * curve.values, rtol=1e-15)
    with pytest.raises(ValueError):
        charge_noise(q, dist)


def test_spectral_curve_validation():
    with pytest.raises(ValueError):
        SpectralCurve(np.array([1.0, 0.5]), np.array([1.0, 1.0]), "SQ")
    with pytest.raises(ValueError):
        SpectralCurve(np.array([1.0, 2.0]), np.array([1.0, -1.0]), "SQ")
    with pytest.raises(ValueError):
        SpectralCurve(np.array([1.0, 2.0]), np.array([1.0, 1.0]), "MC")


def test_default_grid():
    g = default_grid(1e-3, 1e3, 7)
    assert g.size == 14 and np.all(np.diff(g) > 0) and np.array_equal(g[:7], -g[7:][::-1])
    assert np.all(default_grid(1e-3, 1e3, 7, signed=False) > 0)


@pytest.mark.parametrize("w0", [1e-3, 1.0, 40.0])
def test_crossover_numeric_recovers_corner(w0):
    w = np.geomspace(1e-8, 1e8, 321)
    curve = SpectralCurve(w, 3.0 / (w * (1.0 + w / w0)), "SQ")
    fit = crossover_numeric(curve)
    assert fit.slope_1f == pytest.approx(-1.0, abs=0.05)
    assert fit.slope_1f2 == pytest.approx(-2.0, abs=0.05)
    # Fitting within +/-0.05 windows biases each intercept by a few percent.
    assert fit.omega_star == pytest.approx(w0, rel=0.1)
    assert fit.window_1f[1] < fit.window_1f2[0]


def test_crossover_numeric_on_exact_lines():
    # Piecewise power law meeting at w = 1e-2 (continuous in log space).
    w = np.geomspace(1e-6, 1e2, 161)
    s = np.where(w < 1e-2, 1.0 / w, 1e-2 / w**2)
    fit = crossover_numeric(SpectralCurve(w, s, "SQ"))
    assert fit.omega_star == pytest.approx(1e-2, rel=1e-10)


def test_crossover_numeric_fails_without_windows():
    w = np.geomspace(1e-4, 1e4, 50)
    with pytest.raises(WindowDetectionError):
        crossover_numeric(SpectralCurve(w, w**-3.0, "SQ"))


@given(p=st.floats(-3.0, 3.0))
def test_loglog_slope_exact(p):
    w = np.geomspace(1e-3, 1e3, 11)
    assert loglog_slope(w, 2.0 * w**p) == pytest.approx(p, abs=1e-10)
