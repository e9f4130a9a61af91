"""Spectator-qubit transition rates and the resulting single-TLF spectra.

Spectra are per kappa^2 and carry units of ps. Positive frequency is
emission into the probe (qubit relaxation), negative frequency absorption
from the probe (qubit excitation). All rates entering a spectrum are
re-evaluated at the probe frequency.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .bath import RateSet, gamma_raw, rates_at
from .units import BathSpec, Temperature, TlfParams


@dataclass(frozen=True)
class TlfOccupations:
    p0_eq: float
    p1_eq: float

    @classmethod
    def from_rates(cls, rates: RateSet) -> "TlfOccupations":
        total = rates.gamma_up + rates.gamma_down
        return cls(rates.gamma_down / total, rates.gamma_up / total)

    @classmethod
    def thermal(cls, tlf: TlfParams, temp: Temperature) -> "TlfOccupations":
        x = temp.beta * tlf.omega_t
        return cls(float(expit(x)), float(expit(-x)))


def qubit_rates_z(rates: RateSet, occ: TlfOccupations, omega_q: float):
    """(Gamma_up, Gamma_down)/kappa^2 for a sigma_z coupled probe."""
    denom = omega_q**2 + rates.linewidth_sum**2 / 4.0
    up = 4.0 * (occ.p1_eq * rates.gamma_down_minus + occ.p0_eq * rates.gamma_up_minus) / denom
    down = 4.0 * (occ.p1_eq * rates.gamma_down_plus + occ.p0_eq * rates.gamma_up_plus) / denom
    return up, down


def qubit_rates_x(rates: RateSet, tlf: TlfParams, omega_q: float):
    """(Gamma_up, Gamma_down)/kappa^2 for a sigma_x coupled probe."""
    wt2 = tlf.omega_t**2
    denom = (omega_q**2 - wt2) ** 2 + omega_q**2 * (rates.gamma_plus + rates.gamma_minus) ** 2
    return 4.0 * wt2 * rates.gamma_minus / denom, 4.0 * wt2 * rates.gamma_plus / denom


def s_zz_sq(omega: float, rates: RateSet, occ: TlfOccupations) -> float:
    """Longitudinal spectrum; ``rates`` must be evaluated at this ``omega``."""
    return qubit_rates_z(rates, occ, omega)[1]


def s_xx_sq(omega: float, rates: RateSet, tlf: TlfParams) -> float:
    """Transverse spectrum; ``rates`` must be evaluated at this ``omega``."""
    return qubit_rates_x(rates, tlf, omega)[1]


def s_components(omega, epsilon, delta, bath: BathSpec, beta: float):
    """Vectorised (s_zz, s_xx) over broadcast arrays of omega, epsilon, delta."""
    w = np.asarray(omega, dtype=float)
    eps = np.asarray(epsilon, dtype=float)
    dl = np.asarray(delta, dtype=float)
    wt = np.hypot(eps, dl)
    pref = (dl / wt) ** 2
    g = lambda x: gamma_raw(x, pref, bath, beta)  # noqa: E731
    g_dp, g_up_p = g(wt + w), g(w - wt)
    g_dm, g_um = g(wt - w), g(-wt - w)
    g_p, g_m = g(w), g(-w)
    p1 = expit(-beta * wt)
    p0 = expit(beta * wt)
    lw = g_dp + g_dm + g_up_p + g_um
    szz = 4.0 * (p1 * g_dp + p0 * g_up_p) / (w**2 + 0.25 * lw**2)
    sxx = 4.0 * wt**2 * g_p / ((w**2 - wt**2) ** 2 + w**2 * (g_p + g_m) ** 2)
    return szz, sxx


def s_tlf_vec(omega, epsilon, delta, bath: BathSpec, beta: float):
    """cos^2(theta) s_zz + sin^2(theta) s_xx, vectorised."""
    eps = np.asarray(epsilon, dtype=float)
    dl = np.asarray(delta, dtype=float)
    wt2 = eps**2 + dl**2
    szz, sxx = s_components(omega, eps, dl, bath, beta)
    return (eps**2 / wt2) * szz + (dl**2 / wt2) * sxx


def s_tlf(omega, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    """Single-TLF spectral density from the spectator-qubit rates (ps)."""
    out = s_tlf_vec(omega, tlf.epsilon, tlf.delta, bath, temp.beta)
    return float(out) if np.ndim(out) == 0 else out


def s_zz_sq_at(omega, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    out = s_components(omega, tlf.epsilon, tlf.delta, bath, temp.beta)[0]
    return float(out) if np.ndim(out) == 0 else out


def s_xx_sq_at(omega, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    out = s_components(omega, tlf.epsilon, tlf.delta, bath, temp.beta)[1]
    return float(out) if np.ndim(out) == 0 else out


def rates_and_occupations(omega: float, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    rates = rates_at(tlf, omega, bath, temp)
    return rates, TlfOccupations.from_rates(rates)
