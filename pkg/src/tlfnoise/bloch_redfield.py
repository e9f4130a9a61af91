"""Bloch-Redfield single-TLF spectra.

Spectral densities carry units of ps (the correlators are dimensionless).
These spectra evaluate the bath only at +/- omega_t and are therefore not
consistent with detailed balance; they serve as the baseline and as the
low-frequency approximant of the ensemble asymptotes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bath import gamma_raw
from .units import BathSpec, Temperature, TlfParams


@dataclass(frozen=True)
class BrRates:
    gamma1: float
    gamma2: float
    sz_eq: float

    def __post_init__(self):
        if not (self.gamma1 > 0 and -1 < self.sz_eq < 1):
            raise ValueError(f"invalid Bloch-Redfield rates: {self}")


def br_rates(tlf: TlfParams, bath: BathSpec, temp: Temperature) -> BrRates:
    g_down, g_up = gamma_raw(np.array([tlf.omega_t, -tlf.omega_t]), tlf.sin2, bath, temp.beta)
    gamma1 = float(g_down + g_up)
    # Positive polarization: sigma_z = +1 is the TLF ground state.
    sz = float((g_down - g_up) / (g_down + g_up))
    return BrRates(gamma1=gamma1, gamma2=0.5 * gamma1, sz_eq=sz)


def depolarization_rate_closed_form(tlf: TlfParams, bath: BathSpec, temp: Temperature) -> float:
    """2 pi J0 omega_t Delta^2 coth(beta omega_t / 2); no Gaussian cutoff."""
    x = 0.5 * temp.beta * tlf.omega_t
    return 2.0 * math.pi * bath.j0 * tlf.omega_t * tlf.delta**2 / math.tanh(x)


def s_zz_br(omega, rates: BrRates):
    w = np.asarray(omega, dtype=float)
    g1 = rates.gamma1
    return (1.0 - rates.sz_eq**2) * 2.0 * g1 / (w**2 + g1**2)


def s_xx_br(omega, tlf: TlfParams, rates: BrRates):
    w = np.asarray(omega, dtype=float)
    g2, wt, sz = rates.gamma2, tlf.omega_t, rates.sz_eq
    return (0.5 * (1 + sz) * 2 * g2 / ((w - wt) ** 2 + g2**2)
            + 0.5 * (1 - sz) * 2 * g2 / ((w + wt) ** 2 + g2**2))


def s_br_total(omega, tlf: TlfParams, rates: BrRates):
    return tlf.cos2 * s_zz_br(omega, rates) + tlf.sin2 * s_xx_br(omega, tlf, rates)


def s_br_single(omega, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    """Convenience wrapper: rates plus total spectrum in one call."""
    return s_br_total(omega, tlf, br_rates(tlf, bath, temp))
