"""Phonon bath: spectral function, bath correlation spectrum and named rates."""
from __future__ import annotations

import math
from dataclasses import dataclass, fields

import numpy as np

from .units import BathSpec, SpectatorConfig, Temperature, TlfParams

_LOG_SPACE_FACTOR = 5.0
_SERIES_CUTOFF = 1e-5


def spectral_function(omega, bath: BathSpec):
    """J(w) = j0 w^3 exp(-w^2/2 w_D^2) for w >= 0 (rad/ps)."""
    w = np.asarray(omega, dtype=float)
    if np.any(~(w >= 0)):
        raise ValueError("spectral_function is defined for omega >= 0")
    out = _spectral(w, bath.j0, bath.omega_d)
    return float(out) if np.ndim(out) == 0 else out


def _spectral(w, j0, omega_d):
    w = np.asarray(w, dtype=float)
    far = w > _LOG_SPACE_FACTOR * omega_d
    near = j0 * w**3 * np.exp(-0.5 * (w / omega_d) ** 2)
    if not np.any(far):
        return near
    with np.errstate(divide="ignore"):
        logj = math.log(j0) + 3.0 * np.log(np.where(far, w, 1.0)) - 0.5 * (w / omega_d) ** 2
    return np.where(far, np.exp(logj), near)


def _emission_factor(x):
    """n_B(x) + 1 = 1/(1 - exp(-x)) for x = beta*w > 0."""
    small = x < _SERIES_CUTOFF
    xs = np.where(small, x, 1.0)
    series = 1.0 / xs + 0.5 + xs / 12.0
    with np.errstate(divide="ignore"):
        direct = -1.0 / np.expm1(-np.where(small, 1.0, x))
    return np.where(small, series, direct)


def gamma_raw(omega, prefactor, bath: BathSpec, beta: float):
    """Vectorised gamma(omega) with an explicit coupling prefactor.

    ``prefactor`` is Delta^2/omega_t^2 (broadcasts against ``omega``).
    Negative frequencies are obtained from the positive branch through the
    detailed-balance factor so the identity holds to rounding.
    """
    w = np.asarray(omega, dtype=float)
    a = np.abs(w)
    x = beta * a
    pos = a > 0
    xs = np.where(pos, x, 1.0)
    g_pos = 2.0 * math.pi * prefactor * _spectral(a, bath.j0, bath.omega_d) * _emission_factor(xs)
    g = np.where(w < 0, g_pos * np.exp(-x), g_pos)
    return np.where(pos, g, 0.0)


def bath_gamma(omega, tlf: TlfParams, bath: BathSpec, temp: Temperature):
    """Fourier-transformed bath correlation function gamma(omega), rad/ps.

    omega > 0: bath absorbs energy (emission by the TLF); omega < 0: the
    bath supplies energy. gamma(0) is the continuous limit, 0 for the
    cubic bath.
    """
    out = gamma_raw(omega, tlf.sin2, bath, temp.beta)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class RateSet:
    gamma_down: float
    gamma_up: float
    gamma_plus: float
    gamma_minus: float
    gamma_down_minus: float
    gamma_up_plus: float
    gamma_down_plus: float
    gamma_up_minus: float
    gamma_zero: float

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @property
    def linewidth_sum(self) -> float:
        """gamma_down^+ + gamma_down^- + gamma_up^+ + gamma_up^-."""
        return self.gamma_down_plus + self.gamma_down_minus + self.gamma_up_plus + self.gamma_up_minus


def signed_frequencies(omega_t: float, omega_q: float) -> dict:
    """The probe frequencies at which each named rate is evaluated."""
    return {
        "gamma_down": omega_t,
        "gamma_up": -omega_t,
        "gamma_plus": omega_q,
        "gamma_minus": -omega_q,
        "gamma_down_minus": omega_t - omega_q,
        "gamma_up_plus": -omega_t + omega_q,
        "gamma_down_plus": omega_t + omega_q,
        "gamma_up_minus": -omega_t - omega_q,
        "gamma_zero": 0.0,
    }


def rates_at(tlf: TlfParams, omega, bath: BathSpec, temp: Temperature) -> RateSet:
    """RateSet at a signed probe frequency ``omega`` (qubit frequency role)."""
    freqs = signed_frequencies(tlf.omega_t, float(omega))
    vals = gamma_raw(np.array(list(freqs.values())), tlf.sin2, bath, temp.beta)
    return RateSet(**{k: float(v) for k, v in zip(freqs, vals)})


def rate_set(tlf: TlfParams, spec: SpectatorConfig, bath: BathSpec, temp: Temperature) -> RateSet:
    return rates_at(tlf, spec.omega_q, bath, temp)
