"""Unit system and validated parameter records.

Internal units: angular frequencies and energies in rad/ps (hbar = 1),
times in ps, temperatures in kelvin at the boundary only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# CODATA 2018 exact: k_B = 1.380649e-23 J/K, hbar = 1.054571817e-34 J s.
K_B_SI = 1.380649e-23
HBAR_SI = 1.054571817e-34
# k_B/hbar in rad/ps per kelvin, evaluated at 40 digits and rounded.
KELVIN_TO_ANGFREQ = 0.13092033920720641

_SERIES_CUTOFF = 1e-5


def _check_finite(**values):
    for name, v in values.items():
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class UnitSystem:
    kelvin_to_angfreq: float = KELVIN_TO_ANGFREQ

    def __post_init__(self):
        _check_finite(kelvin_to_angfreq=self.kelvin_to_angfreq)
        if self.kelvin_to_angfreq <= 0:
            raise ValueError("kelvin_to_angfreq must be positive")

    def to_omega(self, t_kelvin):
        return t_kelvin * self.kelvin_to_angfreq

    def to_kelvin(self, omega):
        return omega / self.kelvin_to_angfreq


UNITS = UnitSystem()


def kelvin_to_omega(t_kelvin):
    """Convert an energy quoted in kelvin (E/k_B) to rad/ps."""
    return t_kelvin * KELVIN_TO_ANGFREQ


def omega_to_kelvin(omega):
    return omega / KELVIN_TO_ANGFREQ


@dataclass(frozen=True)
class Temperature:
    """Bath temperature. ``value`` in kelvin; ``beta`` in ps/rad."""

    value: float
    beta: float = field(init=False)

    def __post_init__(self):
        _check_finite(temperature=self.value)
        if self.value <= 0:
            raise ValueError(f"temperature must be > 0 K, got {self.value!r}")
        object.__setattr__(self, "beta", 1.0 / kelvin_to_omega(self.value))

    @property
    def kt(self) -> float:
        """k_B T in rad/ps."""
        return kelvin_to_omega(self.value)

    @classmethod
    def from_mk(cls, millikelvin: float) -> "Temperature":
        return cls(millikelvin * 1e-3)


@dataclass(frozen=True)
class TlfParams:
    epsilon: float
    delta: float
    omega_t: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        _check_finite(epsilon=self.epsilon, delta=self.delta)
        if self.delta <= 0:
            raise ValueError(f"delta must be > 0, got {self.delta!r}")
        if self.epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {self.epsilon!r}")
        object.__setattr__(self, "omega_t", math.hypot(self.epsilon, self.delta))
        object.__setattr__(self, "theta", math.atan2(self.delta, self.epsilon))

    @property
    def cos2(self) -> float:
        return (self.epsilon / self.omega_t) ** 2

    @property
    def sin2(self) -> float:
        return (self.delta / self.omega_t) ** 2


def make_tlf(epsilon: float, delta: float) -> TlfParams:
    return TlfParams(epsilon, delta)


def make_tlf_kelvin(epsilon_k: float, delta_k: float) -> TlfParams:
    return TlfParams(kelvin_to_omega(epsilon_k), kelvin_to_omega(delta_k))


@dataclass(frozen=True)
class BathSpec:
    """Cubic phonon bath J(w) = j0 w^3 exp(-w^2 / 2 omega_d^2); j0 in ps^2."""

    j0: float
    omega_d: float

    def __post_init__(self):
        _check_finite(j0=self.j0, omega_d=self.omega_d)
        if self.j0 <= 0:
            raise ValueError(f"j0 must be > 0, got {self.j0!r}")
        if self.omega_d <= 0:
            raise ValueError(f"omega_d must be > 0, got {self.omega_d!r}")


@dataclass(frozen=True)
class SpectatorConfig:
    omega_q: float
    kappa: float

    def __post_init__(self):
        _check_finite(omega_q=self.omega_q, kappa=self.kappa)
        if self.omega_q <= 0:
            raise ValueError(f"omega_q must be > 0, got {self.omega_q!r}")
        if self.kappa <= 0:
            raise ValueError(f"kappa must be > 0, got {self.kappa!r}")
        if self.kappa / self.omega_q >= 0.1:
            raise ValueError("kappa/omega_q must stay below 0.1 (weak coupling)")


def bose_einstein(omega, temp: Temperature):
    """Bose-Einstein occupation 1/(exp(beta*omega) - 1); omega > 0 only.

    Accepts scalars or arrays.
    """
    w = np.asarray(omega, dtype=float)
    if np.any(~(w > 0)):
        raise ValueError("bose_einstein requires omega > 0")
    out = _bose_positive(temp.beta * w)
    return float(out) if np.ndim(out) == 0 else out


def _bose_positive(x):
    """n_B as a function of x = beta*omega > 0 (no validation)."""
    x = np.asarray(x, dtype=float)
    small = x < _SERIES_CUTOFF
    with np.errstate(over="ignore", divide="ignore"):
        big = 1.0 / np.expm1(np.where(small, 1.0, x))
    series = 1.0 / np.where(small, x, 1.0) - 0.5 + np.where(small, x, 0.0) / 12.0
    return np.where(small, series, big)
