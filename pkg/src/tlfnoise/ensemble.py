"""Ensemble-averaged TLF noise, charge-noise conversion and the 1/f -> 1/f^2 crossover.

The ensemble spectrum is S(w) = n_tlf * int int P(eps, Delta) s(w; eps, Delta).
With P = N(alpha) eps^alpha / Delta the outer integral runs over u = ln Delta
(the 1/Delta weight becomes flat) and the inner one over eps. The inner
eps-integrals of all outer nodes are solved together by a batched adaptive
Gauss-Kronrod rule; the narrow s_xx resonance at omega_t = |w| gets its own
tangent-mapped cells.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np
from scipy.special import expit, zeta

from .bath import gamma_raw
from .quadrature import QuadratureError, gk_integrate, gk_integrate_batch
from .units import BathSpec, Temperature, kelvin_to_omega

METHODS = ("BR", "SQ")

# Map tags for inner cells.
_LINEAR, _LOG, _TAN = 0, 1, 2
# Component tags: which part of s(w) a cell integrates.
_BOTH, _ZZ, _XX = 0, 1, 2

_INNER_RTOL_FACTOR = 1e-2
_TAN_CELLS = 4  # per side of the resonance, 8 in total


class EnsembleConvergenceError(RuntimeError):
    def __init__(self, message, omega=None, value=None, error=None):
        super().__init__(message)
        self.omega = omega
        self.value = value
        self.error = error


class WindowDetectionError(ValueError):
    pass


@dataclass(frozen=True)
class EnsembleDist:
    """Box distribution P(eps, Delta) = N(alpha) eps^alpha / Delta (rad/ps units)."""

    alpha: int
    eps_min: float
    eps_max: float
    delta_min: float
    delta_max: float
    n_tlf: float = 1000.0
    dipole_ratio: float = 1e-4

    def __post_init__(self):
        if self.alpha not in (0, 1):
            raise ValueError(f"alpha must be 0 or 1, got {self.alpha!r}")
        vals = (self.eps_min, self.eps_max, self.delta_min, self.delta_max, self.n_tlf, self.dipole_ratio)
        if not all(math.isfinite(v) for v in vals):
            raise ValueError("distribution parameters must be finite")
        if not 0 <= self.eps_min < self.eps_max:
            raise ValueError("need 0 <= eps_min < eps_max")
        if not self.delta_min > 0:
            raise ValueError(f"delta_min must be > 0, got {self.delta_min!r}")
        if not self.delta_min < self.delta_max:
            raise ValueError("need delta_min < delta_max")
        if self.n_tlf <= 0:
            raise ValueError("n_tlf must be > 0")
        if self.dipole_ratio < 0:
            raise ValueError("dipole_ratio must be >= 0")

    @property
    def norm(self) -> float:
        """N(alpha)."""
        mid = 0.5 * (self.eps_max + self.eps_min)
        inv = mid**self.alpha * (self.eps_max - self.eps_min) * math.log(self.delta_max / self.delta_min)
        return 1.0 / inv

    @classmethod
    def from_kelvin(cls, alpha, eps_min=0.0, eps_max=4.0, delta_min=2e-6, delta_max=4.0,
                    n_tlf=1000.0, dipole_ratio=1e-4) -> "EnsembleDist":
        return cls(alpha, kelvin_to_omega(eps_min), kelvin_to_omega(eps_max),
                   kelvin_to_omega(delta_min), kelvin_to_omega(delta_max), n_tlf, dipole_ratio)


def dist_pdf(eps, delta, dist: EnsembleDist):
    """P(eps, Delta): N eps^alpha / Delta inside the open box, 0 outside."""
    e = np.asarray(eps, dtype=float)
    d = np.asarray(delta, dtype=float)
    inside = (e > dist.eps_min) & (e < dist.eps_max) & (d > dist.delta_min) & (d < dist.delta_max)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = dist.norm * e**dist.alpha / d
    out = np.where(inside, val, 0.0)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class EnsemblePoint:
    omega: float
    total: float
    per_tlf: float
    error: float


@dataclass(frozen=True)
class SpectralCurve:
    omegas: np.ndarray
    values: np.ndarray
    method: str
    charge_noise: bool = False
    params: dict = field(default_factory=dict)
    errors: np.ndarray | None = None

    def __post_init__(self):
        w = np.asarray(self.omegas, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if w.ndim != 1 or w.shape != v.shape:
            raise ValueError("omegas and values must be 1-D arrays of equal length")
        if w.size > 1 and not np.all(np.diff(w) > 0):
            raise ValueError("frequency grid must be strictly increasing")
        if np.any(~(v >= 0)):
            raise ValueError("spectral values must be finite and >= 0")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        object.__setattr__(self, "omegas", w)
        object.__setattr__(self, "values", v)
        if self.errors is not None:
            object.__setattr__(self, "errors", np.asarray(self.errors, dtype=float))


# Integrand terms. ``d2`` is omega_t^2 - w^2, passed in separately so it
# stays accurate inside the resonance window.

def _sq_terms(w, eps, dl, d2, bath, beta):
    wt2 = eps**2 + dl**2
    wt = np.sqrt(wt2)
    pref = dl**2 / wt2
    g = lambda x: gamma_raw(x, pref, bath, beta)  # noqa: E731
    g_dp, g_up_p = g(wt + w), g(w - wt)
    g_dm, g_um = g(wt - w), g(-wt - w)
    g_p, g_m = g(w), g(-w)
    lw = g_dp + g_dm + g_up_p + g_um
    zz = 4.0 * (expit(-beta * wt) * g_dp + expit(beta * wt) * g_up_p) / (w**2 + 0.25 * lw**2)
    xx = 4.0 * wt2 * g_p / (d2**2 + w**2 * (g_p + g_m) ** 2)
    return (eps**2 / wt2) * zz, pref * xx


def _br_terms(w, eps, dl, d2, bath, beta):
    wt2 = eps**2 + dl**2
    wt = np.sqrt(wt2)
    pref = dl**2 / wt2
    g1 = gamma_raw(wt, pref, bath, beta) + gamma_raw(-wt, pref, bath, beta)
    x = 0.5 * beta * wt
    sz = np.tanh(x)
    with np.errstate(over="ignore"):
        sech2 = 1.0 / np.cosh(x) ** 2
    zz = sech2 * 2.0 * g1 / (w**2 + g1**2)
    g2 = 0.5 * g1
    aw = np.abs(w)
    det_res = d2 / (wt + aw)
    det_far = wt + aw
    w_res = np.where(w >= 0, 0.5 * (1 + sz), 0.5 * (1 - sz))
    w_far = np.where(w >= 0, 0.5 * (1 - sz), 0.5 * (1 + sz))
    xx = w_res * 2 * g2 / (det_res**2 + g2**2) + w_far * 2 * g2 / (det_far**2 + g2**2)
    return (eps**2 / wt2) * zz, pref * xx


_TERMS = {"SQ": _sq_terms, "BR": _br_terms}


@dataclass(frozen=True)
class _Problem:
    omega: float
    dist: EnsembleDist
    bath: BathSpec
    beta: float
    method: str
    rtol: float


def _resonance_halfwidth(w, dl, bath, beta):
    """Half-width in omega_t of the s_xx resonance at omega_t = |w|."""
    aw = abs(w)
    pref = (dl / aw) ** 2
    return 0.5 * (gamma_raw(aw, pref, bath, beta) + gamma_raw(-aw, pref, bath, beta))


def _inner_cells(pr: _Problem, deltas):
    """Initial inner cells (in mapped variables) for every outer node."""
    eps_lo, eps_hi = pr.dist.eps_min, pr.dist.eps_max
    aw = abs(pr.omega)
    cols = {k: [] for k in ("a", "b", "owner", "map", "comp", "delta", "center", "h", "rem")}

    def add(lo, hi, n, owner, kind, comp, dl, center=0.0, h=0.0, rem=0.0):
        edges = np.linspace(lo, hi, n + 1)
        cols["a"].extend(edges[:-1])
        cols["b"].extend(edges[1:])
        for key, val in (("owner", owner), ("map", kind), ("comp", comp),
                         ("delta", dl), ("center", center), ("h", h), ("rem", rem)):
            cols[key].extend([val] * n)

    def plain(lo, hi, owner, comp, dl):
        if hi <= lo:
            return
        if lo >= dl and lo > 0:
            n = max(1, math.ceil(2 * math.log10(hi / lo)))
            add(math.log(lo), math.log(hi), n, owner, _LOG, comp, dl)
        else:
            add(lo, hi, 2, owner, _LINEAR, comp, dl)

    hws = _resonance_halfwidth(pr.omega, deltas, pr.bath, pr.beta) if aw > 0 else None
    for i, dl in enumerate(deltas):
        pts = {eps_lo, eps_hi}
        if eps_lo < dl < eps_hi:
            pts.add(dl)
        win = None
        if 0 < aw and dl < 2.0 * aw:
            # Resonance omega_t = |w|: at eps* > 0 below threshold, pinned to
            # eps = 0 (detuned by Delta - |w|) above it.
            if dl < aw:
                star, rem = math.sqrt((aw - dl) * (aw + dl)), 0.0
                h = hws[i] * aw / max(star, math.sqrt(2.0 * aw * hws[i]))
            else:
                star, rem = 0.0, (dl - aw) * (dl + aw)
                h = math.sqrt(2.0 * aw * max(dl - aw, hws[i]))
            w_lo = math.sqrt(max(0.25 * aw**2 - dl**2, 0.0))
            w_hi = math.sqrt(4.0 * aw**2 - dl**2)
            w_lo, w_hi = max(w_lo, eps_lo), min(w_hi, eps_hi)
            if w_lo < w_hi:
                win = (w_lo, w_hi, star, rem, h)
                pts.update((w_lo, w_hi))
                if w_lo < star < w_hi:
                    pts.add(star)
        pts = sorted(pts)
        for lo, hi in zip(pts[:-1], pts[1:]):
            inside = win is not None and lo >= win[0] and hi <= win[1]
            if not inside:
                plain(lo, hi, i, _BOTH, dl)
                continue
            plain(lo, hi, i, _ZZ, dl)
            _, _, star, rem, h = win
            add(math.atan((lo - star) / h), math.atan((hi - star) / h), _TAN_CELLS,
                i, _TAN, _XX, dl, star, h, rem)
    arrays = {k: np.asarray(v) for k, v in cols.items()}
    a, b = arrays.pop("a").astype(float), arrays.pop("b").astype(float)
    arrays["owner"] = arrays["owner"].astype(np.intp)
    return a, b, arrays


def _make_integrand(pr: _Problem):
    terms = _TERMS[pr.method]
    alpha = pr.dist.alpha
    w = pr.omega

    def f(x, at):
        kind = at["map"][:, None]
        dl = at["delta"][:, None]
        center = at["center"][:, None]
        h = at["h"][:, None]
        t = np.tan(np.where(kind == _TAN, x, 0.0))
        offset = h * t
        eps = np.where(kind == _LINEAR, x, np.where(kind == _LOG, np.exp(np.where(kind == _LOG, x, 0.0)),
                                                    center + offset))
        eps = np.maximum(eps, 0.0)
        jac = np.where(kind == _LINEAR, 1.0, np.where(kind == _LOG, eps, h * (1.0 + t**2)))
        rem = at["rem"][:, None]
        d2 = np.where(kind == _TAN, offset * (2.0 * center + offset) + rem, eps**2 + dl**2 - w**2)
        zz, xx = terms(w, eps, dl, d2, pr.bath, pr.beta)
        comp = at["comp"][:, None]
        val = np.where(comp == _XX, 0.0, zz) + np.where(comp == _ZZ, 0.0, xx)
        weight = eps**alpha if alpha else 1.0
        return weight * val * jac

    return f


class _OuterMap:
    """Outer variable v for u = ln Delta.

    When |w| lies inside the Delta range, u = c - v^2 below c = ln|w| and
    u = c + v^2 above it. The map absorbs the (|w| - Delta)^(-1/2) edge of
    the s_xx resonance contribution and resolves its tail above threshold.
    Otherwise u = lo + v.
    """

    def __init__(self, pr: _Problem):
        lo, hi = math.log(pr.dist.delta_min), math.log(pr.dist.delta_max)
        aw = abs(pr.omega)
        n = max(2, math.ceil(2.0 * (hi - lo)))
        us = np.linspace(lo, hi, n + 1)
        self.split = pr.dist.delta_min < aw < pr.dist.delta_max
        if self.split:
            self.c = math.log(aw)
            below, above = us[us < self.c], us[us > self.c]
            # Geometric breakpoints down to the resonance scale sqrt(h/|w|) so
            # the narrow structure at threshold is sampled from the start.
            h = float(_resonance_halfwidth(aw, aw, pr.bath, pr.beta))
            fine = np.geomspace(0.1 * math.sqrt(h / aw), 0.1, 24)
            fine = fine[fine < 0.1]
            self.breakpoints = np.unique(np.concatenate([
                -np.sqrt(self.c - below), -fine, [0.0], fine, np.sqrt(above - self.c)]))
        else:
            self.c = lo
            self.breakpoints = us - lo

    def __call__(self, v):
        if not self.split:
            return self.c + v, np.ones_like(v)
        u = np.where(v < 0, self.c - v**2, self.c + v**2)
        return u, 2.0 * np.abs(v)


def ensemble_point(omega: float, dist: EnsembleDist, bath: BathSpec, temp: Temperature,
                   method: str = "SQ", rtol: float = 1e-4) -> EnsemblePoint:
    """S(w) of the ensemble at one signed frequency, with an error estimate."""
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}, got {method!r}")
    if not (math.isfinite(omega) and omega != 0):
        raise ValueError(f"omega must be finite and nonzero, got {omega!r}")
    if not 0 < rtol < 1:
        raise ValueError("rtol must lie in (0, 1)")
    pr = _Problem(float(omega), dist, bath, temp.beta, method, rtol)
    integrand = _make_integrand(pr)
    inner_rtol = rtol * _INNER_RTOL_FACTOR
    failed = []

    vmap = _OuterMap(pr)

    def outer(v):
        us, jac = vmap(v)
        deltas = np.exp(us)
        a, b, attrs = _inner_cells(pr, deltas)
        res = gk_integrate_batch(integrand, a, b, attrs, deltas.size, rtol=inner_rtol)
        if not np.all(res.converged):
            failed.append(int(np.sum(~res.converged)))
        return res.values * jac, res.errors * jac

    try:
        q = gk_integrate(outer, vmap.breakpoints, rtol=rtol, nested=True)
    except QuadratureError as exc:
        scale = dist.n_tlf * dist.norm
        raise EnsembleConvergenceError(
            f"ensemble quadrature at omega={omega:.6e} did not converge: "
            f"estimate {scale * exc.value:.6e}, error {scale * exc.error:.3e}",
            omega, scale * exc.value, scale * exc.error) from exc
    per = dist.norm * q.value
    err = dist.norm * q.error
    if failed and err > rtol * abs(per):
        raise EnsembleConvergenceError(
            f"inner quadrature at omega={omega:.6e} did not converge "
            f"(achieved error {dist.n_tlf * err:.3e})", omega, dist.n_tlf * per, dist.n_tlf * err)
    return EnsemblePoint(float(omega), dist.n_tlf * per, per, dist.n_tlf * err)


def ensemble_s(omega, dist: EnsembleDist, bath: BathSpec, temp: Temperature,
               method: str = "SQ", rtol: float = 1e-4):
    """Vectorised wrapper returning arrays (total, per_tlf, error)."""
    w = np.atleast_1d(np.asarray(omega, dtype=float))
    pts = [ensemble_point(x, dist, bath, temp, method, rtol) for x in w]
    return (np.array([p.total for p in pts]), np.array([p.per_tlf for p in pts]),
            np.array([p.error for p in pts]))


def _point_task(args):
    return ensemble_point(*args)


def default_grid(w_min=1e-9, w_max=1e3, n=161, signed=True):
    """Log-spaced |w| grid, mirrored to negative frequencies when ``signed``."""
    pos = np.geomspace(w_min, w_max, n)
    return np.concatenate([-pos[::-1], pos]) if signed else pos


def ensemble_curve(omegas, dist: EnsembleDist, bath: BathSpec, temp: Temperature,
                   method: str = "SQ", rtol: float = 1e-4, workers: int | None = None) -> SpectralCurve:
    """Per-TLF-normalised ensemble spectrum on a grid; points run as independent tasks."""
    w = np.sort(np.asarray(omegas, dtype=float))
    tasks = [(float(x), dist, bath, temp, method, rtol) for x in w]
    if workers is None:
        workers = os.cpu_count() or 1
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            pts = list(pool.map(_point_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        pts = [_point_task(t) for t in tasks]
    params = {"dist": asdict(dist), "bath": asdict(bath), "temperature_K": temp.value,
              "rtol": rtol, "n_tlf": dist.n_tlf}
    return SpectralCurve(w, np.array([p.total for p in pts]), method, False, params,
                         np.array([p.error for p in pts]))


def per_tlf(curve: SpectralCurve) -> np.ndarray:
    return curve.values / curve.params["n_tlf"]


def charge_noise(curve: SpectralCurve, dist: EnsembleDist) -> SpectralCurve:
    """S_Q/e^2 = (p/eL)^2 S. Refuses curves that are already converted."""
    if curve.charge_noise:
        raise ValueError("curve is already a charge-noise spectrum")
    scale = dist.dipole_ratio**2
    errors = None if curve.errors is None else curve.errors * scale
    params = dict(curve.params, dipole_ratio=dist.dipole_ratio)
    return replace(curve, values=curve.values * scale, charge_noise=True, params=params, errors=errors)


def gamma_cutoffs(omega_t: float, bath: BathSpec, temp: Temperature, dist: EnsembleDist):
    """(gamma_m, gamma_M) bounding the depolarization rate at fixed omega_t."""
    if not omega_t > 0:
        raise ValueError("omega_t must be > 0")
    base = 2.0 * math.pi * bath.j0 * omega_t / math.tanh(0.5 * temp.beta * omega_t)
    return base * dist.delta_min**2, base * omega_t**2


_ALPHA1_COEF = 93.0 * float(zeta(5.0)) / (2.0 * math.log(2.0))
_ALPHA0_COEF = math.pi**4 / 3.0


def crossover_analytic(temp: Temperature, bath: BathSpec, alpha: int) -> float:
    """Closed-form crossover frequency, proportional to (k_B T)^3 J0."""
    if alpha not in (0, 1):
        raise ValueError("alpha must be 0 or 1")
    coef = _ALPHA1_COEF if alpha == 1 else _ALPHA0_COEF
    return coef * temp.kt**3 * bath.j0


def appendix_d_asymptotes(omega, temp: Temperature, bath: BathSpec, dist: EnsembleDist):
    """Per-TLF low-frequency asymptotes (S_1/f, S_1/f^2) for the distribution's alpha."""
    w = np.asarray(omega, dtype=float)
    two_kt = 2.0 * temp.kt
    n = dist.norm
    if dist.alpha == 1:
        s1 = n * math.pi / (2.0 * w) * two_kt**2 * math.log(2.0)
        s2 = n * 2.0 * math.pi * bath.j0 / w**2 * two_kt**5 * 93.0 / 64.0 * float(zeta(5.0))
    else:
        s1 = n * math.pi / (2.0 * w) * two_kt
        s2 = n * 2.0 * math.pi * bath.j0 / w**2 * two_kt**4 * math.pi**4 / 96.0
    return s1, s2


def asymptote_intersection(temp: Temperature, bath: BathSpec, dist: EnsembleDist) -> float:
    """Frequency where the two asymptotes cross: ratio S_1/f^2 / S_1/f evaluated at w = 1."""
    s1, s2 = appendix_d_asymptotes(1.0, temp, bath, dist)
    return float(s2 / s1)


@dataclass(frozen=True)
class CrossoverFit:
    omega_star: float
    window_1f: tuple
    window_1f2: tuple
    slope_1f: float
    slope_1f2: float


def _local_slopes(w, s):
    lw, ls = np.log(w), np.log(s)
    return np.gradient(ls, lw)


def _longest_run(mask):
    best, start = (0, 0), None
    for i, m in enumerate(list(mask) + [False]):
        if m and start is None:
            start = i
        elif not m and start is not None:
            if i - start > best[1] - best[0]:
                best = (start, i)
            start = None
    return best


def _window(w, slopes, target, tol, min_points):
    lo, hi = _longest_run(np.abs(slopes - target) <= tol)
    if hi - lo < min_points:
        raise WindowDetectionError(
            f"no window with local slope {target:+.0f} +/- {tol} spanning {min_points} points")
    return lo, hi


def crossover_numeric(curve: SpectralCurve, slope_tol: float = 0.05, min_points: int = 3) -> CrossoverFit:
    """Intersect straight log-log fits through the detected 1/f and 1/f^2 windows."""
    pos = curve.omegas > 0
    w, s = curve.omegas[pos], curve.values[pos]
    good = s > 0
    w, s = w[good], s[good]
    if w.size < 2 * min_points:
        raise WindowDetectionError("too few positive-frequency points")
    slopes = _local_slopes(w, s)
    i1 = _window(w, slopes, -1.0, slope_tol, min_points)
    # The 1/f^2 window must lie above the 1/f one.
    off = i1[1]
    lo2, hi2 = _window(w[off:], slopes[off:], -2.0, slope_tol, min_points)
    i2 = (lo2 + off, hi2 + off)
    lw, ls = np.log(w), np.log(s)
    m1, c1 = np.polyfit(lw[i1[0]:i1[1]], ls[i1[0]:i1[1]], 1)
    m2, c2 = np.polyfit(lw[i2[0]:i2[1]], ls[i2[0]:i2[1]], 1)
    if m1 == m2:
        raise WindowDetectionError("parallel fits have no intersection")
    star = math.exp((c2 - c1) / (m1 - m2))
    return CrossoverFit(star, (float(w[i1[0]]), float(w[i1[1] - 1])),
                        (float(w[i2[0]]), float(w[i2[1] - 1])), float(m1), float(m2))


def loglog_slope(w, s):
    """Least-squares slope of ln s against ln |w|."""
    return float(np.polyfit(np.log(np.abs(w)), np.log(s), 1)[0])
