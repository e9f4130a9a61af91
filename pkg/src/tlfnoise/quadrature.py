"""Globally adaptive Gauss-Kronrod (7/15) quadrature for vectorised integrands."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Kronrod 15-point nodes (non-negative half) and weights; Gauss 7-point weights.
_XK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate([-_XK[:-1], _XK[::-1]])
WK = np.concatenate([_WK[:-1], _WK[::-1]])
# Gauss nodes are the odd-indexed Kronrod nodes (x = +-0.949, +-0.742, ...).
WG = np.zeros(15)
WG[[1, 3, 5]] = _WG[:3]
WG[[9, 11, 13]] = _WG[2::-1]
WG[7] = _WG[3]


class QuadratureError(RuntimeError):
    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    intervals: int
    evaluations: int


def _apply(f, a, b, nested):
    """GK15 on each interval; returns (kronrod estimate, error estimate)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (b + a)
    x = mid[:, None] + half[:, None] * NODES[None, :]
    out = f(x.ravel())
    inner = 0.0
    if nested:
        out, ierr = out
        inner = np.abs(half) * (np.asarray(ierr, dtype=float).reshape(x.shape) @ WK)
    fx = np.asarray(out, dtype=float).reshape(x.shape)
    k = half * (fx @ WK)
    return k, np.abs(k - half * (fx @ WG)) + inner


def gk_integrate(f, breakpoints, rtol=1e-6, atol=0.0, max_intervals=4000,
                 raise_on_failure=True, nested=False) -> QuadResult:
    """Integrate ``f`` over [breakpoints[0], breakpoints[-1]].

    ``f`` maps a 1-D array of abscissae to values. Every interval whose
    error estimate exceeds its share of the remaining budget is bisected;
    all new intervals are evaluated in a single vectorised call. With
    ``nested=True``, ``f`` returns ``(values, errors)`` where ``errors``
    bounds the integrand's own error (e.g. from an inner quadrature); it is
    integrated into the interval error estimates.
    """
    edges = np.unique(np.asarray(breakpoints, dtype=float))
    a, b = edges[:-1], edges[1:]
    k, err = _apply(f, a, b, nested)
    nevals = 15 * a.size
    while True:
        total = float(np.sum(k))
        total_err = float(np.sum(err))
        tol = max(atol, rtol * abs(total))
        if total_err <= tol:
            break
        if a.size >= max_intervals:
            if raise_on_failure:
                raise QuadratureError(
                    f"quadrature did not converge: estimate {total:.6e} +/- {total_err:.3e}",
                    total, total_err)
            break
        # Split the worst intervals until the rest fit within half the budget.
        order = np.argsort(err)[::-1]
        cum = np.cumsum(err[order])
        n_split = int(np.argmax(total_err - cum <= 0.5 * tol)) + 1
        n_split = min(n_split, order.size, max_intervals - a.size)
        split = order[:n_split]
        keep = np.ones(a.size, dtype=bool)
        keep[split] = False
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        nk, nerr = _apply(f, na, nb, nested)
        nevals += 15 * na.size
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        k = np.concatenate([k[keep], nk])
        err = np.concatenate([err[keep], nerr])
    return QuadResult(float(np.sum(k)), float(np.sum(err)), int(a.size), nevals)


@dataclass(frozen=True)
class BatchResult:
    values: np.ndarray
    errors: np.ndarray
    converged: np.ndarray
    intervals: int


def gk_integrate_batch(f, a, b, attrs, n_owner, rtol=1e-6, atol=0.0,
                       max_intervals_per_owner=400) -> BatchResult:
    """Many independent adaptive integrals sharing one vectorised integrand.

    Interval ``i`` spans ``[a[i], b[i]]`` and belongs to problem
    ``attrs["owner"][i]``; the problem's integral is the sum over its
    intervals, so different intervals may use different variable maps.
    ``f(x, attrs)`` receives an (m, 15) abscissa array plus the attribute
    arrays of those m intervals. Bisected intervals inherit attributes.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    attrs = {k: np.asarray(v) for k, v in attrs.items()}
    owner = attrs["owner"]

    def run(lo, hi, sub):
        half = 0.5 * (hi - lo)
        x = 0.5 * (hi + lo)[:, None] + half[:, None] * NODES[None, :]
        fx = np.asarray(f(x, sub), dtype=float)
        return half * (fx @ WK), half * (fx @ WG)

    k, g = run(a, b, attrs)
    err = np.abs(k - g)
    atol_arr = np.broadcast_to(np.asarray(atol, dtype=float), (n_owner,))
    while True:
        tot = np.bincount(owner, weights=k, minlength=n_owner)
        terr = np.bincount(owner, weights=err, minlength=n_owner)
        count = np.bincount(owner, minlength=n_owner)
        tol = np.maximum(rtol * np.abs(tot), atol_arr)
        active = (terr > tol) & (count < max_intervals_per_owner)
        if not np.any(active):
            break
        # Bisect every interval within a factor 2 of its problem's worst one.
        worst = np.zeros(n_owner)
        np.maximum.at(worst, owner, err)
        split = active[owner] & (err >= 0.5 * worst[owner]) & (err > 0)
        if not np.any(split):
            break
        keep = ~split
        m = 0.5 * (a[split] + b[split])
        na = np.concatenate([a[split], m])
        nb = np.concatenate([m, b[split]])
        sub = {key: np.concatenate([v[split], v[split]]) for key, v in attrs.items()}
        nk, ng = run(na, nb, sub)
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        attrs = {key: np.concatenate([v[keep], sub[key]]) for key, v in attrs.items()}
        owner = attrs["owner"]
        k = np.concatenate([k[keep], nk])
        err = np.concatenate([err[keep], np.abs(nk - ng)])
    return BatchResult(tot, terr, terr <= tol, int(a.size))
