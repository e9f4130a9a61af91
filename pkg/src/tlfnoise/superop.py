"""Qubit x TLF master-equation generator and the rate oracles built on it.

Vectorization: the 4x4 density matrix in the product basis ordered
(e1, e0, g1, g0) is stacked row-major, so vec(A rho B) = kron(A, B.T) vec(rho).
Qubit states: e (excited), g (ground); TLF eigenstates: 1 (excited), 0 (ground).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg as sla
from scipy.optimize import curve_fit

from .bath import RateSet, gamma_raw
from .units import BathSpec, Temperature, TlfParams

VECTORIZATION = "row-major:e1,e0,g1,g0"
BASIS_LABELS = ("e1", "e0", "g1", "g0")

_I2 = np.eye(2)
_PX = np.array([[0.0, 1.0], [1.0, 0.0]])
# (e, g) and (1, 0) orderings with the ground state at sigma_z = +1.
_PZ = np.diag([-1.0, 1.0])

TAU_Z = np.kron(_PZ, _I2)
TAU_X = np.kron(_PX, _I2)
SIGMA_Z = np.kron(_I2, _PZ)
SIGMA_X = np.kron(_I2, _PX)
PHI_OPERATORS = {"z": SIGMA_Z, "x": SIGMA_X}


class DegenerateHamiltonianError(ValueError):
    """H_S has (nearly) degenerate levels, so its eigenprojectors are ambiguous."""


class IllConditionedError(RuntimeError):
    pass


class ModeIdentificationError(RuntimeError):
    pass


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class Superoperator:
    matrix: np.ndarray
    basis_tag: str = "bare-product"
    vectorization: str = VECTORIZATION

    def __matmul__(self, other):
        return self.matrix @ other


def vec(rho: np.ndarray) -> np.ndarray:
    return np.asarray(rho, dtype=complex).reshape(-1)


def unvec(v: np.ndarray) -> np.ndarray:
    return np.asarray(v).reshape(4, 4)


def spre_post(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Superoperator of rho -> a rho b."""
    return np.kron(a, b.T)


TRACE_COVECTOR = vec(np.eye(4))


def _phi(selector: str) -> np.ndarray:
    try:
        return PHI_OPERATORS[selector]
    except KeyError:
        raise ValueError(f"phi selector must be 'z' or 'x', got {selector!r}") from None


def build_hs(tlf: TlfParams, omega_q: float, kappa: float, phi: str = "z") -> np.ndarray:
    """H_S = -w_q tau_z / 2 + kappa tau_x phi - w_t sigma_z / 2."""
    return (-0.5 * omega_q * TAU_Z + kappa * TAU_X @ _phi(phi)
            - 0.5 * tlf.omega_t * SIGMA_Z).astype(complex)


def _eigen_projectors(h: np.ndarray, min_gap: float):
    energies, vecs = np.linalg.eigh(h)
    gaps = np.diff(energies)
    if np.min(gaps) < min_gap:
        raise DegenerateHamiltonianError(
            f"H_S level spacing {np.min(gaps):.3e} below {min_gap:.3e}; perturb omega_q")
    projs = np.einsum("ai,bi->iab", vecs, vecs.conj())
    return energies, projs


def lambda_matrix(tlf: TlfParams, omega_q: float, kappa: float, phi: str,
                  bath: BathSpec, temp: Temperature, min_gap: float | None = None) -> np.ndarray:
    """Raw 16x16 generator matrix (see :func:`build_lambda`)."""
    h = build_hs(tlf, omega_q, kappa, phi)
    if min_gap is None:
        min_gap = 1e-12 * max(omega_q, tlf.omega_t)
    energies, projs = _eigen_projectors(h, min_gap)
    eye = np.eye(4)
    gen = -1j * (spre_post(h, eye) - spre_post(eye, h))

    x = SIGMA_X.astype(complex)
    # gamma(-eps_ij) with eps_ij = E_i - E_j
    coeff = 0.5 * gamma_raw(energies[None, :] - energies[:, None], tlf.sin2, bath, temp.beta)
    px = projs @ x            # Pi_i X
    xp = x @ projs            # X Pi_i
    xpx = x @ projs @ x       # X Pi_i X
    for i in range(4):
        for j in range(4):
            c = coeff[i, j]
            if c == 0.0:
                continue
            gen += c * (spre_post(px[i], px[j])
                        - spre_post(xpx[i], projs[j])
                        + spre_post(xp[j], xp[i])
                        - spre_post(projs[j], xpx[i]))
    return gen


def build_lambda(tlf: TlfParams, omega_q: float, kappa: float, phi: str,
                 bath: BathSpec, temp: Temperature) -> Superoperator:
    """Master-equation generator without the secular approximation.

    Coherent part -i[H_S, .] plus the double sum over eigenprojectors of H_S
    with coefficients gamma(E_j - E_i)/2. Raises DegenerateHamiltonianError
    when H_S has coincident levels.
    """
    if kappa < 0:
        raise ValueError("kappa must be >= 0")
    return Superoperator(lambda_matrix(tlf, omega_q, kappa, phi, bath, temp))


# --- analytic uncoupled generator -------------------------------------------

_IDX = {lab: k for k, lab in enumerate(BASIS_LABELS)}


def _el(a: str, b: str) -> int:
    return 4 * _IDX[a] + _IDX[b]


# (vector index, sign) for each coordinate of the block-diagonal basis.
BLOCK_BASIS = (
    (_el("e0", "e0"), 1), (_el("e1", "e1"), 1),      # M1, qubit e
    (_el("g0", "g0"), 1), (_el("g1", "g1"), 1),      # M1, qubit g
    (_el("e0", "g0"), 1), (_el("e1", "g1"), -1),     # M2 - i w_q
    (_el("g0", "e0"), 1), (_el("g1", "e1"), -1),     # M2 + i w_q
    (_el("e1", "e0"), 1), (_el("e0", "e1"), 1),      # M3 - i w_t s_z, qubit e
    (_el("g1", "g0"), 1), (_el("g0", "g1"), 1),      # M3 - i w_t s_z, qubit g
    (_el("e1", "g0"), 1), (_el("e0", "g1"), -1),     # M4 - i w_q - i w_t s_z
    (_el("g1", "e0"), 1), (_el("g0", "e1"), -1),     # M4 + i w_q - i w_t s_z
)


def block_basis_transform() -> np.ndarray:
    """Signed permutation S with x_block = S @ vec(rho)."""
    s = np.zeros((16, 16))
    for row, (col, sign) in enumerate(BLOCK_BASIS):
        s[row, col] = sign
    return s


def lambda0_blocks(rates: RateSet, omega_q: float, omega_t: float) -> np.ndarray:
    """Block-diagonal uncoupled generator in the :data:`BLOCK_BASIS` coordinates."""
    r = rates
    m1 = np.array([[-r.gamma_up, r.gamma_down], [r.gamma_up, -r.gamma_down]])
    a = -(r.gamma_up_minus + r.gamma_up_plus) / 2
    b = -(r.gamma_down_minus + r.gamma_down_plus) / 2
    m2 = np.array([[a, b], [a, b]])
    m3 = -r.gamma_zero * np.array([[1.0, -1.0], [-1.0, 1.0]])
    m4 = -(r.gamma_minus + r.gamma_plus) / 2 * np.ones((2, 2))
    sz = np.diag([1.0, -1.0])
    i2 = np.eye(2)
    blocks = [
        m1, m1,
        m2 - 1j * omega_q * i2, m2 + 1j * omega_q * i2,
        m3 - 1j * omega_t * sz, m3 - 1j * omega_t * sz,
        m4 - 1j * omega_q * i2 - 1j * omega_t * sz,
        m4 + 1j * omega_q * i2 - 1j * omega_t * sz,
    ]
    return sla.block_diag(*blocks).astype(complex)


def lambda0_analytic(rates: RateSet, omega_q: float, omega_t: float) -> Superoperator:
    """Uncoupled generator from the closed-form blocks, mapped to the bare basis."""
    s = block_basis_transform()
    return Superoperator(s.T @ lambda0_blocks(rates, omega_q, omega_t) @ s)


# --- degenerate subspace and perturbation theory ------------------------------

@dataclass(frozen=True)
class DegenerateSubspace:
    rho_g: np.ndarray
    rho_e: np.ndarray
    phi_g: np.ndarray
    phi_e: np.ndarray
    projector: np.ndarray


def degenerate_subspace(p0: float, p1: float) -> DegenerateSubspace:
    tlf_eq = np.diag([p1, p0])
    qe, qg = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
    rho_g, rho_e = vec(np.kron(qg, tlf_eq)), vec(np.kron(qe, tlf_eq))
    phi_g, phi_e = vec(np.kron(qg, _I2)), vec(np.kron(qe, _I2))
    proj = (np.outer(rho_g, phi_g) / (phi_g @ rho_g)
            + np.outer(rho_e, phi_e) / (phi_e @ rho_e))
    return DegenerateSubspace(rho_g, rho_e, phi_g, phi_e, proj)


def subspace_for(tlf: TlfParams, bath: BathSpec, temp: Temperature) -> DegenerateSubspace:
    g_down, g_up = gamma_raw(np.array([tlf.omega_t, -tlf.omega_t]), tlf.sin2, bath, temp.beta)
    total = g_down + g_up
    return degenerate_subspace(g_down / total, g_up / total)


@dataclass(frozen=True)
class Expansion:
    lam0: np.ndarray
    lam1: np.ndarray
    lam2: np.ndarray
    kappa0: float
    richardson_delta: float


def expand_lambda(builder: Callable[[float], np.ndarray], kappa0: float,
                  richardson: bool = True) -> Expansion:
    """Lambda_0, Lambda_1, Lambda_2 by central differences in kappa.

    With ``richardson`` the second-order coefficient is extrapolated from
    steps kappa0 and kappa0/2; ``richardson_delta`` is the relative change.
    """
    lam0 = builder(0.0)

    def coeffs(k):
        lp, lm = builder(k), builder(-k)
        return (lp - lm) / (2 * k), (lp - 2 * lam0 + lm) / (2 * k * k)

    l1, l2 = coeffs(kappa0)
    delta = 0.0
    if richardson:
        l1h, l2h = coeffs(kappa0 / 2)
        l1r, l2r = (4 * l1h - l1) / 3, (4 * l2h - l2) / 3
        delta = float(np.linalg.norm(l2r - l2) / max(np.linalg.norm(l2r), 1e-300))
        l1, l2 = l1r, l2r
    return Expansion(lam0, l1, l2, kappa0, delta)


def reduced_inverse(lam0: np.ndarray, proj: np.ndarray, rcond: float = 1e-12):
    """(1-P) Lambda_0^{-1} (1-P) on the complement of the zero modes.

    Lambda_0 + P is invertible and equals Lambda_0 on range(1-P); it is
    inverted by SVD with a relative singular-value threshold.
    Returns (inverse, smallest singular value / largest).
    """
    q = np.eye(lam0.shape[0]) - proj
    u, s, vh = np.linalg.svd(lam0 + proj)
    ratio = s[-1] / s[0]
    if ratio < rcond:
        raise IllConditionedError(
            f"Lambda_0 restricted to the complement is singular (s_min/s_max={ratio:.3e})")
    inv = (vh.conj().T / s) @ u.conj().T
    return q @ inv @ q, ratio


def effective_lambda_m(exp: Expansion, sub: DegenerateSubspace) -> np.ndarray:
    """Second-order effective generator restricted to the zero-mode pair.

    Returned as a 2x2 transition-rate matrix Q[source, target] over (g, e),
    per kappa^2: Q[e, g] = (phi_g|Lambda_m|rho_e), rows sum to zero.
    """
    p = sub.projector
    g, _ = reduced_inverse(exp.lam0, p)
    lam_m = p @ exp.lam2 @ p - p @ exp.lam1 @ g @ exp.lam1 @ p
    rhos = (sub.rho_g, sub.rho_e)
    phis = (sub.phi_g, sub.phi_e)
    q = np.empty((2, 2), dtype=complex)
    for s_idx, rho in enumerate(rhos):
        for t_idx, phi in enumerate(phis):
            q[s_idx, t_idx] = phi @ lam_m @ rho / (phi @ rhos[t_idx])
    return q


@dataclass(frozen=True)
class OracleRates:
    gamma_up: float
    gamma_down: float
    status: str = "ok"


def _near_resonance(tlf: TlfParams, omega_q: float, kappa: float) -> bool:
    return abs(omega_q - tlf.omega_t) <= 10 * kappa


def rates_from_pt(tlf: TlfParams, omega_q: float, phi: str, bath: BathSpec,
                  temp: Temperature, kappa: float = 1.0,
                  kappa0: float | None = None) -> OracleRates:
    """Qubit (Gamma_up, Gamma_down) from degenerate perturbation theory.

    The generator is expanded numerically at step ``kappa0`` (default
    1e-4 * omega_q); the result is scaled by ``kappa**2`` (kappa=1 gives
    the per-kappa^2 spectral values).
    """
    if kappa0 is None:
        kappa0 = 1e-4 * omega_q
    status = "reduced-accuracy" if _near_resonance(tlf, omega_q, kappa0) else "ok"

    def builder(k):
        return lambda_matrix(tlf, omega_q, k, phi, bath, temp)

    exp = expand_lambda(builder, kappa0)
    q = effective_lambda_m(exp, subspace_for(tlf, bath, temp))
    k2 = kappa**2
    return OracleRates(k2 * q[0, 1].real, k2 * q[1, 0].real, status)


def dressing_admixture(tlf: TlfParams, omega_q: float, kappa: float, phi: str) -> float:
    """Order-kappa^2 weight of the opposite qubit state in each H_S eigenstate.

    The finite-kappa oracles read populations in the bare basis, so they
    cannot resolve a rate ratio Gamma_up/Gamma_down below this level.
    """
    _phi(phi)
    if phi == "z":
        det = omega_q
    else:
        det = min(abs(omega_q - tlf.omega_t), omega_q + tlf.omega_t)
    return (kappa / det) ** 2


def rates_from_eigen(lam: np.ndarray, sub: DegenerateSubspace,
                     separation: float = 50.0) -> tuple[OracleRates, complex]:
    """Rates from the two slowest eigenmodes of the full generator.

    Returns the rates and the depolarization eigenvalue chi_1.
    """
    w, vl, vr = sla.eig(lam, left=True, right=True)
    order = np.argsort(np.abs(w))
    if np.abs(w[order[2]]) < separation * np.abs(w[order[1]]):
        raise ModeIdentificationError(
            f"slow modes not separated: |chi| = {np.abs(w[order[:3]])}")
    j0_, j1 = order[0], order[1]
    chi1 = w[j1]

    def amp(j, target, source):
        left = vl[:, j].conj()
        right = vr[:, j]
        norm = left @ right
        return (target @ right) * (left @ source) / norm

    down = amp(j1, sub.phi_g, sub.rho_e) * chi1
    up = amp(j1, sub.phi_e, sub.rho_g) * chi1
    return OracleRates(float(up.real), float(down.real)), chi1


def _exp_model(t, a, b, k):
    return a + b * np.exp(-k * t)


def _fit_relaxation(t, pop, k_guess):
    p0 = (pop[-1], pop[0] - pop[-1], k_guess)
    popt, _ = curve_fit(_exp_model, t * k_guess, pop, p0=(p0[0], p0[1], 1.0), maxfev=20000)
    a, b, k = popt
    resid = pop - _exp_model(t * k_guess, a, b, k)
    return a, k * k_guess, float(np.max(np.abs(resid)) / max(abs(b), 1e-300))


def propagate(lam: np.ndarray, rho0: np.ndarray, t_eval: np.ndarray) -> np.ndarray:
    """rho(t) on a uniform time grid by repeated application of expm(Lambda dt).

    The generator has undamped TLF-coherence modes (gamma(0) = 0) oscillating
    at omega_t, so adaptive stepping over the depolarization time would need
    millions of steps; the exact propagator of the linear equation is used.
    """
    dt = t_eval[1] - t_eval[0]
    step = sla.expm(lam * dt)
    out = np.empty((lam.shape[0], t_eval.size), dtype=complex)
    out[:, 0] = rho0
    for k in range(1, t_eval.size):
        out[:, k] = step @ out[:, k - 1]
    return out


def rates_from_ode(lam: np.ndarray, sub: DegenerateSubspace, t_max: float,
                   samples: int = 400, max_residual: float = 1e-2) -> OracleRates:
    """Rates from a time-domain relaxation fit.

    Evolves d|rho)/dt = Lambda|rho) from rho_e and from rho_g, fits a
    single exponential to the transferred qubit population, and combines
    the fitted total rate with the asymptotic populations.
    """
    t_eval = np.linspace(0.0, t_max, samples)
    k_guess = 5.0 / t_max
    fits = []
    for start, target in ((sub.rho_e, sub.phi_g), (sub.rho_g, sub.phi_e)):
        pop = (target @ propagate(lam, start, t_eval)).real
        fits.append(_fit_relaxation(t_eval, pop, k_guess))
    (pg_inf, k_e, res_e), (pe_inf, k_g, res_g) = fits
    if max(res_e, res_g) > max_residual:
        raise FitError(f"single-exponential fit residual {max(res_e, res_g):.3e} too large")
    k = 0.5 * (k_e + k_g)
    # P_g(inf) = Gamma_down / (Gamma_up + Gamma_down), likewise P_e(inf).
    frac_down = 0.5 * (pg_inf + (1.0 - pe_inf))
    return OracleRates(k * (1.0 - frac_down), k * frac_down)


def dump_matrix(mat: np.ndarray) -> str:
    """Row-major text dump, one row per line, 're,im' pairs at 17 digits."""
    lines = []
    for row in np.asarray(mat, dtype=complex):
        lines.append(" ".join(f"{z.real:.17g},{z.imag:.17g}" for z in row))
    return "\n".join(lines) + "\n"


def load_matrix(text: str) -> np.ndarray:
    rows = []
    for line in text.strip().splitlines():
        rows.append([complex(float(a), float(b)) for a, b in
                     (pair.split(",") for pair in line.split())])
    return np.array(rows)
