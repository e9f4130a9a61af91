"""Config-driven command line front end.

Usage::

    tlfnoise --config run.yaml [--mode MODE] [--out DIR] [--workers N]
             [--figure ID] [--set section.key=value ...]

Flags override the file. Outputs are CSV (17 significant digits, header
names carry units) plus a JSON sidecar echoing the resolved config.
Exit codes: 0 ok, 2 config error, 3 numerical failure, 4 I/O error.
"""
from __future__ import annotations

import argparse
import copy
import json
import math
import os
import re
import sys
from pathlib import Path

import numpy as np
import scipy
import yaml

from . import __version__
from .bath import rates_at
from .bloch_redfield import br_rates, s_br_total, s_xx_br, s_zz_br
from .ensemble import (
    EnsembleConvergenceError,
    EnsembleDist,
    WindowDetectionError,
    charge_noise,
    crossover_analytic,
    crossover_numeric,
    default_grid,
    ensemble_curve,
    per_tlf,
)
from .quadrature import QuadratureError
from .spectator import TlfOccupations, qubit_rates_x, qubit_rates_z, s_components
from .superop import (
    FitError,
    IllConditionedError,
    ModeIdentificationError,
    dressing_admixture,
    lambda_matrix,
    rates_from_eigen,
    rates_from_ode,
    rates_from_pt,
    subspace_for,
)
from .units import KELVIN_TO_ANGFREQ, BathSpec, Temperature, TlfParams, kelvin_to_omega

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4

MODES = ("single-tlf", "ensemble", "crossover", "verify-fdt", "oracle-compare", "reproduce")
SUPPORTED_FIGURES = (2, 4, 5)

_NUM = (int, float)

# Leaf value: tuple of accepted types. Nested dict: sub-section.
SCHEMA = {
    "mode": (str,),
    "figure": (int,),
    "workers": (int, type(None)),
    "output": {"dir": (str,), "prefix": (str,)},
    "bath": {"j0_ps2": _NUM, "coupling_K2": _NUM, "omega_d_K": _NUM},
    "temperature": {"T_K": _NUM, "sweep_K": (list,)},
    "tlf": {"omega_t_K": _NUM, "epsilon_K": _NUM, "delta_K": _NUM},
    "ensemble": {"alpha": (int, list), "eps_min_K": _NUM, "eps_max_K": _NUM,
                 "delta_min_K": _NUM, "delta_max_K": _NUM, "n_tlf": _NUM,
                 "dipole_ratio": _NUM, "methods": (list,)},
    "grid": {"w_min": _NUM, "w_max": _NUM, "n": (int,), "signed": (bool,)},
    "oracle": {"omega_q_ratios": (list,), "kappa_ratio": _NUM, "ode_kappa_ratio": _NUM,
               "phis": (list,)},
    "tolerances": {"rtol": _NUM, "fdt": _NUM, "slope_tol": _NUM},
}

DEFAULTS = {
    "mode": "single-tlf",
    "figure": 4,
    "workers": None,
    "output": {"dir": "out", "prefix": "run"},
    "bath": {"j0_ps2": 0.047, "omega_d_K": 470.0},
    "temperature": {"T_K": 0.01, "sweep_K": [0.01, 0.02, 0.04, 0.08]},
    "tlf": {"omega_t_K": 0.08, "epsilon_K": 0.0},
    "ensemble": {"alpha": [0, 1], "eps_min_K": 0.0, "eps_max_K": 4.0, "delta_min_K": 2e-6,
                 "delta_max_K": 4.0, "n_tlf": 1000.0, "dipole_ratio": 1e-4, "methods": ["SQ", "BR"]},
    "grid": {},
    "oracle": {"omega_q_ratios": [0.3, 0.5, 0.8, 1.5, 2.0], "kappa_ratio": 1e-4,
               "ode_kappa_ratio": 1e-3, "phis": ["z", "x"]},
    "tolerances": {"rtol": 1e-4, "fdt": 1e-10, "slope_tol": 0.05},
}

# Per-mode grid defaults; single-TLF grids are in units of omega_t.
GRID_DEFAULTS = {
    "single-tlf": {"w_min": 1e-3, "w_max": 1e2, "n": 60, "signed": True},
    "ensemble": {"w_min": 1e-9, "w_max": 1e3, "n": 161, "signed": True},
    "crossover": {"w_min": 1e-17, "w_max": 1e-2, "n": 301, "signed": False},
}


class ConfigError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    pass


def _merge(base, over):
    out = copy.deepcopy(base)
    for k, v in over.items():
        if isinstance(v, dict) and isinstance(out.get(k), dict):
            out[k] = _merge(out[k], v)
        else:
            out[k] = v
    return out


def validate(cfg, schema=SCHEMA, path=""):
    if not isinstance(cfg, dict):
        raise ConfigError(f"{path or 'config'}: expected a mapping")
    for key, val in cfg.items():
        where = f"{path}.{key}" if path else key
        if key not in schema:
            raise ConfigError(f"{where}: unknown key")
        spec = schema[key]
        if isinstance(spec, dict):
            validate(val, spec, where)
        elif isinstance(val, bool) and bool not in spec:
            raise ConfigError(f"{where}: expected {', '.join(t.__name__ for t in spec)}, got bool")
        elif not isinstance(val, spec):
            raise ConfigError(f"{where}: expected {', '.join(t.__name__ for t in spec)}, "
                              f"got {type(val).__name__}")


def _positive(cfg, dotted):
    section, key = dotted.split(".")
    val = cfg[section][key]
    if not (math.isfinite(val) and val > 0):
        raise ConfigError(f"{dotted}: must be > 0, got {val!r}")
    return float(val)


class RunConfig:
    """Validated configuration plus the library objects it resolves to."""

    def __init__(self, raw: dict):
        validate(raw)
        cfg = _merge(DEFAULTS, raw)
        if "j0_ps2" in raw.get("bath", {}) and "coupling_K2" in raw.get("bath", {}):
            raise ConfigError("bath: give j0_ps2 or coupling_K2, not both")
        if cfg["mode"] not in MODES:
            raise ConfigError(f"mode: must be one of {', '.join(MODES)}, got {cfg['mode']!r}")
        if cfg["workers"] is not None and cfg["workers"] < 1:
            raise ConfigError("workers: must be >= 1")
        self.raw = cfg
        self.mode = cfg["mode"]
        self.figure = cfg["figure"]
        self.workers = cfg["workers"] or os.cpu_count() or 1
        self.out_dir = Path(cfg["output"]["dir"])
        self.prefix = cfg["output"]["prefix"]
        self.rtol = _positive(cfg, "tolerances.rtol")
        self.fdt_tol = _positive(cfg, "tolerances.fdt")
        self.slope_tol = _positive(cfg, "tolerances.slope_tol")
        self.temp = self._temperature(cfg["temperature"]["T_K"], "temperature.T_K")
        self.sweep = [self._temperature(t, "temperature.sweep_K") for t in cfg["temperature"]["sweep_K"]]
        self.tlf = self._tlf(cfg["tlf"], raw.get("tlf", {}))
        self.bath = self._bath(cfg["bath"], raw.get("bath", {}))
        alphas = cfg["ensemble"]["alpha"]
        self.alphas = [alphas] if isinstance(alphas, int) else list(alphas)
        self.dists = [self._dist(a, cfg["ensemble"]) for a in self.alphas]
        self.methods = list(cfg["ensemble"]["methods"])
        if not self.methods or any(m not in ("SQ", "BR") for m in self.methods):
            raise ConfigError("ensemble.methods: entries must be 'SQ' or 'BR'")
        self.grid = dict(cfg["grid"])
        self.oracle = cfg["oracle"]
        if any(p not in ("z", "x") for p in self.oracle["phis"]):
            raise ConfigError("oracle.phis: entries must be 'z' or 'x'")

    @staticmethod
    def _temperature(val, where):
        try:
            return Temperature(float(val))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{where}: {exc}") from None

    @staticmethod
    def _tlf(sec, raw_sec):
        try:
            eps = float(sec.get("epsilon_K", 0.0))
            if "delta_K" in sec:
                if "omega_t_K" in raw_sec and not math.isclose(
                        math.hypot(eps, sec["delta_K"]), sec["omega_t_K"], rel_tol=1e-12):
                    raise ConfigError("tlf: omega_t_K inconsistent with epsilon_K and delta_K")
                delta = float(sec["delta_K"])
            else:
                wt = float(sec["omega_t_K"])
                if not wt > eps:
                    raise ConfigError("tlf.omega_t_K: must exceed epsilon_K")
                delta = math.sqrt((wt - eps) * (wt + eps))
            return TlfParams(kelvin_to_omega(eps), kelvin_to_omega(delta))
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"tlf: {exc}") from None

    def _bath(self, sec, raw_sec):
        try:
            if "coupling_K2" in raw_sec:
                # k_B^2 J0 Delta^2 / omega_t^2 in K^-2, fixed for this TLF.
                j0 = sec["coupling_K2"] / KELVIN_TO_ANGFREQ**2 / self.tlf.sin2
            else:
                j0 = sec["j0_ps2"]
            return BathSpec(float(j0), kelvin_to_omega(float(sec["omega_d_K"])))
        except ValueError as exc:
            raise ConfigError(f"bath: {exc}") from None

    @staticmethod
    def _dist(alpha, sec):
        for key in ("eps_max_K", "delta_min_K", "delta_max_K", "n_tlf"):
            if not sec[key] > 0:
                raise ConfigError(f"ensemble.{key}: must be > 0, got {sec[key]!r}")
        if sec["eps_min_K"] < 0:
            raise ConfigError(f"ensemble.eps_min_K: must be >= 0, got {sec['eps_min_K']!r}")
        if alpha not in (0, 1):
            raise ConfigError(f"ensemble.alpha: must be 0 or 1, got {alpha!r}")
        try:
            return EnsembleDist.from_kelvin(alpha, sec["eps_min_K"], sec["eps_max_K"], sec["delta_min_K"],
                                            sec["delta_max_K"], sec["n_tlf"], sec["dipole_ratio"])
        except ValueError as exc:
            raise ConfigError(f"ensemble: {exc}") from None

    def grid_for(self, mode, scale=1.0):
        spec = _merge(GRID_DEFAULTS[mode], self.grid)
        if not (0 < spec["w_min"] < spec["w_max"] and spec["n"] >= 2):
            raise ConfigError("grid: need 0 < w_min < w_max and n >= 2")
        return default_grid(spec["w_min"] * scale, spec["w_max"] * scale, spec["n"], spec["signed"])

    def resolved(self):
        return self.raw


class _Loader(yaml.SafeLoader):
    """Safe loader that also reads exponent-only numbers such as 1e-8 as floats."""


_Loader.add_implicit_resolver(
    "tag:yaml.org,2002:float",
    re.compile(r"""^[-+]?(?:[0-9][0-9_]*(?:\.[0-9_]*)?(?:[eE][-+]?[0-9]+)?
    |\.[0-9_]+(?:[eE][-+]?[0-9]+)?
    |\.(?:inf|Inf|INF)|\.(?:nan|NaN|NAN))$""", re.X),
    list("-+0123456789."))


def _parse_value(text):
    return yaml.load(text, Loader=_Loader)


def load_config(path: str | None, sets=(), overrides=None) -> RunConfig:
    raw = {}
    if path:
        text = Path(path).read_text()
        try:
            raw = yaml.load(text, Loader=_Loader) or {}
        except yaml.YAMLError as exc:
            raise ConfigError(f"{path}: not valid YAML ({exc})") from None
        if not isinstance(raw, dict):
            raise ConfigError(f"{path}: top level must be a mapping")
    for item in sets:
        if "=" not in item:
            raise ConfigError(f"--set {item!r}: expected key.path=value")
        key, val = item.split("=", 1)
        node = raw
        parts = key.split(".")
        for p in parts[:-1]:
            node = node.setdefault(p, {})
            if not isinstance(node, dict):
                raise ConfigError(f"--set {key}: {p} is not a section")
        node[parts[-1]] = _parse_value(val)
    for key, val in (overrides or {}).items():
        if val is not None:
            raw[key] = val
    return RunConfig(raw)


# Output helpers.

def _fmt(x) -> str:
    if isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    return f"{float(x):.17g}"


def write_csv(path: Path, header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def read_csv(path):
    """Parse an emitted CSV into (header, list of rows); numbers become floats."""
    lines = Path(path).read_text().splitlines()
    header = lines[0].split(",")
    rows = []
    for line in lines[1:]:
        row = []
        for cell in line.split(","):
            try:
                row.append(float(cell))
            except ValueError:
                row.append(cell)
        rows.append(row)
    return header, rows


def _columns_to_rows(cols):
    return list(zip(*cols))


class Runner:
    def __init__(self, cfg: RunConfig, log=print):
        self.cfg = cfg
        self.log = log
        self.files = []
        self.report = {}

    def out(self, name):
        return self.cfg.out_dir / f"{self.cfg.prefix}_{name}.csv"

    def emit(self, name, header, rows):
        path = self.out(name)
        write_csv(path, header, rows)
        self.files.append(path.name)

    # Modes.

    def single_tlf(self, temp=None, name="single_tlf"):
        cfg = self.cfg
        temp = temp or cfg.temp
        tlf = cfg.tlf
        w = cfg.grid_for("single-tlf", tlf.omega_t)
        szz, sxx = s_components(w, tlf.epsilon, tlf.delta, cfg.bath, temp.beta)
        br = br_rates(tlf, cfg.bath, temp)
        cols = [w, szz, sxx, tlf.cos2 * szz + tlf.sin2 * sxx,
                s_zz_br(w, br), s_xx_br(w, tlf, br), s_br_total(w, tlf, br)]
        self.emit(name, ["omega_rad_per_ps", "s_zz_sq_ps", "s_xx_sq_ps", "s_tlf_sq_ps",
                         "s_zz_br_ps", "s_xx_br_ps", "s_tlf_br_ps"], _columns_to_rows(cols))
        return w, szz, sxx

    def verify_fdt(self):
        cfg = self.cfg
        tlf, temp = cfg.tlf, cfg.temp
        pos = cfg.grid_for("single-tlf", tlf.omega_t)
        pos = np.unique(np.abs(pos))
        zp, xp = s_components(pos, tlf.epsilon, tlf.delta, cfg.bath, temp.beta)
        zn, xn = s_components(-pos, tlf.epsilon, tlf.delta, cfg.bath, temp.beta)
        tp = tlf.cos2 * zp + tlf.sin2 * xp
        tn = tlf.cos2 * zn + tlf.sin2 * xn
        # Skip frequencies where exp(-beta w) S(w) is below the normal float range.
        ok = np.log(np.minimum(zp, xp)) - temp.beta * pos > math.log(np.finfo(float).tiny) + 30
        pos, boltz = pos[ok], np.exp(-temp.beta * pos[ok])

        def resid(neg, plus):
            return np.abs(neg[ok] - plus[ok] * boltz) / (plus[ok] * boltz)

        r = [resid(zn, zp), resid(xn, xp), resid(tn, tp)]
        self.emit("verify_fdt", ["omega_rad_per_ps", "resid_zz", "resid_xx", "resid_tlf"],
                  _columns_to_rows([pos] + r))
        worst = float(max(np.max(x) for x in r))
        self.report["fdt_max_residual"] = worst
        self.report["fdt_points"] = int(2 * pos.size)
        self.report["fdt_skipped_underflow"] = int(2 * np.sum(~ok))
        self.log(f"max relative FDT residual {worst:.3e} over {2 * pos.size} points "
                 f"({2 * np.sum(~ok)} skipped: underflow)")
        if not worst < cfg.fdt_tol:
            raise NumericalFailure(f"FDT residual {worst:.3e} exceeds {cfg.fdt_tol:.1e}")

    def ensemble(self, temp=None, name="ensemble", grid=None):
        cfg = self.cfg
        temp = temp or cfg.temp
        w = cfg.grid_for("ensemble") if grid is None else grid
        for dist in cfg.dists:
            header, cols = ["omega_rad_per_ps"], [w]
            for method in cfg.methods:
                curve = ensemble_curve(w, dist, cfg.bath, temp, method, cfg.rtol, cfg.workers)
                q = charge_noise(curve, dist)
                tag = method.lower()
                header += [f"s_{tag}_ps", f"s_per_tlf_{tag}_ps", f"sq_over_e2_{tag}", f"err_{tag}_ps"]
                cols += [curve.values, per_tlf(curve), q.values, curve.errors]
            self.emit(f"{name}_alpha{dist.alpha}", header, _columns_to_rows(cols))

    def crossover(self, name="crossover"):
        cfg = self.cfg
        w = cfg.grid_for("crossover")
        w = w[w > 0]
        rows, failures = [], []
        for dist in cfg.dists:
            for temp in cfg.sweep:
                curve = ensemble_curve(w, dist, cfg.bath, temp, "SQ", cfg.rtol, cfg.workers)
                analytic = crossover_analytic(temp, cfg.bath, dist.alpha)
                try:
                    fit = crossover_numeric(curve, cfg.slope_tol)
                    numeric, status = fit.omega_star, "ok"
                except WindowDetectionError as exc:
                    numeric, status = float("nan"), "window-detection-failed"
                    failures.append(f"alpha={dist.alpha} T={temp.value} K: {exc}")
                rows.append((temp.value, dist.alpha, numeric, analytic, status))
        self.emit(name, ["T_K", "alpha", "omega_star_numeric_rad_per_ps",
                         "omega_star_analytic_rad_per_ps", "status"], rows)
        slopes = {}
        for dist in cfg.dists:
            sel = [r for r in rows if r[1] == dist.alpha and math.isfinite(r[2])]
            if len(sel) >= 2:
                slope = float(np.polyfit(np.log([r[0] for r in sel]), np.log([r[2] for r in sel]), 1)[0])
                slopes[f"alpha{dist.alpha}"] = slope
                self.log(f"alpha={dist.alpha}: d ln(omega*) / d ln(T) = {slope:.4f}")
        self.report["crossover_slopes"] = slopes
        if failures:
            raise NumericalFailure("; ".join(failures))

    def oracle_compare(self):
        cfg = self.cfg
        tlf, bath, temp = cfg.tlf, cfg.bath, cfg.temp
        sub = subspace_for(tlf, bath, temp)
        occ = TlfOccupations.from_rates(rates_at(tlf, tlf.omega_t, bath, temp))
        rows, worst, skipped = [], {"pt": 0.0, "eigen": 0.0, "ode": 0.0}, 0
        for ratio in cfg.oracle["omega_q_ratios"]:
            wq = float(ratio) * tlf.omega_t
            rates = rates_at(tlf, wq, bath, temp)
            for phi in cfg.oracle["phis"]:
                up, down = (qubit_rates_z(rates, occ, wq) if phi == "z" else qubit_rates_x(rates, tlf, wq))
                kap = cfg.oracle["kappa_ratio"] * wq
                pt = rates_from_pt(tlf, wq, phi, bath, temp, kappa=1.0, kappa0=kap)
                k_ode = cfg.oracle["ode_kappa_ratio"] * wq
                results = [("pt", pt, 1.0)]
                if min(up, down) / max(up, down) > 10 * dressing_admixture(tlf, wq, k_ode, phi):
                    lam = lambda_matrix(tlf, wq, k_ode, phi, bath, temp)
                    eig, _ = rates_from_eigen(lam, sub)
                    t_max = 5.0 / (k_ode**2 * (up + down))
                    results += [("eigen", eig, k_ode), ("ode", rates_from_ode(lam, sub, t_max), k_ode)]
                    status = "ok"
                else:
                    status = "below-finite-kappa-resolution"
                    skipped += 1
                row = [wq, phi, up, down]
                for tag, res, k in results:
                    ru, rd = res.gamma_up / k**2, res.gamma_down / k**2
                    err = max(abs(ru / up - 1), abs(rd / down - 1))
                    worst[tag] = max(worst[tag], err)
                    row += [ru, rd, err]
                row += [math.nan] * (3 * (3 - len(results))) + [status]
                rows.append(row)
        header = ["omega_q_rad_per_ps", "phi", "closed_up_per_k2", "closed_down_per_k2"]
        for tag in ("pt", "eigen", "ode"):
            header += [f"{tag}_up_per_k2", f"{tag}_down_per_k2", f"{tag}_max_rel_err"]
        self.emit("oracle_compare", header + ["status"], rows)
        self.report["oracle_max_rel_err"] = worst
        self.report["oracle_rows_below_resolution"] = skipped
        if skipped:
            self.log(f"{skipped} rows skipped eigen/ODE: Gamma_up/Gamma_down below the kappa^2 dressing")
        self.log("max relative deviation from closed forms: "
                 + ", ".join(f"{k} {v:.2e}" for k, v in worst.items()))

    def reproduce(self):
        fig = self.cfg.figure
        if fig == 2:
            self.single_tlf(Temperature(0.04), "fig2a")
            fam = [0.01, 0.02, 0.04]
            w = self.cfg.grid_for("single-tlf", self.cfg.tlf.omega_t)
            tlf = self.cfg.tlf
            header, cols = ["omega_rad_per_ps"], [w]
            for t in fam:
                temp = Temperature(t)
                szz, _ = s_components(w, tlf.epsilon, tlf.delta, self.cfg.bath, temp.beta)
                mk = f"{t * 1e3:g}mK"
                header += [f"s_zz_sq_{mk}_ps", f"s_zz_br_{mk}_ps"]
                cols += [szz, s_zz_br(w, br_rates(tlf, self.cfg.bath, temp))]
            self.emit("fig2b", header, _columns_to_rows(cols))
        elif fig == 4:
            self.ensemble(name="fig4")
        elif fig == 5:
            self.crossover(name="fig5")
        else:
            raise ConfigError(f"figure: {fig} is not supported (choose from {SUPPORTED_FIGURES}; "
                              "figure 3 shows process diagrams and has no data)")

    def run(self):
        dispatch = {
            "single-tlf": self.single_tlf,
            "ensemble": self.ensemble,
            "crossover": self.crossover,
            "verify-fdt": self.verify_fdt,
            "oracle-compare": self.oracle_compare,
            "reproduce": self.reproduce,
        }
        self.cfg.out_dir.mkdir(parents=True, exist_ok=True)
        status = "ok"
        try:
            dispatch[self.cfg.mode]()
        except NumericalFailure as exc:
            status = f"numerical failure: {exc}"
            raise
        finally:
            self.write_sidecar(status)

    def write_sidecar(self, status):
        meta = {
            "tlfnoise_version": __version__,
            "numpy_version": np.__version__,
            "scipy_version": scipy.__version__,
            "mode": self.cfg.mode,
            "status": status,
            "config": self.cfg.resolved(),
            "files": self.files,
            "report": self.report,
        }
        path = self.cfg.out_dir / f"{self.cfg.prefix}_meta.json"
        path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def build_parser():
    p = argparse.ArgumentParser(prog="tlfnoise", description="TLF noise spectra and ensemble averages.")
    p.add_argument("--config", help="YAML config file")
    p.add_argument("--mode", choices=MODES)
    p.add_argument("--out", help="output directory")
    p.add_argument("--prefix", help="output file prefix")
    p.add_argument("--workers", type=int)
    p.add_argument("--figure", type=int, help="figure id for mode=reproduce")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                   help="override a config entry, e.g. temperature.T_K=0.02")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sets = list(args.set)
        if args.out is not None:
            sets.append(f"output.dir={json.dumps(args.out)}")
        if args.prefix is not None:
            sets.append(f"output.prefix={json.dumps(args.prefix)}")
        cfg = load_config(args.config, sets, {"mode": args.mode, "workers": args.workers,
                                              "figure": args.figure})
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    runner = Runner(cfg)
    try:
        runner.run()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (NumericalFailure, EnsembleConvergenceError, QuadratureError, FitError,
            ModeIdentificationError, IllConditionedError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    for name in runner.files:
        print(cfg.out_dir / name)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
