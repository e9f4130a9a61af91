"""Ensemble charge-noise spectra at 10 mK for alpha = 0 and 1.

Computes both methods on the signed default grid, writes one CSV per
alpha and a log-log plot of S_Q/e^2 against |w| (solid: w > 0,
dashed: w < 0).
"""
import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tlfnoise.cli import write_csv
from tlfnoise.ensemble import EnsembleDist, charge_noise, default_grid, ensemble_curve
from tlfnoise.units import BathSpec, Temperature, kelvin_to_omega


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fig4")
    ap.add_argument("--n", type=int, default=81, help="points per frequency sign")
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    bath = BathSpec(0.047, kelvin_to_omega(470.0))
    temp = Temperature(0.01)
    w = default_grid(1e-9, 1e3, args.n)

    fig, axes = plt.subplots(1, 2, figsize=(10, 4), sharey=True)
    for ax, alpha in zip(axes, (0, 1)):
        dist = EnsembleDist.from_kelvin(alpha)
        cols, header = [w], ["omega_rad_per_ps"]
        for i, method in enumerate(("SQ", "BR")):
            q = charge_noise(ensemble_curve(w, dist, bath, temp, method, workers=args.workers), dist)
            cols.append(q.values)
            header.append(f"sq_over_e2_{method.lower()}")
            for sign, style in ((1, "-"), (-1, "--")):
                sel = np.sign(q.omegas) == sign
                ax.loglog(np.abs(q.omegas[sel]), q.values[sel], f"C{i}{style}",
                          label=f"{method} {'+' if sign > 0 else '-'}w")
        write_csv(out / f"fig4_alpha{alpha}.csv", header, list(zip(*cols)))
        ax.set(xlabel="|w| (rad/ps)", title=f"alpha = {alpha}")
        ax.legend(fontsize=8)
    axes[0].set_ylabel("S_Q / e^2 (ps)")
    fig.tight_layout()
    fig.savefig(out / "fig4.png", dpi=150)
    print(out / "fig4.png")


if __name__ == "__main__":
    main()
