"""1/f -> 1/f^2 crossover frequency against temperature.

For each alpha and temperature the ensemble spectrum is computed on the
crossover grid, the crossover is extracted from the detected power-law
windows and compared with the closed form. Temperatures where no window
is found are reported and left out of the fit.
"""
import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tlfnoise.ensemble import (
    EnsembleDist,
    WindowDetectionError,
    crossover_analytic,
    crossover_numeric,
    default_grid,
    ensemble_curve,
)
from tlfnoise.units import BathSpec, Temperature, kelvin_to_omega


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fig5.png")
    ap.add_argument("--slope-tol", type=float, default=0.05)
    ap.add_argument("--workers", type=int, default=None)
    args = ap.parse_args()

    bath = BathSpec(0.047, kelvin_to_omega(470.0))
    grid = default_grid(1e-17, 1e-2, 301, signed=False)
    temps = np.array([0.01, 0.02, 0.04, 0.08])
    t_fine = np.geomspace(temps[0], temps[-1], 50)

    fig, ax = plt.subplots(figsize=(5, 4))
    for alpha in (0, 1):
        dist = EnsembleDist.from_kelvin(alpha)
        found = []
        for t in temps:
            temp = Temperature(t)
            curve = ensemble_curve(grid, dist, bath, temp, workers=args.workers)
            analytic = crossover_analytic(temp, bath, alpha)
            try:
                star = crossover_numeric(curve, args.slope_tol).omega_star
            except WindowDetectionError as exc:
                print(f"alpha={alpha} T={t * 1e3:g} mK: {exc}")
                continue
            found.append((t, star))
            print(f"alpha={alpha} T={t * 1e3:g} mK: numeric {star:.4e}, closed form {analytic:.4e} "
                  f"({star / analytic - 1:+.1%})")
        if found:
            ts, stars = np.array(found).T
            ax.loglog(ts * 1e3, stars, f"C{alpha}o", label=f"numeric, alpha={alpha}")
        ax.loglog(t_fine * 1e3, [crossover_analytic(Temperature(t), bath, alpha) for t in t_fine],
                  f"C{alpha}-", label=f"closed form, alpha={alpha}")
    ax.set(xlabel="T (mK)", ylabel="w* (rad/ps)")
    ax.legend(fontsize=8)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
