"""Single-TLF spectra: spectator-qubit vs Bloch-Redfield.

Left panel: s_tlf at 40 mK for both methods over signed frequency.
Right panel: s_zz at 10, 20, 40 mK; the spectator curves share one
high-frequency tail while the Bloch-Redfield Lorentzians stay symmetric.
"""
import argparse
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from tlfnoise.bloch_redfield import br_rates, s_br_total, s_zz_br
from tlfnoise.ensemble import default_grid
from tlfnoise.spectator import s_components, s_tlf
from tlfnoise.units import KELVIN_TO_ANGFREQ, BathSpec, Temperature, kelvin_to_omega, make_tlf_kelvin


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="out/fig2.png")
    args = ap.parse_args()

    tlf = make_tlf_kelvin(0.0, 0.08)
    bath = BathSpec(6.25 / KELVIN_TO_ANGFREQ**2 / tlf.sin2, kelvin_to_omega(470.0))
    w = default_grid(1e-3 * tlf.omega_t, 1e2 * tlf.omega_t, 200)
    x = w / tlf.omega_t

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))
    t40 = Temperature(0.04)
    for sign, style in ((1, "-"), (-1, "--")):
        sel = np.sign(w) == sign
        ax1.loglog(np.abs(x[sel]), s_tlf(w[sel], tlf, bath, t40), "C0" + style,
                   label=f"spectator, {'+' if sign > 0 else '-'}w")
        ax1.loglog(np.abs(x[sel]), s_br_total(w[sel], tlf, br_rates(tlf, bath, t40)), "C1" + style,
                   label=f"Bloch-Redfield, {'+' if sign > 0 else '-'}w")
    ax1.set(xlabel="|w| / w_t", ylabel="s_tlf (ps)", title="T = 40 mK")
    ax1.legend(fontsize=8)

    pos = w[w > 0]
    for i, mk in enumerate((10, 20, 40)):
        temp = Temperature(mk * 1e-3)
        szz, _ = s_components(pos, tlf.epsilon, tlf.delta, bath, temp.beta)
        # Pure tunneling gives cos^2 = 0; s_zz is still the longitudinal correlator.
        ax2.loglog(pos / tlf.omega_t, szz, f"C{i}-", label=f"spectator {mk} mK")
        ax2.loglog(pos / tlf.omega_t, s_zz_br(pos, br_rates(tlf, bath, temp)), f"C{i}:",
                   label=f"Bloch-Redfield {mk} mK")
    ax2.set(xlabel="w / w_t", ylabel="s_zz (ps)")
    ax2.legend(fontsize=8)

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.tight_layout()
    fig.savefig(out, dpi=150)
    print(out)


if __name__ == "__main__":
    main()
