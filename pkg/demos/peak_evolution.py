#!/usr/bin/env python3
"""How the absorption peak moves and narrows as the chain grows.

The peak location eta_max climbs toward 1 roughly like ((N-1)/N)^4 while the
r-weighted centroid eta_av lags behind it (the curve is asymmetric).  The
full width at half maximum is widest for mid-range peaks and shrinks near
both ends, whereas the RMS width barely moves across the whole range.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mzchain import peak_table


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n-max", type=int, default=100)
    parser.add_argument("--out-dir", default="demo_output")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    table = peak_table(2, args.n_max)
    ns = np.array([n for n, _ in table])
    eta_max = np.array([s.eta_max for _, s in table])
    eta_av = np.array([s.eta_av for _, s in table])
    fwhm = np.array([s.fwhm for _, s in table])
    rms = np.array([s.rms_width for _, s in table])
    interp = ((ns - 1) / ns) ** 4

    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.6))
    left.plot(ns, eta_max, "o", markersize=3, label=r"$\eta_{\max}$")
    left.plot(ns, eta_av, "s", markersize=3, label=r"$\eta_{\rm av}$")
    left.plot(ns, interp, "k--", linewidth=1, label=r"$((N-1)/N)^4$")
    left.set_xlabel("N")
    left.set_ylabel("peak position")
    left.legend()
    left.grid(alpha=0.3)

    right.plot(ns, fwhm, "o", markersize=3, label="FWHM")
    right.plot(ns, rms, "*", markersize=4, label="RMS width")
    right.set_xlabel("N")
    right.set_ylabel("width")
    right.legend()
    right.grid(alpha=0.3)

    fig.tight_layout()
    target = out_dir / "peak_evolution.png"
    fig.savefig(target, dpi=150)

    worst = np.max(np.abs(eta_max[1:] - interp[1:]))  # skip N=2
    n_widest = int(ns[np.argmax(fwhm)])
    print(f"peak position spans {eta_max[0]:.4f} .. {eta_max[-1]:.4f} for N in [2, {args.n_max}]")
    print(f"max deviation from the ((N-1)/N)^4 interpolation (N >= 3): {worst:.4f}")
    print(f"widest FWHM at N = {n_widest}; RMS width stays within "
          f"[{rms.min():.4f}, {rms.max():.4f}]")
    print(f"figure written to {target}")


if __name__ == "__main__":
    main()
