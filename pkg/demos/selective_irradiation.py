#!/usr/bin/env python3
"""Dose-selective irradiation of a two-region transmissivity map.

With a single pass (N = 1) the absorbed dose in a pixel is just 1 - eta, so
nearly opaque and nearly transparent regions absorb in proportion.  Tuning
the chain so its absorption peak sits on the target transmissivity
concentrates the dose there instead.  The script builds a synthetic map with
a high-transmissivity feature on a low-transmissivity background, plans the
exposure, and compares the selectivity against the single-pass baseline.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mzchain import (
    TransmissivityMap,
    direct_selectivity,
    save_dose_csv,
    save_dose_pgm,
    selective_plan,
)


def build_map(size, feature_eta, background_eta):
    values = np.full((size, size), background_eta)
    yy, xx = np.mgrid[0:size, 0:size]
    disc = (yy - size / 2 + 0.5) ** 2 + (xx - size / 2 + 0.5) ** 2 <= (size / 4) ** 2
    values[disc] = feature_eta
    return TransmissivityMap(values)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--size", type=int, default=16)
    parser.add_argument("--feature-eta", type=float, default=0.95)
    parser.add_argument("--background-eta", type=float, default=0.5)
    parser.add_argument("--n-max", type=int, default=200)
    parser.add_argument("--out-dir", default="demo_output")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    tmap = build_map(args.size, args.feature_eta, args.background_eta)
    plan, dose, selectivity = selective_plan(tmap, args.feature_eta, args.n_max)
    direct = direct_selectivity(tmap, args.feature_eta)

    print(f"{args.size}x{args.size} map: feature eta = {args.feature_eta:g},"
          f" background eta = {args.background_eta:g}")
    print(f"tuned chain: N = {plan.n_steps}, phi = {plan.phi:.6f}"
          f" (peak at eta = {plan.achieved_eta_max:.4f})")
    print(f"selectivity (dose in feature / dose outside): {selectivity:.3f}")
    print(f"single-pass baseline selectivity            : {direct:.3f}")
    print(f"improvement factor                          : {selectivity / direct:.1f}x")

    in_feature = np.abs(tmap.values - args.feature_eta) <= 0.02
    print(f"mean dose in feature : {dose.values[in_feature].mean():.4f}")
    print(f"mean dose outside    : {dose.values[~in_feature].mean():.4f}")

    csv_path = out_dir / "dose_map.csv"
    pgm_path = out_dir / "dose_map.pgm"
    save_dose_csv(dose, csv_path)
    save_dose_pgm(dose, pgm_path)
    print(f"dose map written to {csv_path} and {pgm_path}")

    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.6))
    im0 = axes[0].imshow(tmap.values, cmap="gray", vmin=0, vmax=1)
    axes[0].set_title("transmissivity map")
    fig.colorbar(im0, ax=axes[0], fraction=0.046)
    im1 = axes[1].imshow(1.0 - tmap.values, cmap="inferno")
    axes[1].set_title("single-pass dose (1 - eta)")
    fig.colorbar(im1, ax=axes[1], fraction=0.046)
    im2 = axes[2].imshow(dose.values, cmap="inferno")
    axes[2].set_title(f"tuned dose (N = {plan.n_steps})")
    fig.colorbar(im2, ax=axes[2], fraction=0.046)
    for ax in axes:
        ax.set_xticks([])
        ax.set_yticks([])
    fig.tight_layout()
    target = out_dir / "selective_irradiation.png"
    fig.savefig(target, dpi=150)
    print(f"figure written to {target}")


if __name__ == "__main__":
    main()
