#!/usr/bin/env python3
"""Feedback estimation of an unknown transmissivity, round by round.

A direct absorption measurement pins eta down to about sigma_r.  Each
feedback round then re-measures with a chain whose r branch is steep at the
current estimate, dividing the uncertainty by the branch slope.  The script
shows one noisy run in detail, then a Monte Carlo sweep comparing the final
scatter against the direct baseline, including the absorbed dose spent.
"""

import argparse
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from mzchain import MeasurementModel, feedback_estimate


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--true-eta", type=float, default=0.95)
    parser.add_argument("--sigma-r", type=float, default=0.02)
    parser.add_argument("--rounds", type=int, default=3)
    parser.add_argument("--seeds", type=int, default=500)
    parser.add_argument("--out-dir", default="demo_output")
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    trace = feedback_estimate(
        args.true_eta, MeasurementModel(args.sigma_r, seed=1), max_rounds=args.rounds
    )
    print(f"single run, true eta = {args.true_eta:g}, sigma_r = {args.sigma_r:g}")
    print(f"{'round':>5} {'N':>4} {'r_meas':>9} {'estimate':>10} {'sigma':>10} {'dose':>8}")
    for k, it in enumerate(trace.iterations):
        print(
            f"{k:>5} {it.n_steps:>4} {it.r_measured:>9.5f} {it.eta_estimate:>10.6f}"
            f" {it.eta_uncertainty:>10.6f} {it.dose_this_round:>8.4f}"
        )
    print(f"total dose: {trace.total_dose:.4f} (units of the input intensity)\n")

    direct_err, feedback_err, doses = [], [], []
    for seed in range(args.seeds):
        t = feedback_estimate(
            args.true_eta, MeasurementModel(args.sigma_r, seed=seed), max_rounds=args.rounds
        )
        direct_err.append(t.iterations[0].eta_estimate - args.true_eta)
        feedback_err.append(t.final_estimate - args.true_eta)
        doses.append(t.total_dose)

    rms_direct = float(np.sqrt(np.mean(np.square(direct_err))))
    rms_feedback = float(np.sqrt(np.mean(np.square(feedback_err))))
    print(f"{args.seeds} Monte Carlo runs:")
    print(f"  direct-baseline RMS error : {rms_direct:.5f}")
    print(f"  feedback final RMS error  : {rms_feedback:.5f}")
    print(f"  mean total dose           : {np.mean(doses):.3f}")

    fig, ax = plt.subplots(figsize=(6, 4))
    bins = np.linspace(-3.5 * args.sigma_r, 3.5 * args.sigma_r, 41)
    ax.hist(direct_err, bins=bins, alpha=0.5, label=f"direct (RMS {rms_direct:.4f})")
    ax.hist(feedback_err, bins=bins, alpha=0.5, label=f"feedback (RMS {rms_feedback:.4f})")
    ax.set_xlabel(r"estimation error $\hat\eta - \eta$")
    ax.set_ylabel("runs")
    ax.legend()
    fig.tight_layout()
    target = out_dir / "feedback_errors.png"
    fig.savefig(target, dpi=150)
    print(f"figure written to {target}")


if __name__ == "__main__":
    main()
