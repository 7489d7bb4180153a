"""Command-line front end.

Subcommands cover the full API surface: single-shot propagation, absorption
curves and peak tables, peak tuning, feedback estimation, and selective
irradiation of transmissivity maps.  All tabular output is CSV with a header
row, numbers fixed at 12 significant digits, and every run with identical
flags and seed is byte-identical.  Exit codes: 0 success, 2 usage error,
3 domain error (unreachable target, file that fails to parse, and the like).
"""

from __future__ import annotations

import argparse
import math
import sys

from .chain import ChainConfig, ObjectModel, absorbed_fraction, propagate_iterative
from .curves import DEFAULT_GRID_POINTS, absorption_curve, peak_table, tune_for_target
from .estimation import MeasurementModel, feedback_estimate
from .imaging import (
    direct_selectivity,
    irradiate,
    load_map,
    save_dose_csv,
    save_dose_pgm,
    selective_plan,
)

__all__ = ["main", "build_parser"]


def _fmt(x: float) -> str:
    s = f"{float(x):.12g}"
    return "0" if s == "-0" else s


def _csv(header: str, rows) -> str:
    lines = [header]
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def cmd_propagate(args) -> str:
    config = ChainConfig(args.phi, args.n)
    obj = ObjectModel(args.eta, args.theta)
    out = propagate_iterative(config, obj)
    r = absorbed_fraction(config, obj)
    row = (out.alpha.real, out.alpha.imag, out.beta.real, out.beta.imag, r)
    return _csv("alpha_re,alpha_im,beta_re,beta_im,r", [row])


def cmd_curve(args) -> str:
    phi = math.pi / args.n if args.pi_over_n else args.phi
    profile = absorption_curve(phi, args.n, args.points)
    return _csv("eta,r", zip(profile.etas, profile.r))


def cmd_peaks(args) -> str:
    rows = (
        (n, s.eta_max, s.r_max, s.eta_av, s.fwhm, s.rms_width)
        for n, s in peak_table(args.n_min, args.n_max)
    )
    return _csv("N,eta_max,r_max,eta_av,fwhm,rms", rows)


def cmd_tune(args) -> str:
    result = tune_for_target(args.target, args.n_max)
    row = (result.n_steps, result.phi, result.achieved_eta_max, result.residual)
    return _csv("N,phi,achieved,residual", [row])


def cmd_estimate(args) -> str:
    model = MeasurementModel(sigma_r=args.sigma_r, seed=args.seed)
    trace = feedback_estimate(args.true_eta, model, max_rounds=args.rounds)
    rows = (
        (
            k,
            it.n_steps,
            it.phi,
            it.r_measured,
            it.eta_estimate,
            it.eta_uncertainty,
            it.dose_this_round,
        )
        for k, it in enumerate(trace.iterations)
    )
    return _csv(
        "round,n_steps,phi,r_measured,eta_estimate,eta_uncertainty,dose", rows
    )


def cmd_irradiate(args) -> int:
    tmap = load_map(args.map)
    tune, dose, selectivity = selective_plan(tmap, args.target, args.n_max)
    if args.out.lower().endswith(".pgm"):
        save_dose_pgm(dose, args.out)
    else:
        save_dose_csv(dose, args.out)
    direct = direct_selectivity(tmap, args.target)
    print(
        f"N={tune.n_steps} phi={_fmt(tune.phi)} "
        f"selectivity={_fmt(selectivity)} direct={_fmt(direct)}",
        file=sys.stderr,
    )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mzchain",
        description="Interferometer-chain absorption: propagate, tune, estimate, irradiate.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("propagate", help="one chain pass; emits amplitudes and r")
    p.add_argument("--n", type=int, required=True, help="number of chain steps")
    p.add_argument("--phi", type=float, required=True, help="phase per step (radians)")
    p.add_argument("--eta", type=float, required=True, help="object transmissivity")
    p.add_argument("--theta", type=float, default=0.0, help="object phase (radians)")
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.set_defaults(handler=cmd_propagate)

    p = sub.add_parser("curve", help="r as a function of eta at fixed (N, phi)")
    p.add_argument("--n", type=int, required=True, help="number of chain steps")
    grp = p.add_mutually_exclusive_group(required=True)
    grp.add_argument("--phi", type=float, help="phase per step (radians)")
    grp.add_argument(
        "--pi-over-n", action="store_true", help="use the canonical phase pi/N"
    )
    p.add_argument(
        "--points", type=int, default=DEFAULT_GRID_POINTS, help="grid resolution"
    )
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.set_defaults(handler=cmd_curve)

    p = sub.add_parser("peaks", help="peak location and width per N at phi=pi/N")
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.set_defaults(handler=cmd_peaks)

    p = sub.add_parser("tune", help="pick N so the absorption peak hits a target eta")
    p.add_argument("--target", type=float, required=True, help="desired peak location")
    p.add_argument("--n-max", type=int, required=True, help="largest N to consider")
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.set_defaults(handler=cmd_tune)

    p = sub.add_parser("estimate", help="feedback estimation of a transmissivity")
    p.add_argument("--true-eta", type=float, required=True)
    p.add_argument("--sigma-r", type=float, required=True, help="noise level on r")
    p.add_argument("--rounds", type=int, required=True, help="refinement rounds")
    p.add_argument("--seed", type=int, required=True, help="pseudo-random seed")
    p.add_argument("--out", help="write CSV here instead of standard output")
    p.set_defaults(handler=cmd_estimate)

    p = sub.add_parser("irradiate", help="tuned dose map for a transmissivity map")
    p.add_argument("--map", required=True, help="input map (.csv or .pgm)")
    p.add_argument("--target", type=float, required=True, help="transmissivity to hit")
    p.add_argument("--n-max", type=int, required=True, help="largest N to consider")
    p.add_argument(
        "--out", required=True, help="dose map path (.pgm for P2, CSV otherwise)"
    )
    p.set_defaults(handler=cmd_irradiate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the diagnostic
        return int(exc.code or 0)
    try:
        result = args.handler(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    if isinstance(result, int):
        return result
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
