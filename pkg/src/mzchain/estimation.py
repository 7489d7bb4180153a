"""Noisy absorption measurements and the steep-slope feedback estimator.

A direct transmissivity measurement (single pass, N=1, phi=pi) has
uncertainty sigma_r because r = 1 - eta there.  Interferometric chains can
make |dr/deta| much larger than 1 on a branch around the current estimate,
so re-measuring with a well-chosen (N, phi=pi/N) and inverting r on that
branch divides the uncertainty by the local slope.  The feedback loop below
repeats that, keeping per-round and cumulative dose accounts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chain import ChainConfig, effective_absorption

__all__ = [
    "MeasurementModel",
    "EstimationRound",
    "EstimationTrace",
    "NonMonotoneBranchError",
    "simulate_measurement",
    "local_slope",
    "invert_on_branch",
    "feedback_estimate",
    "SLOPE_STEP",
    "N_CAP",
]

SLOPE_STEP = 1e-6          # finite-difference step for local_slope
BISECTION_TOL = 1e-12      # interval width at which bisection stops
N_CAP = 500                # largest chain length the round selection considers
_WINDOW_SAMPLES = 65       # grid used to check monotonicity on a branch
_DEGENERATE_WIDTH = 1e-12  # below this a branch is a point, trivially monotone


class NonMonotoneBranchError(ValueError):
    """The r(eta) branch handed to inversion changes direction inside."""


@dataclass
class MeasurementModel:
    """Additive Gaussian noise on r, clamped to [0, 1], from a seeded stream.

    Two models built with the same seed reproduce the same outcome sequence
    bit for bit.  Monte Carlo replicas should derive per-replica seeds
    (e.g. base + replica index) so runs stay order-independent.
    """

    sigma_r: float
    seed: int = 0
    _rng: np.random.Generator = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma_r) and self.sigma_r >= 0.0):
            raise ValueError("sigma_r must be a finite non-negative real")
        self._rng = np.random.default_rng(self.seed)

    def observe(self, r_true: float) -> float:
        """One noisy reading of r, clamped into [0, 1]."""
        g = self._rng.standard_normal()
        return float(min(max(r_true + g * self.sigma_r, 0.0), 1.0))


@dataclass
class EstimationRound:
    n_steps: int
    phi: float
    r_measured: float
    eta_estimate: float
    eta_uncertainty: float
    dose_this_round: float
    flagged: bool = False


@dataclass
class EstimationTrace:
    iterations: list[EstimationRound]
    total_dose: float = field(init=False)

    def __post_init__(self) -> None:
        self.total_dose = float(sum(it.dose_this_round for it in self.iterations))

    @property
    def final_estimate(self) -> float:
        return self.iterations[-1].eta_estimate

    @property
    def final_uncertainty(self) -> float:
        return self.iterations[-1].eta_uncertainty


def simulate_measurement(true_eta: float, config: ChainConfig, model: MeasurementModel) -> float:
    """clamp(r_true + g*sigma_r, 0, 1) with g drawn from the model's stream."""
    r_true = effective_absorption(config.phi, config.n_steps, true_eta)
    return model.observe(r_true)


def local_slope(config: ChainConfig, eta: float) -> float:
    """dr/deta by central finite difference (step 1e-6), one-sided at the domain edges."""
    lo = max(eta - SLOPE_STEP, 0.0)
    hi = min(eta + SLOPE_STEP, 1.0)
    r_lo = effective_absorption(config.phi, config.n_steps, lo)
    r_hi = effective_absorption(config.phi, config.n_steps, hi)
    return (r_hi - r_lo) / (hi - lo)


def _branch_is_monotone(phi: float, n_steps: int, lo: float, hi: float) -> bool:
    if hi - lo < _DEGENERATE_WIDTH:
        return True
    r = effective_absorption(phi, n_steps, np.linspace(lo, hi, _WINDOW_SAMPLES))
    d = np.diff(r)
    return bool(np.all(d > 0.0) or np.all(d < 0.0))


def invert_on_branch(config: ChainConfig, r_measured: float, branch) -> float:
    """Bisection for the eta on [eta_lo, eta_hi] whose r matches r_measured.

    The branch must be strictly monotone (checked by sampling; a direction
    change raises NonMonotoneBranchError).  r_measured is clamped into the
    branch's r-range first, so the result always lies inside the branch.
    """
    lo, hi = float(branch[0]), float(branch[1])
    if not 0.0 <= lo <= hi <= 1.0:
        raise ValueError("branch must satisfy 0 <= eta_lo <= eta_hi <= 1")
    if hi - lo < _DEGENERATE_WIDTH:
        return 0.5 * (lo + hi)
    phi, n = config.phi, config.n_steps
    if not _branch_is_monotone(phi, n, lo, hi):
        raise NonMonotoneBranchError(
            f"r is not monotone on [{lo:.6g}, {hi:.6g}] for N={n}, phi={phi:.6g}"
        )
    r_lo = effective_absorption(phi, n, lo)
    r_hi = effective_absorption(phi, n, hi)
    increasing = r_hi > r_lo
    r_target = min(max(r_measured, min(r_lo, r_hi)), max(r_lo, r_hi))
    a, b = lo, hi
    while b - a > BISECTION_TOL:
        mid = 0.5 * (a + b)
        if (effective_absorption(phi, n, mid) < r_target) == increasing:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


def _select_round_config(eta_est: float, sigma: float, n_cap: int):
    """Chain length with the steepest r branch at eta_est that stays monotone
    over the 3-sigma identifiability window.

    Returns (n, branch_lo, branch_hi, flagged).  If every candidate has its
    peak inside the window, falls back to the steepest candidate restricted
    to the largest monotone sub-branch containing the estimate, and flags it.
    """
    lo = max(eta_est - 3.0 * sigma, 0.0)
    hi = min(eta_est + 3.0 * sigma, 1.0)
    ns = np.arange(2, n_cap + 1)
    phis = np.pi / ns
    h_lo = max(eta_est - SLOPE_STEP, 0.0)
    h_hi = min(eta_est + SLOPE_STEP, 1.0)
    slopes = (
        effective_absorption(phis, ns, h_hi) - effective_absorption(phis, ns, h_lo)
    ) / (h_hi - h_lo)
    order = np.argsort(-np.abs(slopes))
    for j in order:
        n = int(ns[j])
        if _branch_is_monotone(math.pi / n, n, lo, hi):
            return n, lo, hi, False
    # no candidate is monotone across the whole window
    n = int(ns[order[0]])
    sub_lo, sub_hi = _largest_monotone_subbranch(math.pi / n, n, lo, hi, eta_est)
    return n, sub_lo, sub_hi, True


def _largest_monotone_subbranch(phi, n_steps, lo, hi, eta_est):
    etas = np.linspace(lo, hi, _WINDOW_SAMPLES)
    signs = np.sign(np.diff(effective_absorption(phi, n_steps, etas)))
    runs = []  # (start_idx, end_idx) over etas, inclusive
    start = 0
    for k in range(1, len(signs)):
        if signs[k] != signs[k - 1]:
            runs.append((start, k))
            start = k
    runs.append((start, len(signs)))
    containing = [run for run in runs if etas[run[0]] <= eta_est <= etas[run[1]]]
    pool = containing if containing else runs
    best = max(pool, key=lambda run: etas[run[1]] - etas[run[0]])
    return float(etas[best[0]]), float(etas[best[1]])


def feedback_estimate(
    true_eta: float,
    model: MeasurementModel,
    max_rounds: int,
    target_uncertainty: float = 0.0,
    n_cap: int = N_CAP,
) -> EstimationTrace:
    """Iteratively refine an estimate of true_eta with steep-slope re-measurements.

    Round 0 is the direct configuration (N=1, phi=pi): eta_hat = 1 - r with
    uncertainty sigma_0 = sigma_r.  Every later round picks the chain length
    in {2..n_cap} maximizing |dr/deta| at the current estimate subject to r
    being monotone on the 3-sigma identifiability window, measures, inverts
    on that branch, and sets sigma_k = sigma_r / |slope at the new estimate|.
    max_rounds counts these refinement rounds (the direct round is always
    taken).  The loop stops early once sigma <= target_uncertainty (when
    target_uncertainty > 0), or when a round fails to shrink the uncertainty,
    in which case that round is discarded so the recorded uncertainties never
    increase.  dose_this_round is the intensity fraction the object really
    absorbed (evaluated at true_eta) in units of the input intensity.
    """
    if not 0.0 < true_eta <= 1.0:
        raise ValueError("true_eta must lie in (0, 1]")
    if max_rounds < 1:
        raise ValueError("max_rounds must be >= 1")

    direct = ChainConfig(math.pi, 1)
    r0 = simulate_measurement(true_eta, direct, model)
    eta_hat = min(max(1.0 - r0, 0.0), 1.0)
    sigma = model.sigma_r
    rounds = [
        EstimationRound(
            n_steps=1,
            phi=math.pi,
            r_measured=r0,
            eta_estimate=eta_hat,
            eta_uncertainty=sigma,
            dose_this_round=effective_absorption(math.pi, 1, true_eta),
        )
    ]

    for _ in range(max_rounds):
        if target_uncertainty > 0.0 and sigma <= target_uncertainty:
            break
        n, b_lo, b_hi, flagged = _select_round_config(eta_hat, sigma, n_cap)
        config = ChainConfig.pi_over_n(n)
        r_meas = simulate_measurement(true_eta, config, model)
        eta_new = invert_on_branch(config, r_meas, (b_lo, b_hi))
        slope_new = local_slope(config, eta_new)
        if model.sigma_r == 0.0:
            sigma_new = 0.0
        elif slope_new == 0.0:
            sigma_new = math.inf
        else:
            sigma_new = model.sigma_r / abs(slope_new)
        if sigma_new > sigma:
            break  # no admissible config improves on the current uncertainty
        eta_hat, sigma = eta_new, sigma_new
        rounds.append(
            EstimationRound(
                n_steps=n,
                phi=config.phi,
                r_measured=r_meas,
                eta_estimate=eta_hat,
                eta_uncertainty=sigma,
                dose_this_round=effective_absorption(config.phi, n, true_eta),
                flagged=flagged,
            )
        )

    return EstimationTrace(iterations=rounds)
