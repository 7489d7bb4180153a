"""Absorption-curve characterization and peak tuning.

For fixed (phi, N) the effective absorption r(eta) is a smooth single-peaked
curve; this module samples it on a uniform grid, extracts peak location,
centroid and widths, and solves the inverse problem: pick (N, phi = pi/N)
so the peak lands on a requested transmissivity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import effective_absorption

__all__ = [
    "AbsorptionProfile",
    "PeakSummary",
    "TuneResult",
    "EmptyPeakError",
    "UnreachableTargetError",
    "absorption_curve",
    "peak_summary",
    "peak_table",
    "tune_for_target",
    "DEFAULT_GRID_POINTS",
]

DEFAULT_GRID_POINTS = 2001


class EmptyPeakError(ValueError):
    """The profile carries no absorption anywhere; there is no peak to summarize."""


class UnreachableTargetError(ValueError):
    """No N up to n_max places the absorption peak at the requested eta.

    Carries the best achievable peak position and the N that attains it.
    """

    def __init__(self, eta_target: float, best_n: int, best_eta_max: float):
        self.eta_target = eta_target
        self.best_n = best_n
        self.best_eta_max = best_eta_max
        super().__init__(
            f"target eta_max={eta_target:.6g} unreachable: "
            f"best achievable is {best_eta_max:.6g} at N={best_n}"
        )


@dataclass
class AbsorptionProfile:
    """r(eta) sampled on a uniform grid over [0, 1] for one (phi, N)."""

    phi: float
    n_steps: int
    etas: np.ndarray
    r: np.ndarray

    def __post_init__(self) -> None:
        self.etas = np.asarray(self.etas, dtype=float)
        self.r = np.asarray(self.r, dtype=float)
        if self.etas.shape != self.r.shape or self.etas.ndim != 1:
            raise ValueError("etas and r must be 1-d arrays of equal length")
        if not np.all(np.diff(self.etas) > 0):
            raise ValueError("eta grid must be strictly increasing")
        if self.etas[0] != 0.0 or self.etas[-1] != 1.0:
            raise ValueError("eta grid must cover [0, 1] inclusive")
        if np.any(self.r < 0.0) or np.any(self.r > 1.0):
            raise ValueError("r values must lie in [0, 1]")
        if self.r[-1] > 1e-12:
            raise ValueError("r at eta=1 must vanish (<= 1e-12)")

    @property
    def samples(self):
        """Ordered (eta, r) pairs."""
        return list(zip(self.etas.tolist(), self.r.tolist()))


@dataclass
class PeakSummary:
    eta_max: float
    r_max: float
    eta_av: float
    fwhm: float
    rms_width: float


@dataclass
class TuneResult:
    n_steps: int
    phi: float
    achieved_eta_max: float
    residual: float


def absorption_curve(phi: float, n_steps: int, grid_points: int = DEFAULT_GRID_POINTS) -> AbsorptionProfile:
    """Sample r(eta) on a uniform grid of ``grid_points`` points including both endpoints."""
    if grid_points < 3:
        raise ValueError("grid_points must be >= 3")
    etas = np.linspace(0.0, 1.0, int(grid_points))
    r = effective_absorption(phi, n_steps, etas)
    return AbsorptionProfile(phi=phi, n_steps=int(n_steps), etas=etas, r=r)


def _parabolic_refine(etas: np.ndarray, r: np.ndarray, i: int) -> tuple[float, float]:
    # vertex of the parabola through the three samples bracketing the argmax
    y0, y1, y2 = r[i - 1], r[i], r[i + 1]
    denom = y0 - 2.0 * y1 + y2
    if denom >= 0.0:  # flat or non-concave bracket: keep the grid point
        return float(etas[i]), float(y1)
    off = 0.5 * (y0 - y2) / denom
    h = etas[i] - etas[i - 1]
    return float(etas[i] + off * h), float(y1 - 0.25 * (y0 - y2) * off)


def _half_crossings(etas: np.ndarray, r: np.ndarray, level: float) -> tuple[float, float]:
    # outermost crossings of `level`, linearly interpolated; clamped to the
    # domain edge when the curve is still above the level there
    above = np.nonzero(r >= level)[0]
    i_lo, i_hi = int(above[0]), int(above[-1])
    if i_lo == 0:
        left = etas[0]
    else:
        r0, r1 = r[i_lo - 1], r[i_lo]
        left = etas[i_lo - 1] + (level - r0) / (r1 - r0) * (etas[i_lo] - etas[i_lo - 1])
    if i_hi == len(etas) - 1:
        right = etas[-1]
    else:
        r0, r1 = r[i_hi], r[i_hi + 1]
        right = etas[i_hi] + (r0 - level) / (r0 - r1) * (etas[i_hi + 1] - etas[i_hi])
    return float(left), float(right)


def peak_summary(profile: AbsorptionProfile) -> PeakSummary:
    """Peak location (parabolically refined), r-weighted centroid, FWHM and RMS width."""
    etas, r = profile.etas, profile.r
    r_total = float(np.sum(r))
    if not np.max(r) > 0.0:
        raise EmptyPeakError("profile is identically zero; no absorption peak exists")
    i = int(np.argmax(r))
    if 0 < i < len(etas) - 1:
        eta_max, r_max = _parabolic_refine(etas, r, i)
    else:
        eta_max, r_max = float(etas[i]), float(r[i])
    eta_av = float(np.sum(etas * r) / r_total)
    left, right = _half_crossings(etas, r, 0.5 * r_max)
    second_moment = float(np.sum(etas * etas * r) / r_total)
    rms_width = math.sqrt(max(second_moment - eta_av * eta_av, 0.0))
    return PeakSummary(
        eta_max=eta_max, r_max=r_max, eta_av=eta_av, fwhm=right - left, rms_width=rms_width
    )


def peak_table(
    n_min: int, n_max: int, grid_points: int = DEFAULT_GRID_POINTS
) -> list[tuple[int, PeakSummary]]:
    """Peak summaries of the phi = pi/N profiles for every N in [n_min, n_max]."""
    if not 2 <= n_min <= n_max:
        raise ValueError("need 2 <= n_min <= n_max")
    out = []
    for n in range(int(n_min), int(n_max) + 1):
        out.append((n, peak_summary(absorption_curve(math.pi / n, n, grid_points))))
    return out


def tune_for_target(
    eta_target: float, n_max: int, grid_points: int = DEFAULT_GRID_POINTS
) -> TuneResult:
    """Pick N (phi = pi/N) whose absorption peak sits closest to eta_target.

    The peak position is strictly increasing in N, so the residual
    |eta_max(N) - eta_target| is V-shaped in N: start from the inverted
    interpolation guess N0 = round(1/(1 - eta_target^{1/4})) and walk to the
    local (= global) minimum.  Only discrete peak positions exist, so the
    residual can be large for small targets; it is reported, never hidden.
    """
    if not 0.0 < eta_target < 1.0:
        raise ValueError("eta_target must lie in (0, 1)")
    n_max = int(n_max)
    if n_max < 2:
        raise ValueError("n_max must be >= 2")

    cache: dict[int, float] = {}

    def eta_max_of(n: int) -> float:
        if n not in cache:
            cache[n] = peak_summary(absorption_curve(math.pi / n, n, grid_points)).eta_max
        return cache[n]

    best_reach = eta_max_of(n_max)
    if eta_target > best_reach:
        raise UnreachableTargetError(eta_target, n_max, best_reach)

    root = 1.0 - eta_target**0.25
    n0 = n_max if root <= 0.0 else int(round(1.0 / root))
    n = min(max(n0, 2), n_max)

    def residual(k: int) -> float:
        return abs(eta_max_of(k) - eta_target)

    while True:
        here = residual(n)
        down = residual(n - 1) if n - 1 >= 2 else math.inf
        up = residual(n + 1) if n + 1 <= n_max else math.inf
        if down < here:
            n -= 1
        elif up < here:
            n += 1
        else:
            break

    achieved = eta_max_of(n)
    return TuneResult(
        n_steps=n, phi=math.pi / n, achieved_eta_max=achieved, residual=abs(achieved - eta_target)
    )
