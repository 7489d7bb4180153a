"""Coherent light in a chain of Mach-Zehnder interferometers.

A partially transmitting object (transmissivity eta, phase theta) sits in
one arm of every stage.  The package propagates the two mode amplitudes
through N stages, exposes the effective absorption r(phi, N, eta) and its
tunable peak structure, and builds the two inverse procedures on top of it:
feedback estimation of an unknown transmissivity and selective irradiation
of inhomogeneous samples.
"""

from .chain import (
    SPECTRAL_GAP_TOL,
    ChainConfig,
    ModePair,
    ObjectModel,
    absorbed_fraction,
    closed_form_opaque,
    closed_form_transparent,
    effective_absorption,
    propagate_iterative,
    propagate_spectral,
    step_matrix,
)
from .componentwise import PropagationLedger, elementary_step, propagate_componentwise
from .curves import (
    DEFAULT_GRID_POINTS,
    AbsorptionProfile,
    EmptyPeakError,
    PeakSummary,
    TuneResult,
    UnreachableTargetError,
    absorption_curve,
    peak_summary,
    peak_table,
    tune_for_target,
)
from .estimation import (
    N_CAP,
    EstimationRound,
    EstimationTrace,
    MeasurementModel,
    NonMonotoneBranchError,
    feedback_estimate,
    invert_on_branch,
    local_slope,
    simulate_measurement,
)
from .imaging import (
    BAND_HALF_WIDTH,
    BandError,
    DoseMap,
    MapFormatError,
    TransmissivityMap,
    direct_selectivity,
    irradiate,
    load_map,
    save_dose_csv,
    save_dose_pgm,
    selective_plan,
)

__version__ = "0.1.0"

__all__ = [
    "SPECTRAL_GAP_TOL",
    "ChainConfig",
    "ModePair",
    "ObjectModel",
    "absorbed_fraction",
    "closed_form_opaque",
    "closed_form_transparent",
    "effective_absorption",
    "propagate_iterative",
    "propagate_spectral",
    "step_matrix",
    "PropagationLedger",
    "elementary_step",
    "propagate_componentwise",
    "DEFAULT_GRID_POINTS",
    "AbsorptionProfile",
    "EmptyPeakError",
    "PeakSummary",
    "TuneResult",
    "UnreachableTargetError",
    "absorption_curve",
    "peak_summary",
    "peak_table",
    "tune_for_target",
    "N_CAP",
    "EstimationRound",
    "EstimationTrace",
    "MeasurementModel",
    "NonMonotoneBranchError",
    "feedback_estimate",
    "invert_on_branch",
    "local_slope",
    "simulate_measurement",
    "BAND_HALF_WIDTH",
    "BandError",
    "DoseMap",
    "MapFormatError",
    "TransmissivityMap",
    "direct_selectivity",
    "irradiate",
    "load_map",
    "save_dose_csv",
    "save_dose_pgm",
    "selective_plan",
    "__version__",
]
