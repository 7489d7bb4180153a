"""Element-by-element reference propagation with a per-stage absorption ledger.

Every stage is spelled out optically: first splitter, phase shifter, second
splitter, then the object modeled as a beam splitter coupling the R beam to
an unmonitored vacuum port.  No matrix powers, no shortcuts — this module
exists to validate the closed-form machinery in :mod:`mzchain.chain`, and it
keeps intensity books: what went in equals what comes out plus what the
object swallowed, stage by stage.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

from .chain import ChainConfig, ModePair, ObjectModel

__all__ = ["PropagationLedger", "elementary_step", "propagate_componentwise"]

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


def elementary_step(phi: float, obj: ObjectModel, modes: ModePair) -> tuple[ModePair, float]:
    """One full stage on explicit components; returns (output modes, absorbed intensity).

    The first splitter sends (a, b) to c' = (a+b)/sqrt(2) and d = (b-a)/sqrt(2);
    the stage phase e^{i phi} rides the c arm.  The second splitter is traversed
    in the reversed orientation, a' = (c-d)/sqrt(2) and b' = (c+d)/sqrt(2): that
    is the unique wiring of the two 50-50 relations for which the zero-phase
    stage is an identity rather than a swap, and the composite then equals
    step_matrix(phi, obj) exactly, global phase included (pinned by unit test).
    The object then attenuates the b output, beta -> sqrt(eta) e^{i theta} beta,
    removing (1-eta)|beta|^2 of intensity; the vacuum-coupled output is never
    materialized, only its intensity is recorded.
    """
    a, b = modes.alpha, modes.beta
    c_prime = (a + b) * _INV_SQRT2
    d = (b - a) * _INV_SQRT2
    c = cmath.exp(1j * phi) * c_prime
    a_out = (c - d) * _INV_SQRT2
    b_mz = (c + d) * _INV_SQRT2
    absorbed = (1.0 - obj.eta) * abs(b_mz) ** 2
    b_out = math.sqrt(obj.eta) * cmath.exp(1j * obj.theta) * b_mz
    return ModePair(a_out, b_out), absorbed


@dataclass
class PropagationLedger:
    """Chain output plus the stage-resolved absorption record."""

    final: ModePair
    absorbed_per_step: list[float]
    total_absorbed: float = field(init=False)

    def __post_init__(self) -> None:
        self.total_absorbed = float(sum(self.absorbed_per_step))


def propagate_componentwise(config: ChainConfig, obj: ObjectModel) -> PropagationLedger:
    """N applications of elementary_step starting from (alpha_0, 0).

    The ledger satisfies |alpha_0|^2 = |alpha_N|^2 + |beta_N|^2 + total_absorbed
    up to roundoff, and total_absorbed/|alpha_0|^2 equals the chain's effective
    absorption.
    """
    modes = ModePair(config.input_amplitude, 0.0 + 0.0j)
    absorbed = []
    for _ in range(config.n_steps):
        modes, a_k = elementary_step(config.phi, obj, modes)
        absorbed.append(a_k)
    return PropagationLedger(final=modes, absorbed_per_step=absorbed)
