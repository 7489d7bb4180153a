"""Forward model for a chain of Mach-Zehnder stages with a lossy object in one arm.

Each stage is a balanced interferometer with phase ``phi`` whose R-arm output
passes through a partially transmitting object (intensity transmissivity
``eta``, optional uniform phase ``theta``) before entering the next stage.
Coherent amplitudes evolve under a single 2x2 complex step matrix, so the
whole chain is a matrix power applied to the input ``(alpha_0, 0)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ModePair",
    "ChainConfig",
    "ObjectModel",
    "step_matrix",
    "propagate_iterative",
    "propagate_spectral",
    "absorbed_fraction",
    "effective_absorption",
    "closed_form_transparent",
    "closed_form_opaque",
    "SPECTRAL_GAP_TOL",
]

TWO_PI = 2.0 * math.pi

# Relative eigenvalue gap below which the matrix power is evaluated by plain
# repeated multiplication instead of the spectral formula.
SPECTRAL_GAP_TOL = 1e-8


@dataclass(frozen=True)
class ModePair:
    """Complex amplitudes of the two beams: ``alpha`` in the L arm, ``beta`` in the R arm."""

    alpha: complex
    beta: complex

    def __post_init__(self) -> None:
        if not (cmath.isfinite(self.alpha) and cmath.isfinite(self.beta)):
            raise ValueError("mode amplitudes must be finite")

    @property
    def total_intensity(self) -> float:
        return abs(self.alpha) ** 2 + abs(self.beta) ** 2


@dataclass(frozen=True)
class ObjectModel:
    """Partially transmitting object.

    ``eta`` is the single-pass intensity transmissivity in [0, 1]; ``theta``
    is a uniform phase added to the transmitted beam (radians).
    """

    eta: float
    theta: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eta) and 0.0 <= self.eta <= 1.0):
            raise ValueError(f"eta must lie in [0, 1], got {self.eta!r}")
        if not math.isfinite(self.theta):
            raise ValueError("theta must be finite")


@dataclass(frozen=True)
class ChainConfig:
    """Chain parameters: stage phase ``phi`` (radians), stage count, input amplitude.

    ``phi`` is stored reduced to (0, 2*pi).  ``phi = 0`` turns every stage
    into a bare attenuator and is almost always a caller bug, so it is
    rejected unless ``allow_degenerate=True``.
    """

    phi: float
    n_steps: int
    input_amplitude: complex = 1.0 + 0.0j
    allow_degenerate: bool = False

    def __post_init__(self) -> None:
        if not math.isfinite(self.phi):
            raise ValueError("phi must be finite")
        phi = self.phi % TWO_PI
        if phi == 0.0 and not self.allow_degenerate:
            raise ValueError(
                "phi = 0 (mod 2*pi) defeats the interferometric mechanism; "
                "pass allow_degenerate=True if this is intentional"
            )
        object.__setattr__(self, "phi", phi)
        n = self.n_steps
        if int(n) != n or n < 1:
            raise ValueError(f"n_steps must be a positive integer, got {n!r}")
        object.__setattr__(self, "n_steps", int(n))
        amp = complex(self.input_amplitude)
        if not cmath.isfinite(amp):
            raise ValueError("input_amplitude must be finite")
        object.__setattr__(self, "input_amplitude", amp)

    @classmethod
    def pi_over_n(cls, n_steps: int, input_amplitude: complex = 1.0 + 0.0j) -> "ChainConfig":
        """The canonical tuning phi = pi/N (full transfer at eta = 1)."""
        return cls(math.pi / n_steps, n_steps, input_amplitude)


def step_matrix(phi: float, obj: ObjectModel) -> np.ndarray:
    """Transfer matrix of one stage (interferometer plus object on the R output).

    Parameters
    ----------
    phi : float
        Stage phase in radians.
    obj : ObjectModel
        Object transmissivity and phase.

    Returns
    -------
    numpy.ndarray
        Complex 2x2 matrix ``e^{i phi/2} [[cos(phi/2), i sin(phi/2)],
        [i sqrt(eta) e^{i theta} sin(phi/2), sqrt(eta) e^{i theta} cos(phi/2)]]``.
        Unitary with determinant ``e^{i phi}`` when eta = 1 and theta = 0;
        largest singular value <= 1 for every eta in [0, 1].
    """
    if not math.isfinite(phi):
        raise ValueError("phi must be finite")
    c = math.cos(phi / 2.0)
    s = math.sin(phi / 2.0)
    pref = cmath.exp(0.5j * phi)
    mu = math.sqrt(obj.eta) * cmath.exp(1j * obj.theta)
    return pref * np.array([[c, 1j * s], [1j * mu * s, mu * c]], dtype=complex)


def propagate_iterative(config: ChainConfig, obj: ObjectModel) -> ModePair:
    """Propagate (alpha_0, 0) through N stages by N successive matrix-vector products."""
    m = step_matrix(config.phi, obj)
    v = np.array([config.input_amplitude, 0.0 + 0.0j])
    for _ in range(config.n_steps):
        v = m @ v
    return ModePair(complex(v[0]), complex(v[1]))


# --- spectral path -----------------------------------------------------------
#
# S^n = q_n S - det(S) q_{n-1} I with q_k = (l1^k - l2^k)/(l1 - l2).
# The divided difference q_k is evaluated through complex log1p/expm1 so it
# stays accurate when the eigenvalues nearly coincide; below SPECTRAL_GAP_TOL
# (relative gap) even that is abandoned for plain repeated multiplication.


def _clog1p(z):
    z = np.asarray(z, dtype=complex)
    a, b = z.real, z.imag
    return 0.5 * np.log1p(2.0 * a + a * a + b * b) + 1j * np.arctan2(b, 1.0 + a)


def _cexpm1(w):
    w = np.asarray(w, dtype=complex)
    a, b = w.real, w.imag
    return (np.expm1(a) * np.cos(b) - 2.0 * np.sin(b / 2.0) ** 2) + 1j * (np.exp(a) * np.sin(b))


def _iterate_unit(phi: float, n: int, eta: float, theta: float) -> tuple[complex, complex]:
    m = step_matrix(phi, ObjectModel(eta, theta))
    a, b = 1.0 + 0.0j, 0.0 + 0.0j
    for _ in range(n):
        a, b = m[0, 0] * a + m[0, 1] * b, m[1, 0] * a + m[1, 1] * b
    return a, b


def _unit_amplitudes(phi, n_steps, eta, theta=0.0):
    """(alpha_N, beta_N) for unit input; broadcasts over array arguments.

    Spectral evaluation with the documented iterative fallback applied
    elementwise wherever the eigenvalue gap is below SPECTRAL_GAP_TOL.
    """
    out_shape = np.broadcast_shapes(
        np.shape(phi), np.shape(n_steps), np.shape(eta), np.shape(theta)
    )
    phi_a, n_a, eta_a, th_a = np.broadcast_arrays(
        np.atleast_1d(np.asarray(phi, dtype=float)),
        np.atleast_1d(np.asarray(n_steps)),
        np.atleast_1d(np.asarray(eta, dtype=float)),
        np.atleast_1d(np.asarray(theta, dtype=float)),
    )
    n_a = n_a.astype(np.int64)

    c = np.cos(phi_a / 2.0)
    s = np.sin(phi_a / 2.0)
    pref = np.exp(0.5j * phi_a)
    mu = np.sqrt(eta_a) * np.exp(1j * th_a)
    s00 = pref * c
    s10 = 1j * pref * mu * s
    s11 = pref * mu * c
    tr = s00 + s11
    det = pref * pref * mu

    with np.errstate(all="ignore"):
        delta = np.sqrt(tr * tr - 4.0 * det)
        l1 = 0.5 * (tr + delta)
        l2 = 0.5 * (tr - delta)
        swap = np.abs(l2) > np.abs(l1)
        lb = np.where(swap, l2, l1)  # larger-modulus eigenvalue
        d = np.where(swap, -delta, delta)  # lb - (other eigenvalue)
        big = np.abs(lb)
        fallback = (np.abs(delta) <= SPECTRAL_GAP_TOL * big) | (big == 0.0)

        safe_lb = np.where(big > 0.0, lb, 1.0)
        x = -d / safe_lb  # (l_small - l_big)/l_big
        u = 1.0 + x  # eigenvalue ratio l_small / l_big
        ratio_zero = u == 0.0  # the smaller eigenvalue is numerically 0
        xs = np.where(ratio_zero, 0.0, x)
        # the log1p form is accurate for x near 0 (almost-degenerate pair) but
        # cancels catastrophically for x near -1, where 1 + x is itself exact;
        # switch to the direct logarithm of the ratio there
        log_ratio = np.where(
            np.abs(u) < 0.5,
            np.log(np.where(ratio_zero, 1.0, u)),
            _clog1p(xs),
        )
        safe_d = np.where(d == 0.0, 1.0, d)
        q_n = -(lb**n_a) * _cexpm1(n_a * log_ratio) / safe_d
        q_nm1 = -(lb ** (n_a - 1)) * _cexpm1((n_a - 1) * log_ratio) / safe_d
        q_n = np.where(ratio_zero, lb ** (n_a - 1), q_n)
        q_nm1 = np.where(
            ratio_zero, np.where(n_a >= 2, lb ** np.maximum(n_a - 2, 0), 0.0), q_nm1
        )
        alpha = q_n * s00 - det * q_nm1
        beta = q_n * s10

    if np.any(fallback):
        for idx in np.argwhere(fallback):
            i = tuple(idx)
            alpha[i], beta[i] = _iterate_unit(
                float(phi_a[i]), int(n_a[i]), float(eta_a[i]), float(th_a[i])
            )

    # On the unitary boundary the chain has an exact closed form; the generic
    # eigenvalue arithmetic drifts off the unit circle by ~n*eps there, so use
    # the closed form to keep |alpha|^2 + |beta|^2 = 1 to machine precision.
    unitary = (eta_a == 1.0) & (th_a == 0.0)
    if np.any(unitary):
        half = 0.5 * n_a[unitary] * phi_a[unitary]
        ph = np.exp(1j * half)
        alpha[unitary] = ph * np.cos(half)
        beta[unitary] = 1j * ph * np.sin(half)

    alpha = alpha.reshape(out_shape)
    beta = beta.reshape(out_shape)
    if out_shape == ():
        return complex(alpha), complex(beta)
    return alpha, beta


def propagate_spectral(config: ChainConfig, obj: ObjectModel) -> ModePair:
    """Propagate via the eigendecomposition of the step matrix.

    Returns the same ModePair as :func:`propagate_iterative`; near eigenvalue
    degeneracy (relative gap below SPECTRAL_GAP_TOL) it falls back to the
    iterative product, which covers the defective case as well.
    """
    a, b = _unit_amplitudes(config.phi, config.n_steps, obj.eta, obj.theta)
    a0 = config.input_amplitude
    return ModePair(a0 * a, a0 * b)


def effective_absorption(phi, n_steps, eta, theta=0.0):
    """Absorbed intensity fraction r(phi, N, eta); broadcasts over array arguments.

    r = 1 - (|alpha_N|^2 + |beta_N|^2) for unit input, clipped to [0, 1]
    against roundoff.  This is the vectorized workhorse behind
    :func:`absorbed_fraction` and the curve/imaging modules.
    """
    eta_arr = np.asarray(eta, dtype=float)
    if np.any(eta_arr < 0.0) or np.any(eta_arr > 1.0):
        raise ValueError("eta must lie in [0, 1]")
    if np.any(np.asarray(n_steps) < 1):
        raise ValueError("n_steps must be >= 1")
    a, b = _unit_amplitudes(phi, n_steps, eta_arr, theta)
    r = 1.0 - (np.abs(a) ** 2 + np.abs(b) ** 2)
    if np.ndim(r) == 0:
        return float(min(max(float(r), 0.0), 1.0))
    return np.clip(r, 0.0, 1.0)


def absorbed_fraction(config: ChainConfig, obj: ObjectModel) -> float:
    """Fraction of the input intensity absorbed by the object over the chain.

    Independent of the modulus and phase of the input amplitude: it is
    computed from the unit-input amplitudes directly.
    """
    return effective_absorption(config.phi, config.n_steps, obj.eta, obj.theta)


def closed_form_transparent(config: ChainConfig) -> ModePair:
    """Closed-form chain output for a fully transparent object (eta = 1)."""
    half = 0.5 * config.n_steps * config.phi
    a0 = config.input_amplitude
    rot = cmath.exp(1j * half)
    return ModePair(a0 * rot * math.cos(half), 1j * a0 * rot * math.sin(half))


def closed_form_opaque(config: ChainConfig) -> ModePair:
    """Closed-form chain output for a fully opaque object (eta = 0).

    The R beam is removed at every stage, so only the L amplitude survives,
    shrunk by cos(phi/2) per stage; nothing exits the R port.
    """
    n = config.n_steps
    a0 = config.input_amplitude
    rot = cmath.exp(1j * 0.5 * n * config.phi)
    return ModePair(a0 * rot * math.cos(config.phi / 2.0) ** n, 0.0 + 0.0j)
