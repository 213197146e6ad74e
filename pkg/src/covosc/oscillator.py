"""Covariant oscillator wave functions in space-time and momentum-energy form.

Rest-frame states are products h_n(z) h_m(t) of normalized Hermite
functions. A boost with rapidity eta evaluates the rest-frame state at the
inversely boosted argument, which for the ground state is the light-cone
squeeze exp{-(e^{-2 eta} u^2 + e^{2 eta} v^2)/2}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kinematics import (
    MomentumPoint,
    Rapidity,
    SpaceTimePoint,
    boost_momentum,
    boost_point,
    momentum_to_light_cone,
    to_light_cone,
)

NORM = 1.0 / np.sqrt(np.pi)
MAX_HERMITE_ORDER = 200


@dataclass(frozen=True)
class OscillatorState:
    """Quantum numbers of the rest-frame modes plus the frame rapidity.

    ``n_u`` counts excitations of the longitudinal (z) rest mode and
    ``n_t`` those of the time-like mode. Time-like excitations are allowed
    for basis completeness only; physical states have ``n_t = 0``.
    """

    n_u: int = 0
    n_t: int = 0
    eta: Rapidity = 0.0

    def __post_init__(self):
        for name in ("n_u", "n_t"):
            n = getattr(self, name)
            if int(n) != n or n < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {n}")
            if n > MAX_HERMITE_ORDER:
                raise ValueError(f"{name}={n} exceeds supported order {MAX_HERMITE_ORDER}")
        if not np.isfinite(self.eta):
            raise ValueError(f"rapidity must be finite, got {self.eta}")

    @property
    def is_ground(self) -> bool:
        return self.n_u == 0 and self.n_t == 0

    @property
    def max_order(self) -> int:
        return max(self.n_u, self.n_t)

    def boosted(self, eta: Rapidity) -> "OscillatorState":
        return OscillatorState(self.n_u, self.n_t, self.eta + eta)


# The momentum-energy wave function carries the same labels.
MomentumState = OscillatorState


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Normalized Hermite functions h_0..h_{n_max} stacked along axis 0.

    Uses the normalized three-term recurrence
    h_{k+1} = sqrt(2/(k+1)) x h_k - sqrt(k/(k+1)) h_{k-1},
    which stays finite well past the order where H_n(x) overflows.
    """
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * x * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def hermite_function(n: int, x) -> np.ndarray:
    if n < 0:
        raise ValueError(f"Hermite order must be non-negative, got {n}")
    return hermite_functions(n, x)[n]


def eval_ground(p: SpaceTimePoint) -> np.ndarray:
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return NORM * np.exp(-0.5 * (z * z + t * t))


def eval_boosted(p: SpaceTimePoint, eta: Rapidity) -> np.ndarray:
    if eta == 0:
        return eval_ground(p)
    lc = to_light_cone(p)
    return NORM * np.exp(-0.5 * (np.exp(-2 * eta) * lc.u**2 + np.exp(2 * eta) * lc.v**2))


def eval_excited(s: OscillatorState, p: SpaceTimePoint) -> np.ndarray:
    if s.is_ground:
        return eval_boosted(p, s.eta)
    if s.n_t > 0:
        warnings.warn(
            "time-like excitation requested; kept for basis completeness only",
            stacklevel=2,
        )
    rest = boost_point(p, -s.eta)
    return hermite_function(s.n_u, rest.z) * hermite_function(s.n_t, rest.t)


def eval_momentum(s: MomentumState, q: MomentumPoint) -> np.ndarray:
    """Momentum-energy amplitude.

    For excited states the constant phase i^(n_u + n_t) of the Fourier
    transform is dropped so the amplitude stays real.
    """
    if s.is_ground:
        lc = momentum_to_light_cone(q)
        return NORM * np.exp(
            -0.5 * (np.exp(-2 * s.eta) * lc.q_u**2 + np.exp(2 * s.eta) * lc.q_v**2)
        )
    rest = boost_momentum(q, s.eta)
    return hermite_function(s.n_u, rest.q_z) * hermite_function(s.n_t, rest.q_0)


def space_time_amplitude(s: OscillatorState) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    """``f(z, t)`` closure over ``s`` for grid sampling (no time-like warning)."""
    return lambda z, t: _quiet(eval_excited, s, SpaceTimePoint(z, t))


def momentum_amplitude(s: MomentumState) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    return lambda qz, q0: eval_momentum(s, MomentumPoint(qz, q0))


def _quiet(fn, *args):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return fn(*args)


def invariant_solution(p: SpaceTimePoint) -> np.ndarray:
    """Boost-invariant but non-normalizable form exp{-(z^2 - t^2)/2}."""
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return np.exp(-0.5 * (z * z - t * t))


def covariant_solution(p: SpaceTimePoint) -> np.ndarray:
    """Unnormalized rest-frame Gaussian exp{-(z^2 + t^2)/2}."""
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return np.exp(-0.5 * (z * z + t * t))
