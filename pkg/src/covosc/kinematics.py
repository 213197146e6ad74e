"""Relative-coordinate kinematics: light-cone variables and boosts along z.

Units are natural (hbar = c = 1, oscillator constant absorbed). Every
function accepts scalars or numpy arrays in the point fields and works
elementwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import ArrayLike

SQRT2 = np.sqrt(2.0)

# Boost parameter. Plain floats are used throughout; composition is addition.
Rapidity = float


@dataclass(frozen=True)
class SpaceTimePoint:
    """Quark-quark separation: longitudinal ``z`` and time-like ``t``."""

    z: ArrayLike
    t: ArrayLike


@dataclass(frozen=True)
class LightConePoint:
    u: ArrayLike
    v: ArrayLike


@dataclass(frozen=True)
class MomentumPoint:
    """Momentum separation: longitudinal ``q_z`` and energy ``q_0``."""

    q_z: ArrayLike
    q_0: ArrayLike


@dataclass(frozen=True)
class LightConeMomentum:
    q_u: ArrayLike
    q_v: ArrayLike


def rapidity_from_velocity(beta: float) -> Rapidity:
    if not -1.0 < beta < 1.0:
        raise ValueError(f"velocity must satisfy |beta| < 1, got {beta}")
    return float(np.arctanh(beta))


def velocity_from_rapidity(eta: Rapidity) -> float:
    return float(np.tanh(eta))


def to_light_cone(p: SpaceTimePoint) -> LightConePoint:
    """u = (z + t)/sqrt(2), v = (z - t)/sqrt(2)."""
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return LightConePoint((z + t) / SQRT2, (z - t) / SQRT2)


def from_light_cone(p: LightConePoint) -> SpaceTimePoint:
    u = np.asarray(p.u, dtype=float)
    v = np.asarray(p.v, dtype=float)
    return SpaceTimePoint((u + v) / SQRT2, (u - v) / SQRT2)


def boost_matrix(eta: Rapidity) -> np.ndarray:
    """2x2 boost acting on the column vector (z, t)."""
    ch, sh = np.cosh(eta), np.sinh(eta)
    return np.array([[ch, sh], [sh, ch]])


def boost_point(p: SpaceTimePoint, eta: Rapidity) -> SpaceTimePoint:
    ch, sh = np.cosh(eta), np.sinh(eta)
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return SpaceTimePoint(ch * z + sh * t, sh * z + ch * t)


def squeeze(p: LightConePoint, eta: Rapidity) -> LightConePoint:
    """The boost in light-cone form: u stretched by e^eta, v shrunk by e^-eta."""
    return LightConePoint(
        np.exp(eta) * np.asarray(p.u, dtype=float),
        np.exp(-eta) * np.asarray(p.v, dtype=float),
    )


def momentum_to_light_cone(q: MomentumPoint) -> LightConeMomentum:
    """q_u = (q_0 - q_z)/sqrt(2), q_v = (q_0 + q_z)/sqrt(2).

    Note the sign of q_z in ``q_u`` is opposite to that of z in ``u``.
    """
    qz = np.asarray(q.q_z, dtype=float)
    q0 = np.asarray(q.q_0, dtype=float)
    return LightConeMomentum((q0 - qz) / SQRT2, (q0 + qz) / SQRT2)


def momentum_from_light_cone(q: LightConeMomentum) -> MomentumPoint:
    qu = np.asarray(q.q_u, dtype=float)
    qv = np.asarray(q.q_v, dtype=float)
    return MomentumPoint((qv - qu) / SQRT2, (qu + qv) / SQRT2)


def boost_momentum(q: MomentumPoint, eta: Rapidity) -> MomentumPoint:
    # same matrix as for (z, t); in light-cone form q_v -> e^eta q_v, q_u -> e^-eta q_u
    ch, sh = np.cosh(eta), np.sinh(eta)
    qz = np.asarray(q.q_z, dtype=float)
    q0 = np.asarray(q.q_0, dtype=float)
    return MomentumPoint(ch * qz + sh * q0, sh * qz + ch * q0)


def interval(p: SpaceTimePoint) -> np.ndarray:
    """Invariant z^2 - t^2 (equals 2uv)."""
    z = np.asarray(p.z, dtype=float)
    t = np.asarray(p.t, dtype=float)
    return z * z - t * t
