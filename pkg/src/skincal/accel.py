"""Predicted accelerometer reading of a skin unit.

The reading is the sum of three parts: gravity (rotated from the base
frame into the SU frame), centripetal acceleration and tangential
acceleration of the single excited joint (rotated from that joint's
frame into the SU frame).  Sign convention: a resting, upright sensor
reads +g on its z axis.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError
from .kinematics import JointState, KinematicChain, SuParams, chain_fk, su_transform

STANDARD_GRAVITY = 9.81

Z_AXIS = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class AccelVector:
    """A 3-vector acceleration tagged with the frame it is expressed in."""

    a: np.ndarray
    frame: str = "base"

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        if a.shape != (3,) or not np.all(np.isfinite(a)):
            raise InvalidArgumentError("acceleration must be a finite 3-vector")
        object.__setattr__(self, "a", a)


@dataclass(frozen=True)
class GravityModel:
    """Gravity reaction vector in the base frame."""

    g_base: np.ndarray = field(default_factory=lambda: np.array([0.0, 0.0, STANDARD_GRAVITY]))

    def __post_init__(self):
        g = np.asarray(self.g_base, dtype=float)
        if g.shape != (3,) or not np.all(np.isfinite(g)):
            raise InvalidArgumentError("g_base must be a finite 3-vector")
        object.__setattr__(self, "g_base", g)

    @classmethod
    def from_magnitude(cls, g: float) -> "GravityModel":
        return cls(np.array([0.0, 0.0, float(g)]))

    @property
    def magnitude(self) -> float:
        return float(np.linalg.norm(self.g_base))


def centripetal_accel(qdot_n: float, r) -> np.ndarray:
    """q̇ x (q̇ x r) with the angular velocity (0, 0, qdot_n), in the joint frame."""
    r = np.asarray(r, dtype=float)
    if not (np.isfinite(qdot_n) and np.all(np.isfinite(r))):
        raise InvalidArgumentError("centripetal_accel requires finite inputs")
    omega = np.array([0.0, 0.0, float(qdot_n)])
    return np.cross(omega, np.cross(omega, r))


def tangential_accel_numeric(r_traj, h: float = 0.001) -> np.ndarray:
    """Tangential acceleration from a central second difference of r(t).

    The raw second difference carries a spurious centripetal component;
    it is removed by projecting onto the unit tangential direction
    (z x r, in the joint's rotation plane).
    """
    if h <= 0:
        raise InvalidArgumentError(f"step h must be positive, got {h}")
    r0 = np.asarray(r_traj(0.0), dtype=float)
    rp = np.asarray(r_traj(h), dtype=float)
    rm = np.asarray(r_traj(-h), dtype=float)
    raw = (rp + rm - 2.0 * r0) / (h * h)
    e_tan = np.cross(Z_AXIS, r0)
    norm = np.linalg.norm(e_tan)
    if norm < 1e-12:
        # r parallel to the joint axis: the true tangential component is zero.
        return np.zeros(3)
    e_tan /= norm
    return float(np.dot(raw, e_tan)) * e_tan


def total_accel(
    chain: KinematicChain,
    phi: SuParams,
    state: JointState,
    excited_joint: int | None,
    gravity: GravityModel,
) -> np.ndarray:
    """Predicted accelerometer reading of the SU, expressed in the SU frame.

    excited_joint is the 1-indexed joint currently moving, or None for a
    static pose.  A joint distal to the host exerts no acceleration on
    the SU and is rejected.
    """
    n = phi.host_joint
    fk = chain_fk(chain, state.q)
    bTk = fk[n - 1] @ su_transform(phi)
    reading = bTk.rotation.T @ gravity.g_base
    if excited_joint is None:
        return reading
    d = int(excited_joint)
    if d < 1 or d > n:
        raise InvalidArgumentError(
            f"excited joint {d} is not in [1, host_joint={n}]"
        )
    dTk = fk[d - 1].inverse() @ bTk
    r = dTk.translation
    a_cen = centripetal_accel(state.qdot[d - 1], r)
    a_tan = np.cross(np.array([0.0, 0.0, state.qddot[d - 1]]), r)
    return reading + dTk.rotation.T @ (a_cen + a_tan)
