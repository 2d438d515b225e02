"""Modified-DH forward kinematics and the virtual-joint skin-unit placement.

The modified (Craig) DH transform used throughout is

    T = RotX(alpha) @ TransX(a) @ RotZ(theta_offset + q) @ TransZ(d)

A skin unit is located relative to its host joint by two DH-compatible
transforms: a fixed "virtual joint" (d_v, theta_v, 0, 0) followed by the
SU transform (d_su, theta_su, a_su, alpha_su).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, JointLimitError
from .se3 import RigidTransform, normalize_angle, rot_x, rot_z

# Parameter names split by what they influence in the SU transform.
ROTATIONAL_PARAMS = ("theta_v", "theta_su", "alpha_su")
TRANSLATIONAL_PARAMS = ("d_v", "d_su", "a_su")


@dataclass(frozen=True)
class DhRow:
    """One joint's DH parameters plus joint limits."""

    d: float
    theta_offset: float
    a: float
    alpha: float
    joint_limits: tuple = (-np.pi, np.pi)
    velocity_limit: float = 2.0

    def __post_init__(self):
        for name in ("d", "theta_offset", "a", "alpha"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"DhRow.{name} must be finite")
        object.__setattr__(self, "theta_offset", normalize_angle(self.theta_offset))
        object.__setattr__(self, "alpha", normalize_angle(self.alpha))
        lo, hi = self.joint_limits
        if not lo < hi:
            raise InvalidArgumentError(f"joint_limits must satisfy min < max, got {self.joint_limits}")
        object.__setattr__(self, "joint_limits", (float(lo), float(hi)))
        if self.velocity_limit <= 0:
            raise InvalidArgumentError("velocity_limit must be positive")


@dataclass(frozen=True)
class KinematicChain:
    """Serial chain of revolute joints, rooted at a world->base transform."""

    rows: tuple
    base_frame: RigidTransform = field(default_factory=RigidTransform.identity)

    def __post_init__(self):
        rows = tuple(self.rows)
        if len(rows) < 2:
            raise InvalidArgumentError("chain must have at least 2 joints")
        object.__setattr__(self, "rows", rows)

    @property
    def n_joints(self) -> int:
        return len(self.rows)

    def check_limits(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape != (self.n_joints,):
            raise InvalidArgumentError(
                f"expected {self.n_joints} joint angles, got shape {q.shape}"
            )
        for i, row in enumerate(self.rows):
            lo, hi = row.joint_limits
            if not (lo - 1e-12 <= q[i] <= hi + 1e-12):
                raise JointLimitError(i + 1, q[i], (lo, hi))
        return q


@dataclass(frozen=True)
class SuParams:
    """The six optimizable parameters placing skin unit k on host joint n.

    Ordering follows the two DH tuples: (d_v, theta_v) for the virtual
    joint, (d_su, theta_su, a_su, alpha_su) for the SU itself.
    host_joint is 1-indexed into the chain.
    """

    d_v: float
    theta_v: float
    d_su: float
    theta_su: float
    a_su: float
    alpha_su: float
    host_joint: int

    def __post_init__(self):
        for name in ("d_v", "theta_v", "d_su", "theta_su", "a_su", "alpha_su"):
            if not np.isfinite(getattr(self, name)):
                raise InvalidArgumentError(f"SuParams.{name} must be finite")
        object.__setattr__(self, "theta_v", normalize_angle(self.theta_v))
        object.__setattr__(self, "theta_su", normalize_angle(self.theta_su))
        object.__setattr__(self, "alpha_su", normalize_angle(self.alpha_su))
        if int(self.host_joint) < 1:
            raise InvalidArgumentError("host_joint must be >= 1")
        object.__setattr__(self, "host_joint", int(self.host_joint))

    def rotational(self) -> np.ndarray:
        return np.array([self.theta_v, self.theta_su, self.alpha_su])

    def translational(self) -> np.ndarray:
        return np.array([self.d_v, self.d_su, self.a_su])

    def replace(self, **kwargs) -> "SuParams":
        fields = dict(
            d_v=self.d_v, theta_v=self.theta_v, d_su=self.d_su,
            theta_su=self.theta_su, a_su=self.a_su, alpha_su=self.alpha_su,
            host_joint=self.host_joint,
        )
        fields.update(kwargs)
        return SuParams(**fields)


@dataclass(frozen=True)
class JointState:
    """Joint angles, velocities and accelerations for the whole chain."""

    q: np.ndarray
    qdot: np.ndarray
    qddot: np.ndarray

    def __post_init__(self):
        q = np.asarray(self.q, dtype=float)
        qd = np.asarray(self.qdot, dtype=float)
        qdd = np.asarray(self.qddot, dtype=float)
        if not (q.shape == qd.shape == qdd.shape):
            raise InvalidArgumentError("q, qdot, qddot must have equal shapes")
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "qdot", qd)
        object.__setattr__(self, "qddot", qdd)

    @classmethod
    def at_rest(cls, q) -> "JointState":
        q = np.asarray(q, dtype=float)
        return cls(q, np.zeros_like(q), np.zeros_like(q))


def _dh(d: float, theta: float, a: float, alpha: float) -> RigidTransform:
    # Closed form of RotX(alpha) @ TransX(a) @ RotZ(theta) @ TransZ(d).
    R = rot_x(alpha) @ rot_z(theta)
    sa, ca = np.sin(alpha), np.cos(alpha)
    t = np.array([a, -d * sa, d * ca])
    return RigidTransform(R, t)


def dh_transform(row: DhRow, q: float) -> RigidTransform:
    """Transform of one joint at angle q under the modified DH convention."""
    if not np.isfinite(q):
        raise InvalidArgumentError(f"joint angle must be finite, got {q}")
    return _dh(row.d, row.theta_offset + q, row.a, row.alpha)


def chain_fk(chain: KinematicChain, q) -> list:
    """World poses of every joint frame: [bT_1, ..., bT_N]."""
    q = chain.check_limits(q)
    out = []
    T = chain.base_frame
    for row, qi in zip(chain.rows, q):
        T = T @ dh_transform(row, qi)
        out.append(T)
    return out


def su_transform(phi: SuParams) -> RigidTransform:
    """Host-joint-to-SU transform, the product of the two DH matrices."""
    T_v = _dh(phi.d_v, phi.theta_v, 0.0, 0.0)
    T_su = _dh(phi.d_su, phi.theta_su, phi.a_su, phi.alpha_su)
    return T_v @ T_su


def su_world_pose(chain: KinematicChain, phi: SuParams, q) -> RigidTransform:
    """World pose of the SU at configuration q."""
    if phi.host_joint > chain.n_joints:
        raise InvalidArgumentError(
            f"host_joint {phi.host_joint} exceeds chain length {chain.n_joints}"
        )
    return chain_fk(chain, q)[phi.host_joint - 1] @ su_transform(phi)
