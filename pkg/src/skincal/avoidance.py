"""Obstacle-avoidance demo: exponential repulsion located via SU poses."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .se3 import RigidTransform

CUTOFF_MM = 500.0
SENSOR_RANGE_MM = 4000.0


@dataclass(frozen=True)
class ProximityReading:
    su_id: int
    distance_mm: float
    timestamp: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.distance_mm <= SENSOR_RANGE_MM:
            raise InvalidArgumentError(
                f"distance {self.distance_mm} mm outside sensor range [0, {SENSOR_RANGE_MM}]"
            )


def repulsive_magnitude(d_mm: float) -> float:
    """exp(-d/500) for d < 500 mm, 0 otherwise (discontinuity kept as defined)."""
    if d_mm < 0:
        raise InvalidArgumentError(f"distance must be nonnegative, got {d_mm}")
    if d_mm < CUTOFF_MM:
        return float(np.exp(-d_mm / CUTOFF_MM))
    return 0.0


def adjust_trajectory(velocity, reading: ProximityReading,
                      su_pose: RigidTransform) -> np.ndarray:
    """Add the repulsive term along the SU's sensing direction (its z axis
    in world frame)."""
    v = np.asarray(velocity, dtype=float)
    if v.shape != (3,):
        raise InvalidArgumentError("velocity must be a 3-vector")
    beta = repulsive_magnitude(reading.distance_mm)
    normal = su_pose.rotation[:, 2]
    return v + beta * normal
