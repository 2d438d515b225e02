"""Accelerometer-based pose calibration for robot-mounted skin units."""

from .accel import GravityModel, centripetal_accel, tangential_accel_numeric, total_accel
from .calibration import (
    CalibConfig,
    CalibrationResult,
    calibrate,
    calibrate_monolithic,
    dynamic_error,
    optimize_orientation,
    optimize_position,
    static_error,
)
from .dataset import Dataset, default_chain, load_dataset, save_dataset
from .kinematics import (
    DhRow,
    JointState,
    KinematicChain,
    SuParams,
    chain_fk,
    dh_transform,
    su_transform,
    su_world_pose,
)
from .metrics import aggregate_report, position_error, quaternion_distance
from .se3 import RigidTransform
from .simulator import (
    ExcitationProfile,
    NoiseModel,
    generate_dataset,
    place_sus,
    sample_poses,
    simulate_dynamic,
    simulate_static,
)

__version__ = "0.1.0"

__all__ = [
    "CalibConfig",
    "CalibrationResult",
    "Dataset",
    "DhRow",
    "ExcitationProfile",
    "GravityModel",
    "JointState",
    "KinematicChain",
    "NoiseModel",
    "RigidTransform",
    "SuParams",
    "aggregate_report",
    "calibrate",
    "calibrate_monolithic",
    "centripetal_accel",
    "chain_fk",
    "default_chain",
    "dh_transform",
    "dynamic_error",
    "generate_dataset",
    "load_dataset",
    "optimize_orientation",
    "optimize_position",
    "place_sus",
    "position_error",
    "quaternion_distance",
    "sample_poses",
    "save_dataset",
    "simulate_dynamic",
    "simulate_static",
    "static_error",
    "su_transform",
    "su_world_pose",
    "tangential_accel_numeric",
    "total_accel",
]
