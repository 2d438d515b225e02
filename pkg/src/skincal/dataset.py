"""Dataset container and its JSON wire format.

The dataset file is the contract between `skincal generate` and
`skincal calibrate`, and also the ingestion format for externally
recorded robot data.  Layout:

    {
      "header": {"gravity": 9.81, "sample_rate": 100.0,
                 "chain": [{"d", "theta_offset", "a", "alpha",
                            "joint_limits", "velocity_limit"}, ...],
                 "base_frame": {"rotation": 3x3, "translation": 3}},
      "ground_truth": [SuParams fields ...]          # optional
      "static_samples": [{"pose_id", "q", "accel": [K x 3]}, ...],
      "dynamic_samples": [{"pose_id", "excited_joint", "q",
                           "series": {"t", "q_d", "qdot_d", "qddot_d"},
                           "accel_series": [K x T x 3],
                           "selected": [K x 3], "selected_index"}, ...]
    }

Angles are radians, lengths meters, accelerations m/s^2.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from jsonschema import Draft202012Validator

from .accel import GravityModel
from .errors import DataIncompleteError, DatasetFormatError
from .kinematics import DhRow, KinematicChain, SuParams
from .se3 import RigidTransform

_VEC3 = {"type": "array", "items": {"type": "number"}, "minItems": 3, "maxItems": 3}
_NUMS = {"type": "array", "items": {"type": "number"}}

DATASET_SCHEMA = {
    "type": "object",
    "required": ["header", "static_samples", "dynamic_samples"],
    "properties": {
        "header": {
            "type": "object",
            "required": ["gravity", "sample_rate", "chain", "base_frame"],
            "properties": {
                "gravity": {"type": "number"},
                "sample_rate": {"type": "number"},
                "chain": {
                    "type": "array",
                    "minItems": 2,
                    "items": {
                        "type": "object",
                        "required": ["d", "theta_offset", "a", "alpha", "joint_limits"],
                        "properties": {
                            "d": {"type": "number"},
                            "theta_offset": {"type": "number"},
                            "a": {"type": "number"},
                            "alpha": {"type": "number"},
                            "joint_limits": {
                                "type": "array",
                                "items": {"type": "number"},
                                "minItems": 2,
                                "maxItems": 2,
                            },
                            "velocity_limit": {"type": "number"},
                        },
                    },
                },
                "base_frame": {
                    "type": "object",
                    "required": ["rotation", "translation"],
                    "properties": {
                        "rotation": {"type": "array", "items": _VEC3, "minItems": 3, "maxItems": 3},
                        "translation": _VEC3,
                    },
                },
            },
        },
        "ground_truth": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["d_v", "theta_v", "d_su", "theta_su", "a_su", "alpha_su", "host_joint"],
                "properties": {
                    "d_v": {"type": "number"},
                    "theta_v": {"type": "number"},
                    "d_su": {"type": "number"},
                    "theta_su": {"type": "number"},
                    "a_su": {"type": "number"},
                    "alpha_su": {"type": "number"},
                    "host_joint": {"type": "integer"},
                },
            },
        },
        "static_samples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pose_id", "q", "accel"],
                "properties": {
                    "pose_id": {"type": "integer"},
                    "q": _NUMS,
                    "accel": {"type": "array", "items": _VEC3},
                },
            },
        },
        "dynamic_samples": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["pose_id", "excited_joint", "q", "series",
                             "accel_series", "selected", "selected_index"],
                "properties": {
                    "pose_id": {"type": "integer"},
                    "excited_joint": {"type": "integer"},
                    "q": _NUMS,
                    "series": {
                        "type": "object",
                        "required": ["t", "q_d", "qdot_d", "qddot_d"],
                        "properties": {"t": _NUMS, "q_d": _NUMS, "qdot_d": _NUMS, "qddot_d": _NUMS},
                    },
                    "accel_series": {"type": "array", "items": {"type": "array", "items": _VEC3}},
                    "selected": {"type": "array", "items": _VEC3},
                    "selected_index": {"type": "integer"},
                },
            },
        },
    },
}

_validator = Draft202012Validator(DATASET_SCHEMA)


@dataclass(frozen=True)
class StaticSample:
    """Accelerometer readings for all SUs at one stationary pose."""

    pose_id: int
    q: np.ndarray
    accel: np.ndarray  # (K, 3), SU frames

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(self, "accel", np.asarray(self.accel, dtype=float))


@dataclass(frozen=True)
class DynamicSample:
    """One joint's sinusoidal excitation at one pose, for all SUs.

    q is the full joint configuration at the selected instant; selected
    holds the per-SU reading consumed by the dynamic error.
    """

    pose_id: int
    excited_joint: int
    q: np.ndarray
    series: dict  # arrays t, q_d, qdot_d, qddot_d, uniformly sampled
    accel_series: np.ndarray  # (K, T, 3)
    selected: np.ndarray  # (K, 3)
    selected_index: int

    def __post_init__(self):
        object.__setattr__(self, "q", np.asarray(self.q, dtype=float))
        object.__setattr__(
            self, "series", {k: np.asarray(v, dtype=float) for k, v in self.series.items()}
        )
        object.__setattr__(self, "accel_series", np.asarray(self.accel_series, dtype=float))
        object.__setattr__(self, "selected", np.asarray(self.selected, dtype=float))

    @property
    def qdot_d(self) -> float:
        return float(self.series["qdot_d"][self.selected_index])

    @property
    def qddot_d(self) -> float:
        return float(self.series["qddot_d"][self.selected_index])


@dataclass(frozen=True)
class StaticObs:
    """Per-SU view of one static sample."""

    pose_id: int
    q: np.ndarray
    accel: np.ndarray  # (3,)


@dataclass(frozen=True)
class DynamicObs:
    """Per-SU view of one dynamic sample at its selected instant."""

    pose_id: int
    excited_joint: int
    q: np.ndarray
    qdot_d: float
    qddot_d: float
    accel: np.ndarray  # (3,)


@dataclass
class Dataset:
    chain: KinematicChain
    gravity: GravityModel
    sample_rate: float
    static_samples: list
    dynamic_samples: list
    ground_truth: list | None = None
    su_count: int = field(init=False)

    def __post_init__(self):
        if self.static_samples:
            self.su_count = int(np.asarray(self.static_samples[0].accel).shape[0])
        elif self.ground_truth is not None:
            self.su_count = len(self.ground_truth)
        else:
            self.su_count = 0

    def static_obs(self, su_index: int) -> list:
        return [
            StaticObs(s.pose_id, s.q, s.accel[su_index]) for s in self.static_samples
        ]

    def dynamic_obs(self, su_index: int) -> list:
        return [
            DynamicObs(s.pose_id, s.excited_joint, s.q, s.qdot_d, s.qddot_d,
                       s.selected[su_index])
            for s in self.dynamic_samples
        ]


def default_chain() -> KinematicChain:
    """Representative all-revolute 7-DoF chain (modified-DH, meters/radians)."""
    rows = [
        DhRow(0.333, 0.0, 0.0, 0.0, (-2.8, 2.8), 2.1),
        DhRow(0.0, 0.0, 0.0, -np.pi / 2, (-1.7, 1.7), 2.1),
        DhRow(0.316, 0.0, 0.0, np.pi / 2, (-2.8, 2.8), 2.1),
        DhRow(0.0, 0.0, 0.0825, np.pi / 2, (-3.0, 0.1), 2.1),
        DhRow(0.384, 0.0, -0.0825, -np.pi / 2, (-2.8, 2.8), 2.6),
        DhRow(0.0, 0.0, 0.0, np.pi / 2, (-0.1, 3.7), 2.6),
        DhRow(0.0, 0.0, 0.088, np.pi / 2, (-2.8, 2.8), 2.6),
    ]
    return KinematicChain(tuple(rows))


def chain_to_json(chain: KinematicChain) -> dict:
    return {
        "chain": [
            {
                "d": row.d,
                "theta_offset": row.theta_offset,
                "a": row.a,
                "alpha": row.alpha,
                "joint_limits": list(row.joint_limits),
                "velocity_limit": row.velocity_limit,
            }
            for row in chain.rows
        ],
        "base_frame": {
            "rotation": chain.base_frame.rotation.tolist(),
            "translation": chain.base_frame.translation.tolist(),
        },
    }


def chain_from_json(obj: dict) -> KinematicChain:
    rows = tuple(
        DhRow(
            r["d"], r["theta_offset"], r["a"], r["alpha"],
            tuple(r["joint_limits"]), r.get("velocity_limit", 2.0),
        )
        for r in obj["chain"]
    )
    bf = obj.get("base_frame")
    base = (
        RigidTransform(np.array(bf["rotation"]), np.array(bf["translation"]))
        if bf
        else RigidTransform.identity()
    )
    return KinematicChain(rows, base)


def su_params_to_json(phi: SuParams) -> dict:
    return {
        "d_v": phi.d_v, "theta_v": phi.theta_v,
        "d_su": phi.d_su, "theta_su": phi.theta_su,
        "a_su": phi.a_su, "alpha_su": phi.alpha_su,
        "host_joint": phi.host_joint,
    }


def su_params_from_json(obj: dict) -> SuParams:
    return SuParams(
        obj["d_v"], obj["theta_v"], obj["d_su"], obj["theta_su"],
        obj["a_su"], obj["alpha_su"], obj["host_joint"],
    )


def dataset_to_json(ds: Dataset) -> dict:
    header = {"gravity": ds.gravity.magnitude, "sample_rate": ds.sample_rate}
    header.update(chain_to_json(ds.chain))
    out = {"header": header}
    if ds.ground_truth is not None:
        out["ground_truth"] = [su_params_to_json(p) for p in ds.ground_truth]
    out["static_samples"] = [
        {"pose_id": s.pose_id, "q": s.q.tolist(), "accel": s.accel.tolist()}
        for s in ds.static_samples
    ]
    out["dynamic_samples"] = [
        {
            "pose_id": s.pose_id,
            "excited_joint": s.excited_joint,
            "q": s.q.tolist(),
            "series": {k: v.tolist() for k, v in s.series.items()},
            "accel_series": s.accel_series.tolist(),
            "selected": s.selected.tolist(),
            "selected_index": s.selected_index,
        }
        for s in ds.dynamic_samples
    ]
    return out


def dataset_from_json(obj: dict) -> Dataset:
    errors = sorted(_validator.iter_errors(obj), key=lambda e: e.json_path)
    if errors:
        first = errors[0]
        raise DatasetFormatError(first.message, json_path=first.json_path)
    header = obj["header"]
    chain = chain_from_json(header)
    gt = obj.get("ground_truth")
    return Dataset(
        chain=chain,
        gravity=GravityModel.from_magnitude(header["gravity"]),
        sample_rate=float(header["sample_rate"]),
        static_samples=[
            StaticSample(s["pose_id"], s["q"], s["accel"]) for s in obj["static_samples"]
        ],
        dynamic_samples=[
            DynamicSample(
                s["pose_id"], s["excited_joint"], s["q"], s["series"],
                s["accel_series"], s["selected"], s["selected_index"],
            )
            for s in obj["dynamic_samples"]
        ],
        ground_truth=[su_params_from_json(p) for p in gt] if gt is not None else None,
    )


def save_dataset(ds: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(dataset_to_json(ds), fh)


def load_dataset(path) -> Dataset:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"not valid JSON: {exc}") from exc
    return dataset_from_json(obj)
