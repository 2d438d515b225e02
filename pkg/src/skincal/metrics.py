"""Accuracy metrics against ground truth and tabular reporting.

Estimated and true parameters are compared through the world pose at a
reference configuration, not parameter-by-parameter: several DH tuples
encode the same pose, so the parameters themselves are non-unique.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgumentError
from .kinematics import KinematicChain, SuParams, su_world_pose


@dataclass(frozen=True)
class SuErrorReport:
    su_id: int
    position_error: float  # cm
    quaternion_distance: float

    def __post_init__(self):
        if self.position_error < 0:
            raise InvalidArgumentError("position_error must be nonnegative")
        if not 0.0 <= self.quaternion_distance <= np.sqrt(2.0) + 1e-12:
            raise InvalidArgumentError("quaternion_distance must lie in [0, sqrt(2)]")


def _reference_q(chain: KinematicChain, reference_q):
    if reference_q is None:
        return np.zeros(chain.n_joints)
    return np.asarray(reference_q, dtype=float)


def _check_hosts(est: SuParams, truth: SuParams):
    if est.host_joint != truth.host_joint:
        raise InvalidArgumentError(
            f"host joints differ: estimate {est.host_joint}, truth {truth.host_joint}"
        )


def position_error(est: SuParams, truth: SuParams, chain: KinematicChain,
                   reference_q=None) -> float:
    """L2 distance between estimated and true world positions, in cm."""
    _check_hosts(est, truth)
    q = _reference_q(chain, reference_q)
    p_est = su_world_pose(chain, est, q).translation
    p_true = su_world_pose(chain, truth, q).translation
    return 100.0 * float(np.linalg.norm(p_est - p_true))


def quaternion_distance(est: SuParams, truth: SuParams, chain: KinematicChain,
                        reference_q=None) -> float:
    """Double-cover-safe L2 distance between the world orientations."""
    _check_hosts(est, truth)
    q = _reference_q(chain, reference_q)
    q_e = su_world_pose(chain, est, q).quaternion()
    q_t = su_world_pose(chain, truth, q).quaternion()
    return float(min(np.linalg.norm(q_e - q_t), np.linalg.norm(q_e + q_t)))


def evaluate_trial(estimates, truths, chain, reference_q=None) -> list:
    """Per-SU error reports for one calibration trial."""
    if len(estimates) != len(truths):
        raise InvalidArgumentError("estimate and truth counts differ")
    return [
        SuErrorReport(
            su_id=k,
            position_error=position_error(est, truth, chain, reference_q),
            quaternion_distance=quaternion_distance(est, truth, chain, reference_q),
        )
        for k, (est, truth) in enumerate(zip(estimates, truths))
    ]


def _mean_std(values) -> tuple:
    arr = np.asarray(values, dtype=float)
    mean = float(np.mean(arr))
    std = 0.0 if arr.size < 2 else float(np.std(arr, ddof=1))
    return mean, std


def aggregate_report(trials) -> dict:
    """Mean +/- sample std per SU and overall, across trials.

    trials is a list of trials, each a list of SuErrorReport (one per SU).
    """
    if not trials:
        raise InvalidArgumentError("at least one trial is required")
    n_sus = len(trials[0])
    per_su = []
    for k in range(n_sus):
        pos = [t[k].position_error for t in trials]
        quat = [t[k].quaternion_distance for t in trials]
        p_mean, p_std = _mean_std(pos)
        q_mean, q_std = _mean_std(quat)
        per_su.append(
            {
                "su_id": trials[0][k].su_id,
                "position_error_cm": {"mean": p_mean, "std": p_std},
                "quaternion_distance": {"mean": q_mean, "std": q_std},
            }
        )
    all_pos = [r.position_error for t in trials for r in t]
    all_quat = [r.quaternion_distance for t in trials for r in t]
    p_mean, p_std = _mean_std(all_pos)
    q_mean, q_std = _mean_std(all_quat)
    return {
        "n_trials": len(trials),
        "per_su": per_su,
        "overall": {
            "position_error_cm": {"mean": p_mean, "std": p_std},
            "quaternion_distance": {"mean": q_mean, "std": q_std},
        },
    }


def format_report(report: dict) -> str:
    """Aligned plaintext rendering of an aggregate report."""
    rows = [("SU", "position error [cm]", "quaternion distance")]
    for entry in report["per_su"]:
        p = entry["position_error_cm"]
        q = entry["quaternion_distance"]
        rows.append(
            (
                f"SU_{entry['su_id']}",
                f"{p['mean']:.3f} +/- {p['std']:.3f}",
                f"{q['mean']:.4f} +/- {q['std']:.4f}",
            )
        )
    p = report["overall"]["position_error_cm"]
    q = report["overall"]["quaternion_distance"]
    rows.append(
        (
            "overall",
            f"{p['mean']:.3f} +/- {p['std']:.3f}",
            f"{q['mean']:.4f} +/- {q['std']:.4f}",
        )
    )
    widths = [max(len(r[i]) for r in rows) for i in range(3)]
    lines = ["  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)) for row in rows]
    lines.insert(1, "-" * (sum(widths) + 4))
    lines.append(f"trials: {report['n_trials']}")
    return "\n".join(lines)
