"""Two-stage calibration: orientation from static data, position from dynamic.

Stage 1 minimizes the gravity-alignment error over the three rotational
parameters (theta_v, theta_su, alpha_su); stage 2 holds those fixed and
minimizes the dynamic acceleration error over the three translational
parameters (d_v, d_su, a_su).  Each stage is a multi-start derivative-
free search: uniform draws within the configured bounds, a Nelder-Mead
local minimization per draw that ends when the simplex parameter spread
drops below param_delta_threshold, and an early exit from the restart
loop once the best residual falls below static_error_threshold (the
global-stage analog of an NLopt stopval).
"""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .accel import GravityModel
from .dataset import Dataset
from .errors import DataIncompleteError, InvalidArgumentError
from .kinematics import KinematicChain, SuParams
from .neldermead import nelder_mead
from .se3 import normalize_angle, rot_x, rot_z

DEFAULT_BOUNDS = {
    "theta_v": (-np.pi, np.pi),
    "d_v": (-1.0, 1.0),
    "theta_su": (-np.pi, np.pi),
    "d_su": (-1.0, 1.0),
    "a_su": (0.0, 1.0),
    "alpha_su": (-np.pi, np.pi),
}

ROT_KEYS = ("theta_v", "theta_su", "alpha_su")
TRANS_KEYS = ("d_v", "d_su", "a_su")

# Initial simplex edge as a fraction of each bound's width.
_STEP_FRACTION = 0.1
_FLAT_TOL = 1e-12


@dataclass(frozen=True)
class CalibConfig:
    bounds: dict = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    restarts: int = 10
    static_error_threshold: float = 0.01
    param_delta_threshold: float = 0.001
    max_iterations: int = 800
    rng_seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise InvalidArgumentError("restarts must be >= 1")
        if self.static_error_threshold <= 0 or self.param_delta_threshold <= 0:
            raise InvalidArgumentError("thresholds must be positive")


@dataclass
class StageResult:
    """Outcome of one multi-start optimization stage."""

    x: np.ndarray
    residual: float
    iterations: int
    n_fev: int
    restarts_used: int
    converged: bool
    flat_objective: bool
    wall_time: float


@dataclass
class SuCalibration:
    su_index: int
    host_joint: int
    params: SuParams
    static_residual: float
    dynamic_residual: float
    iterations: dict
    restarts_used: dict
    converged: bool
    flat_objective: bool
    wall_times: dict


@dataclass
class CalibrationResult:
    mode: str  # "two_stage" | "monolithic"
    sus: list
    config: CalibConfig
    total_wall_time: float

    @property
    def all_converged(self) -> bool:
        return all(su.converged for su in self.sus)


# ---------------------------------------------------------------------------
# Error functions (public API; the optimizer uses the array kernels
# through the same assembly code, so reported residuals reproduce exactly).


def _fk_raw(chain, q):
    """Forward kinematics as plain (rotation, translation) pairs.

    Same math as chain_fk, but without per-frame RigidTransform
    validation; the arrays below are rebuilt for every pose of every SU,
    so this path is kept cheap.
    """
    q = chain.check_limits(q)
    R = chain.base_frame.rotation
    t = chain.base_frame.translation
    out = []
    for row, qi in zip(chain.rows, q):
        sa, ca = np.sin(row.alpha), np.cos(row.alpha)
        R_l = rot_x(row.alpha) @ rot_z(row.theta_offset + qi)
        t_l = np.array([row.a, -row.d * sa, row.d * ca])
        t = R @ t_l + t
        R = R @ R_l
        out.append((R, t))
    return out


def _static_arrays(chain, static_obs, host_joint, gravity):
    if not static_obs:
        raise InvalidArgumentError("static samples must be nonempty")
    R_bn = np.empty((len(static_obs), 3, 3))
    a_meas = np.empty((len(static_obs), 3))
    for i, obs in enumerate(static_obs):
        R_bn[i] = _fk_raw(chain, obs.q)[host_joint - 1][0]
        a_meas[i] = obs.accel
    return np.ascontiguousarray(R_bn), np.ascontiguousarray(a_meas), gravity.g_base.copy()


def required_joints(host_joint: int) -> list:
    """Excited joints feeding the dynamic error: the up-to-three most
    recent joints ending at the host."""
    return list(range(max(1, host_joint - 2), host_joint + 1))


def _dynamic_arrays(chain, dynamic_obs, host_joint, gravity):
    if not dynamic_obs:
        raise InvalidArgumentError("dynamic samples must be nonempty")
    needed = required_joints(host_joint)
    by_pose = {}
    for obs in dynamic_obs:
        by_pose.setdefault(obs.pose_id, {})[obs.excited_joint] = obs
    rows = []
    for pose_id in sorted(by_pose):
        for d in needed:
            if d not in by_pose[pose_id]:
                raise DataIncompleteError(pose_id, d)
            rows.append(by_pose[pose_id][d])
    M = len(rows)
    R_dn = np.empty((M, 3, 3))
    t_dn = np.empty((M, 3))
    R_bn = np.empty((M, 3, 3))
    qdot = np.empty(M)
    qddot = np.empty(M)
    a_meas = np.empty((M, 3))
    for i, obs in enumerate(rows):
        fk = _fk_raw(chain, obs.q)
        R_n, t_n = fk[host_joint - 1]
        R_d, t_d = fk[obs.excited_joint - 1]
        R_dn[i] = R_d.T @ R_n
        t_dn[i] = R_d.T @ (t_n - t_d)
        R_bn[i] = R_n
        qdot[i] = obs.qdot_d
        qddot[i] = obs.qddot_d
        a_meas[i] = obs.accel
    inv_p = 1.0 / len(by_pose)
    return (
        np.ascontiguousarray(R_dn), np.ascontiguousarray(t_dn),
        np.ascontiguousarray(R_bn), qdot, qddot,
        np.ascontiguousarray(a_meas), gravity.g_base.copy(), inv_p,
    )


def static_error(phi: SuParams, chain: KinematicChain, static_obs, gravity: GravityModel) -> float:
    """Mean squared distance between rotated readings and the gravity vector."""
    R_bn, a_meas, g = _static_arrays(chain, static_obs, phi.host_joint, gravity)
    return kernels.static_cost(phi.rotational(), phi.translational(), R_bn, a_meas, g)


def dynamic_error(phi: SuParams, chain: KinematicChain, dynamic_obs, gravity: GravityModel) -> float:
    """Mean squared mismatch between measured and model-predicted readings."""
    arrays = _dynamic_arrays(chain, dynamic_obs, phi.host_joint, gravity)
    return kernels.dynamic_cost(phi.translational(), phi.rotational(), *arrays)


# ---------------------------------------------------------------------------
# Multi-start stages


def _multistart(objective, keys, bounds, config, rng, stopval) -> StageResult:
    lows = np.array([bounds[k][0] for k in keys])
    highs = np.array([bounds[k][1] for k in keys])
    step = _STEP_FRACTION * (highs - lows)

    start = time.perf_counter()
    probes = [rng.uniform(lows, highs) for _ in range(config.restarts)]
    probe_f = [objective(x) for x in probes]
    if max(probe_f) - min(probe_f) <= _FLAT_TOL * max(1.0, abs(max(probe_f))):
        # No signal in the data for these parameters; report, don't iterate.
        return StageResult(
            x=probes[0], residual=probe_f[0], iterations=0, n_fev=len(probes),
            restarts_used=0, converged=False, flat_objective=True,
            wall_time=time.perf_counter() - start,
        )

    best = None
    iterations = 0
    n_fev = len(probes)
    restarts_used = 0
    any_converged = False
    for x0 in probes:
        res = nelder_mead(
            objective, x0, step, config.param_delta_threshold, config.max_iterations
        )
        iterations += res.n_iter
        n_fev += res.n_fev
        restarts_used += 1
        any_converged = any_converged or res.converged
        if best is None or res.fun < best.fun:
            best = res
        if stopval is not None and best.fun < stopval:
            break
    return StageResult(
        x=best.x, residual=best.fun, iterations=iterations, n_fev=n_fev,
        restarts_used=restarts_used,
        converged=any_converged or (stopval is not None and best.fun < stopval),
        flat_objective=False, wall_time=time.perf_counter() - start,
    )


def optimize_orientation(chain, static_obs, config: CalibConfig, host_joint: int,
                         gravity: GravityModel | None = None,
                         rng_seed=None) -> StageResult:
    """Stage 1: rotational parameters from the static error."""
    gravity = gravity or GravityModel()
    R_bn, a_meas, g = _static_arrays(chain, static_obs, host_joint, gravity)
    zeros = np.zeros(3)

    def objective(x):
        return kernels.static_cost(x, zeros, R_bn, a_meas, g)

    rng = np.random.default_rng(config.rng_seed if rng_seed is None else rng_seed)
    result = _multistart(
        objective, ROT_KEYS, config.bounds, config, rng,
        stopval=config.static_error_threshold,
    )
    result.x = np.array([normalize_angle(v) for v in result.x])
    return result


def optimize_position(chain, dynamic_obs, rotational_fixed, config: CalibConfig,
                      host_joint: int, gravity: GravityModel | None = None,
                      rng_seed=None) -> StageResult:
    """Stage 2: translational parameters from the dynamic error, rotation fixed."""
    gravity = gravity or GravityModel()
    arrays = _dynamic_arrays(chain, dynamic_obs, host_joint, gravity)
    angles = np.asarray(rotational_fixed, dtype=float)

    def objective(x):
        return kernels.dynamic_cost(x, angles, *arrays)

    rng = np.random.default_rng(config.rng_seed if rng_seed is None else rng_seed)
    return _multistart(
        objective, TRANS_KEYS, config.bounds, config, rng,
        stopval=config.static_error_threshold,
    )


def _resolve_hosts(dataset: Dataset, hosts):
    if hosts is not None:
        return list(hosts)
    if dataset.ground_truth is not None:
        return [phi.host_joint for phi in dataset.ground_truth]
    raise InvalidArgumentError(
        "host joints are required: dataset has no ground_truth, pass hosts explicitly"
    )


def _su_seed(config, su_index, stage):
    return np.random.SeedSequence([config.rng_seed, su_index, stage])


def _worker_count(n_tasks: int) -> int:
    cap = os.environ.get("SKINCAL_THREADS")
    if cap is None:
        return 1
    return max(1, min(int(cap), n_tasks))


def _calibrate_one(dataset, config, su_index, host):
    sobs = dataset.static_obs(su_index)
    dobs = dataset.dynamic_obs(su_index)
    stage1 = optimize_orientation(
        dataset.chain, sobs, config, host, dataset.gravity,
        rng_seed=_su_seed(config, su_index, 0),
    )
    stage2 = optimize_position(
        dataset.chain, dobs, stage1.x, config, host, dataset.gravity,
        rng_seed=_su_seed(config, su_index, 1),
    )
    phi = SuParams(
        d_v=stage2.x[0], theta_v=stage1.x[0], d_su=stage2.x[1],
        theta_su=stage1.x[1], a_su=stage2.x[2], alpha_su=stage1.x[2],
        host_joint=host,
    )
    return SuCalibration(
        su_index=su_index,
        host_joint=host,
        params=phi,
        static_residual=static_error(phi, dataset.chain, sobs, dataset.gravity),
        dynamic_residual=dynamic_error(phi, dataset.chain, dobs, dataset.gravity),
        iterations={"orientation": stage1.iterations, "position": stage2.iterations},
        restarts_used={"orientation": stage1.restarts_used, "position": stage2.restarts_used},
        converged=stage1.converged and stage2.converged,
        flat_objective=stage1.flat_objective or stage2.flat_objective,
        wall_times={"orientation": stage1.wall_time, "position": stage2.wall_time},
    )


def _calibrate_one_monolithic(dataset, config, su_index, host):
    sobs = dataset.static_obs(su_index)
    dobs = dataset.dynamic_obs(su_index)
    R_bn, a_meas, g = _static_arrays(dataset.chain, sobs, host, dataset.gravity)
    arrays = _dynamic_arrays(dataset.chain, dobs, host, dataset.gravity)
    zeros = np.zeros(3)

    def objective(x):
        # x = (theta_v, theta_su, alpha_su, d_v, d_su, a_su)
        return kernels.static_cost(x[:3], zeros, R_bn, a_meas, g) + kernels.dynamic_cost(
            x[3:], x[:3], *arrays
        )

    rng = np.random.default_rng(_su_seed(config, su_index, 2))
    stage = _multistart(
        objective, ROT_KEYS + TRANS_KEYS, config.bounds, config, rng,
        stopval=config.static_error_threshold,
    )
    phi = SuParams(
        d_v=stage.x[3], theta_v=stage.x[0], d_su=stage.x[4],
        theta_su=stage.x[1], a_su=stage.x[5], alpha_su=stage.x[2],
        host_joint=host,
    )
    return SuCalibration(
        su_index=su_index,
        host_joint=host,
        params=phi,
        static_residual=static_error(phi, dataset.chain, sobs, dataset.gravity),
        dynamic_residual=dynamic_error(phi, dataset.chain, dobs, dataset.gravity),
        iterations={"monolithic": stage.iterations},
        restarts_used={"monolithic": stage.restarts_used},
        converged=stage.converged,
        flat_objective=stage.flat_objective,
        wall_times={"monolithic": stage.wall_time},
    )


def _run(dataset, config, hosts, worker) -> CalibrationResult:
    hosts = _resolve_hosts(dataset, hosts)
    start = time.perf_counter()
    tasks = list(enumerate(hosts))
    n_workers = _worker_count(len(tasks))
    if n_workers > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            sus = list(pool.map(lambda t: worker(dataset, config, *t), tasks))
    else:
        sus = [worker(dataset, config, k, h) for k, h in tasks]
    mode = "two_stage" if worker is _calibrate_one else "monolithic"
    return CalibrationResult(mode, sus, config, time.perf_counter() - start)


def calibrate(dataset: Dataset, config: CalibConfig | None = None, hosts=None) -> CalibrationResult:
    """Two-stage calibration of every SU in the dataset."""
    return _run(dataset, config or CalibConfig(), hosts, _calibrate_one)


def calibrate_monolithic(dataset: Dataset, config: CalibConfig | None = None,
                         hosts=None) -> CalibrationResult:
    """Joint 6-parameter calibration; the comparison arm for the speedup claim."""
    return _run(dataset, config or CalibConfig(), hosts, _calibrate_one_monolithic)
