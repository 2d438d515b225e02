"""Ground-truth synthetic data generation.

Static readings are gravity rotated into each SU's frame; dynamic
readings follow each joint independently oscillating under the velocity
profile qdot = A sin(2*pi*f*t).  With zero noise the generated dataset
is exactly reproduced by the acceleration model at the true parameters,
which is the oracle property the calibration tests rely on.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import GravityModel, total_accel
from .dataset import Dataset, DynamicSample, StaticSample
from .errors import InvalidArgumentError
from .kinematics import JointState, KinematicChain, SuParams, chain_fk

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class ExcitationProfile:
    """Sinusoidal velocity excitation of one joint."""

    amplitude: float = 2.0  # rad/s
    frequency: float = 0.5  # Hz
    duration: float = 1.0  # s
    rest_time: float = 2.0  # s, modeled as ideal (no transient)
    sample_rate: float = 100.0  # Hz

    def __post_init__(self):
        for name in ("amplitude", "frequency", "duration", "sample_rate"):
            if getattr(self, name) <= 0 and not (name == "amplitude" and self.amplitude == 0):
                raise InvalidArgumentError(f"ExcitationProfile.{name} must be positive")


@dataclass(frozen=True)
class NoiseModel:
    """Zero-mean Gaussian accelerometer noise, per axis."""

    accel_sigma: float = 0.05  # m/s^2
    seed: int = 0

    def __post_init__(self):
        if self.accel_sigma < 0:
            raise InvalidArgumentError("accel_sigma must be nonnegative")


def sample_poses(chain: KinematicChain, P: int, rng_seed: int) -> list:
    """P joint configurations drawn uniformly within the joint limits."""
    if P < 1:
        raise InvalidArgumentError("P must be >= 1")
    rng = np.random.default_rng(rng_seed)
    lows = np.array([row.joint_limits[0] for row in chain.rows])
    highs = np.array([row.joint_limits[1] for row in chain.rows])
    return [rng.uniform(lows, highs) for _ in range(P)]


def place_sus(chain: KinematicChain, K: int, rng_seed: int, max_offset: float = 0.15) -> list:
    """Ground-truth SU placements, one per host joint from joint 2 upward.

    Mounting offsets are drawn within +/- max_offset meters, mimicking
    sensors attached to the link surface; angles are unrestricted.
    """
    if K > chain.n_joints - 1:
        raise InvalidArgumentError(
            f"cannot place {K} SUs on a {chain.n_joints}-joint chain "
            f"(hosts are joints 2..{chain.n_joints})"
        )
    rng = np.random.default_rng(rng_seed)
    out = []
    for k in range(K):
        out.append(
            SuParams(
                d_v=rng.uniform(-max_offset, max_offset),
                theta_v=rng.uniform(-np.pi, np.pi),
                d_su=rng.uniform(-max_offset, max_offset),
                theta_su=rng.uniform(-np.pi, np.pi),
                a_su=rng.uniform(0.0, max_offset),
                alpha_su=rng.uniform(-np.pi, np.pi),
                host_joint=k + 2,
            )
        )
    return out


def simulate_static(
    chain: KinematicChain,
    phis: list,
    poses: list,
    noise: NoiseModel,
    gravity: GravityModel | None = None,
) -> list:
    """One StaticSample per pose: gravity in each SU frame plus noise."""
    gravity = gravity or GravityModel()
    streams = _pose_streams(noise.seed, len(poses), tag=0)
    samples = []
    for pose_id, (q, rng) in enumerate(zip(poses, streams)):
        state = JointState.at_rest(q)
        accel = np.array([total_accel(chain, phi, state, None, gravity) for phi in phis])
        if noise.accel_sigma > 0:
            accel = accel + rng.normal(0.0, noise.accel_sigma, size=accel.shape)
        samples.append(StaticSample(pose_id, q, accel))
    return samples


def simulate_dynamic(
    chain: KinematicChain,
    phis: list,
    poses: list,
    profiles,
    noise: NoiseModel,
    gravity: GravityModel | None = None,
) -> list:
    """Per pose and per joint, excite the joint and record all SU readings.

    profiles is either a single ExcitationProfile applied to every joint
    or a list of per-joint profiles.  The amplitude is scaled down when
    the integrated angle would exit the joint limits; the direction of
    oscillation is chosen toward the farther limit.  The selected
    reading is the sample at peak |qddot| (t=0 for the sinusoid).
    """
    gravity = gravity or GravityModel()
    N = chain.n_joints
    if isinstance(profiles, ExcitationProfile):
        profiles = [profiles] * N
    if len(profiles) != N:
        raise InvalidArgumentError(f"need one profile per joint ({N}), got {len(profiles)}")
    streams = _pose_streams(noise.seed, len(poses), tag=1)
    samples = []
    for pose_id, (q0, rng) in enumerate(zip(poses, streams)):
        for d in range(1, N + 1):
            prof = profiles[d - 1]
            t, q_d, qdot_d, qddot_d = _excitation_series(chain, q0, d, prof)
            lo, hi = chain.rows[d - 1].joint_limits
            if np.any(q_d < lo - 1e-9) or np.any(q_d > hi + 1e-9):
                raise InvalidArgumentError(
                    f"excitation of joint {d} exits limits even after clamping"
                )
            accel_series = _su_readings(chain, phis, q0, d, t, q_d, qdot_d, qddot_d, gravity)
            if noise.accel_sigma > 0:
                accel_series = accel_series + rng.normal(
                    0.0, noise.accel_sigma, size=accel_series.shape
                )
            sel = int(np.argmax(np.abs(qddot_d)))
            q_sel = np.array(q0, dtype=float)
            q_sel[d - 1] = q_d[sel]
            samples.append(
                DynamicSample(
                    pose_id=pose_id,
                    excited_joint=d,
                    q=q_sel,
                    series={"t": t, "q_d": q_d, "qdot_d": qdot_d, "qddot_d": qddot_d},
                    accel_series=accel_series,
                    selected=accel_series[:, sel, :].copy(),
                    selected_index=sel,
                )
            )
    return samples


def generate_dataset(
    chain: KinematicChain,
    n_poses: int = 16,
    n_sus: int = 6,
    seed: int = 0,
    noise_sigma: float = 0.05,
    profile: ExcitationProfile | None = None,
    gravity: GravityModel | None = None,
    max_offset: float = 0.15,
) -> Dataset:
    """Full synthetic dataset: placements, poses, static and dynamic samples."""
    gravity = gravity or GravityModel()
    profile = profile or ExcitationProfile()
    phis = place_sus(chain, n_sus, rng_seed=seed)
    poses = sample_poses(chain, n_poses, rng_seed=seed + 1)
    noise = NoiseModel(accel_sigma=noise_sigma, seed=seed + 2)
    return Dataset(
        chain=chain,
        gravity=gravity,
        sample_rate=profile.sample_rate,
        static_samples=simulate_static(chain, phis, poses, noise, gravity),
        dynamic_samples=simulate_dynamic(chain, phis, poses, profile, noise, gravity),
        ground_truth=phis,
    )


def _pose_streams(seed: int, count: int, tag: int) -> list:
    # Independent per-pose streams so per-pose simulation may run in
    # parallel without changing the generated data.
    ss = np.random.SeedSequence([seed, tag])
    return [np.random.default_rng(child) for child in ss.spawn(count)]


def _excitation_series(chain, q0, d: int, prof: ExcitationProfile):
    """Integrated angle/velocity/acceleration series for one excited joint.

    qdot = A sin(2 pi f t) integrates to a one-sided excursion from the
    starting angle, so the sign of A picks the direction and |A| is
    clamped to the room available before the limit.
    """
    n_steps = int(round(prof.duration * prof.sample_rate)) + 1
    t = np.arange(n_steps) / prof.sample_rate
    lo, hi = chain.rows[d - 1].joint_limits
    q_start = float(q0[d - 1])
    omega = TWO_PI * prof.frequency
    shape = (1.0 - np.cos(omega * t)) / omega  # excursion per unit amplitude
    peak = float(np.max(shape))
    room_up = hi - q_start
    room_down = q_start - lo
    sign = 1.0 if room_up >= room_down else -1.0
    room = room_up if sign > 0 else room_down
    A = prof.amplitude
    if peak > 0 and A * peak > room:
        A = room / peak
    A *= sign
    q_d = q_start + A * shape
    qdot_d = A * np.sin(omega * t)
    qddot_d = A * omega * np.cos(omega * t)
    return t, q_d, qdot_d, qddot_d


def _su_readings(chain, phis, q0, d, t, q_d, qdot_d, qddot_d, gravity):
    """Noise-free accel series for every SU during one excitation, (K, T, 3).

    Exploits that only joint d moves: the SU sits rigidly in frame d, so
    its position r and the frame-d-to-SU rotation are constant over the
    series and only the gravity direction sweeps with q_d(t).
    """
    from .kinematics import su_transform
    from .se3 import rot_x

    K, T = len(phis), len(t)
    out = np.zeros((K, T, 3))
    fk = chain_fk(chain, q0)
    row_d = chain.rows[d - 1]
    R_before = fk[d - 2].rotation if d >= 2 else chain.base_frame.rotation
    B = R_before @ rot_x(row_d.alpha)  # world rotation up to joint d's z-rotation
    u = B.T @ gravity.g_base
    psi = row_d.theta_offset + q_d
    c, s = np.cos(psi), np.sin(psi)
    # Rz(-psi) @ u, per time step
    g_in_d = np.stack([c * u[0] + s * u[1], -s * u[0] + c * u[1], np.full(T, u[2])], axis=1)
    for k, phi in enumerate(phis):
        if d > phi.host_joint:
            # A distal joint does not move this SU: constant gravity reading.
            reading = total_accel(chain, phi, JointState.at_rest(q0), None, gravity)
            out[k, :, :] = reading
            continue
        dTk = fk[d - 1].inverse() @ fk[phi.host_joint - 1] @ su_transform(phi)
        r = dTk.translation
        motion = (
            -qdot_d[:, None] ** 2 * np.array([r[0], r[1], 0.0])[None, :]
            + qddot_d[:, None] * np.array([-r[1], r[0], 0.0])[None, :]
        )
        out[k] = (g_in_d + motion) @ dTk.rotation  # row-wise R^T @ v
    return out
