import numpy as np
import pytest

from skincal.accel import STANDARD_GRAVITY, GravityModel
from skincal.calibration import (
    CalibConfig,
    calibrate,
    calibrate_monolithic,
    dynamic_error,
    optimize_orientation,
    optimize_position,
    required_joints,
    static_error,
)
from skincal.dataset import StaticObs, default_chain
from skincal.errors import DataIncompleteError, InvalidArgumentError
from skincal.kinematics import SuParams
from skincal.metrics import position_error, quaternion_distance
from skincal.simulator import ExcitationProfile, generate_dataset


@pytest.fixture(scope="module")
def clean_dataset():
    return generate_dataset(default_chain(), n_poses=8, n_sus=2, seed=3, noise_sigma=0.0)


@pytest.fixture(scope="module")
def noisy_dataset():
    return generate_dataset(default_chain(), n_poses=8, n_sus=2, seed=3, noise_sigma=0.05)


class TestStaticError:
    def test_zero_at_ground_truth(self, clean_dataset):
        ds = clean_dataset
        for k, phi in enumerate(ds.ground_truth):
            e = static_error(phi, ds.chain, ds.static_obs(k), ds.gravity)
            assert e < 1e-20

    def test_flipped_sensor_known_value(self, zero_chain):
        # An upside-down estimate on an upright pose misses gravity by
        # 2g, so the mean squared error over one pose is (2 * 9.81)^2.
        phi = SuParams(0, 0, 0, 0, 0, np.pi, host_joint=2)
        obs = [StaticObs(0, np.zeros(2), np.array([0.0, 0.0, STANDARD_GRAVITY]))]
        e = static_error(phi, zero_chain, obs, GravityModel())
        assert e == pytest.approx((2.0 * STANDARD_GRAVITY) ** 2, abs=1e-9)

    def test_independent_of_translations(self, clean_dataset):
        ds = clean_dataset
        phi = ds.ground_truth[0]
        obs = ds.static_obs(0)
        base = static_error(phi, ds.chain, obs, ds.gravity)
        moved = static_error(
            phi.replace(d_v=phi.d_v + 0.3, d_su=phi.d_su - 0.2, a_su=phi.a_su + 0.1),
            ds.chain, obs, ds.gravity,
        )
        assert moved == base

    def test_averages_over_poses(self, zero_chain):
        phi = SuParams(0, 0, 0, 0, 0, np.pi, host_joint=2)
        one = [StaticObs(0, np.zeros(2), np.array([0.0, 0.0, STANDARD_GRAVITY]))]
        three = [StaticObs(i, np.zeros(2), np.array([0.0, 0.0, STANDARD_GRAVITY])) for i in range(3)]
        e1 = static_error(phi, zero_chain, one, GravityModel())
        e3 = static_error(phi, zero_chain, three, GravityModel())
        assert e3 == pytest.approx(e1, abs=1e-12)

    def test_rejects_empty(self, zero_chain):
        phi = SuParams(0, 0, 0, 0, 0, 0, host_joint=2)
        with pytest.raises(InvalidArgumentError):
            static_error(phi, zero_chain, [], GravityModel())


class TestDynamicError:
    def test_zero_at_ground_truth(self, clean_dataset):
        ds = clean_dataset
        for k, phi in enumerate(ds.ground_truth):
            e = dynamic_error(phi, ds.chain, ds.dynamic_obs(k), ds.gravity)
            assert e < 1e-18

    def test_positive_when_translated(self, clean_dataset):
        ds = clean_dataset
        phi = ds.ground_truth[0]
        e = dynamic_error(
            phi.replace(d_su=phi.d_su + 0.10), ds.chain, ds.dynamic_obs(0), ds.gravity
        )
        assert e > 1e-4

    def test_required_joints_window(self):
        assert required_joints(1) == [1]
        assert required_joints(2) == [1, 2]
        assert required_joints(3) == [1, 2, 3]
        assert required_joints(6) == [4, 5, 6]

    def test_missing_joint_raises(self, clean_dataset):
        ds = clean_dataset
        phi = ds.ground_truth[1]  # host joint 3, needs joints 1..3
        obs = [o for o in ds.dynamic_obs(1) if o.excited_joint != 2]
        with pytest.raises(DataIncompleteError) as exc:
            dynamic_error(phi, ds.chain, obs, ds.gravity)
        assert exc.value.joint_index == 2

    def test_duplicated_poses_leave_error_unchanged(self, clean_dataset):
        # The error is normalized by the number of poses, so feeding each
        # pose twice must not change it.
        ds = clean_dataset
        phi = ds.ground_truth[0].replace(d_su=ds.ground_truth[0].d_su + 0.05)
        obs = ds.dynamic_obs(0)
        shifted = [
            type(o)(o.pose_id + 1000, o.excited_joint, o.q, o.qdot_d, o.qddot_d, o.accel)
            for o in obs
        ]
        e1 = dynamic_error(phi, ds.chain, obs, ds.gravity)
        e2 = dynamic_error(phi, ds.chain, obs + shifted, ds.gravity)
        assert e2 == pytest.approx(e1, abs=1e-12)


class TestStages:
    def test_orientation_recovers_truth(self, clean_dataset):
        ds = clean_dataset
        truth = ds.ground_truth[0]
        res = optimize_orientation(
            ds.chain, ds.static_obs(0),
            CalibConfig(param_delta_threshold=1e-6), host_joint=truth.host_joint,
        )
        assert res.converged
        assert res.residual < 1e-6
        est = truth.replace(theta_v=res.x[0], theta_su=res.x[1], alpha_su=res.x[2])
        assert quaternion_distance(est, truth, ds.chain) < 1e-3

    def test_orientation_noisy_residual_near_noise_floor(self, noisy_dataset):
        ds = noisy_dataset
        truth = ds.ground_truth[0]
        res = optimize_orientation(
            ds.chain, ds.static_obs(0), CalibConfig(), host_joint=truth.host_joint
        )
        # Expected floor is 3 sigma^2 = 0.0075; allow generous headroom.
        assert res.residual < 3 * 3 * 0.05 ** 2

    def test_position_recovers_truth(self, clean_dataset):
        ds = clean_dataset
        truth = ds.ground_truth[0]
        res = optimize_position(
            ds.chain, ds.dynamic_obs(0), truth.rotational(), CalibConfig(),
            host_joint=truth.host_joint,
        )
        assert res.converged
        est = truth.replace(d_v=res.x[0], d_su=res.x[1], a_su=res.x[2])
        assert position_error(est, truth, ds.chain) < 0.1  # cm

    def test_position_flat_without_excitation(self):
        # Zero amplitude means no motion signal: translations cannot be
        # observed and the stage must flag a flat objective.
        ds = generate_dataset(
            default_chain(), n_poses=2, n_sus=1, seed=0, noise_sigma=0.0,
            profile=ExcitationProfile(amplitude=0.0),
        )
        truth = ds.ground_truth[0]
        res = optimize_position(
            ds.chain, ds.dynamic_obs(0), truth.rotational(), CalibConfig(),
            host_joint=truth.host_joint,
        )
        assert res.flat_objective
        assert not res.converged


class TestCalibrate:
    def test_noise_free_pipeline(self, clean_dataset):
        ds = clean_dataset
        result = calibrate(ds, CalibConfig(rng_seed=1))
        assert result.mode == "two_stage"
        assert result.all_converged
        for su, truth in zip(result.sus, ds.ground_truth):
            assert su.host_joint == truth.host_joint
            assert position_error(su.params, truth, ds.chain) < 0.3
            assert quaternion_distance(su.params, truth, ds.chain) < 5e-3

    def test_deterministic(self, noisy_dataset):
        a = calibrate(noisy_dataset, CalibConfig(rng_seed=2))
        b = calibrate(noisy_dataset, CalibConfig(rng_seed=2))
        for sa, sb in zip(a.sus, b.sus):
            assert sa.params == sb.params
            assert sa.static_residual == sb.static_residual
            assert sa.dynamic_residual == sb.dynamic_residual

    def test_seed_changes_search(self, noisy_dataset):
        a = calibrate(noisy_dataset, CalibConfig(rng_seed=2))
        b = calibrate(noisy_dataset, CalibConfig(rng_seed=3))
        assert any(sa.params != sb.params for sa, sb in zip(a.sus, b.sus))

    def test_hosts_required_without_ground_truth(self, clean_dataset):
        ds = clean_dataset
        stripped = type(ds)(
            chain=ds.chain, gravity=ds.gravity, sample_rate=ds.sample_rate,
            static_samples=ds.static_samples, dynamic_samples=ds.dynamic_samples,
            ground_truth=None,
        )
        with pytest.raises(InvalidArgumentError):
            calibrate(stripped)
        result = calibrate(stripped, CalibConfig(rng_seed=1), hosts=[2, 3])
        assert [su.host_joint for su in result.sus] == [2, 3]

    def test_reported_residuals_reproduce(self, noisy_dataset):
        ds = noisy_dataset
        result = calibrate(ds, CalibConfig(rng_seed=2))
        for k, su in enumerate(result.sus):
            e_s = static_error(su.params, ds.chain, ds.static_obs(k), ds.gravity)
            e_d = dynamic_error(su.params, ds.chain, ds.dynamic_obs(k), ds.gravity)
            assert e_s == pytest.approx(su.static_residual, abs=1e-12)
            assert e_d == pytest.approx(su.dynamic_residual, abs=1e-12)


class TestMonolithic:
    def test_recovers_truth_noise_free(self, clean_dataset):
        ds = clean_dataset
        result = calibrate_monolithic(ds, CalibConfig(rng_seed=1))
        assert result.mode == "monolithic"
        for su, truth in zip(result.sus, ds.ground_truth):
            assert position_error(su.params, truth, ds.chain) < 1.0
            assert quaternion_distance(su.params, truth, ds.chain) < 0.05

    def test_deterministic(self, noisy_dataset):
        a = calibrate_monolithic(noisy_dataset, CalibConfig(rng_seed=2))
        b = calibrate_monolithic(noisy_dataset, CalibConfig(rng_seed=2))
        for sa, sb in zip(a.sus, b.sus):
            assert sa.params == sb.params

    def test_starved_budget_reports_non_convergence(self, noisy_dataset):
        cfg = CalibConfig(rng_seed=2, restarts=1, max_iterations=2)
        result = calibrate_monolithic(noisy_dataset, cfg)
        assert not result.all_converged


class TestConfigValidation:
    def test_rejects_zero_restarts(self):
        with pytest.raises(InvalidArgumentError):
            CalibConfig(restarts=0)

    def test_rejects_bad_threshold(self):
        with pytest.raises(InvalidArgumentError):
            CalibConfig(static_error_threshold=0.0)
