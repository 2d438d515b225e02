import json

import numpy as np
import pytest

from skincal.dataset import (
    chain_from_json,
    chain_to_json,
    dataset_from_json,
    dataset_to_json,
    default_chain,
    load_dataset,
    save_dataset,
    su_params_from_json,
    su_params_to_json,
)
from skincal.errors import DatasetFormatError
from skincal.simulator import generate_dataset


@pytest.fixture(scope="module")
def small_dataset():
    return generate_dataset(default_chain(), n_poses=2, n_sus=2, seed=0, noise_sigma=0.05)


def _assert_datasets_equal(a, b):
    assert chain_to_json(a.chain) == chain_to_json(b.chain)
    assert np.array_equal(a.gravity.g_base, b.gravity.g_base)
    assert a.sample_rate == b.sample_rate
    assert len(a.static_samples) == len(b.static_samples)
    for sa, sb in zip(a.static_samples, b.static_samples):
        assert sa.pose_id == sb.pose_id
        assert np.array_equal(sa.q, sb.q)
        assert np.array_equal(sa.accel, sb.accel)
    assert len(a.dynamic_samples) == len(b.dynamic_samples)
    for da, db in zip(a.dynamic_samples, b.dynamic_samples):
        assert da.pose_id == db.pose_id
        assert da.excited_joint == db.excited_joint
        assert da.selected_index == db.selected_index
        assert np.array_equal(da.q, db.q)
        assert np.array_equal(da.selected, db.selected)
        assert np.array_equal(da.accel_series, db.accel_series)
        for key in ("t", "q_d", "qdot_d", "qddot_d"):
            assert np.array_equal(da.series[key], db.series[key])
    assert a.ground_truth == b.ground_truth


def test_roundtrip_in_memory(small_dataset):
    again = dataset_from_json(dataset_to_json(small_dataset))
    _assert_datasets_equal(small_dataset, again)


def test_roundtrip_via_file(tmp_path, small_dataset):
    path = tmp_path / "ds.json"
    save_dataset(small_dataset, path)
    _assert_datasets_equal(small_dataset, load_dataset(path))


def test_roundtrip_is_lossless_through_json_text(tmp_path, small_dataset):
    # Serializing twice must produce the same bytes: floats survive the
    # text round trip exactly.
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_dataset(small_dataset, p1)
    save_dataset(load_dataset(p1), p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_schema_violation_reports_path(small_dataset):
    obj = dataset_to_json(small_dataset)
    obj["static_samples"][0]["q"] = "oops"
    with pytest.raises(DatasetFormatError) as exc:
        dataset_from_json(obj)
    assert "static_samples" in str(exc.value.json_path)


def test_missing_section_rejected(small_dataset):
    obj = dataset_to_json(small_dataset)
    del obj["header"]
    with pytest.raises(DatasetFormatError):
        dataset_from_json(obj)


def test_ground_truth_optional(small_dataset):
    obj = dataset_to_json(small_dataset)
    obj.pop("ground_truth", None)
    ds = dataset_from_json(obj)
    assert ds.ground_truth is None


def test_chain_json_roundtrip():
    chain = default_chain()
    again = chain_from_json(chain_to_json(chain))
    assert chain_to_json(again) == chain_to_json(chain)


def test_su_params_json_roundtrip(small_dataset):
    for phi in small_dataset.ground_truth:
        assert su_params_from_json(su_params_to_json(phi)) == phi


def test_saved_file_is_valid_json(tmp_path, small_dataset):
    path = tmp_path / "ds.json"
    save_dataset(small_dataset, path)
    obj = json.loads(path.read_text())
    assert set(obj) >= {"header", "static_samples", "dynamic_samples"}
    assert set(obj["header"]) >= {"gravity", "sample_rate", "chain", "base_frame"}


def test_per_su_views(small_dataset):
    obs = small_dataset.static_obs(0)
    assert len(obs) == len(small_dataset.static_samples)
    dyn = small_dataset.dynamic_obs(1)
    assert len(dyn) == len(small_dataset.dynamic_samples)
