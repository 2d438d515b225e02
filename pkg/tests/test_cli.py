import csv
import json

import numpy as np
import pytest
from click.testing import CliRunner

from skincal.cli import main
from skincal.dataset import dataset_to_json, load_dataset, save_dataset
from skincal.results import load_results


@pytest.fixture
def runner():
    return CliRunner()


def _generate(runner, path, **over):
    args = ["generate", "--out", str(path), "--poses", "4", "--sus", "2", "--seed", "1"]
    for key, val in over.items():
        args += [f"--{key}", str(val)]
    res = runner.invoke(main, args)
    assert res.exit_code == 0, res.output
    return path


class TestGenerate:
    def test_writes_loadable_dataset(self, runner, tmp_path):
        path = _generate(runner, tmp_path / "ds.json")
        ds = load_dataset(path)
        assert len(ds.static_samples) == 4
        assert ds.su_count == 2
        assert ds.ground_truth is not None

    def test_same_seed_same_bytes(self, runner, tmp_path):
        a = _generate(runner, tmp_path / "a.json")
        b = _generate(runner, tmp_path / "b.json")
        assert a.read_bytes() == b.read_bytes()

    def test_noise_zero_matches_model(self, runner, tmp_path):
        from skincal.accel import GravityModel, total_accel
        from skincal.kinematics import JointState

        path = _generate(runner, tmp_path / "ds.json", noise="0")
        ds = load_dataset(path)
        s = ds.static_samples[0]
        expected = total_accel(
            ds.chain, ds.ground_truth[0], JointState.at_rest(s.q), None, ds.gravity
        )
        assert np.allclose(s.accel[0], expected, atol=1e-12)


class TestCalibrate:
    def test_end_to_end_noise_free(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json", noise="0")
        out = tmp_path / "result.json"
        res = runner.invoke(
            main, ["calibrate", "--dataset", str(ds_path), "--out", str(out), "--seed", "1"]
        )
        assert res.exit_code == 0, res.output
        loaded = load_results(out)
        assert loaded["mode"] == "two_stage"
        assert len(loaded["trials"]) == 1
        for su in loaded["trials"][0]["sus"]:
            assert su["static_residual"] < 1e-4

    def test_deterministic_output_bytes(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json")
        outs = []
        for name in ("r1.json", "r2.json"):
            out = tmp_path / name
            res = runner.invoke(
                main,
                ["calibrate", "--dataset", str(ds_path), "--out", str(out), "--seed", "7"],
            )
            assert res.exit_code == 0, res.output
            outs.append(out.read_bytes())
        assert outs[0] == outs[1]

    def test_monolithic_mode(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json", noise="0")
        out = tmp_path / "result.json"
        res = runner.invoke(
            main,
            ["calibrate", "--dataset", str(ds_path), "--out", str(out), "--monolithic"],
        )
        assert res.exit_code == 0, res.output
        assert load_results(out)["mode"] == "monolithic"

    def test_multiple_trials(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json")
        out = tmp_path / "result.json"
        res = runner.invoke(
            main,
            ["calibrate", "--dataset", str(ds_path), "--out", str(out), "--trials", "2"],
        )
        assert res.exit_code == 0, res.output
        assert len(load_results(out)["trials"]) == 2

    def test_incomplete_dataset_is_data_error(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json")
        ds = load_dataset(ds_path)
        ds.dynamic_samples = [d for d in ds.dynamic_samples if d.excited_joint != 1]
        broken = tmp_path / "broken.json"
        save_dataset(ds, broken)
        out = tmp_path / "result.json"
        res = runner.invoke(
            main, ["calibrate", "--dataset", str(broken), "--out", str(out)]
        )
        assert res.exit_code == 2
        assert "error" in res.output

    def test_unobservable_data_is_non_convergence(self, runner, tmp_path):
        # Zero excitation leaves the translational stage flat.
        ds_path = _generate(runner, tmp_path / "ds.json", noise="0", amplitude="0")
        out = tmp_path / "result.json"
        res = runner.invoke(
            main, ["calibrate", "--dataset", str(ds_path), "--out", str(out)]
        )
        assert res.exit_code == 3
        assert "non-converged" in res.output


class TestEvaluate:
    def test_prints_table(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json", noise="0")
        out = tmp_path / "result.json"
        assert runner.invoke(
            main, ["calibrate", "--dataset", str(ds_path), "--out", str(out)]
        ).exit_code == 0
        report_path = tmp_path / "report.json"
        res = runner.invoke(
            main,
            ["evaluate", "--dataset", str(ds_path), "--result", str(out),
             "--out", str(report_path)],
        )
        assert res.exit_code == 0, res.output
        assert "overall" in res.output
        report = json.loads(report_path.read_text())
        assert report["overall"]["position_error_cm"]["mean"] < 1.5

    def test_refuses_without_ground_truth(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json")
        obj = dataset_to_json(load_dataset(ds_path))
        obj.pop("ground_truth", None)
        anon = tmp_path / "anon.json"
        anon.write_text(json.dumps(obj))
        out = tmp_path / "result.json"
        assert runner.invoke(
            main,
            ["calibrate", "--dataset", str(anon), "--out", str(out), "--hosts", "2,3"],
        ).exit_code == 0
        res = runner.invoke(
            main, ["evaluate", "--dataset", str(anon), "--result", str(out)]
        )
        assert res.exit_code == 2
        assert "ground_truth" in res.output


class TestDemoAvoid:
    def _calibrated(self, runner, tmp_path):
        ds_path = _generate(runner, tmp_path / "ds.json", noise="0")
        out = tmp_path / "result.json"
        assert runner.invoke(
            main, ["calibrate", "--dataset", str(ds_path), "--out", str(out)]
        ).exit_code == 0
        return out

    def test_adjusts_trace(self, runner, tmp_path):
        result = self._calibrated(runner, tmp_path)
        trace = tmp_path / "trace.csv"
        trace.write_text("t,su_id,d_mm\n0.0,0,250\n0.1,1,900\n")
        out = tmp_path / "adjusted.csv"
        res = runner.invoke(
            main,
            ["demo-avoid", "--result", str(result), "--trace", str(trace),
             "--out", str(out), "--velocity", "0.1,0,0"],
        )
        assert res.exit_code == 0, res.output
        rows = list(csv.DictReader(out.open()))
        assert [r["su_id"] for r in rows] == ["0", "1"]
        # Beyond the cutoff the velocity passes through unchanged.
        far = np.array([float(rows[1][k]) for k in ("tx", "ty", "tz")])
        assert np.allclose(far, [0.1, 0.0, 0.0], atol=1e-9)
        # Inside the cutoff the correction has magnitude exp(-d/500).
        near = np.array([float(rows[0][k]) for k in ("tx", "ty", "tz")])
        assert np.linalg.norm(near - [0.1, 0.0, 0.0]) == pytest.approx(
            np.exp(-0.5), abs=1e-5
        )

    def test_unknown_su_is_data_error(self, runner, tmp_path):
        result = self._calibrated(runner, tmp_path)
        trace = tmp_path / "trace.csv"
        trace.write_text("t,su_id,d_mm\n0.0,9,250\n")
        out = tmp_path / "adjusted.csv"
        res = runner.invoke(
            main,
            ["demo-avoid", "--result", str(result), "--trace", str(trace), "--out", str(out)],
        )
        assert res.exit_code == 2
        assert "unknown su_id" in res.output
