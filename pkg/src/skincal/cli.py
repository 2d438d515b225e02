"""Command-line pipeline: generate -> calibrate -> evaluate, plus the
obstacle-avoidance demo.

Exit codes: 0 success, 2 data error, 3 non-convergence.
"""
from __future__ import annotations

import csv
import json
import sys

import click
import numpy as np

from .avoidance import ProximityReading, adjust_trajectory
from .calibration import CalibConfig, calibrate, calibrate_monolithic
from .dataset import chain_from_json, default_chain, load_dataset, save_dataset
from .errors import SkincalError
from .kinematics import su_world_pose
from .metrics import aggregate_report, evaluate_trial, format_report
from .results import load_results, save_results
from .simulator import ExcitationProfile, generate_dataset

EXIT_DATA_ERROR = 2
EXIT_NON_CONVERGENCE = 3


@click.group()
def main():
    """Accelerometer-based skin-unit pose calibration."""


def _load_chain(path):
    if path is None:
        return default_chain()
    with open(path, "r", encoding="utf-8") as fh:
        return chain_from_json(json.load(fh))


@main.command()
@click.option("--out", required=True, type=click.Path(), help="Dataset output path.")
@click.option("--chain", "chain_path", type=click.Path(exists=True),
              help="Chain description JSON; defaults to the built-in 7-DoF chain.")
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--noise", default=0.05, show_default=True, type=float,
              help="Accelerometer noise sigma [m/s^2].")
@click.option("--poses", default=16, show_default=True, type=int)
@click.option("--sus", default=6, show_default=True, type=int)
@click.option("--amplitude", default=2.0, show_default=True, type=float)
@click.option("--frequency", default=0.5, show_default=True, type=float)
@click.option("--duration", default=1.0, show_default=True, type=float)
def generate(out, chain_path, seed, noise, poses, sus, amplitude, frequency, duration):
    """Generate a synthetic ground-truth dataset."""
    try:
        chain = _load_chain(chain_path)
        profile = ExcitationProfile(
            amplitude=amplitude, frequency=frequency, duration=duration
        )
        ds = generate_dataset(
            chain, n_poses=poses, n_sus=sus, seed=seed,
            noise_sigma=noise, profile=profile,
        )
        save_dataset(ds, out)
    except (SkincalError, OSError, json.JSONDecodeError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    click.echo(f"wrote dataset ({poses} poses, {sus} SUs) to {out}")


@main.command(name="calibrate")
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--restarts", default=10, show_default=True, type=int)
@click.option("--static-threshold", default=0.01, show_default=True, type=float)
@click.option("--delta-threshold", default=0.001, show_default=True, type=float)
@click.option("--monolithic", is_flag=True,
              help="Minimize both errors jointly over all six parameters.")
@click.option("--trials", default=1, show_default=True, type=int,
              help="Independent calibration repetitions written to one file.")
@click.option("--timings", is_flag=True, help="Include wall-clock timings in the file.")
@click.option("--hosts", default=None,
              help="Comma-separated host joints; defaults to dataset ground truth.")
def calibrate_cmd(dataset_path, out, seed, restarts, static_threshold,
                  delta_threshold, monolithic, trials, timings, hosts):
    """Calibrate every SU in a dataset and write the result JSON."""
    try:
        ds = load_dataset(dataset_path)
        host_list = [int(h) for h in hosts.split(",")] if hosts else None
        runner = calibrate_monolithic if monolithic else calibrate
        trial_seeds = np.random.SeedSequence(seed).spawn(trials)
        results = []
        for trial_ss in trial_seeds:
            config = CalibConfig(
                restarts=restarts,
                static_error_threshold=static_threshold,
                param_delta_threshold=delta_threshold,
                rng_seed=int(trial_ss.generate_state(1)[0]),
            )
            results.append(runner(ds, config, hosts=host_list))
        save_results(results, ds.chain, out, include_timings=timings)
    except (SkincalError, OSError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    bad = [
        su.su_index
        for result in results
        for su in result.sus
        if not su.converged
    ]
    click.echo(f"wrote {trials} trial(s) to {out}")
    if bad:
        click.echo(f"non-converged SUs: {sorted(set(bad))}", err=True)
        sys.exit(EXIT_NON_CONVERGENCE)


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(exists=True))
@click.option("--result", "result_path", required=True, type=click.Path(exists=True))
@click.option("--out", type=click.Path(), help="Optional JSON report output path.")
def evaluate(dataset_path, result_path, out):
    """Compare calibration results against dataset ground truth."""
    try:
        ds = load_dataset(dataset_path)
        if ds.ground_truth is None:
            click.echo(
                "error: dataset has no ground_truth; evaluation is impossible", err=True
            )
            sys.exit(EXIT_DATA_ERROR)
        res = load_results(result_path)
        trials = [
            evaluate_trial(trial["estimates"], ds.ground_truth, ds.chain)
            for trial in res["trials"]
        ]
        report = aggregate_report(trials)
    except SkincalError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    click.echo(format_report(report))
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            json.dump(report, fh)
        click.echo(f"wrote report to {out}")


@main.command(name="demo-avoid")
@click.option("--result", "result_path", required=True, type=click.Path(exists=True))
@click.option("--trace", "trace_path", required=True, type=click.Path(exists=True),
              help="Obstacle-distance trace CSV with columns t,su_id,d_mm.")
@click.option("--out", required=True, type=click.Path())
@click.option("--velocity", default="0.1,0,0", show_default=True,
              help="Nominal Cartesian velocity vx,vy,vz.")
@click.option("--q", "q_str", default=None,
              help="Joint configuration for SU poses; defaults to zeros.")
def demo_avoid(result_path, trace_path, out, velocity, q_str):
    """Adjust a nominal trajectory using proximity readings at calibrated SUs."""
    try:
        res = load_results(result_path)
        chain = res["chain"]
        estimates = res["trials"][0]["estimates"]
        q = (
            np.array([float(v) for v in q_str.split(",")])
            if q_str
            else np.zeros(chain.n_joints)
        )
        v_nominal = np.array([float(v) for v in velocity.split(",")])
        poses = {k: su_world_pose(chain, phi, q) for k, phi in enumerate(estimates)}
        rows_out = []
        with open(trace_path, newline="", encoding="utf-8") as fh:
            for row in csv.DictReader(fh):
                su_id = int(row["su_id"])
                if su_id not in poses:
                    raise SkincalError(f"unknown su_id {su_id} in trace")
                reading = ProximityReading(su_id, float(row["d_mm"]), float(row["t"]))
                adjusted = adjust_trajectory(v_nominal, reading, poses[su_id])
                rows_out.append(
                    [row["t"], su_id, row["d_mm"], *[f"{x:.6f}" for x in adjusted]]
                )
        with open(out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["t", "su_id", "d_mm", "tx", "ty", "tz"])
            writer.writerows(rows_out)
    except (SkincalError, OSError, ValueError, KeyError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_DATA_ERROR)
    click.echo(f"wrote adjusted trajectory to {out}")


if __name__ == "__main__":
    main()
