"""Calibration result file format.

    {
      "chain": [...], "base_frame": {...},        # copied from the dataset
      "config": {...},
      "mode": "two_stage" | "monolithic",
      "trials": [ {"sus": [ {"su_id", "host_joint", "params", "static_residual",
                             "dynamic_residual", "iterations", "restarts_used",
                             "converged", "flat_objective"} ]} ]
    }

Wall-clock timings are deliberately not written by default so that two
seeded runs produce byte-identical files; pass include_timings=True to
attach them.
"""
from __future__ import annotations

import json

from .calibration import CalibConfig, CalibrationResult
from .dataset import chain_from_json, chain_to_json, su_params_from_json, su_params_to_json
from .errors import DatasetFormatError


def _config_to_json(config: CalibConfig) -> dict:
    return {
        "bounds": {k: list(v) for k, v in config.bounds.items()},
        "restarts": config.restarts,
        "static_error_threshold": config.static_error_threshold,
        "param_delta_threshold": config.param_delta_threshold,
        "max_iterations": config.max_iterations,
        "rng_seed": config.rng_seed,
    }


def _su_to_json(su, include_timings: bool) -> dict:
    out = {
        "su_id": su.su_index,
        "host_joint": su.host_joint,
        "params": su_params_to_json(su.params),
        "static_residual": su.static_residual,
        "dynamic_residual": su.dynamic_residual,
        "iterations": su.iterations,
        "restarts_used": su.restarts_used,
        "converged": su.converged,
        "flat_objective": su.flat_objective,
    }
    if include_timings:
        out["timings"] = su.wall_times
    return out


def results_to_json(trials, chain, include_timings: bool = False) -> dict:
    """Serialize a list of CalibrationResult (one per trial)."""
    first = trials[0]
    out = dict(chain_to_json(chain))
    out["config"] = _config_to_json(first.config)
    out["mode"] = first.mode
    out["trials"] = [
        {"sus": [_su_to_json(su, include_timings) for su in trial.sus]}
        for trial in trials
    ]
    if include_timings:
        for obj, trial in zip(out["trials"], trials):
            obj["total_wall_time"] = trial.total_wall_time
    return out


def save_results(trials, chain, path, include_timings: bool = False) -> None:
    if isinstance(trials, CalibrationResult):
        trials = [trials]
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(results_to_json(trials, chain, include_timings), fh)


def load_results(path) -> dict:
    """Load a result file back into plain data: chain + per-trial estimates."""
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"not valid JSON: {exc}") from exc
    for key in ("chain", "trials", "mode"):
        if key not in obj:
            raise DatasetFormatError(f"result file missing '{key}'", json_path=f"$.{key}")
    chain = chain_from_json(obj)
    trials = []
    for trial in obj["trials"]:
        trials.append(
            {
                "estimates": [su_params_from_json(su["params"]) for su in trial["sus"]],
                "sus": trial["sus"],
            }
        )
    return {"chain": chain, "mode": obj["mode"], "trials": trials, "raw": obj}
