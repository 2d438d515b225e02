"""Benchmark the compiled kernel backend against the pure-Python reference.

Usage:
    python3 benchmarks/bench_kernels.py [--repeat 5] [--calls 2000]

Times the two cost kernels on realistic problem sizes and, if both
backends are available, an end-to-end calibration of a small synthetic
dataset with each backend.
"""
import argparse
import timeit

import numpy as np

from skincal import kernels
from skincal.kernels import _ref
from skincal.se3 import random_rotation


def _inputs(P=48, seed=0):
    rng = np.random.default_rng(seed)
    angles = rng.uniform(-np.pi, np.pi, size=3)
    trans = rng.uniform(-0.3, 0.3, size=3)
    R_dn = np.stack([random_rotation(rng) for _ in range(P)])
    t_dn = rng.uniform(-0.5, 0.5, size=(P, 3))
    R_bn = np.stack([random_rotation(rng) for _ in range(P)])
    qdot = rng.uniform(-2, 2, size=P)
    qddot = rng.uniform(-6, 6, size=P)
    a_meas = rng.normal(0, 5, size=(P, 3))
    g = np.array([0.0, 0.0, 9.81])
    return angles, trans, R_dn, t_dn, R_bn, qdot, qddot, a_meas, g


def bench_costs(repeat, calls):
    angles, trans, R_dn, t_dn, R_bn, qdot, qddot, a_meas, g = _inputs()
    inv_p = 1.0 / 16.0
    cases = {
        "static_cost": lambda impl: impl.static_cost(angles, trans, R_bn, a_meas, g),
        "dynamic_cost": lambda impl: impl.dynamic_cost(
            trans, angles, R_dn, t_dn, R_bn, qdot, qddot, a_meas, g, inv_p
        ),
    }
    backends = {"python": _ref}
    if kernels.impl is not _ref:
        backends[kernels.BACKEND] = kernels.impl

    print(f"{'kernel':<14} {'backend':<8} {'us/call':>10}")
    baselines = {}
    for name, fn in cases.items():
        for label, impl in backends.items():
            best = min(timeit.repeat(lambda: fn(impl), number=calls, repeat=repeat))
            us = 1e6 * best / calls
            if label == "python":
                baselines[name] = us
                extra = ""
            else:
                extra = f"  ({baselines[name] / us:.1f}x vs python)"
            print(f"{name:<14} {label:<8} {us:>10.2f}{extra}")


def bench_calibration():
    # Full pipeline comparison requires re-importing with the override
    # env var, so it runs in subprocesses.
    import subprocess
    import sys

    script = (
        "import time\n"
        "from skincal import kernels\n"
        "from skincal.calibration import CalibConfig, calibrate\n"
        "from skincal.dataset import default_chain\n"
        "from skincal.simulator import generate_dataset\n"
        "ds = generate_dataset(default_chain(), n_poses=8, n_sus=3, seed=0, noise_sigma=0.05)\n"
        "t0 = time.perf_counter()\n"
        "calibrate(ds, CalibConfig(rng_seed=0))\n"
        "print(f'{kernels.BACKEND}: {time.perf_counter() - t0:.3f} s')\n"
    )
    print("\nend-to-end calibrate (8 poses, 3 SUs, noisy):", flush=True)
    for env in ({}, {"SKINCAL_PURE_PYTHON": "1"}):
        import os

        merged = {**os.environ, **env}
        subprocess.run([sys.executable, "-c", script], env=merged, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--calls", type=int, default=2000)
    parser.add_argument("--skip-calibration", action="store_true")
    args = parser.parse_args()

    print(f"active backend: {kernels.BACKEND}")
    bench_costs(args.repeat, args.calls)
    if not args.skip_calibration:
        bench_calibration()


if __name__ == "__main__":
    main()
