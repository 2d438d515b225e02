"""A small Nelder-Mead simplex minimizer.

Hand-rolled instead of scipy's so the stopping rule matches the
calibration procedure exactly: a local search ends when the simplex
parameter spread (L-inf over vertices and coordinates) drops below a
threshold, or at the iteration cap.  Standard reflection/expansion/
contraction/shrink coefficients.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

ALPHA = 1.0  # reflection
GAMMA = 2.0  # expansion
RHO = 0.5  # contraction
SIGMA = 0.5  # shrink


@dataclass
class NmResult:
    x: np.ndarray
    fun: float
    n_iter: int
    n_fev: int
    converged: bool  # stopped by the spread rule, not the iteration cap


def nelder_mead(f, x0, step, spread_tol: float, max_iter: int) -> NmResult:
    """Minimize f from x0 with an axis-aligned initial simplex.

    step is a scalar or per-coordinate array giving the initial simplex
    edge lengths.
    """
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    step = np.broadcast_to(np.asarray(step, dtype=float), (n,))

    simplex = np.tile(x0, (n + 1, 1))
    for i in range(n):
        simplex[i + 1, i] += step[i]
    fvals = np.array([f(v) for v in simplex])
    n_fev = n + 1

    n_iter = 0
    converged = False
    while n_iter < max_iter:
        order = np.argsort(fvals, kind="stable")
        simplex = simplex[order]
        fvals = fvals[order]

        spread = np.max(np.abs(simplex[1:] - simplex[0]))
        if spread < spread_tol:
            converged = True
            break

        n_iter += 1
        centroid = np.mean(simplex[:-1], axis=0)
        xr = centroid + ALPHA * (centroid - simplex[-1])
        fr = f(xr)
        n_fev += 1
        if fr < fvals[0]:
            xe = centroid + GAMMA * (xr - centroid)
            fe = f(xe)
            n_fev += 1
            if fe < fr:
                simplex[-1], fvals[-1] = xe, fe
            else:
                simplex[-1], fvals[-1] = xr, fr
        elif fr < fvals[-2]:
            simplex[-1], fvals[-1] = xr, fr
        else:
            if fr < fvals[-1]:
                xc = centroid + RHO * (xr - centroid)
            else:
                xc = centroid + RHO * (simplex[-1] - centroid)
            fc = f(xc)
            n_fev += 1
            if fc < min(fr, fvals[-1]):
                simplex[-1], fvals[-1] = xc, fc
            else:
                simplex[1:] = simplex[0] + SIGMA * (simplex[1:] - simplex[0])
                fvals[1:] = [f(v) for v in simplex[1:]]
                n_fev += n

    best = int(np.argmin(fvals))
    return NmResult(simplex[best].copy(), float(fvals[best]), n_iter, n_fev, converged)
