"""Robustness maps for control pulses under static drive errors.

Sweeps the miscalibration pair (alpha, delta) over a grid, one
propagation per cell, and records a scalar merit of the final state.
Sweeps are deterministic: the assembled map is identical bit for bit
regardless of the worker count, and a failing cell is flagged and set
to NaN instead of aborting the grid.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _util
from .propagate import ErrorParams, Trajectory, bloch_propagate
from .pulsegen import ControlPulse, pulse_sidecar_meta
from .topdyn import Family, TopParameters, transfer_period


def merit_J3(traj: Trajectory) -> float:
    """Inversion merit: minus the final M3 component."""
    return -float(traj.M[-1, 2])


def merit_J2(traj: Trajectory) -> float:
    """Transverse merit: minus the final M2 component."""
    return -float(traj.M[-1, 1])


@dataclass(frozen=True, eq=False)
class RobustnessMap:
    """Merit values on the (alpha, delta) grid, row-major in alpha."""

    alpha_grid: np.ndarray
    delta_grid: np.ndarray
    values: np.ndarray
    flags: np.ndarray
    meta: dict

    def __post_init__(self):
        expect = (len(self.alpha_grid), len(self.delta_grid))
        if self.values.shape != expect or self.flags.shape != expect:
            raise ValueError("values/flags must be shaped (n_alpha, n_delta)")


def default_alpha_grid(n: int = 21) -> np.ndarray:
    return np.linspace(-0.5, 0.5, n)


def default_delta_grid(pulse: ControlPulse, n: int = 21) -> np.ndarray:
    peak = float(np.max(np.abs(pulse.omega1)))
    if peak == 0.0:
        peak = 1.0
    return np.linspace(-peak, peak, n)


def sweep(pulse: ControlPulse, M0, alpha_grid=None, delta_grid=None,
          merit=merit_J3, workers: int | None = None) -> RobustnessMap:
    """Evaluate the merit over the error grid, one propagation per cell.

    workers > 1 fans the cells out to a thread pool; results are always
    assembled in grid order, so the output does not depend on the worker
    count.  A cell whose propagation raises is recorded as NaN with its
    flag set.
    """
    alpha = (default_alpha_grid() if alpha_grid is None
             else np.asarray(alpha_grid, dtype=float))
    delta = (default_delta_grid(pulse) if delta_grid is None
             else np.asarray(delta_grid, dtype=float))
    if alpha.ndim != 1 or delta.ndim != 1 or not len(alpha) or not len(delta):
        raise ValueError("alpha_grid and delta_grid must be non-empty 1-d")
    M0 = np.asarray(M0, dtype=float)

    def cell(a: float, d: float):
        try:
            traj = bloch_propagate(pulse, M0, ErrorParams(alpha=a, delta=d))
            return float(merit(traj)), 0
        except Exception:
            return float("nan"), 1

    pairs = [(float(a), float(d)) for a in alpha for d in delta]
    if workers is not None and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(lambda ad: cell(*ad), pairs))
    else:
        out = [cell(a, d) for a, d in pairs]

    values = np.array([v for v, _ in out]).reshape(len(alpha), len(delta))
    flags = np.array([f for _, f in out], dtype=np.int64).reshape(values.shape)
    meta = {"merit": getattr(merit, "__name__", str(merit)),
            "M0": [float(x) for x in M0],
            "pulse": pulse_sidecar_meta(pulse)}
    return RobustnessMap(alpha_grid=alpha, delta_grid=delta, values=values,
                         flags=flags, meta=meta)


def write_map_csv(rmap: RobustnessMap, path, sidecar: bool = True) -> None:
    """CSV rows alpha,delta,J,flag in grid order plus a JSON sidecar."""
    lines = ["alpha,delta,J,flag"]
    for i, a in enumerate(rmap.alpha_grid):
        for j, d in enumerate(rmap.delta_grid):
            lines.append(",".join([_util.fmt(a), _util.fmt(d),
                                   _util.fmt(rmap.values[i, j]),
                                   str(int(rmap.flags[i, j]))]))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")
    if sidecar:
        _util.dump_json({"alpha_grid": [float(x) for x in rmap.alpha_grid],
                         "delta_grid": [float(x) for x in rmap.delta_grid],
                         "meta": rmap.meta}, str(path) + ".json")


def fit_log_period(p: TopParameters, eps_samples,
                   family: Family = Family.ROTATING):
    """Least-squares fit T(eps) = a ln(1/eps) + b over the samples.

    Needs at least 3 samples spanning at least two decades of eps.
    Returns (a, b, r_squared).
    """
    eps = np.asarray(eps_samples, dtype=float)
    if eps.ndim != 1 or len(eps) < 3:
        raise ValueError("need at least 3 eps samples")
    if np.any(eps <= 0.0) or np.any(eps >= 1.0):
        raise ValueError("eps samples must lie in (0, 1)")
    if np.max(eps) / np.min(eps) < 100.0:
        raise ValueError("eps samples must span at least two decades")
    x = np.log(1.0 / eps)
    y = np.array([transfer_period(p, float(e), family) for e in eps])
    a, b = np.polyfit(x, y, 1)
    resid = y - (a * x + b)
    ss_tot = float(np.sum((y - np.mean(y)) ** 2))
    r2 = 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(a), float(b), r2
