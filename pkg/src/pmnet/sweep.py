"""Batch experiment orchestration: parameter sweeps over seeds.

A sweep runs one simulation per (grid point, seed) pair, optionally in
parallel processes, and reduces the results to per-point mean/variance
rows plus an argmin summary.  Reports are pure functions of the per-run
records, which are embedded verbatim so the statistics can be recomputed
offline.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

from .scenario import Scenario, ScenarioError, scenario_from_dict, \
    scenario_to_dict
from .simulator import run

AXES = ("H", "alpha", "beta", "noise-m")


def _apply_axis(sc: Scenario, axis: str, value: float) -> Scenario:
    ctl = sc.controller
    if axis == "H":
        if value <= 0.0:
            raise ScenarioError("H grid values must be positive")
        return replace(sc, controller=replace(ctl, H=value))
    if axis == "alpha":
        ctype = ctl.type
        if ctype not in ("rhc_alpha", "ex_rhc_alpha_beta"):
            ctype = "rhc_alpha"
        return replace(sc, controller=replace(ctl, type=ctype, alpha=value))
    if axis == "beta":
        return replace(sc, controller=replace(
            ctl, type="ex_rhc_alpha_beta", beta=value))
    if axis == "noise-m":
        if sc.noise.model is None:
            raise ScenarioError(
                "noise-m sweep requires the scenario to name a noise model")
        return replace(sc, noise=replace(sc.noise, m=value))
    raise ScenarioError(f"unknown sweep axis '{axis}' (choose from "
                        f"{', '.join(AXES)})")


def _one_run(payload: tuple[dict, str, float, int]) -> float:
    data, axis, value, seed = payload
    sc = _apply_axis(scenario_from_dict(data), axis, value)
    return run(sc, seed=seed).J_T


def _nominal_values(sc: Scenario, axis: str) -> set[float]:
    """Parameter-free weight choices implied by the neighborhood sizes."""
    sizes = {len(sc.graph.closed_neighborhood(i)) for i in sc.graph.ids}
    if axis == "alpha":
        return {1.0 / (n * n) for n in sizes}
    if axis == "beta":
        return {1.0 / n for n in sizes}
    return set()


def run_sweep(sc: Scenario, axis: str, grid: list[float], seeds: list[int],
              parallel: int | None = None) -> dict:
    """Execute the sweep and build the report dictionary.

    The report rows are sorted by grid value; for H sweeps it additionally
    reports the cost at the default bound H = T/2 and its ratio to the best
    grid point.
    """
    if axis not in AXES:
        raise ScenarioError(f"unknown sweep axis '{axis}' (choose from "
                            f"{', '.join(AXES)})")
    if not grid:
        raise ScenarioError("sweep grid must be non-empty")
    if not seeds:
        raise ScenarioError("need at least one seed")
    grid = sorted(float(v) for v in grid)
    data = scenario_to_dict(sc)
    default_h = sc.T / 2.0
    jobs = [(value, seed) for value in grid for seed in seeds]
    extra_default = axis == "H" and not any(
        math.isclose(v, default_h, rel_tol=0, abs_tol=1e-12) for v in grid)
    if extra_default:
        jobs += [(default_h, seed) for seed in seeds]
    payloads = [(data, axis, value, seed) for (value, seed) in jobs]
    if parallel is None:
        parallel = os.cpu_count() or 1
    if parallel > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            costs = list(pool.map(_one_run, payloads))
    else:
        costs = [_one_run(p) for p in payloads]
    runs = [{"value": value, "seed": seed, "J_T": cost}
            for (value, seed), cost in zip(jobs, costs)]
    nominal = _nominal_values(sc, axis)
    n_grid_runs = len(grid) * len(seeds)
    points = []
    for value in grid:
        vals = [r["J_T"] for r in runs[:n_grid_runs] if r["value"] == value]
        mean = sum(vals) / len(vals)
        if len(vals) > 1:
            var = sum((v - mean) ** 2 for v in vals) / (len(vals) - 1)
        else:
            var = 0.0
        points.append({
            "value": value, "mean": mean, "variance": var,
            "count": len(vals),
            "nominal": any(math.isclose(value, nv, rel_tol=1e-12)
                           for nv in nominal),
        })
    best = min(points, key=lambda p: (p["mean"], p["value"]))
    report = {
        "axis": axis,
        "controller": sc.controller.type,
        "seeds": list(seeds),
        "points": points,
        "runs": runs,
        "argmin": {"value": best["value"], "mean": best["mean"]},
    }
    if axis == "H":
        if extra_default:
            dvals = [r["J_T"] for r in runs[n_grid_runs:]]
            dmean = sum(dvals) / len(dvals)
        else:
            dmean = next(p["mean"] for p in points
                         if math.isclose(p["value"], default_h, rel_tol=0,
                                         abs_tol=1e-12))
        report["default_H"] = {"value": default_h, "mean": dmean}
        report["ratio_default_to_best"] = (dmean / best["mean"]
                                           if best["mean"] > 0 else math.inf)
    return report
