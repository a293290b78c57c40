#!/usr/bin/env python3
"""Benchmark the hot kernels on both execution paths.

Runs the suite twice in subprocesses -- once with numba JIT (default) and
once with ``PMNET_NO_NUMBA=1`` (pure python/numpy fallback) -- and prints a
side-by-side table.  Invoke with ``--inner`` to run a single mode in the
current process (used by the driver).
"""

import json
import os
import statistics
import subprocess
import sys
import time

REPEAT = 2000


def bench_kernels():
    import numpy as np

    import pmnet.kernels as K
    from pmnet.scenario import generate_scenario
    from pmnet.simulator import run

    K.warmup()
    rng = np.random.default_rng(7)
    results = {}

    # quartic root solving
    polys = rng.uniform(-3, 3, size=(REPEAT, 5))
    out = np.empty(4)
    t0 = time.perf_counter()
    for p in polys:
        K.quartic_roots(p[0], p[1], p[2], p[3], p[4], out)
    results["quartic_roots"] = (time.perf_counter() - t0) / REPEAT

    # full rational-program solve
    cases = []
    for _ in range(REPEAT):
        C = np.empty(9)
        C[:6] = rng.uniform(-3, 3, size=6)
        C[6:8] = rng.uniform(0, 2, size=2)
        C[8] = rng.uniform(0.5, 2)
        cases.append((C, rng.uniform(0, 2), rng.uniform(0.1, 3),
                      rng.uniform(0, 2), rng.uniform(0.1, 3),
                      rng.uniform(0.1, 3)))
    t0 = time.perf_counter()
    for (C, P, L, Q, M, N) in cases:
        K.rfop_solve(C, P, L, Q, M, N)
    results["rfop_solve"] = (time.perf_counter() - t0) / REPEAT

    # closed-form departure dwell
    t0 = time.perf_counter()
    for _ in range(REPEAT):
        K.dwell_closed_form(-4.0, 1.0, 2.0, 6.0, 3.0, 6.0, 2.0, 1.0, 10.0,
                            2.0, 1.0, 0.5, 0.5, 10.0)
    results["dwell_closed_form"] = (time.perf_counter() - t0) / REPEAT

    # one representative end-to-end simulation
    sc = generate_scenario("random-geometric", 8, 3, seed=7)
    times = []
    for _ in range(3):
        t0 = time.perf_counter()
        run(sc)
        times.append(time.perf_counter() - t0)
    results["simulation_8x3_T500"] = statistics.median(times)
    return results


def main():
    if "--inner" in sys.argv:
        print(json.dumps(bench_kernels()))
        return
    rows = {}
    for label, env_val in (("numba", "0"), ("pure", "1")):
        env = dict(os.environ, PMNET_NO_NUMBA=env_val)
        proc = subprocess.run(
            [sys.executable, os.path.abspath(__file__), "--inner"],
            capture_output=True, text=True, env=env, check=True)
        rows[label] = json.loads(proc.stdout.strip().splitlines()[-1])
    names = sorted(rows["numba"])
    width = max(len(n) for n in names) + 2
    print(f"{'kernel':<{width}}{'numba':>12}{'pure':>12}{'speedup':>10}")
    for n in names:
        a, b = rows["numba"][n], rows["pure"][n]
        unit = "ms" if a >= 1e-3 or b >= 1e-3 else "us"
        scale = 1e3 if unit == "ms" else 1e6
        print(f"{n:<{width}}{a * scale:>10.2f}{unit}"
              f"{b * scale:>10.2f}{unit}{b / a:>9.1f}x")


if __name__ == "__main__":
    main()
