"""Benchmark the numba kernels against the pure numpy fallback.

Backend selection happens at import time, so each backend runs in its
own subprocess: the parent spawns two workers (GAUSSPERIM_DISABLE_NUMBA
unset and set), collects per-kernel timings as JSON, and prints a
side-by-side table with speedups.

Usage:
    python3 benchmarks/bench_kernels.py [--samples N] [--repeats K]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def _time_best(fn, repeats):
    """Best-of-k wall time in seconds; one untimed warmup for JIT."""
    fn()
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def run_worker(samples: int, repeats: int) -> None:
    import numpy as np

    from gaussperim import backend
    from gaussperim.fields import TestField, multi_indices
    from gaussperim.gaussian import derive_rng
    from gaussperim.perimeter import maximize_perimeter
    from gaussperim.sets import make_ball

    rng = derive_rng(0, "bench")
    m, degree = 3, 4
    Z = rng.standard_normal((samples, m))
    midx = multi_indices(m, degree)
    coef = rng.standard_normal((m, midx.shape[0])) * 0.1
    T = backend.hermite_tables(Z, degree)
    w = rng.random(samples) / samples
    pts = rng.standard_normal((4096, m))
    spacing = float(np.median(backend.nn_distances(pts)))

    timings = {
        "hermite_tables": _time_best(
            lambda: backend.hermite_tables(Z, degree), repeats
        ),
        "field_values": _time_best(
            lambda: backend.field_values(T, midx, coef), repeats
        ),
        "squash_divstar": _time_best(
            lambda: backend.squash_divstar(T, midx, coef, Z, 8.0), repeats
        ),
        "squash_gradient": _time_best(
            lambda: backend.squash_gradient(T, midx, coef, Z, w, 8.0), repeats
        ),
        "greedy_cover_idx": _time_best(
            lambda: backend.greedy_cover_idx(pts, 4.0 * spacing), repeats
        ),
        "nn_distances": _time_best(
            lambda: backend.nn_distances(pts), repeats
        ),
        "maximize_perimeter_e2e": _time_best(
            lambda: maximize_perimeter(
                make_ball([0.0, 0.0], 1.0), samples=20_000, iters=40, seed=0
            ),
            max(1, repeats // 3),
        ),
    }
    print(json.dumps({"backend": backend.backend_name(), "timings": timings}))


def spawn(disable_numba: bool, samples: int, repeats: int) -> dict:
    env = dict(os.environ)
    env["GAUSSPERIM_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker",
         "--samples", str(samples), "--repeats", str(repeats)],
        env=env, capture_output=True, text=True, check=True,
    )
    return json.loads(proc.stdout.strip().splitlines()[-1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--samples", type=int, default=200_000)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--worker", action="store_true",
                        help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        run_worker(args.samples, args.repeats)
        return 0

    results = {}
    for disable in (True, False):
        rep = spawn(disable, args.samples, args.repeats)
        results[rep["backend"]] = rep["timings"]
    if set(results) != {"numpy", "numba"}:
        print("numba unavailable; only the numpy backend ran", file=sys.stderr)
        for name, t in results.get("numpy", {}).items():
            print(f"{name:26s} {t * 1e3:9.2f} ms")
        return 0

    print(f"samples={args.samples} repeats={args.repeats} (best-of)")
    print(f"{'kernel':26s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name in results["numpy"]:
        t_np = results["numpy"][name]
        t_nb = results["numba"][name]
        print(f"{name:26s} {t_np * 1e3:8.2f}ms {t_nb * 1e3:8.2f}ms "
              f"{t_np / t_nb:7.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
