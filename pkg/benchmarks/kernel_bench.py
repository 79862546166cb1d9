#!/usr/bin/env python3
"""Timing comparison of the hot kernels under both backends.

The package JIT-compiles its loop-bound kernels with numba by default and
falls back to the same code as pure numpy/Python when LRDMD_DISABLE_NUMBA=1.
This script runs each workload in a fresh subprocess per backend (so the
import-time backend selection applies), checks the two backends agree
numerically, and prints a timing table.

Usage:
    python benchmarks/kernel_bench.py [--reps 5] [--out results.csv]
"""

import argparse
import json
import os
import subprocess
import sys
import time


def workloads():
    import numpy as np

    from lrdmd import kernels

    rng = np.random.default_rng(0)

    def als():
        X = rng.standard_normal((6, 4))
        Y = rng.standard_normal((6, 4))
        YXp = np.ascontiguousarray(Y @ np.linalg.pinv(X))
        inits = rng.standard_normal((50, 6, 2))
        return lambda: kernels.als_sweep(X, Y, YXp, inits, 500)[0]

    def factored():
        left = 0.7 * np.linalg.qr(rng.standard_normal((50, 10)))[0]
        right = left.T.copy()
        x0 = rng.standard_normal(50)
        return lambda: float(kernels.propagate_factored(left, right, x0, 20000, 1, 1e150)[0][-1, 0])

    def reduced():
        M = np.linalg.qr(rng.standard_normal((10, 10)))[0] * 0.99
        z = rng.standard_normal(10)
        return lambda: float(kernels.propagate_reduced(M, z, 200000, 1, 1e150)[0][-1, 0])

    return {
        "als_sweep_50x500": als(),
        "propagate_factored_T20k": factored(),
        "propagate_reduced_T200k": reduced(),
    }


def run_worker(reps):
    from lrdmd import kernels

    results = {"backend": kernels.backend_name(), "timings": {}, "values": {}}
    for name, fn in workloads().items():
        fn()  # warm-up (and JIT compile on the numba backend)
        best = float("inf")
        for _ in range(reps):
            start = time.perf_counter()
            value = fn()
            best = min(best, time.perf_counter() - start)
        results["timings"][name] = best
        results["values"][name] = value
    print(json.dumps(results))


def spawn(disable_numba, reps):
    env = dict(os.environ)
    if disable_numba:
        env["LRDMD_DISABLE_NUMBA"] = "1"
    else:
        env.pop("LRDMD_DISABLE_NUMBA", None)
    out = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--worker", "--reps", str(reps)],
        env=env,
        capture_output=True,
        text=True,
    )
    if out.returncode != 0:
        raise RuntimeError(f"worker failed:\n{out.stderr}")
    return json.loads(out.stdout.splitlines()[-1])


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--reps", type=int, default=5, help="timed repetitions per workload")
    parser.add_argument("--out", default=None, help="optional CSV output path")
    parser.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = parser.parse_args()

    if args.worker:
        run_worker(args.reps)
        return 0

    numba_res = spawn(disable_numba=False, reps=args.reps)
    numpy_res = spawn(disable_numba=True, reps=args.reps)
    print(f"backends: {numba_res['backend']} vs {numpy_res['backend']}\n")
    header = f"{'workload':<28} {'numba [ms]':>12} {'numpy [ms]':>12} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    rows = []
    for name in numba_res["timings"]:
        t_nb = numba_res["timings"][name] * 1e3
        t_np = numpy_res["timings"][name] * 1e3
        rel = abs(numba_res["values"][name] - numpy_res["values"][name])
        rel /= max(abs(numpy_res["values"][name]), 1e-300)
        if rel > 1e-9:
            raise RuntimeError(f"backends disagree on {name}: relative gap {rel:.3e}")
        print(f"{name:<28} {t_nb:>12.3f} {t_np:>12.3f} {t_np / t_nb:>8.1f}x")
        rows.append((name, t_nb, t_np, t_np / t_nb))
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write("workload,numba_ms,numpy_ms,speedup\n")
            for name, t_nb, t_np, speedup in rows:
                fh.write(f"{name},{t_nb!r},{t_np!r},{speedup!r}\n")
        print(f"\nwrote {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
