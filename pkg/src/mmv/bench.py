"""Benchmark the numba kernel backend against the numpy fallback.

Run as ``python -m mmv.bench [--sizes 200,1000] [--p 20] [--repeats 5]``.
Times the step-mode index, the smoothed index, and the finite-difference
gradient on synthetic two-class data and prints per-call medians with the
speedup of the active jitted path. The numba rows are skipped when the
backend is unavailable.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from . import _kernels_numpy as numpy_kernels
from . import backends


def _median_time(fn, repeats: int) -> float:
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        times.append(time.perf_counter() - start)
    return float(np.median(times))


def _workloads(n: int, p: int):
    gen = np.random.default_rng(12345)
    features = np.ascontiguousarray(gen.standard_normal((n, p)))
    labels = (gen.random(n) < 0.5).astype(np.int64)
    labels[0] = 0
    labels[1] = 1
    beta = gen.standard_normal(p)
    beta /= np.linalg.norm(beta)
    scores = features @ beta
    h = 3.0 * scores.std(ddof=1) * n ** (-1.0 / 3.0)
    return features, labels, beta, scores, h


def run(sizes, p: int, repeats: int) -> None:
    modules = [("numpy", numpy_kernels)]
    if backends.numba_kernels is not None:
        modules.append(("numba", backends.numba_kernels))
    else:
        print("numba backend unavailable; timing numpy only")
    print(f"active backend: {backends.backend_name()}")
    header = f"{'kernel':<12} {'n':>6} " + "".join(f"{name + ' (ms)':>14}" for name, _ in modules)
    if len(modules) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for n in sizes:
        features, labels, beta, scores, h = _workloads(n, p)
        tasks = {
            "step": lambda m: m.mv_step(scores, labels, 2),
            "smoothed": lambda m: m.mv_smoothed(scores, labels, 2, h, m.GAUSSIAN),
            "gradient": lambda m: m.mv_gradient_fd(
                features, labels, 2, beta, h, m.GAUSSIAN, m.FD_RELATIVE_STEP
            ),
        }
        for label, task in tasks.items():
            row = f"{label:<12} {n:>6} "
            times = []
            for _, module in modules:
                task(module)  # warm the JIT / allocator before timing
                times.append(_median_time(lambda: task(module), repeats))
                row += f"{1000 * times[-1]:>14.3f}"
            if len(times) == 2:
                row += f"{times[0] / times[1]:>9.1f}x"
            print(row)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="200,1000", help="comma-separated sample sizes")
    parser.add_argument("--p", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args(argv)
    run([int(s) for s in args.sizes.split(",")], args.p, args.repeats)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
