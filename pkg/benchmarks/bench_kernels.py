"""Compare the compiled kernel backend against the numpy reference.

Times the three hot kernels (packet analysis step, cube membership mask,
child occupancy counts) on benchmark-scale shapes, checking bit-identity
of the outputs first.  With --end-to-end it also times one small
experiment run per backend in a subprocess (the backend is fixed at
import time, so in-process switching is not possible).

Run from the repository root:

    python3 benchmarks/bench_kernels.py
    python3 benchmarks/bench_kernels.py --repeats 9 --end-to-end
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from ldbkit._kernels import _ref

try:
    from ldbkit._kernels import _fast
except ImportError:
    _fast = None


def best_of(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def check_identical(a, b):
    for x, y in zip(np.atleast_1d(a), np.atleast_1d(b)):
        if not np.array_equal(np.asarray(x), np.asarray(y)):
            raise AssertionError("backends disagree")


def make_cases(rng):
    cases = []

    for rows, nb, taps in ((2200, 1024, 18), (3300, 32, 6)):
        x = rng.standard_normal((rows, nb))
        lo = rng.standard_normal(taps)
        hi = rng.standard_normal(taps)
        cases.append((f"wpt_level rows={rows} nb={nb} taps={taps}",
                      lambda impl, x=x, lo=lo, hi=hi: impl.wpt_level(x, lo, hi)))

    pts = rng.uniform(-1.0, 1.0, size=(3000, 5))
    alive = np.ones(3000, dtype=np.uint8)
    cube_lo = np.full(5, -1.0)
    cube_hi = np.full(5, 0.5)
    hi_closed = np.zeros(5, dtype=np.uint8)
    cases.append(("cube_mask 3000x5",
                  lambda impl: impl.cube_mask(pts, alive, cube_lo, cube_hi,
                                              hi_closed)))

    pts_b = rng.uniform(-1.0, 1.0, size=(3000, 5))
    cases.append(("split_counts 2x3000x5",
                  lambda impl: impl.split_counts(pts, alive, pts_b, alive,
                                                 cube_lo, cube_hi, hi_closed)))
    return cases


def run_micro(repeats):
    rng = np.random.default_rng(0)
    print(f"{'kernel':<38} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, call in make_cases(rng):
        t_ref = best_of(lambda: call(_ref), repeats)
        if _fast is None:
            print(f"{name:<38} {t_ref * 1e3:>8.2f}ms {'n/a':>10} {'n/a':>8}")
            continue
        check_identical(call(_ref), call(_fast))
        t_fast = best_of(lambda: call(_fast), repeats)
        print(f"{name:<38} {t_ref * 1e3:>8.2f}ms {t_fast * 1e3:>8.2f}ms "
              f"{t_ref / t_fast:>7.1f}x")


_E2E_SCRIPT = """
import time
from ldbkit.experiment import ExperimentConfig, run_experiment
t0 = time.perf_counter()
run_experiment(ExperimentConfig(example="ex3", seed=0, realizations=1,
                                train_per_class=50, test_per_class=100))
print(f"{time.perf_counter() - t0:.2f}")
"""


def run_end_to_end():
    print("\nend-to-end: ex3, 1 realization, 50 train / 100 test per class")
    for backend in ("python", "compiled"):
        if backend == "compiled" and _fast is None:
            print(f"{backend:<10} n/a (extension not built)")
            continue
        env = dict(os.environ, LDBKIT_KERNELS=backend)
        out = subprocess.run([sys.executable, "-c", _E2E_SCRIPT], env=env,
                             capture_output=True, text=True, check=True)
        print(f"{backend:<10} {float(out.stdout.strip()):.2f}s")


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=5,
                        help="best-of-N timing repeats (default 5)")
    parser.add_argument("--end-to-end", action="store_true",
                        help="also time a small full experiment per backend")
    args = parser.parse_args()
    if _fast is None:
        print("note: compiled extension not importable; timing reference only")
    run_micro(args.repeats)
    if args.end_to_end:
        run_end_to_end()


if __name__ == "__main__":
    main()
