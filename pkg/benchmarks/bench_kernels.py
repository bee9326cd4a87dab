"""Time the compiled Monte-Carlo kernel against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--trials N] [--n N] [--hands K]

Both backends get the same arguments; the script also confirms their
counts agree before reporting the speed-up.
"""

import argparse
import time

import numpy as np

from deckmix import _kernels_py
from deckmix.models import GsrRiffle, NaiveUniform, PhysicalRiffle, TopInAtRandom
from deckmix.montecarlo import _kernel_args

try:
    from deckmix import _kernels
except ImportError:
    _kernels = None

MODELS = {"top": TopInAtRandom(), "gsr": GsrRiffle(2), "physical": PhysicalRiffle(), "naive": NaiveUniform()}


def timed(fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    return out, time.perf_counter() - t0


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=20_000)
    ap.add_argument("--n", type=int, default=6)
    ap.add_argument("--hands", type=int, default=3)
    args = ap.parse_args()
    if _kernels is None:
        print("compiled kernel not built; only the Python fallback is available")
    print(f"n={args.n} hands={args.hands} trials={args.trials}")
    print(f"{'model':<10}{'python s':>12}{'compiled s':>12}{'speed-up':>10}")
    for name, model in MODELS.items():
        kind, p1, p2, perm = _kernel_args(model, args.n)
        call = (kind, args.n, args.hands, 0, 0, args.trials, p1, p2, perm)
        slow, t_py = timed(_kernels_py.run_counts, *call)
        if _kernels is None:
            print(f"{name:<10}{t_py:>12.3f}{'-':>12}{'-':>10}")
            continue
        fast, t_c = timed(_kernels.run_counts, *call)
        if not np.array_equal(slow, fast):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{name:<10}{t_py:>12.3f}{t_c:>12.4f}{t_py / t_c:>9.0f}x")


if __name__ == "__main__":
    main()
