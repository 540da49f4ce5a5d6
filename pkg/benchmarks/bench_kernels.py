"""Time the complex128 kernels against the multiprecision engine.

    python3 benchmarks/bench_kernels.py [--fold-n 10000] [--rows 200] [--repeat 5]

Set TVCF_NUMBA=0 to time the numpy fallback instead of numba.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from tvcf import kernels
from tvcf.accel import accelerate
from tvcf.cf import classical_approximant
from tvcf.gallery import build
from tvcf.numerics import PrecisionContext
from tvcf.tails import tail_model


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--fold-n", type=int, default=10000)
    ap.add_argument("--rows", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--digits", type=int, default=32)
    args = ap.parse_args(argv)

    cf = build("perron_digamma", {"x": "1", "nu": "1/2"})
    ctx = PrecisionContext(args.digits)
    model = tail_model(cf.core(), ctx)
    N, J = args.rows, args.rows - 1

    # warm up the JIT outside the timed region
    kernels.odd_approximants_fast(cf, 4, np.zeros(1))
    kernels.accelerate_fast(cf, 4, 3, model)

    rows = [
        ("fold S_n(0)", f"n={args.fold_n}",
         best_of(lambda: kernels.odd_approximants_fast(cf, (args.fold_n + 1) // 2, np.zeros(1)),
                 args.repeat),
         best_of(lambda: classical_approximant(cf, args.fold_n, ctx), 1)),
        ("accelerate", f"N={N} J={J}",
         best_of(lambda: kernels.accelerate_fast(cf, N, J, model), args.repeat),
         best_of(lambda: accelerate(cf, N, J, ctx, model=model), 1)),
    ]
    print(f"backend={kernels.BACKEND} digits={args.digits}")
    print(f"{'task':<14}{'size':<16}{'kernel s':>12}{'mpmath s':>12}{'speedup':>10}")
    for name, size, fast, slow in rows:
        print(f"{name:<14}{size:<16}{fast:>12.5f}{slow:>12.4f}{slow / fast:>10.0f}")


if __name__ == "__main__":
    main()
