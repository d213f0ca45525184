"""Compare the compiled elimination kernel with the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--sizes 100 200 400] [--prime 65521] [--repeat 3]
Also times one end-to-end a_q computation under each backend.
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from fsig import _pykernels

try:
    from fsig import _kernels
except ImportError:
    _kernels = None


def best_of(fn, arr, p, repeat):
    times = []
    for _ in range(repeat):
        a = arr.copy()
        t0 = time.perf_counter()
        r = fn(a, p)
        times.append(time.perf_counter() - t0)
    return min(times), r


END_TO_END = (
    "import time; from fsig.catalog import ade_entry; from fsig.frobenius import free_rank_aq;"
    "en = ade_entry('A', 1, 5); t = time.perf_counter();"
    "r = free_rank_aq(en.polynomial(), en.ring(), 2); print(r.a_q, time.perf_counter() - t)"
)


def end_to_end(pure):
    env = dict(os.environ, FSIG_PURE_PYTHON="1" if pure else "0")
    out = subprocess.run([sys.executable, "-c", END_TO_END], env=env, capture_output=True, text=True, check=True)
    a_q, secs = out.stdout.split()
    return int(a_q), float(secs)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--prime", type=int, default=65521)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    print(f"{'n':>6} {'cython s':>10} {'numpy s':>10} {'speedup':>8}")
    for n in args.sizes:
        arr = rng.integers(0, args.prime, (n, n), dtype=np.int64)
        tp, rp = best_of(_pykernels.rank_dense, arr, args.prime, args.repeat)
        if _kernels is None:
            print(f"{n:>6} {'n/a':>10} {tp:>10.4f} {'':>8}")
            continue
        tc, rc = best_of(_kernels.rank_dense, arr, args.prime, args.repeat)
        assert rc == rp, (n, rc, rp)
        print(f"{n:>6} {tc:>10.4f} {tp:>10.4f} {tp / tc:>7.1f}x")

    print("\nA_1 at p=5, e=2 (a_q, seconds):")
    for label, pure in (("compiled", False), ("fallback", True)):
        a_q, secs = end_to_end(pure)
        print(f"  {label:<9} a_q={a_q} {secs:.3f}s")


if __name__ == "__main__":
    main()
