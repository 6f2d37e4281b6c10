"""Compiled vs pure-Python strategy kernels.

    python3 benchmarks/bench_kernels.py [--seed N] [--repeat R]

Each row times ``first_forcing`` (worst case: nothing forces, every
combination is visited) and ``scan`` on random factor sets of growing size.
"""

import argparse
import random
import timeit

from stratos import kernels

SIZES = [  # (factors, options per factor, histories)
    (4, 3, 64),
    (6, 3, 200),
    (8, 3, 500),
    (10, 2, 1000),
]


def instance(rng, n_fac, n_opt, n_bits):
    full = (1 << n_bits) - 1
    factors = [[rng.getrandbits(n_bits) | rng.getrandbits(n_bits) for _ in range(n_opt)]
               for _ in range(n_fac)]
    good = full ^ (1 << rng.randrange(n_bits))
    # make sure no combination forces so the search is exhaustive
    bad_bit = (full ^ good)
    factors = [[f | bad_bit for f in fs] for fs in factors]
    weights = [rng.random() for _ in range(n_bits)]
    utils = [float(rng.randint(-5, 5)) for _ in range(n_bits)]
    return factors, full, good, n_bits, weights, utils


def best(fn, repeat):
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernels.BACKEND != "compiled":
        raise SystemExit("compiled kernels are not built; run `pip install -e . --no-build-isolation`")
    rng = random.Random(args.seed)
    print(f"{'space':>18} {'kernel':>13} {'python s':>10} {'compiled s':>11} {'speedup':>8}")
    for n_fac, n_opt, n_bits in SIZES:
        fac, base, good, n, w, u = instance(rng, n_fac, n_opt, n_bits)
        label = f"{n_opt}^{n_fac} x {n_bits}h"
        for name, call in (
            ("first_forcing", lambda b: kernels.first_forcing(fac, base, good, n, backend=b)),
            ("scan", lambda b: kernels.scan(fac, base, good, w, u, n, backend=b)),
        ):
            py, cc = call("python"), call("compiled")
            assert (py["forcing"] == cc["forcing"]) if name == "scan" else py == cc
            tp = best(lambda: call("python"), args.repeat)
            tc = best(lambda: call("compiled"), args.repeat)
            print(f"{label:>18} {name:>13} {tp:10.4f} {tc:11.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()
