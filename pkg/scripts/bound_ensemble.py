"""Check every Mahler-measure bound on an ensemble of random monic polynomials.

Per bound the script reports how often it applied, how often it failed, and
the worst relative slack.  For the linear lower bound outside [0, 2n] it also
checks the weaker form 2^-n (|n - alpha|/n (L - 1) + 1) that the
d-coefficient estimate supports directly, to separate a loose statement from a bad solver.

Usage: python3 scripts/bound_ensemble.py --count 1000 --seed 1
"""

import argparse
import collections
import time

import numpy as np

from fraczero.complex_poly import CenteredPolynomial, norms
from fraczero.mahler import bound_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--max-degree", type=int, default=8)
    ap.add_argument("--modulus", type=float, default=10.0)
    ap.add_argument("--points", type=int, default=50)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    total, fails = collections.Counter(), collections.Counter()
    worst = {}
    weak_fail = 0
    k = args.points
    t0 = time.perf_counter()
    for _ in range(args.count):
        n = int(rng.integers(1, args.max_degree + 1))
        c = rng.uniform(0, args.modulus, n) * np.exp(2j * np.pi * rng.uniform(size=n))
        p = CenteredPolynomial(tuple(c) + (1,))
        length = norms(p).length
        inner = np.linspace(0, n, k + 2)[1:-1]
        grids = {
            "rl": [0.0, *inner, *np.linspace(-3 * n, 0, k + 1)[:-1],
                   *np.linspace(n, 3 * n, k + 1)[1:]],
            "caputo": [a for a in inner if not float(a).is_integer()],
        }
        for kind, grid in grids.items():
            for rep in bound_sweep(p, grid, kind):
                for b in rep.bounds:
                    if not b.applicable:
                        continue
                    key = f"{kind}:{b.name}"
                    total[key] += 1
                    if not b.satisfied:
                        fails[key] += 1
                        worst[key] = min(worst.get(key, 0.0), b.slack)
                    if b.name == "linear_lower":
                        weak = 2.0**-n * (abs(n - rep.alpha) / n * (length - 1) + 1)
                        weak_fail += rep.measure < weak * (1 - 1e-9)
    elapsed = time.perf_counter() - t0
    print(f"{args.count} polynomials, {sum(total.values())} bound checks, {elapsed:.1f}s")
    for key in sorted(total):
        extra = f", worst slack {worst[key]:.4g}" if key in worst else ""
        print(f"  {key:28s} {fails[key]:6d}/{total[key]:<7d}{extra}")
    print(f"  weaker linear form 2^-n(X+1) failures: {weak_fail}")


if __name__ == "__main__":
    main()
