"""Survey how random polynomials reach the center at integer orders.

For each polynomial the script tracks all zero paths over [0, n] and reports:
  * whether the terminal integers form {1, ..., n},
  * how many paths are within ``--radius * scale`` of the center just before
    each integer (m is expected for a collision-free polynomial),
  * whether `derivative_zero_count == terminal - 1` holds path by path.

Usage: python3 scripts/origin_arrival_survey.py --count 200 --seed 7
"""

import argparse
import collections
import time

import numpy as np

from fraczero.complex_poly import from_roots
from fraczero.path_tracker import TrackOptions, track


def sample(rng, n, radius):
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--min-degree", type=int, default=3)
    ap.add_argument("--max-degree", type=int, default=6)
    ap.add_argument("--offset", type=float, default=1e-3, help="probe at alpha = m - offset")
    ap.add_argument("--radius", type=float, default=0.05, help="fraction of the root scale")
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    stats = collections.Counter()
    by_m = collections.defaultdict(collections.Counter)
    t0 = time.perf_counter()
    while stats["polys"] < args.count:
        n = int(rng.integers(args.min_degree, args.max_degree + 1))
        p = from_roots(sample(rng, n, 5.0))
        ps = track(p, "rl", 0, n, TrackOptions(continue_past_origin=True))
        if ps.collisions:
            stats["collision_skipped"] += 1
            continue
        stats["polys"] += 1
        terms = sorted(t for t in ps.terminal_integers if t is not None)
        stats["terminal_multiset_ok"] += terms == list(range(1, n + 1))
        stats["dz_invariant_ok"] += all(
            q.derivative_zero_count == q.terminal_integer - 1
            for q in ps.paths if q.terminal_integer is not None)
        for m in range(1, n + 1):
            z = ps.points_at(m - args.offset)
            near = int(np.sum(np.abs(z - p.center) < args.radius * ps.scale))
            by_m[m]["ok" if near == m else "off"] += 1
    elapsed = time.perf_counter() - t0

    print(f"{stats['polys']} polynomials ({stats['collision_skipped']} skipped for collisions), "
          f"{elapsed:.1f}s")
    print(f"terminal multiset {{1..n}}: {stats['terminal_multiset_ok']}/{stats['polys']}")
    print(f"derivative_zero_count == terminal - 1 on every path: "
          f"{stats['dz_invariant_ok']}/{stats['polys']}")
    print("count within radius at m - offset equals m:")
    for m in sorted(by_m):
        c = by_m[m]
        print(f"  m={m}: {c['ok']}/{c['ok'] + c['off']}")


if __name__ == "__main__":
    main()
