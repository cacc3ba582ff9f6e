"""Find fractional-derivative zeros outside the convex hull of the roots.

The classical derivative keeps its zeros inside the hull of the roots.  This
sweep shows the fractional bracket does not: it lists every order on the grid
where some bracket root escapes, for a polynomial file or the bundled cubic.

Usage: python3 scripts/gauss_lucas_sweep.py [--poly FILE] [--steps 301]
"""

import argparse
from importlib import resources

import numpy as np

from fraczero.complex_poly import load_poly
from fraczero.frac_calculus import rl_derivative
from fraczero.root_solver import convex_hull, in_hull, solve_all, solve_coeffs


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--poly", default=None, help="polynomial JSON (default: bundled cubic)")
    ap.add_argument("--steps", type=int, default=301)
    ap.add_argument("--tol", type=float, default=1e-9)
    args = ap.parse_args()

    src = args.poly or resources.files("fraczero") / "data" / "cubic_fig3.json"
    p = load_poly(src)
    n = p.degree
    hull = convex_hull(solve_all(p).roots)
    print("hull vertices:", ", ".join(f"{z:.4g}" for z in hull))
    escaped = []
    for al in np.linspace(0, n, args.steps)[1:-1]:
        br = rl_derivative(p, al).bracket
        y, _ = solve_coeffs(br.array)
        out = [z for z in y + br.center if not in_hull(z, hull, args.tol)]
        if out:
            escaped.append((al, out))
    print(f"{len(escaped)}/{args.steps - 2} orders have a root outside the hull")
    for al, out in escaped[:10]:
        print(f"  alpha={al:.4f}: " + ", ".join(f"{z:.4g}" for z in out))
    if len(escaped) > 10:
        print("  ...")


if __name__ == "__main__":
    main()
