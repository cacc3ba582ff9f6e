"""Root finding for centered polynomials.

``solve_all`` is the production path (Aberth-Ehrlich simultaneous iteration
plus Newton polish).  ``oracle_solve`` is an independent channel: eigenvalues
of the balanced companion matrix by a hand-rolled shifted QR iteration.  The
two share nothing but the coefficient vector.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .complex_poly import CenteredPolynomial, norms

EPS = np.finfo(float).eps


class ConvergenceError(RuntimeError):
    pass


class IllConditionedWarning(UserWarning):
    pass


@dataclass(frozen=True)
class RootSet:
    """Roots with relative residuals ``|p(r)| / (||p||_2 max(1,|r-a|)^n)``."""

    roots: np.ndarray
    residuals: np.ndarray
    converged: bool
    ill_conditioned: bool = False

    def __len__(self):
        return len(self.roots)


# -- Aberth-Ehrlich ----------------------------------------------------------


def _horner2(b: np.ndarray, z: np.ndarray):
    """Value and derivative of ``sum b_j z^j`` at each point of ``z``."""
    p = np.full_like(z, b[-1])
    dp = np.zeros_like(z)
    for c in b[-2::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def _rounding_bound(absb: np.ndarray, z: np.ndarray) -> np.ndarray:
    az = np.abs(z)
    acc = np.full(az.shape, absb[-1])
    for c in absb[-2::-1]:
        acc = acc * az + c
    return acc


def initial_guesses(b: np.ndarray) -> np.ndarray:
    """Points on a circle of Cauchy radius with fixed per-root angular jitter."""
    n = len(b) - 1
    lead = b[-1]
    radius = 1.0 + float(np.max(np.abs(b[:-1] / lead))) if n else 1.0
    return radius * _unit_circle(n)


def _unit_circle(n: int) -> np.ndarray:
    k = np.arange(n)
    jitter = 0.25 * np.sin(1.7 * k + 0.3) / max(n, 1)
    theta = 2 * np.pi * (k + 0.5 + jitter) / max(n, 1) + 0.4
    return np.exp(1j * theta)


def aberth(b: np.ndarray, z0: np.ndarray, max_iter: int = 500):
    """Aberth-Ehrlich iteration on ``sum b_j y^j`` from starting points ``z0``.

    Returns ``(roots, iterations, converged)``.  A root counts as converged once
    its residual is at the rounding-error level of Horner's scheme.
    """
    b = np.asarray(b, dtype=complex)
    z = np.array(z0, dtype=complex)
    n = len(b) - 1
    if n == 1:
        return np.array([-b[0] / b[1]]), 1, True
    absb = np.abs(b)
    eye = np.eye(n, dtype=bool)
    for it in range(max_iter + 1):
        p, dp = _horner2(b, z)
        done = np.abs(p) <= 4 * n * EPS * _rounding_bound(absb, z)
        if done.all():
            return z, it, True
        if it == max_iter:
            break
        diff = z[:, None] - z[None, :]
        diff[eye] = 1.0
        if np.any(diff == 0):
            z = z + 1e-12 * (1 + np.abs(z)) * np.exp(1j * np.arange(n))
            continue
        inv = 1.0 / diff
        inv[eye] = 0.0
        s = inv.sum(axis=1)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w) & ~done, w, 0.0)
        z = z - w
        if np.all(np.abs(w) <= 2 * EPS * np.abs(z)):
            return z, it + 1, True
    return z, max_iter, False


def _newton_polish(b: np.ndarray, z: np.ndarray, steps: int = 2) -> np.ndarray:
    # only keep steps that shrink the residual (clusters can make Newton jump)
    z = z.copy()
    for _ in range(steps):
        p, dp = _horner2(b, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            cand = z - p / dp
        pc, _ = _horner2(b, np.where(np.isfinite(cand), cand, z))
        better = np.isfinite(cand) & (np.abs(pc) < np.abs(p))
        z = np.where(better, cand, z)
    return z


def split_exact_zeros(b: np.ndarray) -> tuple[int, np.ndarray]:
    """Strip exactly-zero low coefficients: ``y^k * rest(y)``."""
    k = 0
    while k < len(b) - 1 and b[k] == 0:
        k += 1
    return k, b[k:]


def solve_coeffs(b: np.ndarray, tol: float = 1e-10, max_iter: int = 500):
    """Roots of ``sum b_j y^j`` (low-to-high), exact zeros split off first."""
    b = np.asarray(b, dtype=complex)
    k, rest = split_exact_zeros(b)
    roots = [np.zeros(k, dtype=complex)]
    ok = True
    if len(rest) > 1:
        z, _, ok = aberth(rest, initial_guesses(rest), max_iter)
        roots.append(_newton_polish(rest, z))
    return np.concatenate(roots), ok


def solve_many(B: np.ndarray, max_iter: int = 500) -> tuple[np.ndarray, np.ndarray]:
    """Roots of each row of ``B`` (shape ``(m, n+1)``, low-to-high, same degree).

    Aberth-Ehrlich vectorised across rows; rows with a zero constant term go
    through :func:`solve_coeffs` so exact zeros are split off.  Returns
    ``(roots (m, n), converged (m,))``.
    """
    B = np.atleast_2d(np.asarray(B, dtype=complex))
    m, n1 = B.shape
    n = n1 - 1
    roots = np.zeros((m, n), dtype=complex)
    ok = np.ones(m, dtype=bool)
    if n == 0:
        return roots, ok
    special = B[:, 0] == 0
    for i in np.nonzero(special)[0]:
        roots[i], ok[i] = solve_coeffs(B[i], max_iter=max_iter)
    rows = np.nonzero(~special)[0]
    if not len(rows):
        return roots, ok
    b = B[rows] / B[rows, -1:]
    if n == 1:
        roots[rows, 0] = -b[:, 0]
        return roots, ok
    absb = np.abs(b)
    radius = 1.0 + np.max(absb[:, :-1], axis=1)
    z = radius[:, None] * _unit_circle(n)[None, :]
    eye = np.eye(n, dtype=bool)
    active = np.ones(len(rows), dtype=bool)
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if not len(idx):
            break
        zz, bb = z[idx], b[idx]
        p = np.ones_like(zz)
        dp = np.zeros_like(zz)
        acc = np.ones(zz.shape)
        az = np.abs(zz)
        for j in range(n - 1, -1, -1):
            dp = dp * zz + p
            p = p * zz + bb[:, j:j + 1]
            acc = acc * az + absb[idx, j:j + 1]
        done = np.abs(p) <= 4 * n * EPS * acc
        diff = zz[:, :, None] - zz[:, None, :]
        diff[:, eye] = 1.0
        diff = np.where(diff == 0, 1e-300, diff)
        inv = 1.0 / diff
        inv[:, eye] = 0.0
        s = inv.sum(axis=2)
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            ratio = p / dp
            w = ratio / (1.0 - ratio * s)
        w = np.where(np.isfinite(w) & ~done, w, 0.0)
        z[idx] = zz - w
        finished = done.all(axis=1) | np.all(np.abs(w) <= 2 * EPS * np.abs(z[idx]), axis=1)
        active[idx[finished]] = False
    ok[rows] = ~active
    for r, i in enumerate(rows):
        roots[i] = _newton_polish(b[r], z[r])
    return roots, ok


def relative_residuals(p: CenteredPolynomial, roots: np.ndarray) -> np.ndarray:
    if len(roots) == 0:
        return np.zeros(0)
    scale = norms(p).euclid * np.maximum(1.0, np.abs(roots - p.center)) ** p.degree
    return np.abs(p(roots + 0j)) / scale


def min_separation(roots: np.ndarray) -> float:
    if len(roots) < 2:
        return math.inf
    d = np.abs(roots[:, None] - roots[None, :])
    d[np.eye(len(roots), dtype=bool)] = np.inf
    return float(d.min())


def solve_all(p: CenteredPolynomial, tol: float = 1e-10, max_iter: int = 500,
              warn: bool = True) -> RootSet:
    """All ``degree`` roots of ``p``, in the original ``x`` variable."""
    if p.degree < 1:
        raise ValueError("solve_all needs degree >= 1")
    y, ok = solve_coeffs(p.array, tol, max_iter)
    roots = y + p.center
    res = relative_residuals(p, roots)
    root_scale = max(1.0, float(np.max(np.abs(y))))
    ill = min_separation(y) < 1e-7 * root_scale
    if ill and warn:
        warnings.warn("roots closer than 1e-7 of the root scale; double-root neighbourhood",
                      IllConditionedWarning, stacklevel=2)
    return RootSet(roots, res, bool(ok and np.all(res <= tol)), ill)


def clusters(roots, radius: float) -> list[tuple[complex, int]]:
    """Group roots closer than ``radius`` (single linkage): ``(mean, multiplicity)``."""
    roots = np.asarray(roots, dtype=complex)
    left = list(range(len(roots)))
    out = []
    while left:
        group = [left.pop(0)]
        grew = True
        while grew:
            grew = False
            for i in list(left):
                if np.min(np.abs(roots[group] - roots[i])) <= radius:
                    group.append(i)
                    left.remove(i)
                    grew = True
        out.append((complex(np.mean(roots[group])), len(group)))
    return out


# -- companion-matrix oracle ------------------------------------------------


def _balance(a: np.ndarray) -> np.ndarray:
    # Parlett-Reinsch scaling by powers of two
    a = a.copy()
    n = a.shape[0]
    radix = 2.0
    converged = False
    while not converged:
        converged = True
        for i in range(n):
            c = np.sum(np.abs(a[:, i])) - abs(a[i, i])
            r = np.sum(np.abs(a[i, :])) - abs(a[i, i])
            if c == 0 or r == 0:
                continue
            g, f, s = r / radix, 1.0, c + r
            while c < g:
                f *= radix
                c *= radix * radix
            g = r * radix
            while c > g:
                f /= radix
                c /= radix * radix
            if (c + r) / f < 0.95 * s:
                converged = False
                a[i, :] /= f
                a[:, i] *= f
    return a


def companion(b: np.ndarray) -> np.ndarray:
    """Upper-Hessenberg companion matrix of the monic ``sum b_j y^j``."""
    n = len(b) - 1
    c = np.zeros((n, n), dtype=complex)
    c[0, :] = -b[n - 1::-1] / b[n]
    c[np.arange(1, n), np.arange(n - 1)] = 1.0
    return c


def hessenberg_eigvals(h: np.ndarray, max_iter_per_eig: int = 60,
                       unshifted: int = 2) -> np.ndarray:
    """Eigenvalues of an upper-Hessenberg matrix by single-shift complex QR."""
    h = np.array(h, dtype=complex)
    n = h.shape[0]
    eig = np.zeros(n, dtype=complex)
    hi = n - 1
    its = 0
    while hi >= 0:
        if hi == 0:
            eig[0] = h[0, 0]
            break
        lo = hi
        while lo > 0:
            s = abs(h[lo, lo]) + abs(h[lo - 1, lo - 1])
            if abs(h[lo, lo - 1]) <= EPS * (s if s else 1.0):
                h[lo, lo - 1] = 0
                break
            lo -= 1
        if lo == hi:
            eig[hi] = h[hi, hi]
            hi -= 1
            its = 0
            continue
        its += 1
        if its > max_iter_per_eig:
            raise ConvergenceError("companion QR iteration did not converge")
        if its <= unshifted:
            mu = 0j
        elif its % 11 == 0:
            # exceptional shift to break cycles
            mu = h[hi, hi] + 0.75 * abs(h[hi, hi - 1])
        else:
            a, b_, c, d = h[hi - 1, hi - 1], h[hi - 1, hi], h[hi, hi - 1], h[hi, hi]
            tr, det = a + d, a * d - b_ * c
            disc = np.sqrt(tr * tr / 4 - det)
            m1, m2 = tr / 2 + disc, tr / 2 - disc
            mu = m1 if abs(m1 - d) < abs(m2 - d) else m2
        blk = h[lo:hi + 1, lo:hi + 1]
        m = blk.shape[0]
        blk[np.arange(m), np.arange(m)] -= mu
        rots = []
        for k in range(m - 1):
            x, y = blk[k, k], blk[k + 1, k]
            r = math.hypot(abs(x), abs(y))
            if r == 0:
                cs, sn = 1.0 + 0j, 0j
            else:
                cs, sn = x / r, y / r
            rk, rk1 = blk[k, k:].copy(), blk[k + 1, k:].copy()
            blk[k, k:] = np.conj(cs) * rk + np.conj(sn) * rk1
            blk[k + 1, k:] = -sn * rk + cs * rk1
            rots.append((cs, sn))
        for k, (cs, sn) in enumerate(rots):
            top = min(k + 2, m)
            ck, ck1 = blk[:top, k].copy(), blk[:top, k + 1].copy()
            blk[:top, k] = ck * cs + ck1 * sn
            blk[:top, k + 1] = -ck * np.conj(sn) + ck1 * np.conj(cs)
        blk[np.arange(m), np.arange(m)] += mu
    return eig


def oracle_solve(p: CenteredPolynomial) -> RootSet:
    """Roots as companion-matrix eigenvalues; independent of ``solve_all``."""
    n = p.degree
    if not 1 <= n <= 64:
        raise ValueError("oracle_solve supports degree 1..64")
    b = p.array
    k, rest = split_exact_zeros(b)
    parts = [np.zeros(k, dtype=complex)]
    if len(rest) == 2:
        parts.append(np.array([-rest[0] / rest[1]]))
    elif len(rest) > 2:
        parts.append(hessenberg_eigvals(_balance(companion(rest))))
    y = np.concatenate(parts)
    roots = y + p.center
    res = relative_residuals(p, roots)
    return RootSet(roots, res, True, min_separation(y) < 1e-7 * max(1.0, float(np.max(np.abs(y)))))


# -- multiset comparison -----------------------------------------------------


def match_roots(a, b, ambiguity: float = 0.1) -> np.ndarray:
    """Permutation ``perm`` pairing ``a[k]`` with ``b[perm[k]]``.

    Greedy nearest neighbour when unambiguous; minimal-cost assignment when a
    point's two nearest candidates are within ``ambiguity`` of each other or
    the greedy choice collides.
    """
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) != len(b):
        raise ValueError("root sets differ in size")
    n = len(a)
    if n == 0:
        return np.zeros(0, dtype=int)
    cost = np.abs(a[:, None] - b[None, :])
    if n == 1:
        return np.zeros(1, dtype=int)
    order = np.argsort(cost, axis=1)
    best = order[:, 0]
    first = cost[np.arange(n), best]
    second = cost[np.arange(n), order[:, 1]]
    unique = len(set(best.tolist())) == n
    if unique and np.all(second > (1 + ambiguity) * first):
        return best
    _, cols = linear_sum_assignment(cost)
    return cols


def pairing_distance(a, b) -> float:
    """Max distance after optimal pairing of two equal-size multisets."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if len(a) == 0:
        return 0.0
    perm = match_roots(a, b)
    return float(np.max(np.abs(a - b[perm])))


# -- convex hulls ------------------------------------------------------------


def _cross(o: complex, p: complex, q: complex) -> float:
    return (p.real - o.real) * (q.imag - o.imag) - (p.imag - o.imag) * (q.real - o.real)


def convex_hull(points) -> list[complex]:
    """Hull vertices counter-clockwise (monotone chain), collinear points dropped."""
    pts = sorted({complex(z) for z in points}, key=lambda z: (z.real, z.imag))
    if not pts:
        raise ValueError("convex_hull needs at least one point")
    if len(pts) <= 2:
        return pts
    lower: list[complex] = []
    for z in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], z) <= 0:
            lower.pop()
        lower.append(z)
    upper: list[complex] = []
    for z in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], z) <= 0:
            upper.pop()
        upper.append(z)
    hull = lower[:-1] + upper[:-1]
    return hull


def _seg_dist(z: complex, a: complex, b: complex) -> float:
    d = b - a
    if d == 0:
        return abs(z - a)
    t = ((z - a) * d.conjugate()).real / abs(d) ** 2
    t = min(1.0, max(0.0, t))
    return abs(z - (a + t * d))


def in_hull(point, hull, tol: float = 1e-12) -> bool:
    """Inside the CCW hull polygon, or within ``tol`` of its boundary."""
    z = complex(point)
    hull = [complex(h) for h in hull]
    if len(hull) == 1:
        return abs(z - hull[0]) <= tol
    m = len(hull)
    edges = [(hull[i], hull[(i + 1) % m]) for i in range(m)] if m > 2 else [(hull[0], hull[1])]
    if min(_seg_dist(z, a, b) for a, b in edges) <= tol:
        return True
    if m < 3:
        return False
    return all(_cross(a, b, z) >= 0 for a, b in edges)
