"""Continuation of bracket-polynomial zeros in the derivative order ``alpha``.

The tracker always follows every root internally.  Each step predicts with a
secant through the last two samples, corrects all roots at once with an
Aberth sweep seeded at the predictions, and re-pairs predictions with
corrected roots.  A step is halved when the corrector is slow or the pairing
is not clearly unambiguous.  Exactly-zero low bracket coefficients (integer
orders, RL) become exact roots at the center, which is how origin arrivals
are detected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linear_sum_assignment

from .complex_poly import CenteredPolynomial, derivative, monic, norms
from .frac_calculus import DomainError, Kind, caputo_bracket_coeffs, is_integer, rl_bracket_coeffs
from .root_solver import aberth, match_roots, solve_coeffs, split_exact_zeros


class CollisionError(RuntimeError):
    """Two paths met (double zero of the fractional derivative)."""

    def __init__(self, alpha: float, i: int, j: int):
        super().__init__(f"paths {i} and {j} collide near alpha={alpha:.10g}")
        self.alpha, self.i, self.j = alpha, i, j


@dataclass(frozen=True)
class TrackOptions:
    step: float = 1 / 256
    min_step: float = 2.0**-20
    max_corrector_iter: int = 4
    continue_past_origin: bool = False
    origin_tol: float = 1e-3
    alpha_margin: float = 1e-3
    collision_tol: float = 1e-6
    on_collision: str = "flag"
    # fraction of the distance to the nearest competing root a corrected
    # point may move away from its prediction
    trust: float = 0.5
    extra_alphas: tuple[float, ...] = ()


@dataclass(frozen=True)
class Event:
    alpha: float
    kind: str  # origin | collision | integer | retired
    z: complex
    other: int | None = None


@dataclass(frozen=True)
class Path:
    start_root: complex
    alphas: np.ndarray
    zs: np.ndarray
    terminal_integer: int | None
    derivative_zero_count: int
    events: tuple[Event, ...] = ()

    @property
    def samples(self) -> list[tuple[float, complex]]:
        return list(zip(self.alphas.tolist(), self.zs.tolist()))

    def event_at(self, alpha: float) -> str:
        kinds = [e.kind for e in self.events if e.alpha == alpha]
        for k in ("origin", "collision", "retired", "integer"):
            if k in kinds:
                return k
        return ""


@dataclass(frozen=True)
class PathSet:
    paths: tuple[Path, ...]
    alpha_grid: np.ndarray
    kind: Kind
    center: complex
    scale: float
    source: CenteredPolynomial
    collisions: tuple[tuple[float, int, int], ...] = ()
    options: TrackOptions = field(default_factory=TrackOptions)

    def points_at(self, alpha: float) -> np.ndarray:
        """Path points sampled exactly at ``alpha`` (paths without a sample skipped)."""
        out = []
        for p in self.paths:
            hit = np.nonzero(p.alphas == alpha)[0]
            if len(hit):
                out.append(p.zs[hit[0]])
        return np.array(out, dtype=complex)

    @property
    def terminal_integers(self) -> list[int | None]:
        return [p.terminal_integer for p in self.paths]


class _Stepper:
    """Runs one direction of continuation over the full internal root vector."""

    def __init__(self, coeffs: np.ndarray, kind: Kind, opts: TrackOptions, coll_abs: float):
        self.c = coeffs
        self.n = len(coeffs) - 1
        self.kind = kind
        self.opts = opts
        self.coll_abs = coll_abs

    def bracket(self, alpha: float) -> np.ndarray:
        if self.kind is Kind.RL:
            return rl_bracket_coeffs(self.c, alpha)
        return caputo_bracket_coeffs(self.c, alpha)

    def correct(self, alpha: float, cur: np.ndarray, pred: np.ndarray, leaving: np.ndarray,
                forced: bool):
        """Corrected roots paired with ``pred``; ``None`` if the step is rejected."""
        b = self.bracket(alpha)
        k0, rest = split_exact_zeros(b)
        deg = len(b) - 1
        iters = 0
        roots = np.zeros(deg, dtype=complex)
        if deg - k0 >= 1:
            seeds = pred[np.argsort(-np.abs(pred), kind="stable")[: deg - k0]]
            z, iters, ok = aberth(rest, seeds, max_iter=60)
            roots[k0:] = z
        perm = match_roots(pred, roots)
        new = roots[perm]
        is_zero = perm < k0
        if forced:
            return new, is_zero
        if iters > self.opts.max_corrector_iter:
            return None
        free = roots[k0:]
        if len(free) > 1:
            d = np.abs(free[:, None] - free[None, :])
            d[np.eye(len(free), dtype=bool)] = np.inf
            if d.min() < 10 * self.coll_abs:
                return None
        if deg > 1:
            dist = np.abs(pred[:, None] - roots[None, :])
            same = np.abs(new[:, None] - roots[None, :]) <= self.coll_abs
            dist[same] = np.inf
            second = dist.min(axis=1)
            moved = np.abs(new - pred)
            bad = (moved > self.opts.trust * second) & (moved > self.coll_abs) & ~leaving
            if bad.any():
                return None
            if leaving.any() and (~leaving).any():
                # roots fanning out of the center must stay well inside the
                # disc that excludes every other path
                spread = np.abs(new[leaving]).max()
                others = min(np.abs(new[~leaving]).min(), np.abs(pred[~leaving]).min())
                if spread > self.opts.trust * others:
                    return None
        if k0 and (~is_zero).any() and not leaving.any():
            # arrivals: the paths handed the exact zeros must already be the
            # ones clearly nearest the center
            arriving = np.abs(cur[is_zero]).max()
            rest_d = min(np.abs(cur[~is_zero]).min(), np.abs(new[~is_zero]).min())
            if arriving > self.opts.trust * rest_d:
                return None
        return new, is_zero

    def run(self, z0: np.ndarray, start: float, end: float, checkpoints: list[float]):
        """Rows of ``(alpha, Z, exact_zero_mask, active_mask)`` from ``start`` to ``end``."""
        opts = self.opts
        sign = 1.0 if end > start else -1.0
        active = np.ones(self.n, dtype=bool)
        Z = z0.astype(complex).copy()
        rows = [(start, Z.copy(), np.zeros(self.n, dtype=bool), active.copy())]
        retired: list[tuple[float, int]] = []
        alpha = start
        Zprev = None
        hprev = None
        zero_mask = np.zeros(self.n, dtype=bool)
        h = opts.step

        def caputo_cross(at: float):
            nonlocal Zprev, active
            # retire the active path nearest the center just before the integer
            ref = Zprev if Zprev is not None else Z
            idx = np.nonzero(active)[0]
            if len(idx) == 0:
                return
            k = idx[np.argmin(np.abs(ref[idx]))]
            active = active.copy()
            active[k] = False
            retired.append((at, int(k)))
            Zprev = None

        if self.kind is Kind.CAPUTO and is_integer(start) and sign > 0:
            caputo_cross(start)
        for target in checkpoints:
            while alpha != target:
                remaining = target - alpha
                h_try = sign * min(h, abs(remaining))
                new_alpha = target if abs(h_try) >= abs(remaining) else alpha + h_try
                h_try = new_alpha - alpha
                idx = np.nonzero(active)[0]
                if len(idx) == 0:
                    alpha = target
                    rows.append((alpha, np.full(self.n, np.nan + 0j), zero_mask.copy(), active.copy()))
                    break
                cur = Z[idx]
                if Zprev is not None and hprev:
                    pred = cur + (cur - Zprev[idx]) * (h_try / hprev)
                else:
                    pred = cur.copy()
                multi = zero_mask[idx] & (zero_mask[idx].sum() >= 2)
                forced = abs(h_try) <= opts.min_step * (1 + 1e-12)
                res = self.correct(new_alpha, cur, pred, multi, forced)
                if res is None:
                    h = abs(h_try) / 2
                    continue
                new, is_zero = res
                Zprev = Z.copy()
                hprev = h_try
                Z = Z.copy()
                Z[idx] = new
                zero_mask = np.zeros(self.n, dtype=bool)
                zero_mask[idx] = is_zero
                alpha = new_alpha
                rows.append((alpha, np.where(active, Z, np.nan), zero_mask.copy(), active.copy()))
                h = min(2 * abs(h_try), opts.step)
            if self.kind is Kind.CAPUTO and is_integer(target) and target != end and sign > 0:
                caputo_cross(target)
        return rows, retired


def _grid(start: float, end: float, step: float, extra) -> list[float]:
    lo, hi = min(start, end), max(start, end)
    k = np.arange(1, int(math.floor((hi - lo) / step + 1e-9)) + 1)
    pts = set((lo + k * step).tolist()) if start < end else set((hi - k * step).tolist())
    pts |= {float(i) for i in range(math.ceil(lo), math.floor(hi) + 1)}
    pts |= {float(x) for x in extra if lo < x < hi}
    pts.add(float(end))
    pts.discard(float(start))
    pts = {p for p in pts if lo <= p <= hi}
    return sorted(pts, reverse=start > end)


def track(p: CenteredPolynomial, kind=Kind.RL, alpha_min: float = 0.0,
          alpha_max: float | None = None, opts: TrackOptions | None = None) -> PathSet:
    """Follow the ``n`` zero paths of the bracket of ``D^alpha p`` over ``[alpha_min, alpha_max]``.

    Paths always start at the roots of ``p`` (``alpha = 0``); samples outside the
    requested range are dropped.  Unless ``opts.continue_past_origin`` is set, an
    RL path ends at its first arrival at the center.
    """
    kind = Kind.parse(kind)
    opts = opts or TrackOptions()
    q = monic(p)
    n = q.degree
    if n < 1:
        raise ValueError("tracking needs degree >= 1")
    if alpha_max is None:
        alpha_max = float(n)
    alpha_min, alpha_max = float(alpha_min), float(alpha_max)
    if not alpha_min < alpha_max:
        raise ValueError("need alpha_min < alpha_max")
    if kind is Kind.CAPUTO and alpha_min < 0:
        raise DomainError("Caputo derivatives are only defined for alpha >= 0")
    if alpha_min < -64 or alpha_max > n + 64:
        raise DomainError("alpha range outside [-64, n+64]")

    c = q.array
    z0, _ = solve_coeffs(c)
    scale = float(np.max(np.abs(z0))) or 1.0
    coll_abs = opts.collision_tol * scale
    stepper = _Stepper(c, kind, opts, coll_abs)
    extra = list(opts.extra_alphas)
    if kind is Kind.RL:
        extra += [m - opts.alpha_margin for m in range(1, n + 1)]

    rows = []
    retired: list[tuple[float, int]] = []
    if alpha_min < 0:
        back, _ = stepper.run(z0, 0.0, alpha_min, _grid(0.0, alpha_min, opts.step, extra))
        rows.extend(reversed(back[1:]))
    if alpha_max > 0:
        fwd, retired = stepper.run(z0, 0.0, alpha_max, _grid(0.0, alpha_max, opts.step, extra))
        rows.extend(fwd)
    else:
        rows.append((0.0, z0.copy(), np.zeros(n, dtype=bool), np.ones(n, dtype=bool)))

    alphas = np.array([r[0] for r in rows])
    Z = np.array([r[1] for r in rows])
    zero = np.array([r[2] for r in rows])
    live = np.array([r[3] for r in rows])

    collisions = _find_collisions(alphas, Z, zero, live, coll_abs)
    if collisions and opts.on_collision == "raise":
        a, i, j = collisions[0]
        raise CollisionError(a, i, j)

    keep = (alphas >= alpha_min) & (alphas <= alpha_max)
    arrivals = [set() for _ in range(n)]
    if kind is Kind.RL:
        for r in np.nonzero(keep)[0]:
            a = float(alphas[r])
            if is_integer(a) and 1 <= a <= n:
                for k in np.nonzero(zero[r] & live[r])[0]:
                    arrivals[k].add(int(a))
    terminals = _assign_terminals(arrivals)
    paths = []
    for k in range(n):
        events = []
        terminal = terminals[k]
        for r in np.nonzero(keep & live[:, k])[0]:
            a = float(alphas[r])
            if is_integer(a):
                if kind is Kind.RL and zero[r, k] and 1 <= a <= n:
                    events.append(Event(a, "origin", complex(Z[r, k])))
                else:
                    events.append(Event(a, "integer", complex(Z[r, k])))
        for a, i, j in collisions:
            if k in (i, j) and alpha_min <= a <= alpha_max:
                r = int(np.nonzero(alphas == a)[0][0])
                events.append(Event(a, "collision", complex(Z[r, k]), j if k == i else i))
        for a, idx in retired:
            if idx == k and alpha_min <= a <= alpha_max:
                r = int(np.nonzero(alphas == a)[0][0])
                events.append(Event(a, "retired", complex(Z[r, k])))
        mask = keep & live[:, k]
        if kind is Kind.RL and terminal is not None and not opts.continue_past_origin:
            mask &= alphas <= terminal
        if kind is Kind.CAPUTO:
            for a, idx in retired:
                if idx == k:
                    mask &= alphas <= a
        events = tuple(sorted((e for e in events if mask[np.nonzero(alphas == e.alpha)[0][0]]),
                              key=lambda e: e.alpha))
        dz = _derivative_zero_count(q, alphas, Z[:, k], terminal)
        paths.append(Path(complex(z0[k] + q.center), alphas[mask], Z[mask, k] + q.center,
                          terminal, dz, events))
    return PathSet(tuple(paths), alphas[keep], kind, q.center, scale, q,
                   tuple(collisions), opts)


def _assign_terminals(arrivals: list[set[int]]) -> list[int | None]:
    """One distinct integer per path among the integers where it sits at the center.

    The first arrival is not enough: a path can reach the center at ``m`` and
    be elsewhere at ``m + 1``, so two fresh paths arrive there.  A minimum-cost
    assignment (cost = delay past the path's first arrival) always exists
    when at least ``m`` paths arrive at each ``m``.
    """
    ms = sorted(set().union(*arrivals)) if arrivals else []
    if not ms:
        return [None] * len(arrivals)
    big = 1e6
    cost = np.full((len(arrivals), len(ms)), big)
    for k, arr in enumerate(arrivals):
        if arr:
            first = min(arr)
            for col, m in enumerate(ms):
                if m in arr:
                    cost[k, col] = m - first
    rows, cols = linear_sum_assignment(cost)
    out: list[int | None] = [None] * len(arrivals)
    for r, col in zip(rows, cols):
        if cost[r, col] < big:
            out[r] = ms[col]
    return out


def _find_collisions(alphas, Z, zero, live, tol):
    """Pairs of live, non-origin paths closer than ``tol``; runs coalesced to their closest sample."""
    n = Z.shape[1]
    ok = live & ~zero
    d = np.abs(Z[:, :, None] - Z[:, None, :])
    close = (d < tol) & ok[:, :, None] & ok[:, None, :]
    found = []
    for i in range(n):
        for j in range(i + 1, n):
            hits = np.nonzero(close[:, i, j])[0]
            if not len(hits):
                continue
            # split into runs of consecutive rows
            breaks = np.nonzero(np.diff(hits) > 1)[0] + 1
            for run in np.split(hits, breaks):
                r = run[np.argmin(d[run, i, j])]
                found.append((float(alphas[r]), i, j))
    return sorted(found)


def _derivative_zero_count(q: CenteredPolynomial, alphas, zs, terminal) -> int:
    if terminal is None:
        return 0
    count = 0
    for k in range(1, terminal):
        hit = np.nonzero(alphas == k)[0]
        if not len(hit):
            continue
        z = zs[hit[0]] + q.center
        dk = derivative(q, k)
        if dk is None or dk.degree == 0:
            continue
        res = abs(dk(z)) / (norms(dk).euclid * max(1.0, abs(z - q.center)) ** dk.degree)
        if res <= 1e-8:
            count += 1
    return count


@dataclass(frozen=True)
class PathSummary:
    path_index: int
    terminal_integer: int | None
    derivative_zero_count: int
    arc_length: float


def classify_paths(ps: PathSet) -> list[PathSummary]:
    out = []
    for i, p in enumerate(ps.paths):
        arc = float(np.sum(np.abs(np.diff(p.zs)))) if len(p.zs) > 1 else 0.0
        out.append(PathSummary(i, p.terminal_integer, p.derivative_zero_count, arc))
    return out


class InsufficientRangeError(ValueError):
    pass


@dataclass(frozen=True)
class AsymptoteFit:
    slope: complex
    intercept: complex
    residual: float


def estimate_asymptote(ps: PathSet, direction: str = "alpha_to_plus_inf",
                       fraction: float = 0.2) -> list[AsymptoteFit]:
    """Least-squares line ``z = slope * alpha + intercept`` over the outer samples."""
    n = ps.source.degree
    plus = direction in ("alpha_to_plus_inf", "+", "plus")
    grid = ps.alpha_grid
    if plus:
        if grid.max() < 6 * n:
            raise InsufficientRangeError(f"need alpha_max >= {6 * n} for the +inf asymptote")
        lo = grid.max() - fraction * (grid.max() - n)
        sel = lambda a: a >= lo  # noqa: E731
    else:
        if grid.min() > -5 * n:
            raise InsufficientRangeError(f"need alpha_min <= {-5 * n} for the -inf asymptote")
        hi = grid.min() + fraction * (0 - grid.min())
        sel = lambda a: a <= hi  # noqa: E731
    fits = []
    for p in ps.paths:
        m = sel(p.alphas)
        if m.sum() < 2:
            raise InsufficientRangeError("path has no samples in the fit window "
                                         "(track with continue_past_origin)")
        a = p.alphas[m]
        A = np.stack([a, np.ones_like(a)], axis=1).astype(complex)
        sol, *_ = np.linalg.lstsq(A, p.zs[m], rcond=None)
        resid = float(np.max(np.abs(A @ sol - p.zs[m])))
        fits.append(AsymptoteFit(complex(sol[0]), complex(sol[1]), resid))
    return fits
