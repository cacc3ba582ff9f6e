"""Mahler measures of fractional derivatives and the bounds that control them.

The measure of ``D^alpha p`` is taken over the zeros of its bracket
polynomial, which coincide with the zeros of the rescaled derivative
``Gamma(n+1-alpha)/n! * x^alpha * D^alpha p`` up to an extra root at 0.
Everything here is about the center ``a = 0``; a polynomial with another
center is re-expanded about 0 first, so the measure depends on the center.

All bounds assume a monic polynomial.  :func:`bound_report` normalises
non-monic input (with a warning) before evaluating them.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .complex_poly import CenteredPolynomial, monic, norms, recenter
from .frac_calculus import (
    DomainError,
    Kind,
    caputo_bracket_coeffs,
    d_coeffs,
    is_integer,
    rl_bracket_coeffs,
)
from .root_solver import solve_coeffs, solve_many

BOUND_RTOL = 1e-9


def mahler_measure(roots: Iterable[complex]) -> float:
    """``prod max(1, |z|)`` with moduli measured from 0; empty input gives 1."""
    mods = np.abs(np.asarray(list(roots), dtype=complex))
    return float(np.prod(np.maximum(1.0, mods))) if mods.size else 1.0


def _at_zero(p: CenteredPolynomial) -> CenteredPolynomial:
    return p if p.center == 0 else recenter(p, 0j)


def _require_monic(p: CenteredPolynomial):
    if not p.is_monic():
        raise DomainError("bounds assume a monic polynomial; normalise with monic() first")


def rls_coefficients(p: CenteredPolynomial, alpha: float) -> np.ndarray:
    """Coefficients ``d_j c_j`` of the rescaled RL derivative (monic, about 0)."""
    q = monic(_at_zero(p))
    return rl_bracket_coeffs(q.array, alpha)


def cas_coefficients(p: CenteredPolynomial, alpha: float) -> np.ndarray:
    """Rescaled Caputo coefficients: the RL ones with ``j < ceil(alpha)`` set to 0."""
    q = monic(_at_zero(p))
    out = rl_bracket_coeffs(q.array, alpha)
    out[: math.ceil(alpha)] = 0
    return out


def mahler_of_frac(p: CenteredPolynomial, alpha: float, kind=Kind.RL) -> float:
    """``M(D^alpha_0 p)`` from the roots of the bracket polynomial.

    Exact zeros of the bracket (integer RL orders) contribute factors of 1.
    The identically-zero Caputo derivative has no measure and raises.
    """
    kind = Kind.parse(kind)
    alpha = float(alpha)
    q = monic(_at_zero(p))
    if kind is Kind.RL:
        b = rl_bracket_coeffs(q.array, alpha)
    else:
        if alpha < 0:
            raise DomainError("Caputo derivative needs alpha >= 0")
        b = caputo_bracket_coeffs(q.array, alpha)
        if b is None:
            raise DomainError(f"Caputo derivative of order {alpha} vanishes identically")
    if len(b) == 1:
        return 1.0
    roots, ok = solve_coeffs(b)
    if not ok:
        warnings.warn("bracket root solve did not converge cleanly", RuntimeWarning, stacklevel=2)
    return mahler_measure(roots)


def mahler_sweep(p: CenteredPolynomial, alphas, kind=Kind.RL) -> np.ndarray:
    """``mahler_of_frac`` over many orders, with the root solves batched."""
    kind = Kind.parse(kind)
    q = monic(_at_zero(p))
    alphas = np.asarray(alphas, dtype=float)
    out = np.empty(len(alphas))
    groups: dict[int, list[int]] = {}
    rows: list[np.ndarray] = []
    for i, a in enumerate(alphas):
        if kind is Kind.RL:
            b = rl_bracket_coeffs(q.array, a)
        else:
            if a < 0:
                raise DomainError("Caputo derivative needs alpha >= 0")
            b = caputo_bracket_coeffs(q.array, a)
            if b is None:
                raise DomainError(f"Caputo derivative of order {a} vanishes identically")
        rows.append(b)
        groups.setdefault(len(b), []).append(i)
    for size, idx in groups.items():
        if size == 1:
            out[idx] = 1.0
            continue
        roots, ok = solve_many(np.stack([rows[i] for i in idx]))
        if not ok.all():
            warnings.warn("bracket root solve did not converge cleanly", RuntimeWarning,
                          stacklevel=2)
        out[idx] = np.prod(np.maximum(1.0, np.abs(roots)), axis=1)
    return out


def _shrink(n: int, alpha: float) -> float:
    return (n - alpha) / n


def _upper(p: CenteredPolynomial, alpha: float) -> list[tuple[str, float]]:
    n = p.degree
    nm = norms(p)
    t = _shrink(n, alpha)
    return [
        ("length", t * nm.length + 1),
        ("height", math.sqrt(n + 1) * max(t * nm.height, 1.0)),
        ("euclid", t * nm.euclid + 1),
    ]


def upper_bounds_rl(p: CenteredPolynomial, alpha: float) -> list[tuple[str, float]]:
    """Upper bounds on ``M(D^alpha p)`` for ``0 < alpha < n`` via length, height, Euclid norm."""
    _require_monic(p)
    alpha = float(alpha)
    if not 0 < alpha < p.degree:
        raise DomainError(f"upper bounds need 0 < alpha < {p.degree}, got {alpha}")
    return _upper(_at_zero(p), alpha)


def upper_bounds_caputo(p: CenteredPolynomial, alpha: float) -> list[tuple[str, float]]:
    """The RL upper bounds carried over to the Caputo derivative (non-integer ``alpha``)."""
    _require_monic(p)
    alpha = float(alpha)
    if not 0 < alpha < p.degree or is_integer(alpha):
        raise DomainError(f"Caputo upper bounds need non-integer 0 < alpha < {p.degree}")
    return _upper(_at_zero(p), alpha)


def falling_abs(n: int, alpha: float) -> float:
    """``prod_{k=0}^{n-1} |n - alpha - k|``."""
    return float(np.prod([abs(n - alpha - k) for k in range(n)]))


def growth_bounds_rl(p: CenteredPolynomial, alpha: float) -> list[tuple[str, str, float, bool]]:
    """Growth bounds outside ``[0, n]`` as ``(name, "lower"|"upper", value, applicable)``."""
    _require_monic(p)
    alpha = float(alpha)
    n = p.degree
    if 0 <= alpha <= n:
        raise DomainError(f"growth bounds need alpha < 0 or alpha > {n}, got {alpha}")
    nm = norms(_at_zero(p))
    part1 = 2.0**-n * (abs(n - alpha) / n) * (nm.length - 1) + 1
    part2 = falling_abs(n, alpha) / math.factorial(n) * nm.euclid + 1
    binom = math.comb(n - 1, math.ceil((n - 1) / 2))
    part3 = 2.0**-n / binom * ((alpha - n) / n) * nm.length
    return [
        ("linear_lower", "lower", part1, alpha < 0 or alpha > 2 * n),
        ("falling_upper", "upper", part2, True),
        ("near_lower", "lower", part3, n < alpha <= 2 * n),
    ]


def classical_bounds(p: CenteredPolynomial) -> list[tuple[str, str, float]]:
    """Mahler's height and length sandwiches and Landau's inequality for ``M(p)``."""
    n = p.degree
    nm = norms(_at_zero(p))
    return [
        ("mahler_height_lower", "lower", nm.height / math.comb(n, n // 2)),
        ("mahler_height_upper", "upper", nm.height * math.sqrt(n + 1)),
        ("mahler_length_lower", "lower", 2.0**-n * nm.length),
        ("mahler_length_upper", "upper", nm.length),
        ("landau", "upper", nm.euclid),
    ]


def dj_inequalities(n: int, alpha: float) -> list[tuple[str, bool, bool]]:
    """Check the four ``|d_j|`` inequalities: ``(name, applicable, holds)`` per part.

    ``holds`` covers every ``0 <= j < n`` and is meaningless when not applicable.
    """
    alpha = float(alpha)
    d = np.abs(d_coeffs(n, alpha)[:n])
    tol = 1e-12
    out = []
    ok1 = 0 < alpha < n and not is_integer(alpha)
    out.append(("shrink", ok1, bool(np.all(d <= _shrink(n, alpha) * (1 + tol))) if ok1 else True))
    ok2 = alpha < 0 or alpha > n
    fa = falling_abs(n, alpha) / math.factorial(n)
    out.append(("falling", ok2, bool(np.all(d <= fa * (1 + tol))) if ok2 else True))
    ok3 = alpha < 0 or alpha > 2 * n
    lo3 = abs(n - alpha) / n
    out.append(("linear", ok3, bool(np.all(d >= lo3 * (1 - tol))) if ok3 else True))
    ok4 = n < alpha <= 2 * n
    lo4 = (alpha - n) / n / math.comb(n - 1, (n - 1) // 2)
    out.append(("near", ok4, bool(np.all(d >= lo4 * (1 - tol))) if ok4 else True))
    return out


@dataclass(frozen=True)
class BoundCheck:
    name: str
    kind: str  # upper | lower
    value: float
    applicable: bool
    satisfied: bool
    slack: float


@dataclass(frozen=True)
class BoundReport:
    alpha: float
    kind: Kind
    measure: float
    bounds: tuple[BoundCheck, ...]

    @property
    def all_satisfied(self) -> bool:
        return all(b.satisfied for b in self.bounds if b.applicable)

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "kind": self.kind.value,
            "measure": self.measure,
            "bounds": [b.__dict__ for b in self.bounds],
        }


def _check(name: str, side: str, value: float, measure: float, applicable: bool) -> BoundCheck:
    if side == "upper":
        ok = measure <= value + BOUND_RTOL * abs(value)
        slack = value - measure
    else:
        ok = measure >= value - BOUND_RTOL * max(1.0, abs(value))
        slack = measure - value
    return BoundCheck(name, side, float(value), applicable, bool(ok) or not applicable, float(slack))


def _prepare(p: CenteredPolynomial) -> CenteredPolynomial:
    q = _at_zero(p)
    if not q.is_monic():
        warnings.warn("normalising a non-monic polynomial before evaluating bounds",
                      UserWarning, stacklevel=3)
        q = monic(q)
    return q


def bound_report(p: CenteredPolynomial, alpha: float, kind=Kind.RL) -> BoundReport:
    """Measure ``M(D^alpha p)`` together with every bound that applies at ``alpha``."""
    kind = Kind.parse(kind)
    q = _prepare(p)
    return _report(q, float(alpha), kind, mahler_of_frac(q, alpha, kind))


def bound_sweep(p: CenteredPolynomial, alphas, kind=Kind.RL) -> list[BoundReport]:
    """:func:`bound_report` over a grid of orders."""
    kind = Kind.parse(kind)
    q = _prepare(p)
    measures = mahler_sweep(q, alphas, kind)
    return [_report(q, float(a), kind, float(m)) for a, m in zip(alphas, measures)]


def _report(q: CenteredPolynomial, alpha: float, kind: Kind, measure: float) -> BoundReport:
    n = q.degree
    checks: list[BoundCheck] = []
    if alpha == 0:
        for name, side, value in classical_bounds(q):
            checks.append(_check(name, side, value, measure, True))
    elif kind is Kind.RL and 0 < alpha < n:
        for name, value in upper_bounds_rl(q, alpha):
            checks.append(_check(name, "upper", value, measure, True))
    elif kind is Kind.RL and (alpha < 0 or alpha > n):
        for name, side, value, app in growth_bounds_rl(q, alpha):
            checks.append(_check(name, side, value, measure, app))
    elif kind is Kind.CAPUTO and 0 < alpha < n and not is_integer(alpha):
        for name, value in upper_bounds_caputo(q, alpha):
            checks.append(_check(name, "upper", value, measure, True))
    return BoundReport(alpha, kind, measure, tuple(checks))
