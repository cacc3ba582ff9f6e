"""Complex polynomials expanded about an arbitrary center ``a``.

A :class:`CenteredPolynomial` stores ``c_0..c_n`` such that

.. math::

    p(x) = \\sum_{j=0}^{n} c_j (x - a)^j .

Everything downstream (fractional derivatives, root paths, Mahler bounds)
works in the shifted variable ``y = x - a``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

import numpy as np

MAX_DEGREE = 64


def _as_complex(value, what: str) -> complex:
    z = complex(value)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"{what} must be finite, got {z!r}")
    return z


@dataclass(frozen=True)
class CenteredPolynomial:
    """Polynomial in powers of ``(x - center)``, coefficients low-to-high."""

    coeffs: tuple[complex, ...]
    center: complex = 0j

    def __post_init__(self):
        coeffs = tuple(_as_complex(c, "coefficient") for c in self.coeffs)
        if not coeffs:
            raise ValueError("a polynomial needs at least one coefficient")
        if coeffs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")
        if len(coeffs) - 1 > MAX_DEGREE:
            raise ValueError(f"degree {len(coeffs) - 1} exceeds the cap of {MAX_DEGREE}")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "center", _as_complex(self.center, "center"))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=complex)

    def is_monic(self) -> bool:
        return self.leading == 1

    def __call__(self, x):
        return evaluate(self, x)

    def __repr__(self) -> str:
        return f"CenteredPolynomial(coeffs={list(self.coeffs)!r}, center={self.center!r})"


def evaluate(p: CenteredPolynomial, x):
    """Horner evaluation in ``y = x - center``; ``x`` may be a scalar or array."""
    y = np.asarray(x, dtype=complex) - p.center if not np.isscalar(x) else complex(x) - p.center
    acc = 0j * y
    for c in reversed(p.coeffs):
        acc = acc * y + c
    return acc


def _taylor_shift(coeffs: Sequence[complex], s: complex) -> list[complex]:
    # c(y) -> c(w + s): n passes of synthetic division by (y - s)
    a = list(coeffs)
    n = len(a) - 1
    for k in range(n):
        for j in range(n - 1, k - 1, -1):
            a[j] += s * a[j + 1]
    return a


def recenter(p: CenteredPolynomial, new_center) -> CenteredPolynomial:
    """Re-expand ``p`` in powers of ``(x - new_center)``."""
    new_center = _as_complex(new_center, "center")
    s = new_center - p.center
    if s == 0:
        return p
    return CenteredPolynomial(tuple(_taylor_shift(p.coeffs, s)), new_center)


def from_roots(roots: Iterable, center=0j) -> CenteredPolynomial:
    """Monic polynomial with the given roots (with multiplicity)."""
    center = _as_complex(center, "center")
    roots = [_as_complex(r, "root") for r in roots]
    if not roots:
        raise ValueError("from_roots needs at least one root")
    coeffs = [1 + 0j]
    for r in roots:
        shift = r - center
        # multiply by (y - shift)
        nxt = [0j] * (len(coeffs) + 1)
        for j, c in enumerate(coeffs):
            nxt[j + 1] += c
            nxt[j] -= shift * c
        coeffs = nxt
    return CenteredPolynomial(tuple(coeffs), center)


def monic(p: CenteredPolynomial) -> CenteredPolynomial:
    if p.is_monic():
        return p
    lead = p.leading
    return CenteredPolynomial(tuple(c / lead for c in p.coeffs[:-1]) + (1 + 0j,), p.center)


def derivative(p: CenteredPolynomial, m: int = 1) -> CenteredPolynomial | None:
    """Classical ``m``-th derivative; ``None`` when it vanishes identically."""
    if m < 0:
        raise ValueError("derivative order must be non-negative")
    if m > p.degree:
        return None
    coeffs = tuple(
        p.coeffs[j] * (math.factorial(j) // math.factorial(j - m)) for j in range(m, p.degree + 1)
    )
    return CenteredPolynomial(coeffs, p.center)


class Norms(NamedTuple):
    length: float
    height: float
    euclid: float


def norms(p: CenteredPolynomial) -> Norms:
    """Length, height and Euclidean norm of the coefficient vector."""
    mods = np.abs(p.array)
    return Norms(float(mods.sum()), float(mods.max()), float(math.sqrt(float(np.sum(mods**2)))))


# -- JSON schema -------------------------------------------------------------


def _pair(z: complex) -> list[float]:
    return [float(z.real), float(z.imag)]


def _unpair(v, what: str) -> complex:
    if isinstance(v, (int, float)):
        return _as_complex(v, what)
    if not (isinstance(v, (list, tuple)) and len(v) == 2):
        raise ValueError(f"{what} must be a [re, im] pair, got {v!r}")
    return _as_complex(complex(float(v[0]), float(v[1])), what)


def poly_from_json(obj) -> CenteredPolynomial:
    """Parse ``{"center": [re, im], "coeffs"|"roots": [[re, im], ...]}``."""
    if not isinstance(obj, dict):
        raise ValueError("polynomial JSON must be an object")
    has_c, has_r = "coeffs" in obj, "roots" in obj
    if has_c == has_r:
        raise ValueError('exactly one of "coeffs" or "roots" must be present')
    center = _unpair(obj.get("center", [0.0, 0.0]), "center")
    if has_c:
        return CenteredPolynomial(tuple(_unpair(c, "coefficient") for c in obj["coeffs"]), center)
    return from_roots([_unpair(r, "root") for r in obj["roots"]], center)


def poly_to_json(p: CenteredPolynomial) -> dict:
    return {"center": _pair(p.center), "coeffs": [_pair(c) for c in p.coeffs]}


def load_poly(path) -> CenteredPolynomial:
    with open(path) as fh:
        return poly_from_json(json.load(fh))


def csqrt(z: complex) -> complex:
    """Principal square root with Re >= 0; on the imaginary axis Im >= 0."""
    r = cmath.sqrt(z)
    if r.real == 0 and r.imag < 0:
        r = -r
    return r
