r"""Riemann-Liouville and Caputo derivatives of polynomials.

For a monic ``p(x) = (x-a)^n + \sum_{j<n} c_j (x-a)^j`` and non-integer
``alpha`` the Riemann-Liouville derivative factors as

.. math::

    D^\alpha_a p(x) = \frac{n!}{\Gamma(n+1-\alpha)} (x-a)^{-\alpha}
        \Big[(x-a)^n + \sum_{j<n} d^\alpha_j c_j (x-a)^j\Big],
    \qquad d^\alpha_j = \prod_{k=j+1}^{n} \frac{k-\alpha}{k}.

Only the bracketed polynomial carries zeros, so it is what the rest of the
package works with.  The prefactor is kept as metadata (principal branch).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .complex_poly import CenteredPolynomial, monic

ALPHA_SWEEP_LIMIT = 64


class DomainError(ValueError):
    """Argument outside the domain where an operation is defined."""


class Kind(str, enum.Enum):
    RL = "rl"
    CAPUTO = "caputo"

    @classmethod
    def parse(cls, value) -> "Kind":
        if isinstance(value, cls):
            return value
        v = str(value).lower().replace("-", "_")
        aliases = {"rl": cls.RL, "riemann_liouville": cls.RL, "riemannliouville": cls.RL,
                   "caputo": cls.CAPUTO, "ca": cls.CAPUTO}
        if v not in aliases:
            raise ValueError(f"unknown derivative kind {value!r}")
        return aliases[v]


def is_integer(x: float) -> bool:
    return float(x).is_integer()


def _is_pole(x: float) -> bool:
    return x <= 0 and is_integer(x)


def _lgamma_signed(x: float) -> tuple[float, float]:
    if x > 0:
        return math.lgamma(x), 1.0
    # reflection: sign of Gamma alternates on (-k-1, -k)
    return math.lgamma(x), (-1.0 if math.floor(x) % 2 else 1.0)


def gamma_ratio(num_arg: float, den_arg: float) -> float:
    """``Gamma(num_arg) / Gamma(den_arg)``, zero when ``den_arg`` is a pole."""
    num_arg, den_arg = float(num_arg), float(den_arg)
    if _is_pole(num_arg):
        raise DomainError(f"Gamma has a pole at {num_arg}")
    if _is_pole(den_arg):
        return 0.0
    k = num_arg - den_arg
    if is_integer(k) and abs(k) <= 2 * ALPHA_SWEEP_LIMIT:
        # integer gap: rising factorial, no lgamma round-off
        lo = min(num_arg, den_arg)
        prod = 1.0
        for i in range(int(abs(k))):
            prod *= lo + i
        return prod if k >= 0 else 1.0 / prod
    ln, sn = _lgamma_signed(num_arg)
    ld, sd = _lgamma_signed(den_arg)
    return sn * sd * math.exp(ln - ld)


def d_coeff(n: int, j: int, alpha: float) -> float:
    """The bracket multiplier ``prod_{k=j+1}^{n} (k - alpha) * j!/n!``.

    Evaluated as the literal product of ``(k - alpha)/k`` factors, so it is
    exactly zero for ``alpha`` in ``{j+1, ..., n}``.
    """
    if n < 1 or not 0 <= j <= n - 1:
        raise DomainError(f"need n >= 1 and 0 <= j <= n-1, got n={n}, j={j}")
    alpha = float(alpha)
    val = 1.0
    for k in range(j + 1, n + 1):
        val *= (k - alpha) / k
    return val


def d_coeffs(n: int, alpha: float) -> np.ndarray:
    """All of ``d_0..d_n`` (``d_n = 1``) in one backward pass."""
    out = np.ones(n + 1)
    alpha = float(alpha)
    for j in range(n - 1, -1, -1):
        out[j] = out[j + 1] * ((j + 1 - alpha) / (j + 1))
    return out


def power_rule(beta: float, alpha: float, kind=Kind.RL):
    """Derivative of ``(x-a)^beta`` as ``(coefficient, exponent)``, or ``None`` for 0."""
    kind = Kind.parse(kind)
    beta, alpha = float(beta), float(alpha)
    if kind is Kind.RL:
        if beta <= -1:
            raise DomainError("RL power rule needs beta > -1")
        if _is_pole(beta - alpha + 1):
            return None
        return gamma_ratio(beta + 1, beta - alpha + 1), beta - alpha
    if alpha < 0:
        raise DomainError("Caputo derivative needs alpha >= 0")
    m = math.ceil(alpha)
    if is_integer(beta) and 0 <= beta <= m - 1:
        return None
    if not (is_integer(beta) and beta >= m) and not (not is_integer(beta) and beta > m - 1):
        raise DomainError(f"Caputo power rule undefined for beta={beta}, alpha={alpha}")
    return gamma_ratio(beta + 1, beta - alpha + 1), beta - alpha


@dataclass(frozen=True)
class FracDerivative:
    """``D^alpha p = prefactor_scale * (x - center)^prefactor_exponent * bracket``.

    ``bracket`` is ``None`` for the identically-zero Caputo derivative.
    """

    kind: Kind
    alpha: float
    center: complex
    bracket: CenteredPolynomial | None
    prefactor_exponent: float
    prefactor_scale: complex
    source_degree: int

    @property
    def is_zero(self) -> bool:
        return self.bracket is None

    @property
    def extra_root_at_center(self) -> bool:
        """True for integrals (alpha < 0), whose prefactor vanishes at the center."""
        return self.prefactor_exponent > 0 and self.kind is Kind.RL

    def __call__(self, x):
        """Value of the full derivative, principal branch for the power."""
        if self.bracket is None:
            return 0j * np.asarray(x, dtype=complex)
        y = np.asarray(x, dtype=complex) - self.center
        return self.prefactor_scale * y**self.prefactor_exponent * self.bracket(x)


def _check_range(alpha: float, n: int):
    if alpha < -ALPHA_SWEEP_LIMIT or alpha > n + ALPHA_SWEEP_LIMIT:
        raise DomainError(f"alpha={alpha} outside the supported range "
                          f"[-{ALPHA_SWEEP_LIMIT}, n+{ALPHA_SWEEP_LIMIT}]")


def rl_bracket_coeffs(coeffs: np.ndarray, alpha: float) -> np.ndarray:
    """Bracket coefficients for a monic coefficient vector (low-to-high)."""
    return coeffs * d_coeffs(len(coeffs) - 1, alpha)


def rl_derivative(p: CenteredPolynomial, alpha: float) -> FracDerivative:
    """Riemann-Liouville derivative (``alpha < 0``: integral) centered at ``p.center``.

    At integer ``alpha = m <= n`` the bracket is the continuous extension
    ``(x-a)^m p^{(m)}(x)`` up to a constant, i.e. the same product formula.
    """
    alpha = float(alpha)
    n = p.degree
    _check_range(alpha, n)
    q = monic(p)
    bracket = CenteredPolynomial(tuple(rl_bracket_coeffs(q.array, alpha)), p.center)
    scale = p.leading * gamma_ratio(n + 1, n + 1 - alpha)
    return FracDerivative(Kind.RL, alpha, p.center, bracket, -alpha, complex(scale), n)


def caputo_bracket_coeffs(coeffs: np.ndarray, alpha: float) -> np.ndarray | None:
    """Monic-normalised Caputo bracket in powers of ``y^(j-m)``; ``None`` if zero."""
    n = len(coeffs) - 1
    m = math.ceil(alpha)
    if m > n:
        return None
    return (coeffs * d_coeffs(n, alpha))[m:]


def caputo_derivative(p: CenteredPolynomial, alpha: float) -> FracDerivative:
    """Caputo derivative with ``m = ceil(alpha)``.

    The bracket is ``sum_{j>=m} Gamma(j+1)/Gamma(j+1-alpha) c_j (x-a)^(j-m)``
    for the monic-normalised ``p``; ``prefactor_scale`` is the leading
    coefficient of ``p``.  Integer orders give the classical derivative.
    """
    alpha = float(alpha)
    n = p.degree
    if alpha < 0:
        raise DomainError("Caputo derivative needs alpha >= 0")
    _check_range(alpha, n)
    m = math.ceil(alpha)
    if m > n:
        return FracDerivative(Kind.CAPUTO, alpha, p.center, None, m - alpha, 0j, n)
    q = monic(p)
    coeffs = tuple(gamma_ratio(j + 1, j + 1 - alpha) * q.coeffs[j] for j in range(m, n + 1))
    bracket = CenteredPolynomial(coeffs, p.center)
    return FracDerivative(Kind.CAPUTO, alpha, p.center, bracket, m - alpha, p.leading, n)


def frac_derivative(p: CenteredPolynomial, alpha: float, kind=Kind.RL) -> FracDerivative:
    if Kind.parse(kind) is Kind.RL:
        return rl_derivative(p, alpha)
    return caputo_derivative(p, alpha)
