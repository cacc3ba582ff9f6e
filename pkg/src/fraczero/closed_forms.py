"""Exact root paths for degrees one and two.

Square roots are principal (Re >= 0, ties toward Im >= 0).  Quadratic roots
are built as ``(b/2)(-1 -+ sqrt(d))`` with ``d = 1 - 4c/b^2`` so the modulus
ordering holds by construction.
"""

from __future__ import annotations

from dataclasses import dataclass

from .complex_poly import csqrt


@dataclass(frozen=True)
class QuadPathPoint:
    alpha: float
    z1: complex
    z2: complex
    discriminant: complex


def linear_path(c0, a, alpha: float) -> complex:
    """Zero of the bracket of ``(x-a) + c0``: ``(alpha - 1) c0 + a``."""
    return (alpha - 1) * complex(c0) + complex(a)


def quad_root_order(b, c) -> tuple[complex, complex, bool]:
    """Roots ``s1, s2`` of ``x^2 + b x + c`` with ``|s1| <= |s2|``.

    ``tied`` is set when ``d = 1 - 4c/b^2`` is a negative real (or ``b = 0``),
    where both moduli agree.
    """
    b, c = complex(b), complex(c)
    # scale so that b*b cannot under- or overflow
    s = max(abs(b), abs(c) ** 0.5)
    if s == 0:
        return 0j, 0j, True
    bs, cs = b / s, (c / s) / s
    if abs(bs) < 1e-150:
        r = csqrt(-4 * cs)
        return s * r / 2, -s * r / 2, True
    d = 1 - 4 * cs / (bs * bs)
    r = csqrt(d)
    s1 = s * (bs / 2) * (-1 + r)
    s2 = s * (bs / 2) * (-1 - r)
    tied = d.imag == 0 and d.real < 0
    return s1, s2, tied


def quad_paths(c1, c0, a, alpha: float) -> QuadPathPoint:
    """Both zeros of the bracket of ``(x-a)^2 + c1 (x-a) + c0`` at order ``alpha``.

    ``z1`` is the root farther from ``a`` (modulus order holds on [0, 1]).
    """
    c1, c0, a = complex(c1), complex(c0), complex(a)
    t = 2 - alpha
    disc = t * t * c1 * c1 - 8 * t * (1 - alpha) * c0
    # bracket y^2 + B y + C
    B = t * c1 / 2
    C = t * (1 - alpha) * c0 / 2
    s1, s2, _ = quad_root_order(B, C)
    return QuadPathPoint(float(alpha), a + s2, a + s1, disc)


def quad_double_alpha(c1, c0, tol: float = 0.0) -> complex:
    """The order at which the bracket's discriminant vanishes: ``1 - c1^2/(8c0 - c1^2)``."""
    c1, c0 = complex(c1), complex(c0)
    den = 8 * c0 - c1 * c1
    if abs(den) <= tol:
        raise ValueError("degenerate quadratic: 8 c0 == c1^2")
    return 1 - c1 * c1 / den


def quad_asymptote(c1, c0) -> tuple[complex, complex]:
    """Slopes ``dz/dalpha`` of the two paths as ``alpha -> +-inf``.

    ``-(c1/4)(-1 +- sqrt(1 - 8 c0 / c1^2))``; for ``c1 = 0`` the paths grow
    like ``sqrt(alpha^2 c0 / 2)``, i.e. slopes ``+-sqrt(-c0/2)`` up to sign.
    """
    c1, c0 = complex(c1), complex(c0)
    if c1 == 0:
        r = csqrt(-c0 / 2)
        return r, -r
    r = csqrt(1 - 8 * c0 / (c1 * c1))
    return -(c1 / 4) * (-1 + r), -(c1 / 4) * (-1 - r)


def double_root_poly_paths(z0, alpha: float) -> tuple[complex, complex]:
    """Zeros of the bracket of ``(x - z0)^2`` centered at 0.

    ``z0 ((2 - alpha) +- sqrt(alpha (2 - alpha))) / 2``.
    """
    z0 = complex(z0)
    r = csqrt(complex(alpha * (2 - alpha)))
    return z0 * ((2 - alpha) + r) / 2, z0 * ((2 - alpha) - r) / 2
