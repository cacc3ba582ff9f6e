"""Zeros of fractional derivatives of complex polynomials.

The Riemann-Liouville and Caputo derivatives of a polynomial about a center
``a`` factor into a power of ``(x - a)`` times a polynomial "bracket"; this
package computes those brackets, follows their zeros as the order varies,
and measures them with the Mahler measure.
"""

from .closed_forms import (
    double_root_poly_paths,
    linear_path,
    quad_asymptote,
    quad_double_alpha,
    quad_paths,
    quad_root_order,
)
from .complex_poly import (
    CenteredPolynomial,
    derivative,
    evaluate,
    from_roots,
    load_poly,
    monic,
    norms,
    poly_from_json,
    poly_to_json,
    recenter,
)
from .frac_calculus import (
    DomainError,
    FracDerivative,
    Kind,
    caputo_derivative,
    d_coeff,
    frac_derivative,
    gamma_ratio,
    power_rule,
    rl_derivative,
)
from .mahler import (
    BoundReport,
    bound_report,
    bound_sweep,
    growth_bounds_rl,
    mahler_measure,
    mahler_of_frac,
    upper_bounds_caputo,
    upper_bounds_rl,
)
from .path_tracker import (
    CollisionError,
    PathSet,
    TrackOptions,
    classify_paths,
    estimate_asymptote,
    track,
)
from .root_solver import RootSet, oracle_solve, solve_all

__version__ = "0.1.0"
