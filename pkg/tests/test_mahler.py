import math
import warnings
from importlib import resources

import numpy as np
import pytest

from fraczero.complex_poly import CenteredPolynomial, from_roots, load_poly, norms
from fraczero.frac_calculus import DomainError, d_coeff, d_coeffs
from fraczero.mahler import (
    bound_report,
    bound_sweep,
    cas_coefficients,
    classical_bounds,
    dj_inequalities,
    falling_abs,
    growth_bounds_rl,
    mahler_measure,
    mahler_of_frac,
    mahler_sweep,
    rls_coefficients,
    upper_bounds_caputo,
    upper_bounds_rl,
)

FIG5 = CenteredPolynomial((1 + 1j, 1, 1, 1))
QUINTIC = load_poly(resources.files("fraczero") / "data" / "quintic_fig6.json")


def oracle_measure(coeffs) -> float:
    """Mahler measure of a low-to-high coefficient vector via numpy's companion solver."""
    c = np.trim_zeros(np.asarray(coeffs, dtype=complex), "b")
    r = np.roots(c[::-1])
    return float(abs(c[-1]) * np.prod(np.maximum(1.0, np.abs(r))))


def test_mahler_measure_examples():
    assert mahler_measure([0.5, 0.3j, -0.9]) == 1
    assert mahler_measure([2 + 3j, -2 - 1j]) == pytest.approx(math.sqrt(65))
    assert mahler_measure([2 + 3j]) == pytest.approx(math.sqrt(13))


def test_frac_measure_examples():
    assert mahler_of_frac(FIG5, 0) == pytest.approx(oracle_measure(FIG5.array))
    # oracle value from numpy's companion solver, frozen: all bracket roots in the unit disc
    assert mahler_of_frac(FIG5, 1.5) == pytest.approx(1.0, abs=1e-12)
    assert mahler_of_frac(FIG5, 1.5) <= 3.207107
    x4 = CenteredPolynomial((0, 0, 0, 0, 1))
    for alpha in (0.3, 1.7, 3.9):
        assert mahler_of_frac(x4, alpha) == 1
        assert mahler_of_frac(x4, alpha, "caputo") == 1


def test_frac_measure_matches_oracle(rng):
    for _ in range(20):
        n = int(rng.integers(1, 8))
        q = from_roots(4 * (rng.uniform(-1, 1, n) + 1j * rng.uniform(-1, 1, n)))
        alpha = float(rng.uniform(-3 * n, 3 * n))
        want = oracle_measure(rls_coefficients(q, alpha))
        assert mahler_of_frac(q, alpha) == pytest.approx(want, rel=1e-9)
        if 0 <= alpha:
            cas = cas_coefficients(q, alpha)
            if np.any(cas != 0):
                got = mahler_of_frac(q, alpha, "caputo")
                assert got == pytest.approx(oracle_measure(cas), rel=1e-9)


def test_coefficient_vectors():
    q = from_roots([1, 2j, -3])
    assert np.allclose(rls_coefficients(q, 0.5), d_coeffs(3, 0.5) * q.array)
    cas = cas_coefficients(q, 1.5)
    assert np.all(cas[:2] == 0)
    assert np.allclose(cas[2:], (d_coeffs(3, 1.5) * q.array)[2:])
    # Caputo keeps a subset of the RL terms, so every norm can only shrink
    for alpha in np.linspace(0.1, 2.9, 15):
        r, c = rls_coefficients(q, alpha), cas_coefficients(q, alpha)
        assert np.sum(np.abs(c)) <= np.sum(np.abs(r)) + 1e-12
        assert np.linalg.norm(c) <= np.linalg.norm(r) + 1e-12


def test_measure_normalises_and_rejects_vanishing_caputo():
    assert mahler_of_frac(CenteredPolynomial((3, 2)), 0.5) == pytest.approx(
        mahler_of_frac(CenteredPolynomial((1.5, 1)), 0.5))
    with pytest.raises(DomainError):
        mahler_of_frac(FIG5, -0.5, "caputo")
    with pytest.raises(DomainError):
        mahler_of_frac(FIG5, 3.5, "caputo")


def test_sweep_agrees_with_pointwise():
    alphas = np.linspace(-4, 8, 37)
    sweep = mahler_sweep(QUINTIC, alphas)
    single = [mahler_of_frac(QUINTIC, a) for a in alphas]
    assert np.allclose(sweep, single, rtol=1e-10)
    cal = np.linspace(0.05, 4.95, 25)
    assert np.allclose(mahler_sweep(QUINTIC, cal, "caputo"),
                       [mahler_of_frac(QUINTIC, a, "caputo") for a in cal], rtol=1e-10)


def test_upper_bound_values():
    got = dict(upper_bounds_rl(FIG5, 1.5))
    assert got["length"] == pytest.approx(0.5 * (3 + math.sqrt(2)) + 1)
    assert got["height"] == pytest.approx(2.0)
    assert got["euclid"] == pytest.approx(0.5 * math.sqrt(5) + 1)
    near_n = dict(upper_bounds_rl(FIG5, 3 - 1e-12))
    assert near_n["length"] == pytest.approx(1)
    assert near_n["euclid"] == pytest.approx(1)
    assert upper_bounds_caputo(FIG5, 1.5) == upper_bounds_rl(FIG5, 1.5)
    with pytest.raises(DomainError):
        upper_bounds_rl(FIG5, 3.5)
    with pytest.raises(DomainError):
        upper_bounds_caputo(FIG5, 2.0)


def test_upper_bounds_for_monomial():
    x3 = CenteredPolynomial((0, 0, 0, 1))
    for name, value in upper_bounds_rl(x3, 1.2):
        assert value >= 1


def test_growth_bound_values():
    q = CenteredPolynomial((1j, 1, 1))
    got = {name: (value, ok) for name, _side, value, ok in growth_bounds_rl(q, -1)}
    assert got["linear_lower"] == (pytest.approx(1.75), True)
    assert got["falling_upper"] == (pytest.approx(3 * math.sqrt(3) + 1), True)
    assert not got["near_lower"][1]
    near = {name: value for name, _s, value, _ok in growth_bounds_rl(q, 2 + 1e-9)}
    assert near["near_lower"] == pytest.approx(0, abs=1e-8)
    with pytest.raises(DomainError):
        growth_bounds_rl(q, 1.0)


def test_d_coefficient_equality_witness():
    assert abs(d_coeff(2, 0, -1)) == pytest.approx(3)
    assert falling_abs(2, -1) / math.factorial(2) == pytest.approx(3)
    assert all(holds for _name, _app, holds in dj_inequalities(2, -1))


@pytest.mark.parametrize("n", [1, 3, 6, 12])
def test_dj_inequalities_on_a_grid(n):
    for alpha in np.linspace(-3 * n, 3 * n, 241):
        for name, applicable, holds in dj_inequalities(n, float(alpha)):
            assert holds, (n, alpha, name)


def test_classical_report_at_zero():
    rep = bound_report(QUINTIC, 0.0)
    assert rep.measure == pytest.approx(oracle_measure(QUINTIC.array), rel=1e-10)
    assert {b.name for b in rep.bounds} == {name for name, _s, _v in classical_bounds(QUINTIC)}
    assert rep.all_satisfied
    nm = norms(QUINTIC)
    landau = [b for b in rep.bounds if b.name == "landau"][0]
    assert landau.value == pytest.approx(nm.euclid)


def test_fig5_upper_bounds_hold_across_sweep():
    for rep in bound_sweep(FIG5, np.linspace(0.01, 2.99, 120)):
        assert rep.all_satisfied, rep.alpha


def test_fig5_growth_upper_bound_holds():
    alphas = np.r_[np.linspace(-5, -0.01, 60), np.linspace(6.01, 11, 60)]
    for rep in bound_sweep(FIG5, alphas):
        falling = [b for b in rep.bounds if b.name == "falling_upper"][0]
        assert falling.satisfied


def test_quintic_caputo_below_length_bound():
    alphas = [a for a in np.linspace(0.02, 4.98, 125) if not float(a).is_integer()]
    for rep in bound_sweep(QUINTIC, alphas, "caputo"):
        length = [b for b in rep.bounds if b.name == "length"][0]
        assert rep.measure <= length.value * (1 + 1e-9)


def test_report_json_and_warning():
    rep = bound_report(FIG5, 1.5)
    obj = rep.to_json()
    assert obj["alpha"] == 1.5 and obj["kind"] == "rl"
    assert {b["name"] for b in obj["bounds"]} == {"length", "height", "euclid"}
    with pytest.warns(UserWarning):
        scaled = bound_report(CenteredPolynomial(tuple(2 * c for c in FIG5.coeffs)), 1.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert scaled.measure == pytest.approx(bound_report(FIG5, 1.5).measure)
