import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fraczero.complex_poly import (
    MAX_DEGREE,
    CenteredPolynomial,
    csqrt,
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

from conftest import complex_st

coeff_lists = st.lists(complex_st(3.0), min_size=1, max_size=8).map(lambda c: c + [1 + 0j])


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        CenteredPolynomial(())
    with pytest.raises(ValueError):
        CenteredPolynomial((1, 0))
    with pytest.raises(ValueError):
        CenteredPolynomial((1, float("nan")))
    with pytest.raises(ValueError):
        CenteredPolynomial((1,), center=complex("inf"))
    with pytest.raises(ValueError):
        CenteredPolynomial((1,) * (MAX_DEGREE + 2))


def test_basic_properties():
    p = CenteredPolynomial((1, 2, 3j), center=1)
    assert p.degree == 2
    assert p.leading == 3j
    assert not p.is_monic()
    assert monic(p).is_monic()
    assert monic(p).coeffs[0] == pytest.approx(1 / 3j)


def test_evaluate_matches_numpy():
    c = np.array([1 - 2j, 0.5, 3j, 1])
    p = CenteredPolynomial(tuple(c), center=0.5 + 1j)
    xs = np.array([0, 1 + 1j, -2.5, 3j])
    expected = np.polyval(c[::-1], xs - p.center)
    assert np.allclose(evaluate(p, xs), expected, rtol=1e-14)
    assert evaluate(p, 1 + 1j) == pytest.approx(expected[1], rel=1e-14)
    assert np.allclose(p(xs), expected)


def test_from_roots_known_expansion():
    # (x - (2+3i)) (x - (-2-i)) = x^2 - 2i x + (-1-8i)
    p = from_roots([2 + 3j, -2 - 1j])
    assert np.allclose(p.array, [-1 - 8j, -2j, 1], atol=1e-15)


def test_from_roots_with_center_vanishes_at_roots():
    roots = [1 + 1j, -2, 0.5j]
    p = from_roots(roots, center=1 - 1j)
    assert p.center == 1 - 1j
    assert np.max(np.abs(p(np.array(roots)))) < 1e-13


@given(coeff_lists, complex_st(3.0), complex_st(3.0))
def test_recenter_preserves_values(coeffs, s, x):
    p = CenteredPolynomial(tuple(coeffs))
    q = recenter(p, s)
    scale = sum(abs(c) for c in coeffs) * (1 + abs(x)) ** len(coeffs) * (1 + abs(s)) ** len(coeffs)
    assert abs(p(x) - q(x)) <= 1e-12 * scale


@given(coeff_lists, complex_st(5.0))
def test_recenter_round_trip(coeffs, s):
    p = CenteredPolynomial(tuple(coeffs))
    back = recenter(recenter(p, s), 0)
    n = p.degree
    # Taylor shifts amplify rounding by roughly (1 + |s|)^n in both directions
    cond = (1 + abs(s)) ** (2 * n) * max(1.0, max(abs(c) for c in coeffs))
    assert np.max(np.abs(back.array - p.array)) <= 64 * np.finfo(float).eps * n * cond


def test_recenter_identity_shortcut():
    p = CenteredPolynomial((1, 2, 1))
    assert recenter(p, 0) is p


def test_derivative_matches_numpy():
    c = np.array([1 + 1j, -2, 0.5j, 3, 1])
    p = CenteredPolynomial(tuple(c))
    for m in range(0, 5):
        d = derivative(p, m)
        expected = np.polyder(c[::-1], m)[::-1] if m else c
        assert np.allclose(d.array, expected)
    assert derivative(p, 5) is None
    with pytest.raises(ValueError):
        derivative(p, -1)


def test_norms():
    p = CenteredPolynomial((1 + 1j, 1, 1, 1))
    nm = norms(p)
    assert nm.length == pytest.approx(3 + math.sqrt(2))
    assert nm.height == pytest.approx(math.sqrt(2))
    assert nm.euclid == pytest.approx(math.sqrt(5))


def test_json_round_trip(tmp_path):
    p = CenteredPolynomial((1 - 2j, 0.25, 1), center=0.5 - 1j)
    obj = poly_to_json(p)
    assert poly_from_json(json.loads(json.dumps(obj))) == p
    path = tmp_path / "p.json"
    path.write_text(json.dumps({"center": [0, 0], "roots": [[2, 3], [-2, -1]]}))
    q = load_poly(path)
    assert np.allclose(q.array, [-1 - 8j, -2j, 1])


@pytest.mark.parametrize("obj", [
    {"center": [0, 0]},
    {"coeffs": [[1, 0]], "roots": [[1, 0]]},
    {"coeffs": [[1, 0, 0]]},
    {"coeffs": "abc"},
    [1, 2],
    {"coeffs": [[1, 0], [0, 0]]},
])
def test_json_schema_errors(obj):
    with pytest.raises((ValueError, TypeError)):
        poly_from_json(obj)


def test_csqrt_branch():
    assert csqrt(-4) == 2j
    assert csqrt(complex(-4, -0.0)) == 2j
    assert csqrt(4) == 2
    r = csqrt(-3 + 4j)
    assert r == pytest.approx(1 + 2j)
    assert r.real >= 0
