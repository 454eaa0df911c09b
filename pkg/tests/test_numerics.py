"""Oracle and property tests for the special-function layer."""
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdem.numerics import (DomainError, IntegrationError, QuadratureSpec,
                           SeriesCapError, SeriesSpec, even_hermite_pos,
                           gauss_hermite_nodes, hermite_function,
                           hermite_functions_upto, hermite_phys, integrate,
                           integrate_gauss_hermite, ln_gamma, pochhammer,
                           sum_series)


def hermite_coefficients(n):
    """Monomial coefficients of H_n from the recurrence on coefficient arrays."""
    coefs = [np.array([1.0]), np.array([0.0, 2.0])]
    while len(coefs) <= n:
        m = len(coefs) - 1
        nxt = np.zeros(m + 2)
        nxt[1:] += 2.0 * coefs[m]
        nxt[: m] -= 2.0 * m * coefs[m - 1]
        coefs.append(nxt)
    return coefs[n]


def test_hermite_phys_small_oracles():
    assert hermite_phys(0, 3.7) == 1.0
    assert hermite_phys(1, 1.5) == pytest.approx(3.0, abs=1e-14)
    assert hermite_phys(2, 1.0) == pytest.approx(2.0, abs=1e-12)
    assert hermite_phys(3, 2.0) == pytest.approx(40.0, abs=1e-12)


def test_hermite_phys_matches_coefficient_expansion():
    for n in range(9):
        c = hermite_coefficients(n)
        for y in (-3.0, -1.0, 0.0, 0.5, 2.0):
            direct = float(np.polynomial.polynomial.polyval(y, c))
            rec = hermite_phys(n, y)
            assert rec == pytest.approx(direct, rel=1e-10, abs=1e-10)


def test_hermite_phys_domain_and_overflow():
    with pytest.raises(DomainError):
        hermite_phys(-1, 0.0)
    with pytest.raises(DomainError):
        hermite_phys(513, 0.0)
    with pytest.raises(OverflowError):
        hermite_phys(400, 300.0)


def test_even_hermite_pos_oracles():
    # sign-flipped H_2 = 4y^2 + 2 and H_4 = 16y^4 + 48y^2 + 12
    assert even_hermite_pos(0, 2.0) == 1.0
    assert even_hermite_pos(1, 1.0) == pytest.approx(6.0, abs=1e-12)
    assert even_hermite_pos(2, 1.0) == pytest.approx(76.0, abs=1e-12)


def test_even_hermite_pos_equals_sign_flipped_coefficients():
    for n in range(11):
        c = np.abs(hermite_coefficients(2 * n))
        for y in (-2.5, -0.3, 0.0, 0.7, 1.9):
            direct = float(np.polynomial.polynomial.polyval(y, c))
            assert even_hermite_pos(n, y) == pytest.approx(direct, rel=1e-10)


@given(st.integers(0, 12), st.floats(-8.0, 8.0))
@settings(max_examples=60, deadline=None)
def test_even_hermite_pos_properties(n, y):
    v = even_hermite_pos(n, y)
    assert v == pytest.approx(even_hermite_pos(n, -y), rel=1e-12)
    assert v >= even_hermite_pos(n, 0.0) > 0.0


@given(st.floats(0.5, 150.0))
@settings(max_examples=60, deadline=None)
def test_ln_gamma_recursion(x):
    # Gamma(x+1) = x Gamma(x)
    assert ln_gamma(x + 1.0) == pytest.approx(ln_gamma(x) + math.log(x), rel=1e-12, abs=1e-12)


def test_ln_gamma_reference_values():
    for x in (0.5, 1.0, 2.0, 3.5, 10.0, 55.25, 200.0):
        assert ln_gamma(x) == pytest.approx(math.lgamma(x), rel=1e-13, abs=1e-13)
    with pytest.raises(DomainError):
        ln_gamma(0.0)


def test_pochhammer():
    assert pochhammer(3.0, 0) == 1.0
    assert pochhammer(2.5, 3) == pytest.approx(2.5 * 3.5 * 4.5)
    with pytest.raises(DomainError):
        pochhammer(1.0, -1)


def test_hermite_function_matches_unnormalized():
    for n in range(6):
        norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
        for u in (-2.0, 0.0, 0.4, 1.7):
            expected = hermite_phys(n, u) * math.exp(-0.5 * u * u) / norm
            assert float(hermite_function(n, u)) == pytest.approx(expected, rel=1e-12, abs=1e-14)


def test_hermite_function_unit_norm():
    for n in (0, 3, 20, 80):
        val = integrate(lambda u: float(hermite_function(n, u)) ** 2,
                        QuadratureSpec(-40.0, 40.0, 1e-12, 1e-12))
        assert val == pytest.approx(1.0, abs=1e-10)


def test_hermite_functions_upto_consistent():
    u = np.linspace(-4.0, 4.0, 17)
    table = hermite_functions_upto(12, u)
    assert table.shape == (13, 17)
    for n in (0, 5, 12):
        assert np.max(np.abs(table[n] - hermite_function(n, u))) < 1e-13


def test_integrate_gaussian():
    val = integrate(lambda t: math.exp(-t * t))
    assert val == pytest.approx(math.sqrt(math.pi), rel=1e-12)


def test_integrate_failure_raises():
    spec = QuadratureSpec(0.0, 1.0, 1e-13, 1e-13, max_subdivisions=2)
    with pytest.raises(IntegrationError):
        integrate(lambda t: math.cos(500.0 * t) / math.sqrt(t + 1e-30), spec)


def test_gauss_hermite():
    x, w = gauss_hermite_nodes(40)
    assert x.shape == w.shape == (40,)
    val = integrate_gauss_hermite(lambda y: y * y)
    assert val == pytest.approx(0.5 * math.sqrt(math.pi), rel=1e-12)


def test_sum_series_exponential():
    # sum 1/n! = e
    val, used = sum_series(SeriesSpec(term=lambda n: 1.0 / math.factorial(n), tol=1e-14))
    assert val == pytest.approx(math.e, rel=1e-13)
    assert used < 30


def test_sum_series_cap():
    with pytest.raises(SeriesCapError):
        sum_series(SeriesSpec(term=lambda n: 1.0 / (n + 1.0), tol=1e-12, max_terms=100))


def test_spec_validation():
    with pytest.raises(ValueError):
        QuadratureSpec(1.0, 0.0)
    with pytest.raises(ValueError):
        QuadratureSpec(0.0, 1.0, abs_tol=-1.0)
    with pytest.raises(ValueError):
        SeriesSpec(term=lambda n: 0.0, tol=0.0)
