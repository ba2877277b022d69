import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonefid.errors import DomainError
from clonefid.numerics import (
    LogFactorialCache,
    LogScalar,
    binomial,
    compensated_sum,
    log_binomial,
    log_factorial,
    resolve_backend,
)


def pascal_row(a):
    row = [1]
    for _ in range(a):
        row = [x + y for x, y in zip([0] + row, row + [0])]
    return row


def test_log_factorial_small():
    assert log_factorial(0).log == 0.0
    assert log_factorial(1).log == 0.0
    assert log_factorial(5).log == pytest.approx(math.log(120), rel=1e-15)


@pytest.mark.parametrize("a", [21, 137, 8000, 123_457])
def test_log_factorial_against_big_integer(a):
    with mpmath.workdps(40):
        ref = mpmath.log(mpmath.mpf(math.factorial(a)))
        rel = abs((mpmath.mpf(log_factorial(a).log) - ref) / ref)
    assert rel <= 1e-13


def test_log_factorial_monotone():
    vals = [log_factorial(a).log for a in range(0, 3000)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert all(b > a for a, b in zip(vals[1:], vals[2:]))


def test_cache_past_cap_uses_lgamma():
    cache = LogFactorialCache(cap=50)
    assert cache(60) == pytest.approx(math.lgamma(61), rel=1e-15)
    assert len(cache) <= 51


def test_log_factorial_negative():
    with pytest.raises(DomainError):
        log_factorial(-1)


def test_binomial_examples():
    assert binomial(4, 2) == 6
    assert binomial(3, 5) == 0
    assert binomial(3, -1) == 0
    assert binomial(50, 25) == pascal_row(50)[25] == 126410606437752
    assert isinstance(binomial(7, 3), Fraction)


@given(st.integers(0, 80), st.integers(0, 80))
def test_binomial_symmetry(a, b):
    assert binomial(a, b) == binomial(a, a - b)


@settings(max_examples=60)
@given(st.integers(0, 60), st.integers(0, 60), st.integers(0, 120))
def test_vandermonde(p, q, n):
    lhs = sum(binomial(p, k) * binomial(q, n - k) for k in range(n + 1))
    assert lhs == binomial(p + q, n)


def test_log_binomial_matches_exact_up_to_300():
    worst = 0.0
    for a in range(301):
        for b in range(a + 1):
            exact = math.comb(a, b)
            approx = log_binomial(a, b).log
            # compare in log space: |exp(x)/C - 1| ~ |x - ln C|
            worst = max(worst, abs(math.expm1(approx - math.log(exact))))
    assert worst <= 1e-12


def test_log_binomial_out_of_range_is_zero():
    assert log_binomial(3, 5).is_zero
    assert float(log_binomial(3, -2)) == 0.0


def test_compensated_sum_small_terms():
    terms = [1.0] + [1e-16] * 10_000
    exact = sum((Fraction(t) for t in terms), Fraction(0))
    got = compensated_sum(terms)
    assert abs(Fraction(got) - exact) <= Fraction(1, 10**15)
    assert abs(got - (1.0 + 1e-12)) <= 1e-15
    # naive left-to-right summation loses every tiny term
    assert sum(terms) == 1.0


def test_compensated_sum_trivial():
    assert compensated_sum([]) == 0
    assert compensated_sum([0.5, 0.5]) == 1.0
    assert compensated_sum([LogScalar.from_value(0.25), LogScalar.zero(), 0.75]) == 1.0


@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), max_size=200))
def test_compensated_sum_is_correctly_rounded(xs):
    exact = sum((Fraction(x) for x in xs), Fraction(0))
    assert compensated_sum(xs) == float(exact)


def test_log_scalar_arithmetic():
    a, b = LogScalar.from_value(0.3), LogScalar.from_value(0.2)
    assert float(a + b) == pytest.approx(0.5, rel=1e-15)
    assert float(a * b) == pytest.approx(0.06, rel=1e-15)
    assert float(a / b) == pytest.approx(1.5, rel=1e-15)
    assert (a + LogScalar.zero()) == a
    assert (LogScalar.zero() * a).is_zero
    with pytest.raises(DomainError):
        LogScalar.from_value(-1.0)


def test_resolve_backend():
    assert resolve_backend("auto", 200) == "exact"
    assert resolve_backend("auto", 201) == "log"
    assert resolve_backend("log", 4) == "log"
    with pytest.raises(DomainError):
        resolve_backend("float128", 4)
