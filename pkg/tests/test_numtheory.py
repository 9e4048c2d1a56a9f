"""Arithmetic helpers: totients, orders, smooth numbers, fraction rounding."""

import math
from fractions import Fraction

import numpy as np
import pytest

from ftsample.errors import NoSmoothNumberError
from ftsample.numtheory import (
    euler_phi,
    multiplicative_order,
    power_of_two_in_range,
    primes_up_to,
    round_to_fraction,
    smooth_number_in_range,
)


def test_euler_phi_small_table():
    expected = [1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4]
    assert [euler_phi(n) for n in range(1, 13)] == expected
    assert euler_phi(36) == 12


def test_euler_phi_matches_gcd_count():
    for n in range(1, 200):
        brute = sum(1 for k in range(1, n + 1) if math.gcd(k, n) == 1)
        assert euler_phi(n) == brute


def test_multiplicative_order_known_cases():
    assert multiplicative_order(2, 9) == 6
    assert multiplicative_order(5, 21) == 6
    assert multiplicative_order(1, 7) == 1


def test_multiplicative_order_definition():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n = int(rng.integers(2, 150))
        a = int(rng.integers(1, n))
        if math.gcd(a, n) != 1:
            with pytest.raises(ValueError):
                multiplicative_order(a, n)
            continue
        r = multiplicative_order(a, n)
        assert pow(a, r, n) == 1
        assert all(pow(a, k, n) != 1 for k in range(1, r))


def test_primes_up_to():
    assert primes_up_to(1) == []
    assert primes_up_to(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


def test_power_of_two_in_range():
    assert power_of_two_in_range(5, 12) == 8
    assert power_of_two_in_range(16, 16) == 16
    with pytest.raises(NoSmoothNumberError):
        power_of_two_in_range(9, 15)


def test_smooth_number_goldens():
    assert smooth_number_in_range(5, 12) == 6
    assert smooth_number_in_range(200, 400) == 210


def test_smooth_number_always_found_when_range_doubles():
    # hi >= 2*lo always contains a power of two, the guaranteed fallback
    rng = np.random.default_rng(1)
    for _ in range(200):
        lo = int(rng.integers(2, 10**6))
        n = smooth_number_in_range(lo, 2 * lo)
        assert lo <= n <= 2 * lo


def test_round_to_fraction_goldens():
    assert round_to_fraction(13, 64, 8) == Fraction(1, 5)
    assert round_to_fraction(0, 7, 3) == Fraction(0, 1)
    # zero rounding error: s/q already reducible below the bound
    assert round_to_fraction(25, 100, 5) == Fraction(1, 4)


def test_round_to_fraction_matches_brute_force():
    """Convergent search equals exhaustive minimization for every small input."""
    rng = np.random.default_rng(2)
    for _ in range(400):
        q = int(rng.integers(2, 500))
        s = int(rng.integers(0, q))
        den_bound = int(rng.integers(2, 40))
        got = round_to_fraction(s, q, den_bound)
        target = Fraction(s, q)
        errors = {}
        for b in range(1, den_bound):
            a = (s * b) // q
            err = min(abs(target - Fraction(a, b)), abs(target - Fraction(a + 1, b)))
            errors[b] = err
        min_err = min(errors.values())
        assert abs(target - got) == min_err, (s, q, den_bound)
        # among minimizers the smallest denominator wins
        assert got.denominator == min(b for b, e in errors.items() if e == min_err)


def test_round_to_fraction_denominator_bound_is_strict():
    # den_bound=6 excludes denominator 6 itself
    got = round_to_fraction(1, 6, 6)
    assert got.denominator < 6
