"""Integer utilities for the period-finding and linear-structure pipelines.

Everything here is exact integer or Fraction arithmetic; floats never enter.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidSizeError, NoSmoothNumberError


def euler_phi(n: int) -> int:
    """Count of integers in [1, n] coprime to n, via trial-division factoring."""
    n = int(n)
    if n < 1:
        raise InvalidSizeError(f"need n >= 1, got {n}")
    result = n
    m = n
    d = 2
    while d * d <= m:
        if m % d == 0:
            while m % d == 0:
                m //= d
            result -= result // d
        d += 1
    if m > 1:
        result -= result // m
    return result


def multiplicative_order(a: int, n: int) -> int:
    """Least k >= 1 with a^k = 1 mod n; requires gcd(a, n) = 1."""
    a, n = int(a), int(n)
    if n < 1:
        raise InvalidSizeError(f"need modulus >= 1, got {n}")
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError(f"{a} is not invertible mod {n}")
    order = 1
    value = a % n
    while value != 1:
        value = (value * a) % n
        order += 1
    return order


def primes_up_to(limit: int) -> list:
    """Primes <= limit by sieve; empty below 2."""
    limit = int(limit)
    if limit < 2:
        return []
    sieve = bytearray([1]) * (limit + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


def power_of_two_in_range(lo: int, hi: int) -> int:
    """Smallest power of two in [lo, hi]."""
    lo, hi = int(lo), int(hi)
    if hi < max(lo, 2):
        raise NoSmoothNumberError(f"no power of two in [{lo}, {hi}]")
    k = max(1, (max(lo, 2) - 1).bit_length())
    cand = 1 << k
    if cand < lo:
        cand <<= 1
    if cand > hi:
        raise NoSmoothNumberError(f"no power of two in [{lo}, {hi}]")
    return cand


def smooth_number_in_range(lo: int, hi: int) -> int:
    """Smallest number in [lo, hi] with only small prime factors.

    Candidates are products of distinct primes bounded by about log2(hi),
    the construction of multiplying successively larger primes, plus pure
    powers of two.  With hi >= 2*lo the power of two guarantees a hit;
    narrower ranges may raise NoSmoothNumberError.
    """
    lo, hi = int(lo), int(hi)
    lo = max(lo, 2)
    if hi < lo:
        raise NoSmoothNumberError(f"empty range [{lo}, {hi}]")
    prime_cap = max(2, int(math.log2(hi)) + 1)
    products = [1]
    for prime in primes_up_to(prime_cap):
        products.extend([v * prime for v in products if v * prime <= hi])
    best = None
    for v in products:
        if lo <= v <= hi and (best is None or v < best):
            best = v
    try:
        two = power_of_two_in_range(lo, hi)
        if best is None or two < best:
            best = two
    except NoSmoothNumberError:
        pass
    if best is None:
        raise NoSmoothNumberError(
            f"no product of distinct primes <= {prime_cap} or power of two in [{lo}, {hi}]"
        )
    return best


def round_to_fraction(s: int, q: int, den_bound: int) -> Fraction:
    """Best rational approximation to s/q with denominator < den_bound.

    Walks the continued-fraction convergents and semiconvergents of s/q,
    all in exact arithmetic; exact ties go to the smaller denominator.
    Minimizes |s/q - a/b| over every fraction with 1 <= b < den_bound.
    """
    s, q, den_bound = int(s), int(q), int(den_bound)
    if q < 1:
        raise InvalidSizeError(f"need q >= 1, got {q}")
    if den_bound < 2:
        raise ValueError(f"need den_bound >= 2 so denominator 1 is allowed, got {den_bound}")
    target = Fraction(s, q)
    if target.denominator < den_bound:
        return target

    digits = []
    num, den = s, q
    while den:
        a = num // den
        digits.append(a)
        num, den = den, num - a * den

    # walk convergents h/k; when the next one overshoots the denominator cap,
    # the only remaining candidate is its best semiconvergent under the cap
    h_prev, k_prev = 1, 0
    h_cur, k_cur = digits[0], 1
    candidates = [Fraction(h_cur, k_cur)]
    for a in digits[1:]:
        h_next = a * h_cur + h_prev
        k_next = a * k_cur + k_prev
        if k_next >= den_bound:
            t = (den_bound - 1 - k_prev) // k_cur
            if t >= 1:
                candidates.append(Fraction(t * h_cur + h_prev, t * k_cur + k_prev))
            break
        candidates.append(Fraction(h_next, k_next))
        h_prev, k_prev, h_cur, k_cur = h_cur, k_cur, h_next, k_next

    best = None
    best_err = None
    for cand in candidates:
        err = abs(cand - target)
        if best is None or err < best_err or (err == best_err and cand.denominator < best.denominator):
            best, best_err = cand, err
    return best
