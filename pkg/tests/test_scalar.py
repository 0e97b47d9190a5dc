from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from superlr.scalar import (
    BinomPoly,
    DenominatorDivisibleByP,
    Fp,
    InconsistentSamples,
    InsufficientSamples,
    binom,
    binom_fit,
    check_prime,
    finite_difference,
    gbinom,
    rat_mod_p,
)

primes = st.sampled_from([3, 5, 7, 11, 13])


def test_half_mod_small_primes():
    assert rat_mod_p(Fraction(1, 2), 3) == 2
    assert rat_mod_p(Fraction(1, 2), 5) == 3
    assert rat_mod_p(Fraction(-3, 2), 7) == 2


def test_denominator_divisible_by_p():
    with pytest.raises(DenominatorDivisibleByP):
        rat_mod_p(Fraction(1, 3), 3)


def test_check_prime_rejects():
    for bad in (2, 4, 9, 1, 0, -3):
        with pytest.raises(ValueError):
            check_prime(bad)
    assert check_prime(13) == 13


@given(primes, st.fractions(), st.fractions())
def test_reduction_is_a_ring_map(p, a, b):
    if a.denominator % p == 0 or b.denominator % p == 0:
        return
    assert rat_mod_p(a + b, p) == (rat_mod_p(a, p) + rat_mod_p(b, p)) % p
    assert rat_mod_p(a * b, p) == rat_mod_p(a, p) * rat_mod_p(b, p) % p


@given(primes, st.integers(1, 10**6))
def test_fp_inverse(p, n):
    x = Fp(n, p)
    if x.residue:
        assert x * x.inverse() == 1


def test_binom_edges():
    assert binom(5, 7) == 0 and binom(5, -1) == 0 and binom(0, 0) == 1
    assert gbinom(-1, 3) == -1
    assert gbinom(-2, 2) == 3


@given(st.lists(st.integers(-20, 20), max_size=6))
def test_fit_roundtrip(coeffs):
    P = BinomPoly(tuple(coeffs))
    Q = binom_fit([(m, P(m)) for m in range(-2, 10)], degree=max(P.degree, 0))
    assert Q == P


@given(st.lists(st.integers(-20, 20), min_size=1, max_size=6), st.integers(-5, 15))
def test_backward_difference(coeffs, m):
    P = BinomPoly(tuple(coeffs))
    assert finite_difference(P)(m) == P(m) - P(m - 1)


def test_fit_errors():
    with pytest.raises(InsufficientSamples):
        binom_fit([(0, 1)], degree=3)
    with pytest.raises(InconsistentSamples):
        binom_fit([(0, 0), (1, 1), (2, 4)], degree=1)


def test_packed_style_fit():
    # m(m-1) = 2 C(m, 2)
    P = binom_fit([(m, m * (m - 1)) for m in range(6)], degree=2)
    assert P.coeffs == (0, 0, 2)
    assert P.leading_coefficient() == 1
