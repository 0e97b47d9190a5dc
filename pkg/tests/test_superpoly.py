from __future__ import annotations

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from superlr.algebra import build_grassmann, witt_basis
from superlr.smash import gamma_recursive
from superlr.superpoly import (
    ALL_CASES,
    EVEN_ODD,
    ODD_EVEN,
    ODD_ODD,
    ParityCase,
    ParityCaseMismatch,
    ParityMismatch,
    SuperPoly,
    apply_delta,
    eval_hom,
    format_poly,
    parse_poly,
)

cases = st.sampled_from(ALL_CASES)


@st.composite
def homogeneous(draw, case, max_var=4, max_terms=4):
    """A random homogeneous polynomial of a drawn parity."""
    want = draw(st.integers(0, 1))
    P = SuperPoly.zero(case)
    for _ in range(draw(st.integers(1, max_terms))):
        factors = draw(st.lists(st.integers(0, max_var), min_size=1, max_size=4))
        Q = SuperPoly.monomial(factors, case, draw(st.integers(-3, 3)))
        if Q.parity() == want:
            P = P + Q
    return P


def test_odd_square_and_koszul():
    x1 = SuperPoly.var(1, EVEN_ODD)
    assert (x1 * x1).is_zero()
    # odd/odd: x0 and x2 are odd, x1 is even
    y0, y1, y2 = (SuperPoly.var(i, ODD_ODD) for i in range(3))
    assert y2 * y0 == -(y0 * y2)
    assert y1 * y0 == y0 * y1


def test_case_mismatch():
    with pytest.raises(ParityCaseMismatch):
        SuperPoly.var(0, EVEN_ODD) * SuperPoly.var(0, ODD_ODD)


def test_delta_examples():
    x = lambda i: SuperPoly.var(i, EVEN_ODD)
    assert apply_delta(x(0)) == x(1)
    assert apply_delta(x(0) * x(1)) == x(0) * x(2)
    assert apply_delta(x(0) * x(0)) == (x(0) * x(1)).scale(2)


def test_coefficient_of():
    P = parse_poly("x0^2*x1 + 3*x0^3", EVEN_ODD)
    assert P.coefficient(((0, 2), (1, 1))) == 1
    assert SuperPoly.zero(EVEN_ODD).coefficient(((0, 1),)) == 0
    assert gamma_recursive(4, 3).coefficient(((0, 3), (1, 1))) == 2


def test_parse_roundtrip_and_order_sign():
    for text in ("x0^3*x1*x4", "-2*x0*x1 + 1/2*x0^2*x2", "0"):
        assert format_poly(parse_poly(text, EVEN_ODD)) == text
    assert parse_poly("x3*x1", EVEN_ODD) == -parse_poly("x1*x3", EVEN_ODD)


def test_parity_case_names():
    assert ParityCase.parse("odd/even") == ODD_EVEN
    assert {c.name for c in ALL_CASES} == {"even/even", "even/odd", "odd/even", "odd/odd"}


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_supercommutative(data):
    case = data.draw(cases)
    P, Q = data.draw(homogeneous(case)), data.draw(homogeneous(case))
    assume(not P.is_zero() and not Q.is_zero())
    assert P * Q == (Q * P).scale((-1) ** (P.parity() * Q.parity()))


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_delta_is_graded_derivation(data):
    case = data.draw(cases)
    P, Q = data.draw(homogeneous(case)), data.draw(homogeneous(case))
    assume(not P.is_zero())
    s = (-1) ** (case.delta * P.parity())
    assert apply_delta(P * Q) == apply_delta(P) * Q + (P * apply_delta(Q)).scale(s)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_delta_squared_even_derivation(data):
    P, Q = data.draw(homogeneous(EVEN_ODD)), data.draw(homogeneous(EVEN_ODD))
    d2 = lambda R: apply_delta(R, 2)
    assert d2(P * Q) == d2(P) * Q + P * d2(Q)


A3 = build_grassmann(3, 5)
W3 = witt_basis(A3, 3)


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_eval_hom_ring_map_into_lambda3(data):
    rng = np.random.default_rng(data.draw(st.integers(0, 2**32 - 1)))
    D = W3[data.draw(st.integers(0, len(W3) - 1))]
    pa = data.draw(st.integers(0, 1))
    case = ParityCase(pa, D.parity)
    a = A3.random_homogeneous(rng, pa)
    P, Q = data.draw(homogeneous(case, 3)), data.draw(homogeneous(case, 3))
    f = lambda R: eval_hom(R, A3, a, D.matrix, D.parity)
    assert np.array_equal(f(P * Q), A3.mul(f(P), f(Q)))
    assert np.array_equal(f(P + Q), (f(P) + f(Q)) % 5)
    assert np.array_equal(f(apply_delta(P)), D.matrix @ f(P) % 5)


def test_eval_hom_examples():
    rng = np.random.default_rng(0)
    a = A3.random_homogeneous(rng, 1)
    x0 = SuperPoly.var(0, ODD_ODD)
    D = next(d for d in W3 if d.parity == 1)
    assert np.array_equal(eval_hom(x0, A3, a, D.matrix), a)
    assert not eval_hom(x0 * x0, A3, a, D.matrix).any()
    with pytest.raises(ParityMismatch):
        eval_hom(SuperPoly.var(0, EVEN_ODD), A3, a, D.matrix)
