from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from superlr.scalar import InsufficientSamples
from superlr.shapes import (
    P_value,
    PartialSum,
    Q_value,
    check_coeff_extraction,
    check_delta_P,
    extract_P,
    extract_Q,
    inc,
    is_admissible,
    is_packed,
    leading_coefficient_packed,
    leibniz_sign,
    packed_shape,
    packing_statements,
    phi,
    phi_inverse,
    psi,
    psi_inverse,
    shape_coefficient,
    shape_monomial,
    shapes_of_weight,
    verify_appendix_bundle,
)
from superlr.smash import gamma_recursive
from superlr.superpoly import EVEN_ODD, SuperPoly, apply_delta

PARTITION_COUNTS = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30]


def test_shapes_small():
    assert set(shapes_of_weight(3)) == {(3,), (1, 2), (1, 1, 1)}
    assert shapes_of_weight(0) == [()]
    assert [len(shapes_of_weight(t)) for t in range(10)] == PARTITION_COUNTS


def test_phi_psi_examples():
    assert phi(2, (1, 2)) == (1, 2, 2)
    assert phi_inverse(2, 3, (1, 2, 2)) == [(1, 2)]
    assert psi(1, ((1, 2), 1)) == (2, 2)
    assert psi_inverse(1, 3, (2, 2)) == [((1, 2), 1)]
    assert psi(2, ((1, 1, 1), 3)) == (1, 1, 3)
    for r in (3, 5, 7):
        assert phi(2, packed_shape(r - 2)) == packed_shape(r)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 8), st.integers(1, 2), st.data())
def test_inverses_are_exact(t, i, data):
    mu = data.draw(st.sampled_from(shapes_of_weight(t)))
    assert mu in phi_inverse(i, t, phi(i, mu))
    u = data.draw(st.integers(1, len(mu)))
    assert (mu, u) in psi_inverse(i, t, psi(i, (mu, u)))
    for pre, v in psi_inverse(i, t, psi(i, (mu, u))):
        assert psi(i, (pre, v)) == psi(i, (mu, u))


def test_leibniz_sign_examples():
    assert leibniz_sign(((1, 2), 2)) == -1
    assert leibniz_sign(((2, 2), 2)) == 1


def test_leibniz_sign_matches_delta():
    for t in range(1, 7):
        for mu in shapes_of_weight(t):
            if not is_admissible(mu):
                continue
            lhs = apply_delta(shape_monomial(0, mu))
            rhs = SuperPoly.zero(EVEN_ODD)
            for u in range(1, len(mu) + 1):
                rhs = rhs + SuperPoly.monomial(inc(mu, u, 1), EVEN_ODD, leibniz_sign((mu, u)))
            assert lhs == rhs, mu


def test_packed():
    assert is_packed((2, 2)) and is_packed((1, 2, 2))
    assert not is_packed((1, 1, 3))
    assert leading_coefficient_packed(5) == Fraction(1, 2)
    assert leading_coefficient_packed(1) == leading_coefficient_packed(2) == 1


def test_low_weight_polynomials():
    P1, P2 = extract_P((1,), 8), extract_P((2,), 8)
    for m in range(9):
        assert P1(m) == m
        assert P2(m) == m * (m - 1)


def test_q2_is_m_squared():
    Q2 = extract_Q((2,), 8)
    assert all(Q2(m) == m * m for m in range(1, 9))


@pytest.mark.xfail(strict=True, reason="printed Q_(2)(m) = (m-1)^2 disagrees with the recursion (m^2)")
def test_q2_printed_form():
    Q2 = extract_Q((2,), 8)
    assert all(Q2(m) == (m - 1) ** 2 for m in range(1, 9))


def test_row_decomposition():
    for m in range(2, 7):
        for r in range(0, 2 * m):
            recon = SuperPoly.zero(EVEN_ODD)
            for mu in shapes_of_weight(r):
                recon = recon + shape_monomial(2 * m - len(mu), mu).scale(P_value(mu, m))
            assert recon == gamma_recursive(2 * m, 2 * m - r), (m, r)


def test_vanishes_below_threshold():
    for r in range(1, 7):
        for lam in shapes_of_weight(r):
            for m in range(0, (r + 2) // 2):
                assert P_value(lam, m) == 0


def test_insufficient_samples():
    with pytest.raises(InsufficientSamples):
        extract_P((1, 2), 3)


def test_delta_P_recursion():
    for r in range(1, 7):
        for lam in shapes_of_weight(r):
            if is_admissible(lam):
                assert check_delta_P(lam, range(2, 9)), lam


def test_coeff_extraction_examples():
    H = PartialSum.from_poly(gamma_recursive(5, 3), 2)
    for nu in shapes_of_weight(3):
        assert check_coeff_extraction(H, nu, "D3")
    single = PartialSum(1, 4, {(1,): 1})
    assert check_coeff_extraction(single, (1, 1), "D3")
    empty = PartialSum(2, 3, {})
    assert check_coeff_extraction(empty, (1, 2), "D3")


def test_coeff_extraction_rows():
    for m in range(2, 6):
        for r in range(1, 2 * m - 1):
            H = PartialSum.from_poly(gamma_recursive(2 * m - 1, 2 * m - r), r - 1)
            for nu in shapes_of_weight(r):
                assert check_coeff_extraction(H, nu, "D3")
            for nu in shapes_of_weight(r + 1):
                assert check_coeff_extraction(H, nu, "D4")


def test_packing_statements():
    for r in range(2, 10):
        assert all(packing_statements(r).values()), r


def test_bundle_p3():
    rep = verify_appendix_bundle(5, [3])
    assert rep.ok, rep.failures()
    assert rep.find("lead-P(1,2,2)").verdict == "pass"
    assert rep.find("shape-sum=Gamma_6,3").verdict == "pass"
