from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from superlr.algebra import (
    NotRestrictable,
    PMap,
    StructureViolation,
    SuperAlgebra,
    adjoint_module,
    algebra_from_json,
    algebra_to_json,
    build_grassmann,
    check_module,
    check_restricted,
    check_restricted_module,
    derivation_algebra,
    derivation_space,
    dumps,
    jacobson_solve,
    lie_from_json,
    lie_to_json,
    LieModule,
    LieSuperalgebra,
    pmap_eval,
    s_coefficients,
    s_sum_nested,
    trivial_module,
)
from superlr.lierinehart import builtin, general_linear
from superlr.linalg import matpow


def ex21_lie(p=3, alpha=0):
    return builtin("example-2-1", p, {"alpha": alpha}).data.L


def test_grassmann_relations():
    A = build_grassmann(2, 3)
    assert A.sdim == (2, 2)
    x1, x2 = A.basis("xi1"), A.basis("xi2")
    assert np.array_equal(A.mul(x1, x2), -A.mul(x2, x1) % 3)
    assert not A.mul(x1, x1).any()
    B = build_grassmann(1, 5)
    assert B.sdim == (1, 1) and not B.mul(B.basis(1), B.basis(1)).any()
    rng = np.random.default_rng(0)
    for _ in range(100):
        v = rng.integers(0, 3, 4)
        assert np.array_equal(A.mul(A.one(), v), v % 3)


def test_grassmann_rank_bounds():
    with pytest.raises(ValueError):
        build_grassmann(7)


def test_validation_catches_bad_tables():
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0, 0] = T[0, 1, 1] = T[1, 0, 1] = 1
    T[1, 1, 0] = 1  # odd * odd landing on the unit breaks supercommutativity
    with pytest.raises(StructureViolation):
        SuperAlgebra(3, ["e1", "e2"], [0, 1], T, unit=0)
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 1, 0] = 1  # wrong parity
    with pytest.raises(StructureViolation):
        SuperAlgebra(3, ["a", "b"], [0, 1], T, associative=False, supercommutative=False)


def test_derivation_space_lambda2():
    A = build_grassmann(2, 3)
    ders = derivation_space(A)
    assert len(ders) == 8
    for D in ders:
        assert A.is_derivation(D.matrix, D.parity)
    for D in ders:
        if D.parity == 0:
            assert A.is_derivation(matpow(D.matrix, 3, 3), 0)


@pytest.mark.parametrize("n,p", [(2, 3), (2, 5), (3, 3), (3, 5)])
def test_even_derivation_pth_power(n, p):
    A = build_grassmann(n, p)
    rng = np.random.default_rng(n * p)
    ev = [D.matrix for D in derivation_space(A) if D.parity == 0]
    for _ in range(10):
        M = sum(int(c) * D for c, D in zip(rng.integers(0, p, len(ev)), ev)) % p
        assert A.is_derivation(matpow(M, p, p), 0)


def test_s_coefficients_trivial_cases():
    L = ex21_lie()
    x = L.basis("x1")
    assert all(not s.any() for s in s_coefficients(L, x, L.zero()))
    ab = LieSuperalgebra(3, ["a", "b"], [0, 0], np.zeros((2, 2, 2), dtype=np.int64))
    assert all(not s.any() for s in s_coefficients(ab, ab.basis(0), ab.basis(1)))


@pytest.mark.parametrize("p", [3, 5])
def test_s_expansion_matches_nested_brackets(p):
    L, _ = general_linear(2, 1, p)
    rng = np.random.default_rng(p)
    for _ in range(20):
        x, y = L.random_homogeneous(rng, 0), L.random_homogeneous(rng, 0)
        assert np.array_equal(sum(s_coefficients(L, x, y)) % p, s_sum_nested(L, x, y))


def test_ex21_additivity_of_printed_pmap():
    L = ex21_lie(3, 1)
    x1, x2 = L.basis("x1"), L.basis("x2")
    lhs = pmap_eval(L, (x1 + x2) % 3)
    rhs = (pmap_eval(L, x1) + pmap_eval(L, x2) + sum(s_coefficients(L, x1, x2))) % 3
    assert np.array_equal(lhs, rhs)
    assert np.array_equal(L.ad(lhs), matpow(L.ad((x1 + x2) % 3), 3, 3))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_jacobson_example_2_1(p):
    L = ex21_lie(p)
    sol = jacobson_solve(L)
    assert [list(r) for r in sol.center] == [[1, 1, 0]]
    assert np.array_equal(sol.images[0], [1, 0, 0])
    assert np.array_equal(sol.images[1], np.array([-1, 0, 0]) % p)
    for alpha in range(p):
        shifted = {j: (v + alpha * sol.center[0]) % p for j, v in sol.images.items()}
        assert check_restricted(L, PMap(p, shifted, sol.center), samples=30).ok
        assert np.array_equal(shifted[0], np.array([1 + alpha, alpha, 0]) % p)


def test_jacobson_abelian():
    ab = LieSuperalgebra(5, ["a", "b", "c"], [0, 0, 1], np.zeros((3, 3, 3), dtype=np.int64))
    sol = jacobson_solve(ab)
    assert all(not v.any() for v in sol.images.values())
    assert len(sol.center) == 3


def test_not_restrictable_raises():
    # over F_3: [a, b] = c, [a, c] = b + c.  ad_a on span{b, c} has matrix
    # [[0, 1], [1, 1]] whose cube is not a multiple of it, while ad of any
    # element only reaches multiples of ad_a plus nilpotent parts.
    p = 3
    T = np.zeros((3, 3, 3), dtype=np.int64)
    T[0, 1, 2], T[1, 0, 2] = 1, -1
    T[0, 2, 1], T[2, 0, 1] = 1, -1
    T[0, 2, 2], T[2, 0, 2] = 1, -1
    L = LieSuperalgebra(p, ["a", "b", "c"], [0, 0, 0], T)
    with pytest.raises(NotRestrictable):
        jacobson_solve(L)


def test_check_restricted_examples():
    b = builtin("example-2-2", 3)
    assert check_restricted(b.data.L).ok
    D = derivation_algebra(build_grassmann(2, 3))
    assert check_restricted(D.L).ok


def test_corrupted_pmap_names_pair():
    L = ex21_lie(3)
    bad = {0: (L.pmap.images[0] + L.basis("x3")) % 3, 1: L.pmap.images[1]}
    rep = check_restricted(L, PMap(3, bad), samples=20)
    assert not rep.ok
    wit = [c.witness for c in rep.failures()]
    assert "(x1, x1)" in wit


def test_restricted_modules():
    L = ex21_lie(5)
    assert check_restricted_module(L, None, adjoint_module(L)).ok
    assert check_restricted_module(L, None, trivial_module(L, 2)).ok
    D = derivation_algebra(build_grassmann(2, 3))
    A = D.A
    M = LieModule(3, list(A.names), A.parities, np.array(D.matrices))
    assert check_restricted_module(D.L, None, M).ok


def test_module_failure_detected():
    L = ex21_lie(3)
    M = adjoint_module(L)
    M.action[0] = (M.action[0] + np.eye(3, dtype=np.int64)) % 3
    M.action[0][2, 2] = 0
    assert not check_module(L, M).ok


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31))
def test_solved_pmap_adjoint_identity(seed):
    p = 3
    L, _ = general_linear(1, 1, p)
    sol = jacobson_solve(L)
    rng = np.random.default_rng(seed)
    x, y = L.random_homogeneous(rng, 0), L.random_homogeneous(rng, 0)
    z = (x + y) % p
    assert np.array_equal(L.ad(pmap_eval(L, z, sol)), matpow(L.ad(z), p, p))


def test_json_roundtrip():
    A = build_grassmann(2, 5)
    obj = algebra_to_json(A)
    assert dumps(algebra_to_json(algebra_from_json(json.loads(dumps(obj))))) == dumps(obj)
    L = ex21_lie(5, 2)
    obj = lie_to_json(L)
    back = lie_from_json(json.loads(dumps(obj)))
    assert dumps(lie_to_json(back)) == dumps(obj)
    assert np.array_equal(back.table, L.table)


def test_json_missing_pmap_image():
    obj = lie_to_json(ex21_lie(3))
    obj["pmap"] = obj["pmap"][:1]
    with pytest.raises(StructureViolation):
        lie_from_json(obj)
