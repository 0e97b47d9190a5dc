from __future__ import annotations

import json

import numpy as np
import pytest

from superlr.algebra import Coordinates, PMap, dumps
from superlr.lierinehart import (
    CenterNontrivial,
    PreconditionViolated,
    Representation,
    UnknownExample,
    build_semidirect,
    builtin,
    bundle_from_json,
    bundle_to_json,
    check_hochschild_theorem,
    check_lr,
    check_lr_morphism,
    check_representation,
    check_restricted_lr,
    general_linear,
    ideal_module,
    printed_p3_expansions,
    semidirect_lemma1,
    semidirect_lemma2,
    semidirect_lemma2_p,
)
from superlr.linalg import matpow

SAMPLES = 60


def test_builtin_shapes():
    w = builtin("witt", 3, {"n": 2})
    assert w.data.A.sdim == (2, 2) and w.data.L.sdim == (4, 4)
    e = builtin("example-2-1", 5, {"alpha": 2, "beta": 3, "gamma": 4})
    L, d = e.data.L, e.data
    assert np.array_equal(L.bracket(L.basis("x1"), L.basis("x3")), L.basis("x3"))
    assert np.array_equal(L.bracket(L.basis("x2"), L.basis("x3")), -L.basis("x3") % 5)
    assert np.array_equal(d.act(d.A.basis("e2"), L.basis("x1")), 3 * L.basis("x3"))
    f = builtin("example-2-2", 3).data.L
    assert np.array_equal(f.pmap.images[0], f.basis("x1"))
    assert not f.pmap.images[1].any()
    with pytest.raises(UnknownExample):
        builtin("heisenberg", 3)


@pytest.mark.parametrize("name,p,params", [
    ("derivations", 3, {}),
    ("witt", 3, {"n": 2}),
    ("witt", 5, {"n": 2}),
    ("example-2-1", 3, {"alpha": 1, "beta": 1, "gamma": 0}),
    ("example-2-1", 5, {"alpha": 3, "beta": 2, "gamma": 4}),
    ("example-2-2", 3, {}),
    ("example-2-2", 5, {"alpha": 2, "beta": 3}),
])
def test_builtins_are_restricted_lr(name, p, params):
    b = builtin(name, p, params)
    assert check_lr(b.data).ok
    rep = check_restricted_lr(b.data, samples=SAMPLES)
    assert rep.ok, rep.failures()
    assert check_representation(b.data, b.rep, samples=SAMPLES).ok


def test_unit_case_of_even_even_identity():
    b = builtin("witt", 3, {"n": 2})
    from superlr.lierinehart import hochschild_defect
    d = b.data
    for x in d.L.even:
        assert not hochschild_defect(d, d.A.one(), d.L.basis(x)).any()


def test_corrupted_anchor_witness():
    # rho(x1)(e2) := 0; with beta = 1 the first failing triple is (x1, e2, x1),
    # with beta = 0, gamma = 1 it is (x1, e2, x2).  (x1, e2, x3) cannot fail
    # because e2 x3 = 0 and the x3 row is unaffected.
    for params, want in (({"beta": 1}, "(x1, e2, x1)"), ({"beta": 0, "gamma": 1}, "(x1, e2, x2)")):
        b = builtin("example-2-1", 3, params)
        b.data.anchor[0][1, 1] = 0
        rep = check_lr(b.data)
        assert rep.find("leibniz").witness == want


def test_corrupted_pmap_fails_restricted_lr():
    b = builtin("example-2-2", 5)
    L = b.data.L
    bad = PMap(5, {0: (L.pmap.images[0] + L.basis("x2")) % 5, 1: L.pmap.images[1]}, L.center())
    rep = check_restricted_lr(b.data.with_pmap(bad), samples=20)
    assert not rep.ok
    assert all(c.witness for c in rep.failures())


def test_representation_negative_control():
    b = builtin("witt", 3, {"n": 2})
    phi = b.rep.phi.copy()
    phi[0] = (phi[0] + np.eye(4, dtype=np.int64)) % 3
    rep = Representation(b.rep.names, b.rep.parities, b.rep.a_action, phi, 3)
    out = check_representation(b.data, rep, samples=10)
    assert out.find("phi-A-linear").verdict == "fail"
    assert out.find("phi-A-linear").witness


def test_zero_module():
    b = builtin("example-2-1", 3)
    L = b.data.L
    z = Representation([], [], np.zeros((2, 0, 0), dtype=np.int64), np.zeros((L.dim, 0, 0), dtype=np.int64), 3)
    assert check_representation(b.data, z).ok


@pytest.mark.parametrize("p", [3, 5])
def test_hochschild_theorem_witt(p):
    b = builtin("witt", p, {"n": 2})
    rep = check_hochschild_theorem(b.data, b.rep, samples=SAMPLES)
    assert rep.ok, rep.failures()
    assert {c.case for c in rep.claims if c.id.startswith("operator")} == {"even/even", "even/odd", "odd/even", "odd/odd"}


def test_worked_example_p3():
    b = builtin("witt", 3, {"n": 2})
    d, rep = b.data, b.rep
    a, D = d.A.basis("xi1"), d.L.basis("d1")
    lhs = matpow(rep.of(d.act(a, D)), 3, 3)
    assert np.array_equal(lhs, rep.of(d.L.basis("xi1*d1")))
    assert printed_p3_expansions(d, rep, a, D) == {"odd/odd": True}
    rng = np.random.default_rng(5)
    for _ in range(30):
        a = d.A.random_homogeneous(rng, 0)
        D = d.L.random_homogeneous(rng, 1)
        assert printed_p3_expansions(d, rep, a, D) == {"direct": True, "lambda": True}


def test_even_sub_bundle_hochschild():
    # the even part of Der(Lambda(2)) acting on the even part of Lambda(2)
    b = builtin("witt", 5, {"n": 2})
    d, rep, p = b.data, b.rep, 5
    rng = np.random.default_rng(1)
    for _ in range(20):
        a, x = d.A.random_homogeneous(rng, 0), d.L.random_homogeneous(rng, 0)
        ax = d.act(a, x)
        lhs = matpow(rep.of(ax), p, p)
        tail = matpow(d.rho(ax), p - 1, p) @ a % p
        rhs = (rep.mult(d.A.power(a, p)) @ matpow(rep.of(x), p, p) + rep.mult(tail) @ rep.of(x)) % p
        assert np.array_equal(lhs, rhs)


def test_lr_morphisms():
    w = builtin("witt", 3, {"n": 2})
    dA, dL = w.data.A.dim, w.data.L.dim
    assert check_lr_morphism(w.data, w.data, np.eye(dA, dtype=int), np.eye(dL, dtype=int)).ok
    der = builtin("derivations", 3)
    coords = Coordinates(list(der.data.anchor), 3)
    psi = np.array([coords(w.data.anchor[x]) for x in range(dL)]).T
    assert check_lr_morphism(w.data, der.data, np.eye(dA, dtype=int), psi).ok
    bad = np.zeros((dL, dL), dtype=int)
    bad[0, dL - 1] = 1  # an odd basis vector sent to an even one
    with pytest.raises(PreconditionViolated):
        check_lr_morphism(w.data, w.data, np.eye(dA, dtype=int), bad)


# -- semidirect products ---------------------------------------------------------

@pytest.mark.parametrize("p", [3, 5])
def test_semidirect_centerless(p):
    b = builtin("example-2-2", p)
    res = build_semidirect(b.data, ideal_module(b.data, ["e2"]), samples=SAMPLES)
    assert res.center_trivial
    assert res.report.ok, res.report.failures()
    assert any(c.id.startswith("rlr:identity") for c in res.report.claims)


def test_semidirect_center_nontrivial_flagged():
    b = builtin("witt", 3, {"n": 2})
    res = build_semidirect(b.data, b.rep, samples=20)
    assert not res.center_trivial
    assert res.report.find("restricted-lr").verdict == "not-applicable"
    assert res.report.find("basis-pmap").verdict == "pass"
    with pytest.raises(CenterNontrivial) as info:
        build_semidirect(b.data, b.rep, samples=20, strict=True)
    assert info.value.result.L.dim == 12


def test_semidirect_bracket_sanity():
    b = builtin("witt", 3, {"n": 2})
    res = build_semidirect(b.data, b.rep, samples=10)
    assert res.report.find("bracket").verdict == "pass"
    assert res.report.find("anchor-extension").verdict == "pass"


@pytest.mark.parametrize("m,n,p", [(1, 1, 3), (2, 1, 3), (1, 1, 5)])
def test_semidirect_lemmas(m, n, p):
    L, V = general_linear(m, n, p)
    rng = np.random.default_rng([m, n, p])
    for _ in range(30):
        x, y = L.random_homogeneous(rng, 0), L.random_homogeneous(rng, int(rng.integers(2)))
        v = rng.integers(0, p, V.dim) * (V.parities == 0)
        w = rng.integers(0, p, V.dim) * (V.parities == 0)
        k = int(rng.integers(1, p + 1))
        assert semidirect_lemma1(L, V, x, y, k)
        assert semidirect_lemma2(L, V, x, v, y, w, k)
        assert semidirect_lemma2_p(L, V, x, v, y, w)


def test_bundle_json_roundtrip():
    b = builtin("example-2-1", 5, {"alpha": 1, "beta": 2, "gamma": 3})
    obj = bundle_to_json(b.data, b.rep)
    data, rep = bundle_from_json(json.loads(dumps(obj)))
    assert dumps(bundle_to_json(data, rep)) == dumps(obj)
    assert check_lr(data).ok and check_restricted_lr(data, samples=20).ok
