"""Lie-Rinehart superalgebras (A, L, rho) over F_p, their restricted
representations, the Hochschild identities, semidirect products with a
representation, and the built-in examples.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import algebra as alg
from .algebra import (
    LieSuperalgebra,
    PMap,
    SuperAlgebra,
    StructureViolation,
    build_grassmann,
    check_restricted,
    derivation_algebra,
    derivation_defects,
    koszul,
    p2p_eval,
    pmap_eval,
    witt_basis,
)
from .coeffs import lambda_vector
from .linalg import matpow, modp
from .report import Report

CASES = ("even/even", "even/odd", "odd/even", "odd/odd")
DEFAULT_SEED = 20240501


class UnknownExample(KeyError):
    pass


class PreconditionViolated(ValueError):
    pass


class CenterNontrivial(ValueError):
    def __init__(self, result: "SemidirectResult"):
        super().__init__(f"center of the semidirect product has dimension {len(result.center)}")
        self.result = result


def _case(pa: int, px: int) -> str:
    return f"{'even' if pa == 0 else 'odd'}/{'even' if px == 0 else 'odd'}"


@dataclass
class LRData:
    """A triple (A, L, rho).

    ``action[a]`` is the matrix of x -> e_a x on L and ``anchor[x]`` is the
    matrix of rho(e_x) on A.
    """

    A: SuperAlgebra
    L: LieSuperalgebra
    action: np.ndarray
    anchor: np.ndarray
    name: str = ""

    def __post_init__(self):
        p = self.A.p
        if self.L.p != p:
            raise StructureViolation("A and L live over different fields")
        self.action = modp(self.action, p)
        self.anchor = modp(self.anchor, p)
        if self.action.shape != (self.A.dim, self.L.dim, self.L.dim):
            raise StructureViolation(f"action has shape {self.action.shape}")
        if self.anchor.shape != (self.L.dim, self.A.dim, self.A.dim):
            raise StructureViolation(f"anchor has shape {self.anchor.shape}")

    @property
    def p(self) -> int:
        return self.A.p

    def act(self, a, x) -> np.ndarray:
        """a x in L."""
        return np.einsum("i,ikl,l->k", np.asarray(a, dtype=np.int64), self.action, np.asarray(x, dtype=np.int64)) % self.p

    def act_matrix(self, a) -> np.ndarray:
        return np.einsum("i,ikl->kl", np.asarray(a, dtype=np.int64), self.action) % self.p

    def rho(self, x) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), self.anchor) % self.p

    def with_pmap(self, pmap: PMap) -> "LRData":
        return LRData(self.A, self.L.with_pmap(pmap), self.action, self.anchor, self.name)


@dataclass
class Representation:
    """An A-module M with phi: L -> End(M).  ``a_action[a]`` and ``phi[x]``
    are matrices on M."""

    names: list[str]
    parities: np.ndarray
    a_action: np.ndarray
    phi: np.ndarray
    p: int

    def __post_init__(self):
        self.parities = np.asarray(self.parities, dtype=np.int64).reshape(-1) % 2
        self.a_action = modp(self.a_action, self.p)
        self.phi = modp(self.phi, self.p)

    @property
    def dim(self) -> int:
        return len(self.names)

    def of(self, x) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), self.phi) % self.p

    def mult(self, a) -> np.ndarray:
        return np.einsum("i,iab->ab", np.asarray(a, dtype=np.int64), self.a_action) % self.p

    def format(self, v) -> str:
        v = np.asarray(v) % self.p
        return " + ".join(f"{int(c)}*{self.names[i]}" for i, c in enumerate(v) if c) or "0"


# -- helpers -----------------------------------------------------------------

def _rho_power_on(data: LRData, x, k: int, a) -> np.ndarray:
    return matpow(data.rho(x), k, data.p) @ np.asarray(a, dtype=np.int64) % data.p


def _samples(data: LRData, rng, n: int, pa: int, px: int):
    for _ in range(n):
        yield data.A.random_homogeneous(rng, pa), data.L.random_homogeneous(rng, px)


def _pairs(data: LRData, pa: int, px: int, samples: int, seed: int):
    """Homogeneous basis pairs followed by seeded random pairs."""
    A, L = data.A, data.L
    for i in (A.even if pa == 0 else A.odd):
        for j in (L.even if px == 0 else L.odd):
            yield "basis", A.basis(i), L.basis(j)
    rng = np.random.default_rng([seed, pa, px])
    for a, x in _samples(data, rng, samples, pa, px):
        yield "sample", a, x


# -- the Lie-Rinehart axioms -------------------------------------------------

def check_lr(data: LRData) -> Report:
    """Linear axioms of (A, L, rho), exhaustively on basis elements."""
    A, L, p = data.A, data.L, data.p
    rep = Report("lie-rinehart")
    nA, nL = A.dim, L.dim
    eye = np.eye(nL, dtype=np.int64)

    # L is an A-module
    wit = None
    for a in range(nA):
        for x in range(nL):
            v = data.action[a][:, x]
            if np.any(v) and L.parity_of(v) != (A.parities[a] + L.parities[x]) % 2:
                wit = wit or f"({A.names[a]}, {L.names[x]})"
    rep.add("action-parity", "A-module", wit is None, wit)
    if A.unit is not None:
        ok = np.array_equal(data.action[A.unit], eye)
        rep.add("action-unit", "A-module", ok, None if ok else A.names[A.unit])
    wit = None
    for a in range(nA):
        for b in range(nA):
            lhs = data.act_matrix(A.mul(A.basis(a), A.basis(b)))
            rhs = data.action[a] @ data.action[b] % p
            if not np.array_equal(lhs, rhs) and wit is None:
                x = np.argwhere((lhs - rhs) % p)[0][1]
                wit = f"({A.names[a]}, {A.names[b]}, {L.names[x]})"
    rep.add("action-assoc", "A-module", wit is None, wit)

    # rho lands in Der(A), is even, a Lie morphism and A-linear
    wit = None
    for x in range(nL):
        if alg._map_parity(data.anchor[x], A.parities, A.parities) not in (L.parities[x],) and np.any(data.anchor[x]):
            wit = wit or L.names[x]
    rep.add("anchor-parity", "rho even", wit is None, wit)
    wit = None
    for x in range(nL):
        bad = derivation_defects(A, data.anchor[x], int(L.parities[x]))
        if bad and wit is None:
            i, j = bad[0]
            wit = f"({L.names[x]}, {A.names[i]}, {A.names[j]})"
    rep.add("anchor-derivation", "rho: L -> Der(A)", wit is None, wit)
    wit = None
    for x in range(nL):
        for y in range(nL):
            lhs = data.rho(L.bracket(L.basis(x), L.basis(y)))
            s = koszul(L.parities[x], L.parities[y])
            rhs = (data.anchor[x] @ data.anchor[y] - s * data.anchor[y] @ data.anchor[x]) % p
            if not np.array_equal(lhs, rhs) and wit is None:
                wit = f"({L.names[x]}, {L.names[y]})"
    rep.add("anchor-morphism", "rho Lie morphism", wit is None, wit)
    wit = None
    for a in range(nA):
        La = A.left(A.basis(a))
        for x in range(nL):
            lhs = data.rho(data.action[a][:, x])
            rhs = La @ data.anchor[x] % p
            if not np.array_equal(lhs, rhs) and wit is None:
                wit = f"({A.names[a]}, {L.names[x]})"
    rep.add("anchor-A-linear", "rho A-linear", wit is None, wit)

    # [x, a y] = (-1)^{|x||a|} a [x, y] + rho(x)(a) y
    wit = None
    for x in range(nL):
        ex = L.basis(x)
        for a in range(nA):
            ea = A.basis(a)
            s = koszul(L.parities[x], A.parities[a])
            ra = data.anchor[x][:, a]
            for y in range(nL):
                ey = L.basis(y)
                lhs = L.bracket(ex, data.act(ea, ey))
                rhs = (s * data.act(ea, L.bracket(ex, ey)) + data.act(ra, ey)) % p
                if not np.array_equal(lhs, rhs):
                    wit = f"({L.names[x]}, {A.names[a]}, {L.names[y]})"
                    break
            if wit:
                break
        if wit:
            break
    rep.add("leibniz", "def-LR", wit is None, wit)
    return rep


def hochschild_defect(data: LRData, a, x, lam: Sequence[int] | None = None) -> np.ndarray:
    """LHS - RHS of the restricted identity matching the parities of (a, x)."""
    A, L, p = data.A, data.L, data.p
    pa, px = A.parity_of(a), L.parity_of(x)
    if pa is None or px is None:
        raise alg.ParityError("inhomogeneous input")
    ax = data.act(a, x)
    if pa == 0 and px == 0:
        lhs = pmap_eval(L, ax)
        rhs = data.act(A.power(a, p), pmap_eval(L, x)) + data.act(_rho_power_on(data, ax, p - 1, a), x)
    elif pa == 0 and px == 1:
        lam = lam if lam is not None else lambda_vector(p).residues()
        lhs = p2p_eval(L, ax)
        R = data.rho(ax)
        powers = [a % p]
        for _ in range(2 * p - 1):
            powers.append(R @ powers[-1] % p)
        rhs = data.act(A.power(a, 2 * p), p2p_eval(L, x)) + data.act(powers[2 * p - 1], x)
        x2 = L.square(x)
        for i, li in enumerate(lam):
            coeff = A.mul(powers[i], powers[2 * p - 2 - i])
            rhs = rhs + li * data.act(coeff, x2)
    elif pa == 1 and px == 0:
        lhs = p2p_eval(L, ax) if np.any(ax) else L.zero()
        rhs = L.zero()
    else:
        lhs = pmap_eval(L, ax)
        ra = data.rho(x) @ a % p
        rhs = data.act(A.mul(a, A.power(ra, p - 1)), x)
    return (lhs - rhs) % p


def check_restricted_lr(data: LRData, samples: int = 200, seed: int = DEFAULT_SEED,
                        include_lie: bool = True) -> Report:
    """The restricted Lie-Rinehart identities, on all homogeneous basis
    pairs and on seeded random homogeneous pairs."""
    A, L = data.A, data.L
    rep = Report("restricted-lie-rinehart", seed=seed)
    if L.pmap is None:
        rep.add("pmap-present", "def:sRLR", False, "L carries no p-map")
        return rep
    if include_lie:
        rep.extend(check_restricted(L, samples=samples, seed=seed), "lie:")
    lam = lambda_vector(data.p).residues()
    anchors = {
        "even/even": "superhochschild-def-even/even",
        "even/odd": "superhochschild-def-even/odd",
        "odd/even": "superhochschild-def-odd/even",
        "odd/odd": "superhochschild-def-odd/odd",
    }
    for pa in (0, 1):
        for px in (0, 1):
            case = _case(pa, px)
            if not (A.even if pa == 0 else A.odd) or not (L.even if px == 0 else L.odd):
                rep.skip(f"identity[{case}]", anchors[case], "empty parity component", case)
                continue
            wit = None
            for kind, a, x in _pairs(data, pa, px, samples, seed):
                if np.any(hochschild_defect(data, a, x, lam)):
                    wit = f"{kind} a={A.format(a)}, x={L.format(x)}"
                    break
            rep.add(f"identity[{case}]", anchors[case], wit is None, wit, case)
    return rep


# -- representations -----------------------------------------------------------

def check_lr_module(data: LRData, rep: Representation) -> Report:
    """M is an A-module, phi is an even A-linear Lie morphism and the module
    Leibniz rule holds; all on bases."""
    A, L, p = data.A, data.L, data.p
    out = Report("lie-rinehart-module")
    if rep.dim == 0:
        out.add("module", "RLRmodule", True)
        return out
    wit = None
    if A.unit is not None and not np.array_equal(rep.a_action[A.unit], np.eye(rep.dim, dtype=np.int64)):
        wit = "unit"
    for a in range(A.dim):
        for b in range(A.dim):
            if not np.array_equal(rep.mult(A.mul(A.basis(a), A.basis(b))), rep.a_action[a] @ rep.a_action[b] % p):
                wit = wit or f"({A.names[a]}, {A.names[b]})"
    out.add("A-module", "A-module", wit is None, wit)
    wit = None
    for x in range(L.dim):
        par = alg._map_parity(rep.phi[x], rep.parities, rep.parities)
        if np.any(rep.phi[x]) and par != L.parities[x]:
            wit = wit or L.names[x]
    out.add("phi-parity", "phi even", wit is None, wit)
    wit = None
    for x in range(L.dim):
        for y in range(L.dim):
            s = koszul(L.parities[x], L.parities[y])
            lhs = rep.of(L.bracket(L.basis(x), L.basis(y)))
            rhs = (rep.phi[x] @ rep.phi[y] - s * rep.phi[y] @ rep.phi[x]) % p
            if not np.array_equal(lhs, rhs):
                wit = wit or f"({L.names[x]}, {L.names[y]})"
    out.add("phi-morphism", "phi Lie morphism", wit is None, wit)
    wit = None
    for a in range(A.dim):
        for x in range(L.dim):
            if not np.array_equal(rep.of(data.action[a][:, x]), rep.a_action[a] @ rep.phi[x] % p):
                wit = wit or f"({A.names[a]}, {L.names[x]})"
    out.add("phi-A-linear", "phi A-linear", wit is None, wit)
    wit = None
    for x in range(L.dim):
        for a in range(A.dim):
            s = koszul(L.parities[x], A.parities[a])
            lhs = rep.phi[x] @ rep.a_action[a] % p
            rhs = (s * rep.a_action[a] @ rep.phi[x] + rep.mult(data.anchor[x][:, a])) % p
            if not np.array_equal(lhs, rhs):
                bad = np.argwhere((lhs - rhs) % p)[0][1]
                wit = wit or f"({L.names[x]}, {A.names[a]}, {rep.names[bad]})"
    out.add("leibniz", "RLRsupermodule-1", wit is None, wit)
    return out


def check_representation(data: LRData, rep: Representation, samples: int = 200,
                         seed: int = DEFAULT_SEED) -> Report:
    """The three displayed module identities plus restrictedness of phi."""
    A, L, p = data.A, data.L, data.p
    out = check_lr_module(data, rep)
    out.suite = "restricted-representation"
    out.seed = seed
    if rep.dim == 0:
        return out
    wit = None
    for j in L.even:
        if not np.array_equal(matpow(rep.phi[j], p, p), rep.of(pmap_eval(L, L.basis(j)))):
            wit = wit or L.names[j]
    out.add("phi-restricted", "restricted morphism", wit is None, wit)
    lam = lambda_vector(p).residues()

    def eq2(a, x):
        Pax = rep.of(data.act(a, x))
        lhs = matpow(Pax, p - 1, p) @ rep.mult(a)
        rhs = rep.mult(A.power(a, p)) @ matpow(rep.of(x), p - 1, p) + rep.mult(_rho_power_on(data, data.act(a, x), p - 1, a))
        return (lhs - rhs) % p

    def eq3(a, x):
        ax = data.act(a, x)
        R = data.rho(ax)
        powers = [a % p]
        for _ in range(2 * p - 1):
            powers.append(R @ powers[-1] % p)
        lhs = matpow(rep.of(ax), 2 * p - 1, p) @ rep.mult(a)
        rhs = rep.mult(A.power(a, 2 * p)) @ matpow(rep.of(x), 2 * p - 1, p) + rep.mult(powers[2 * p - 1])
        for i, li in enumerate(lam):
            rhs = rhs + li * rep.mult(A.mul(powers[i], powers[2 * p - 2 - i])) @ rep.of(x)
        return (lhs - rhs) % p

    for name, fn, px in (("RLRsupermodule-2", eq2, 0), ("RLRsupermodule-3", eq3, 1)):
        if not A.even or not (L.even if px == 0 else L.odd):
            out.skip(name, name, "empty parity component", _case(0, px))
            continue
        wit = None
        for kind, a, x in _pairs(data, 0, px, samples, seed):
            D = fn(a, x)
            if np.any(D):
                v = np.argwhere(D)[0][1]
                wit = f"{kind} a={A.format(a)}, x={L.format(x)}, v={rep.names[v]}"
                break
        out.add(name, name, wit is None, wit, _case(0, px))
    return out


def operator_defect(data: LRData, rep: Representation, a, x, lam: Sequence[int] | None = None) -> np.ndarray:
    """LHS - RHS of the Hochschild operator identity for the parities of (a, x)."""
    A, L, p = data.A, data.L, data.p
    pa, px = A.parity_of(a), L.parity_of(x)
    ax = data.act(a, x)
    Pax, Px = rep.of(ax), rep.of(x)
    if pa == 0 and px == 0:
        lhs = matpow(Pax, p, p)
        rhs = rep.mult(A.power(a, p)) @ matpow(Px, p, p) + rep.mult(_rho_power_on(data, ax, p - 1, a)) @ Px
    elif pa == 0 and px == 1:
        lam = lam if lam is not None else lambda_vector(p).residues()
        R = data.rho(ax)
        powers = [a % p]
        for _ in range(2 * p - 1):
            powers.append(R @ powers[-1] % p)
        lhs = matpow(Pax, 2 * p, p)
        rhs = rep.mult(A.power(a, 2 * p)) @ matpow(Px, 2 * p, p) + rep.mult(powers[2 * p - 1]) @ Px
        P2 = Px @ Px % p
        for i, li in enumerate(lam):
            rhs = rhs + li * rep.mult(A.mul(powers[i], powers[2 * p - 2 - i])) @ P2
    elif pa == 1 and px == 0:
        lhs = matpow(Pax, 2 * p, p)
        rhs = np.zeros_like(lhs)
    else:
        lhs = matpow(Pax, p, p)
        ra = data.rho(x) @ a % p
        rhs = rep.mult(A.mul(a, A.power(ra, p - 1))) @ Px
    return (lhs - rhs) % p


def check_hochschild_theorem(data: LRData, rep: Representation, samples: int = 200,
                             seed: int = DEFAULT_SEED) -> Report:
    A, L = data.A, data.L
    out = Report("super-hochschild", seed=seed)
    mod = check_lr_module(data, rep)
    out.extend(mod, "module:")
    lam = lambda_vector(data.p).residues()
    for pa in (0, 1):
        for px in (0, 1):
            case = _case(pa, px)
            anchor = f"super-hochschild-{case}"
            if not (A.even if pa == 0 else A.odd) or not (L.even if px == 0 else L.odd):
                out.skip(f"operator[{case}]", anchor, "empty parity component", case)
                continue
            wit = None
            for kind, a, x in _pairs(data, pa, px, samples, seed):
                if np.any(operator_defect(data, rep, a, x, lam)):
                    wit = f"{kind} a={A.format(a)}, x={L.format(x)}"
                    break
            out.add(f"operator[{case}]", anchor, wit is None, wit, case)
    return out


def printed_p3_expansions(data: LRData, rep: Representation, a, D) -> dict[str, bool]:
    """The p = 3 operator displays for a = aD with even a and odd D, and
    for odd a, odd D."""
    A, p = data.A, data.p
    if p != 3:
        raise ValueError("the printed expansions are for p = 3")
    pa = A.parity_of(a)
    aD = data.act(a, D)
    R = data.rho(aD)
    Dm = rep.of(D)
    la = rep.mult

    def rp(k):
        return matpow(R, k, p) @ a % p

    def Dk(k):
        return matpow(data.rho(D), k, p) @ a % p

    P6 = matpow(rep.of(aD), 6, p)
    out = {}
    if pa == 0:
        D2 = Dm @ Dm % p
        first = (la(A.power(a, 6)) @ matpow(Dm, 6, p) + la(rp(5)) @ Dm
                 + 2 * la(A.mul(A.power(a, 4), A.mul(Dk(3), Dk(1)))) @ D2
                 + 2 * la(A.mul(A.power(a, 5), Dk(4))) @ D2) % p
        second = (la(A.power(a, 6)) @ matpow(Dm, 6, p) + la(rp(5)) @ Dm
                  + 2 * la(A.mul(a, rp(4))) @ D2
                  + 2 * la(A.mul(rp(1), rp(3))) @ D2
                  + 2 * la(A.mul(rp(2), rp(2))) @ D2) % p
        out["direct"] = bool(np.array_equal(P6, first))
        out["lambda"] = bool(np.array_equal(P6, second))
    else:
        P3 = matpow(rep.of(aD), 3, p)
        rhs = la(A.mul(a, A.power(Dk(1), 2))) @ Dm % p
        out["odd/odd"] = bool(np.array_equal(P3, rhs))
    return out


# -- semidirect product --------------------------------------------------------

@dataclass
class SemidirectResult:
    L: LieSuperalgebra
    center: np.ndarray
    data: LRData
    report: Report
    n_L: int

    @property
    def center_trivial(self) -> bool:
        return len(self.center) == 0


def semidirect_lie(L: LieSuperalgebra, rep: Representation) -> LieSuperalgebra:
    """L + V with [x+v, y+w] = [x,y] + phi(x)w - (-1)^{|y||v|} phi(y)v.

    Basis order keeps even elements first: L_even, V_even, L_odd, V_odd.
    """
    p = L.p
    nL, nV = L.dim, rep.dim
    order = ([("L", i) for i in L.even] + [("V", i) for i in range(nV) if rep.parities[i] == 0]
             + [("L", i) for i in L.odd] + [("V", i) for i in range(nV) if rep.parities[i] == 1])
    pos = {key: t for t, key in enumerate(order)}
    names = [L.names[i] if s == "L" else rep.names[i] for s, i in order]
    pars = [L.parities[i] if s == "L" else rep.parities[i] for s, i in order]
    n = nL + nV
    T = np.zeros((n, n, n), dtype=np.int64)
    for (s1, i), t1 in pos.items():
        for (s2, j), t2 in pos.items():
            if s1 == "L" and s2 == "L":
                for k in range(nL):
                    T[t1, t2, pos[("L", k)]] += L.table[i, j, k]
            elif s1 == "L" and s2 == "V":
                for k in range(nV):
                    T[t1, t2, pos[("V", k)]] += rep.phi[i][k, j]
            elif s1 == "V" and s2 == "L":
                s = koszul(L.parities[j], rep.parities[i])
                for k in range(nV):
                    T[t1, t2, pos[("V", k)]] -= s * rep.phi[j][k, i]
    return LieSuperalgebra(p, names, pars, T % p)


def build_semidirect(data: LRData, rep: Representation, samples: int = 200,
                     seed: int = DEFAULT_SEED, strict: bool = False) -> SemidirectResult:
    """(A, L x| V, rho~) with the p-map assembled from e^[p] and v^[p] = 0."""
    A, L, p = data.A, data.L, data.p
    S = semidirect_lie(L, rep)
    idx = {n: t for t, n in enumerate(S.names)}
    embL = np.zeros((S.dim, L.dim), dtype=np.int64)
    for i, n in enumerate(L.names):
        embL[idx[n], i] = 1
    embV = np.zeros((S.dim, rep.dim), dtype=np.int64)
    for i, n in enumerate(rep.names):
        embV[idx[n], i] = 1
    report = Report("semidirect", seed=seed)

    # bracket against the defining formula
    wit = None
    for x in range(L.dim):
        for w in range(rep.dim):
            got = S.bracket(embL[:, x], embV[:, w])
            want = embV @ rep.phi[x][:, w] % p
            if not np.array_equal(got, want):
                wit = wit or f"({L.names[x]}, {rep.names[w]})"
    report.add("bracket", "semidirectbracket", wit is None, wit)

    images = {}
    for t in S.even:
        col = np.nonzero(embL[t])[0]
        if col.size:
            images[t] = embL @ pmap_eval(L, L.basis(int(col[0]))) % p
        else:
            images[t] = S.zero()
    center = S.center()
    S.pmap = PMap(p, images, center)
    rep_lie = check_restricted(S, samples=samples, seed=seed)
    report.extend(rep_lie, "pmap:")

    # basis display (e_i + v_j)^[p] = e_i^[p] + phi(e_i)^{p-1}(v_j)
    wit = None
    v_even = [j for j in range(rep.dim) if rep.parities[j] == 0]
    for i in L.even:
        for j in v_even:
            z = (embL[:, i] + embV[:, j]) % p
            got = pmap_eval(S, z)
            want = (embL @ pmap_eval(L, L.basis(i)) + embV @ (matpow(rep.phi[i], p - 1, p)[:, j])) % p
            if not np.array_equal(got, want):
                wit = wit or f"({L.names[i]}, {rep.names[j]})"
    if v_even and L.even:
        report.add("basis-pmap", "rest-semi-direct-Lie", wit is None, wit)
    else:
        report.skip("basis-pmap", "rest-semi-direct-Lie", "no even pairs")

    # A-action and anchor on the product
    nS = S.dim
    action = np.zeros((A.dim, nS, nS), dtype=np.int64)
    anchor = np.zeros((nS, A.dim, A.dim), dtype=np.int64)
    for a in range(A.dim):
        action[a] = (embL @ data.action[a] @ embL.T + embV @ rep.a_action[a] @ embV.T) % p
    for x in range(L.dim):
        anchor[idx[L.names[x]]] = data.anchor[x]
    new = LRData(A, S, action, anchor, f"{data.name} x| V")

    wit = None
    for t in range(nS):
        col = np.nonzero(embL[t])[0]
        want = data.anchor[int(col[0])] if col.size else np.zeros((A.dim, A.dim), dtype=np.int64)
        if not np.array_equal(new.anchor[t], want):
            wit = wit or S.names[t]
    report.add("anchor-extension", "thm:semi-direct", wit is None, wit)

    result = SemidirectResult(S, center, new, report, L.dim)
    if result.center_trivial:
        report.extend(check_lr(new), "lr:")
        report.extend(check_restricted_lr(new, samples=samples, seed=seed, include_lie=False), "rlr:")
    else:
        report.skip("restricted-lr", "thm:semi-direct", "not applicable: center nontrivial")
        if strict:
            raise CenterNontrivial(result)
    return result


def semidirect_lemma1(L: LieSuperalgebra, rep: Representation, x, y, n: int) -> bool:
    """phi(ad_x^n y) = sum_k (-1)^k C(n,k) phi(x)^{n-k} phi(y) phi(x)^k, x even."""
    p = L.p
    v = np.asarray(y, dtype=np.int64) % p
    for _ in range(n):
        v = L.bracket(x, v)
    lhs = rep.of(v)
    X, Y = rep.of(x), rep.of(y)
    rhs = np.zeros_like(lhs)
    from math import comb
    for k in range(n + 1):
        rhs = rhs + (-1) ** k * comb(n, k) * matpow(X, n - k, p) @ Y @ matpow(X, k, p)
    return bool(np.array_equal(lhs % p, rhs % p))


def semidirect_lemma2(L: LieSuperalgebra, rep: Representation, x, v, y, w, n: int) -> bool:
    """ad~^n_{x+v}(y+w) = ad_x^n y + phi(x)^n w + sum_{k>=1} (-1)^k C(n,k) phi(x)^{n-k} phi(y) phi(x)^{k-1} v."""
    from math import comb
    p = L.p
    S = semidirect_lie(L, rep)
    idx = {nm: t for t, nm in enumerate(S.names)}
    def emb(u, names):
        z = S.zero()
        for i, c in enumerate(np.asarray(u) % p):
            z[idx[names[i]]] = c
        return z
    z = (emb(y, L.names) + emb(w, rep.names)) % p
    g = (emb(x, L.names) + emb(v, rep.names)) % p
    for _ in range(n):
        z = S.bracket(g, z)
    ly = np.asarray(y, dtype=np.int64) % p
    for _ in range(n):
        ly = L.bracket(x, ly)
    X, Y = rep.of(x), rep.of(y)
    vw = matpow(X, n, p) @ np.asarray(w, dtype=np.int64)
    for k in range(1, n + 1):
        vw = vw + (-1) ** k * comb(n, k) * (matpow(X, n - k, p) @ Y @ matpow(X, k - 1, p) @ np.asarray(v, dtype=np.int64))
    want = (emb(ly, L.names) + emb(vw % p, rep.names)) % p
    return bool(np.array_equal(z, want))


def semidirect_lemma2_p(L: LieSuperalgebra, rep: Representation, x, v, y, w) -> bool:
    """The n = p form: ad_x^p y + phi(x)^p w - phi(y) phi(x)^{p-1} v."""
    p = L.p
    S = semidirect_lie(L, rep)
    idx = {nm: t for t, nm in enumerate(S.names)}
    def emb(u, names):
        z = S.zero()
        for i, c in enumerate(np.asarray(u) % p):
            z[idx[names[i]]] = c
        return z
    g = (emb(x, L.names) + emb(v, rep.names)) % p
    z = (emb(y, L.names) + emb(w, rep.names)) % p
    for _ in range(p):
        z = S.bracket(g, z)
    ly = np.asarray(y, dtype=np.int64) % p
    for _ in range(p):
        ly = L.bracket(x, ly)
    X, Y = rep.of(x), rep.of(y)
    vw = matpow(X, p, p) @ np.asarray(w, dtype=np.int64) - Y @ matpow(X, p - 1, p) @ np.asarray(v, dtype=np.int64)
    return bool(np.array_equal(z, (emb(ly, L.names) + emb(vw % p, rep.names)) % p))


# -- gl(m|n) and its natural module, for the lemma checks ------------------------

def general_linear(m: int, n: int, p: int) -> tuple[LieSuperalgebra, Representation]:
    """gl(m|n) with the p-map X -> X^p and its natural module F^{m|n}."""
    d = m + n
    vpar = [0] * m + [1] * n
    units = []
    for i in range(d):
        for j in range(d):
            units.append(((vpar[i] + vpar[j]) % 2, i, j))
    units.sort(key=lambda t: t[0])
    mats = []
    for _, i, j in units:
        E = np.zeros((d, d), dtype=np.int64)
        E[i, j] = 1
        mats.append(E)
    pars = [u[0] for u in units]
    names = [f"E{i + 1}{j + 1}" for _, i, j in units]
    flat = np.array([M.reshape(-1) for M in mats])
    coords = alg.Coordinates(mats, p)
    N = len(mats)
    T = np.zeros((N, N, N), dtype=np.int64)
    for a in range(N):
        for b in range(N):
            C = mats[a] @ mats[b] - koszul(pars[a], pars[b]) * mats[b] @ mats[a]
            T[a, b] = coords(C % p)
    L = LieSuperalgebra(p, names, pars, T)
    stack = np.array(mats)

    def evaluator(x):
        X = np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), stack) % p
        return coords(matpow(X, p, p))

    L.pmap = PMap(p, {j: evaluator(L.basis(j)) for j in L.even}, L.center(), evaluator)
    V = Representation([f"u{i + 1}" for i in range(d)], vpar, np.zeros((1, d, d), dtype=np.int64), stack, p)
    return L, V


# -- built-in examples -------------------------------------------------------------

@dataclass
class Bundle:
    data: LRData
    rep: Representation | None = None
    params: dict = field(default_factory=dict)
    frame: dict | None = None  # A-basis of L when L is A-free


def _anchor_module(data: LRData, keep: Sequence[str] | None = None) -> Representation:
    """A (or a rho-stable ideal spanned by ``keep``) as a module via rho."""
    A, p = data.A, data.p
    idx = list(range(A.dim)) if keep is None else [A.index(n) for n in keep]
    P = np.zeros((A.dim, len(idx)), dtype=np.int64)
    for t, i in enumerate(idx):
        P[i, t] = 1
    def restrict(M):
        R = M @ P % p
        outside = [i for i in range(A.dim) if i not in idx]
        if np.any(R[outside]):
            raise StructureViolation("span is not stable")
        return R[idx]
    a_act = np.array([restrict(A.left(A.basis(a))) for a in range(A.dim)])
    phi = np.array([restrict(data.anchor[x]) for x in range(data.L.dim)])
    return Representation([A.names[i] for i in idx], A.parities[idx], a_act, phi, p)


def derivations_bundle(A: SuperAlgebra, maps=None, names=None, name: str = "derivations") -> Bundle:
    """(A, Der(A), id) with D^[p] = D^p and the module (id, A)."""
    p = A.p
    D = derivation_algebra(A, maps, names)
    L = D.L
    action = np.zeros((A.dim, L.dim, L.dim), dtype=np.int64)
    for a in range(A.dim):
        La = A.left(A.basis(a))
        for j in range(L.dim):
            action[a][:, j] = D.element(La @ D.matrices[j] % p)
    anchor = np.array(D.matrices)
    data = LRData(A, L, action, anchor, name)
    return Bundle(data, _anchor_module(data), {})


def _grassmann_frame(data: LRData, n: int) -> dict:
    """Coordinates of each basis element of W(n) over the A-basis d/dxi_i."""
    A = data.A
    gens = [A.index(f"xi{i}") for i in range(1, n + 1)]
    coeff = {}
    for x in range(data.L.dim):
        coeff[x] = [data.anchor[x][:, g] for g in gens]
    dvec = [None] * n
    # d_i is fixed by d_i(xi_j) = delta_ij
    mats = data.anchor
    flat = np.array([mats[x][:, gens].reshape(-1) for x in range(data.L.dim)]).T
    from .linalg import solve
    for i in range(n):
        target = np.zeros((A.dim, n), dtype=np.int64)
        target[A.index("1"), i] = 1
        sol = solve(flat, target.reshape(-1), data.p)
        if sol is None:
            raise StructureViolation("W(n) frame not found")
        dvec[i] = sol % data.p
    return {"d": dvec, "coeff": coeff, "gens": gens}


def builtin(name: str, p: int = 3, params: dict | None = None) -> Bundle:
    """Built-in bundles: derivations, witt, example-2-1, example-2-2."""
    params = dict(params or {})
    if name in ("derivations", "derivations(A)"):
        n = int(params.get("n", 2))
        A = build_grassmann(n, p)
        b = derivations_bundle(A, name=f"derivations(Lambda({n}))")
        b.params = {"n": n}
        b.frame = _grassmann_frame(b.data, n)
        return b
    if name.startswith("witt"):
        n = int(params.get("n", name[5:-1] if name.startswith("witt(") else 2))
        A = build_grassmann(n, p)
        maps = witt_basis(A, n)
        maps = sorted(maps, key=lambda D: D.parity)
        b = derivations_bundle(A, maps, [D.name for D in maps], name=f"witt({n})")
        b.params = {"n": n}
        b.frame = _grassmann_frame(b.data, n)
        return b
    if name == "example-2-1":
        al, be, ga = (int(params.get(k, d)) % p for k, d in (("alpha", 0), ("beta", 1), ("gamma", 0)))
        A = _one_one(p)
        T = np.zeros((3, 3, 3), dtype=np.int64)
        T[0, 2, 2], T[2, 0, 2] = 1, -1
        T[1, 2, 2], T[2, 1, 2] = -1, 1
        L = LieSuperalgebra(p, ["x1", "x2", "x3"], [0, 0, 1], T)
        images = {0: np.array([1 + al, al, 0]) % p, 1: np.array([-1 + al, al, 0]) % p}
        L.pmap = PMap(p, images, L.center())
        action = np.zeros((2, 3, 3), dtype=np.int64)
        action[0] = np.eye(3, dtype=np.int64)
        action[1][2, 0] = be
        action[1][2, 1] = ga
        anchor = np.zeros((3, 2, 2), dtype=np.int64)
        anchor[0][1, 1] = 1
        anchor[1][1, 1] = -1
        data = LRData(A, L, action, anchor, "example-2-1")
        return Bundle(data, _anchor_module(data), {"alpha": al, "beta": be, "gamma": ga})
    if name == "example-2-2":
        al, be = (int(params.get(k, d)) % p for k, d in (("alpha", 1), ("beta", 0)))
        A = _one_one(p)
        T = np.zeros((4, 4, 4), dtype=np.int64)
        for i, j, k in ((0, 2, 2), (0, 3, 3), (1, 3, 2)):
            T[i, j, k] = 1
            T[j, i, k] = -1
        L = LieSuperalgebra(p, ["x1", "x2", "x3", "x4"], [0, 0, 1, 1], T)
        L.pmap = PMap(p, {0: np.array([1, 0, 0, 0]), 1: np.zeros(4, dtype=np.int64)}, L.center())
        action = np.zeros((2, 4, 4), dtype=np.int64)
        action[0] = np.eye(4, dtype=np.int64)
        action[1][2, 0] = al
        action[1][2, 1] = be
        anchor = np.zeros((4, 2, 2), dtype=np.int64)
        anchor[0][1, 1] = 1
        data = LRData(A, L, action, anchor, "example-2-2")
        return Bundle(data, _anchor_module(data), {"alpha": al, "beta": be})
    raise UnknownExample(name)


def _one_one(p: int) -> SuperAlgebra:
    """The 1|1 algebra with unit e1 and e2 e2 = 0."""
    T = np.zeros((2, 2, 2), dtype=np.int64)
    T[0, 0, 0] = T[0, 1, 1] = T[1, 0, 1] = 1
    return SuperAlgebra(p, ["e1", "e2"], [0, 1], T, unit=0)


def ideal_module(data: LRData, keep: Sequence[str]) -> Representation:
    return _anchor_module(data, keep)


def check_lr_morphism(src: LRData, dst: LRData, phi, psi) -> Report:
    """(phi, psi) with phi: A -> B an algebra map and psi: L -> H a Lie map."""
    phi = modp(phi, src.p)
    psi = modp(psi, src.p)
    A, L, B, H, p = src.A, src.L, dst.A, dst.L, src.p
    if phi.shape != (B.dim, A.dim) or psi.shape != (H.dim, L.dim):
        raise PreconditionViolated("dimension mismatch")
    if alg._map_parity(phi, A.parities, B.parities) not in (0,) and np.any(phi):
        raise PreconditionViolated("phi is not even")
    if alg._map_parity(psi, L.parities, H.parities) not in (0,) and np.any(psi):
        raise PreconditionViolated("psi is not even")
    rep = Report("lr-morphism")
    wit = None
    for a in range(A.dim):
        for b in range(A.dim):
            if not np.array_equal(phi @ A.mul(A.basis(a), A.basis(b)) % p, B.mul(phi[:, a], phi[:, b])):
                wit = wit or f"({A.names[a]}, {A.names[b]})"
    rep.add("phi-multiplicative", "morphism of superalgebras", wit is None, wit)
    if A.unit is not None and B.unit is not None:
        ok = np.array_equal(phi[:, A.unit], B.one())
        rep.add("phi-unit", "morphism of superalgebras", ok, None if ok else A.names[A.unit])
    wit = None
    for x in range(L.dim):
        for y in range(L.dim):
            if not np.array_equal(psi @ L.bracket(L.basis(x), L.basis(y)) % p, H.bracket(psi[:, x], psi[:, y])):
                wit = wit or f"({L.names[x]}, {L.names[y]})"
    rep.add("psi-bracket", "morphism of Lie superalgebras", wit is None, wit)
    wit = None
    for x in range(L.dim):
        for a in range(A.dim):
            lhs = phi @ (src.anchor[x][:, a]) % p
            rhs = dst.rho(psi[:, x]) @ phi[:, a] % p
            if not np.array_equal(lhs, rhs):
                wit = wit or f"({L.names[x]}, {A.names[a]})"
    rep.add("anchor-compatible", "morph-sLR", wit is None, wit)
    return rep


# -- JSON -------------------------------------------------------------------------

def bundle_to_json(data: LRData, rep: Representation | None = None) -> dict:
    A, L = data.A, data.L
    out = {
        "p": data.p,
        "name": data.name,
        "A": alg.algebra_to_json(A),
        "L": alg.lie_to_json(L),
        "action": _triple_json(A.names, L.names, L.names, data.action, lambda a, x, y: data.action[a][y, x]),
        "anchor": _triple_json(L.names, A.names, A.names, data.anchor, lambda x, a, b: data.anchor[x][b, a]),
    }
    if rep is not None:
        out["module"] = {
            "basis": [{"name": n, "parity": int(q)} for n, q in zip(rep.names, rep.parities)],
            "action": _triple_json(A.names, rep.names, rep.names, None, lambda a, m, k: rep.a_action[a][k, m]),
            "phi": _triple_json(L.names, rep.names, rep.names, None, lambda x, m, k: rep.phi[x][k, m]),
        }
    return out


def _triple_json(n1, n2, n3, _unused, get) -> list:
    out = []
    for i in range(len(n1)):
        for j in range(len(n2)):
            terms = [[n3[k], int(get(i, j, k))] for k in range(len(n3)) if get(i, j, k)]
            if terms:
                out.append([n1[i], n2[j], terms])
    return out


def _triple_from_json(entries, n1, n2, n3, p) -> np.ndarray:
    """entries [i, j, [(k, c)]] -> array M[i][k, j]."""
    M = np.zeros((len(n1), len(n3), len(n2)), dtype=np.int64)
    for i, j, terms in entries:
        for k, c in terms:
            M[n1.index(i), n3.index(k), n2.index(j)] += int(c)
    return M % p


def bundle_from_json(obj: dict) -> tuple[LRData, Representation | None]:
    A = alg.algebra_from_json(obj["A"])
    L = alg.lie_from_json(obj["L"])
    p = A.p
    action = _triple_from_json(obj.get("action", []), A.names, L.names, L.names, p)
    anchor = _triple_from_json(obj.get("anchor", []), L.names, A.names, A.names, p)
    data = LRData(A, L, action, anchor, obj.get("name", ""))
    rep = None
    if "module" in obj:
        m = obj["module"]
        names = [b["name"] for b in m["basis"]]
        pars = [int(b["parity"]) for b in m["basis"]]
        a_act = _triple_from_json(m.get("action", []), A.names, names, names, p)
        phi = _triple_from_json(m.get("phi", []), L.names, names, names, p)
        rep = Representation(names, pars, a_act, phi, p)
    return data, rep
