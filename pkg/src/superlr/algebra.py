"""Finite-dimensional superalgebras over F_p given by structure constants.

Elements are numpy int64 coordinate vectors reduced mod p.  A structure
tensor ``c[i, j, k]`` means e_i * e_j = sum_k c[i, j, k] e_k.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .linalg import matpow, modp, nullspace, rank, rref, solve
from .report import Report
from .scalar import check_prime


class StructureViolation(ValueError):
    """Structure constants fail a requested axiom; the message names a witness."""


class NotRestrictable(ValueError):
    pass


class ParityError(ValueError):
    pass


def _vec_parity(v: np.ndarray, parities: np.ndarray) -> int | None:
    nz = np.nonzero(v)[0]
    if nz.size == 0:
        return 0
    ps = set(int(parities[i]) for i in nz)
    return ps.pop() if len(ps) == 1 else None


def _map_parity(M: np.ndarray, src: np.ndarray, dst: np.ndarray) -> int | None:
    """Parity of a linear map between graded spaces, None if inhomogeneous."""
    rows, cols = np.nonzero(M)
    if rows.size == 0:
        return 0
    ps = set(int((dst[r] + src[c]) % 2) for r, c in zip(rows, cols))
    return ps.pop() if len(ps) == 1 else None


def koszul(a: int, b: int) -> int:
    return -1 if (a and b) else 1


@dataclass
class GradedLinearMap:
    matrix: np.ndarray
    parity: int
    name: str = ""


class _Graded:
    p: int
    names: list[str]
    parities: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def even(self) -> list[int]:
        return [i for i, q in enumerate(self.parities) if q == 0]

    @property
    def odd(self) -> list[int]:
        return [i for i, q in enumerate(self.parities) if q == 1]

    @property
    def sdim(self) -> tuple[int, int]:
        return len(self.even), len(self.odd)

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=np.int64)

    def basis(self, i: int | str) -> np.ndarray:
        if isinstance(i, str):
            i = self.index(i)
        v = self.zero()
        v[i] = 1
        return v

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown basis element {name!r}") from None

    def parity_of(self, v) -> int | None:
        return _vec_parity(np.asarray(v) % self.p, self.parities)

    def map_parity(self, M) -> int | None:
        return _map_parity(np.asarray(M) % self.p, self.parities, self.parities)

    def random_homogeneous(self, rng: np.random.Generator, parity: int) -> np.ndarray:
        v = self.zero()
        idx = self.even if parity == 0 else self.odd
        if idx:
            v[idx] = rng.integers(0, self.p, size=len(idx))
        return v

    def format(self, v) -> str:
        v = np.asarray(v) % self.p
        parts = [f"{int(c)}*{self.names[i]}" if c != 1 else self.names[i] for i, c in enumerate(v) if c]
        return " + ".join(parts) or "0"


@dataclass
class SuperAlgebra(_Graded):
    """Associative superalgebra; supercommutativity and associativity are
    verified on basis pairs and triples when requested."""

    p: int
    names: list[str]
    parities: np.ndarray
    table: np.ndarray
    unit: int | None = None
    associative: bool = True
    supercommutative: bool = True

    def __post_init__(self):
        check_prime(self.p)
        self.parities = np.asarray(self.parities, dtype=np.int64) % 2
        self.table = modp(self.table, self.p)
        n = self.dim
        if self.table.shape != (n, n, n):
            raise StructureViolation(f"structure tensor has shape {self.table.shape}, expected {(n, n, n)}")
        self.validate()

    def validate(self):
        par = self.parities
        i, j, k = np.nonzero(self.table)
        for a, b, c in zip(i, j, k):
            if (par[a] + par[b]) % 2 != par[c]:
                raise StructureViolation(f"{self.names[a]}*{self.names[b]} has a component on {self.names[c]} of the wrong parity")
        if self.unit is not None:
            u = self.unit
            eye = np.eye(self.dim, dtype=np.int64)
            if not (np.array_equal(self.table[u], eye) and np.array_equal(self.table[:, u, :], eye)):
                raise StructureViolation(f"{self.names[u]} is not a two-sided unit")
        if self.associative:
            T = self.table
            left = np.einsum("ijl,lkm->ijkm", T, T) % self.p
            right = np.einsum("jkl,ilm->ijkm", T, T) % self.p
            bad = np.argwhere(left != right)
            if bad.size:
                a, b, c, _ = bad[0]
                raise StructureViolation(f"associator nonzero at ({self.names[a]}, {self.names[b]}, {self.names[c]})")
        if self.supercommutative:
            sign = np.where(np.outer(par, par) == 1, -1, 1)
            swapped = np.transpose(self.table, (1, 0, 2)) * sign[:, :, None]
            bad = np.argwhere((self.table - swapped) % self.p != 0)
            if bad.size:
                a, b, _ = bad[0]
                raise StructureViolation(f"{self.names[a]}*{self.names[b]} is not supercommutative")

    def one(self) -> np.ndarray:
        if self.unit is None:
            raise StructureViolation("algebra has no unit")
        return self.basis(self.unit)

    def mul(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), self.table) % self.p

    def left(self, u) -> np.ndarray:
        """Matrix of v -> u*v."""
        return np.einsum("i,ijk->kj", np.asarray(u, dtype=np.int64), self.table) % self.p

    def power(self, u, n: int) -> np.ndarray:
        out = self.one()
        for _ in range(n):
            out = self.mul(out, u)
        return out

    def is_derivation(self, D, parity: int) -> bool:
        return not derivation_defects(self, D, parity)


def build_grassmann(n: int, p: int = 3) -> SuperAlgebra:
    """Lambda(n) on subsets of {1..n} ordered by size then lexicographically."""
    if not 1 <= n <= 6:
        raise ValueError("Grassmann rank must lie in 1..6")
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    pos = {s: i for i, s in enumerate(subsets)}
    dim = len(subsets)
    T = np.zeros((dim, dim, dim), dtype=np.int64)
    for S in subsets:
        for U in subsets:
            if set(S) & set(U):
                continue
            inversions = sum(1 for s in S for u in U if s > u)
            T[pos[S], pos[U], pos[tuple(sorted(S + U))]] = (-1) ** inversions
    names = ["1" if not S else "*".join(f"xi{i}" for i in S) for S in subsets]
    parities = [len(S) % 2 for S in subsets]
    return SuperAlgebra(p, names, parities, T, unit=0)


def derivation_defects(A: SuperAlgebra, D, parity: int) -> list[tuple[int, int]]:
    """Basis pairs (i, j) where D(e_i e_j) != D(e_i) e_j + (-1)^{|D||i|} e_i D(e_j)."""
    D = modp(D, A.p)
    out = []
    for i in range(A.dim):
        for j in range(A.dim):
            ei, ej = A.basis(i), A.basis(j)
            lhs = D @ A.mul(ei, ej) % A.p
            rhs = (A.mul(D[:, i], ej) + koszul(parity, A.parities[i]) * A.mul(ei, D[:, j])) % A.p
            if not np.array_equal(lhs, rhs):
                out.append((i, j))
    return out


def derivation_space(A: SuperAlgebra) -> list[GradedLinearMap]:
    """Basis of Der(A), even derivations first, from the graded Leibniz system."""
    n, p, T = A.dim, A.p, A.table
    out: list[GradedLinearMap] = []
    for parity in (0, 1):
        # unknowns D[a, b] with |a| = |b| + parity
        var = [(a, b) for a in range(n) for b in range(n) if (A.parities[a] - A.parities[b] - parity) % 2 == 0]
        col = {ab: t for t, ab in enumerate(var)}
        rows = []
        for i in range(n):
            s = koszul(parity, A.parities[i])
            for j in range(n):
                for k in range(n):
                    row = np.zeros(len(var), dtype=np.int64)
                    # D(e_i e_j)_k = sum_l c[i,j,l] D[k,l]
                    for l in np.nonzero(T[i, j])[0]:
                        if (k, l) in col:
                            row[col[(k, l)]] += T[i, j, l]
                    # - (D e_i) e_j: sum_l D[l,i] c[l,j,k]
                    for l in np.nonzero(T[:, j, k])[0]:
                        if (l, i) in col:
                            row[col[(l, i)]] -= T[l, j, k]
                    # - s e_i (D e_j): sum_l D[l,j] c[i,l,k]
                    for l in np.nonzero(T[i, :, k])[0]:
                        if (l, j) in col:
                            row[col[(l, j)]] -= s * T[i, l, k]
                    if np.any(row % p):
                        rows.append(row)
        M = np.array(rows, dtype=np.int64).reshape(-1, len(var))
        for vec in nullspace(M, p):
            D = np.zeros((n, n), dtype=np.int64)
            for t, (a, b) in enumerate(var):
                D[a, b] = vec[t]
            out.append(GradedLinearMap(D, parity))
    return out


class Coordinates:
    """Coordinates with respect to a fixed list of linearly independent vectors."""

    def __init__(self, vectors: Sequence[np.ndarray], p: int):
        self.p = p
        B = np.array([np.asarray(v).reshape(-1) for v in vectors], dtype=np.int64) % p
        self.B = B
        d = B.shape[0]
        if d and rank(B, p) != d:
            raise ValueError("vectors are linearly dependent")
        _, piv = rref(B, p) if d else (None, [])
        # choose d coordinates on which B restricted is invertible
        Bt = B.T
        _, rows = rref(Bt.T, p) if d else (None, [])
        self.cols = rows
        S = B[:, rows] if d else np.zeros((0, 0), dtype=np.int64)
        aug = np.hstack([S.T, np.eye(d, dtype=np.int64)]) if d else S
        R, _ = rref(aug, p) if d else (S, [])
        self.inv = R[:, d:] if d else S

    def __call__(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=np.int64).reshape(-1) % self.p
        if self.B.shape[0] == 0:
            if np.any(v):
                raise ValueError("vector outside the span")
            return np.zeros(0, dtype=np.int64)
        c = self.inv @ v[self.cols] % self.p
        if not np.array_equal(c @ self.B % self.p, v):
            raise ValueError("vector outside the span")
        return c


# -- Lie superalgebras ---------------------------------------------------------

@dataclass
class PMap:
    """p-map data: images of the even basis, the center basis (the freedom
    left by Jacobson's theorem) and an optional direct evaluator."""

    p: int
    images: dict[int, np.ndarray]
    center: np.ndarray | None = None
    evaluator: Callable[[np.ndarray], np.ndarray] | None = None


@dataclass
class LieSuperalgebra(_Graded):
    p: int
    names: list[str]
    parities: np.ndarray
    table: np.ndarray
    pmap: PMap | None = None
    validate_on_init: bool = True

    def __post_init__(self):
        check_prime(self.p)
        self.parities = np.asarray(self.parities, dtype=np.int64) % 2
        self.table = modp(self.table, self.p)
        n = self.dim
        if self.table.shape != (n, n, n):
            raise StructureViolation(f"bracket tensor has shape {self.table.shape}, expected {(n, n, n)}")
        if self.validate_on_init:
            bad = self.axiom_failures()
            if bad:
                raise StructureViolation(bad[0])

    def axiom_failures(self) -> list[str]:
        p, par, T, nm = self.p, self.parities, self.table, self.names
        out = []
        i, j, k = np.nonzero(T)
        for a, b, c in zip(i, j, k):
            if (par[a] + par[b]) % 2 != par[c]:
                out.append(f"[{nm[a]},{nm[b]}] has a component on {nm[c]} of the wrong parity")
        sign = np.where(np.outer(par, par) == 1, -1, 1)
        skew = (T + np.transpose(T, (1, 0, 2)) * sign[:, :, None]) % p
        for a, b, _ in np.argwhere(skew):
            out.append(f"skew-symmetry fails at ({nm[a]}, {nm[b]})")
            break
        # [x,[y,z]] = [[x,y],z] + (-1)^{|x||y|} [y,[x,z]]
        lhs = np.einsum("jkl,ilm->ijkm", T, T)
        r1 = np.einsum("ijl,lkm->ijkm", T, T)
        r2 = np.einsum("ikl,jlm->ijkm", T, T) * sign[:, :, None, None]
        bad = np.argwhere((lhs - r1 - r2) % p)
        if bad.size:
            a, b, c, _ = bad[0]
            out.append(f"Jacobi fails at ({nm[a]}, {nm[b]}, {nm[c]})")
        for f in self.odd:
            x = self.basis(f)
            if np.any(self.bracket(x, self.bracket(x, x))):
                out.append(f"[x,[x,x]] != 0 for x = {nm[f]}")
        return out

    def bracket(self, u, v) -> np.ndarray:
        return np.einsum("i,j,ijk->k", np.asarray(u, dtype=np.int64), np.asarray(v, dtype=np.int64), self.table) % self.p

    def ad(self, u) -> np.ndarray:
        """Matrix of v -> [u, v]."""
        return np.einsum("i,ijk->kj", np.asarray(u, dtype=np.int64), self.table) % self.p

    def center(self) -> np.ndarray:
        """Rows spanning {z : [z, y] = 0 for all y}."""
        n = self.dim
        # row block for each y: z -> [z, e_y] has matrix T[:, y, :].T
        M = np.vstack([self.table[:, y, :].T for y in range(n)]) if n else np.zeros((0, 0), dtype=np.int64)
        return nullspace(M, self.p) if n else np.zeros((0, 0), dtype=np.int64)

    def square(self, x) -> np.ndarray:
        """x^2 = [x, x] / 2 for odd x."""
        return self.bracket(x, x) * pow(2, -1, self.p) % self.p

    def with_pmap(self, pmap: PMap) -> "LieSuperalgebra":
        return LieSuperalgebra(self.p, list(self.names), self.parities.copy(), self.table.copy(), pmap, False)


def s_coefficients(L: LieSuperalgebra, x, y) -> list[np.ndarray]:
    """s_1..s_{p-1} from ad_{t x + y}^{p-1}(x) = sum_i i s_i(x,y) t^{i-1}."""
    p = L.p
    x = np.asarray(x, dtype=np.int64) % p
    y = np.asarray(y, dtype=np.int64) % p
    adx, ady = L.ad(x), L.ad(y)
    poly = [x]  # coefficients of t^0, t^1, ...
    for _ in range(p - 1):
        nxt = [np.zeros(L.dim, dtype=np.int64) for _ in range(len(poly) + 1)]
        for d, v in enumerate(poly):
            nxt[d] = (nxt[d] + ady @ v) % p
            nxt[d + 1] = (nxt[d + 1] + adx @ v) % p
        poly = nxt
    return [poly[i - 1] * pow(i, -1, p) % p for i in range(1, p)]


def s_sum_nested(L: LieSuperalgebra, x, y) -> np.ndarray:
    """sum_i s_i(x,y) as nested brackets weighted by 1/#(x)."""
    p = L.p
    x = np.asarray(x, dtype=np.int64) % p
    y = np.asarray(y, dtype=np.int64) % p
    total = L.zero()
    for head in itertools.product((0, 1), repeat=p - 2):
        seq = list(head) + [1, 0]  # 0 stands for x, 1 for y
        count = seq.count(0)
        v = x
        for t in reversed(seq[:-1]):
            v = L.bracket(x if t == 0 else y, v)
        total = (total + v * pow(count, -1, p)) % p
    return total


def pmap_eval(L: LieSuperalgebra, x, pmap: PMap | None = None) -> np.ndarray:
    """x^{[p]} for even x.  Uses the evaluator when present, otherwise builds
    the value from the basis images through p-homogeneity and the s_i rule."""
    pmap = pmap or L.pmap
    if pmap is None:
        raise NotRestrictable("no p-map attached")
    p = L.p
    x = np.asarray(x, dtype=np.int64) % p
    par = L.parity_of(x)
    if par != 0:
        raise ParityError("the p-map is defined on even elements")
    if pmap.evaluator is not None:
        return pmap.evaluator(x) % p
    acc = L.zero()
    val = L.zero()
    for j in L.even:
        c = int(x[j])
        if not c:
            continue
        y = c * L.basis(j) % p
        fy = pow(c, p, p) * pmap.images[j] % p
        if np.any(acc):
            s = sum(s_coefficients(L, acc, y))
            val = (val + fy + s) % p
        else:
            val = fy
        acc = (acc + y) % p
    return val


def p2p_eval(L: LieSuperalgebra, x, pmap: PMap | None = None) -> np.ndarray:
    """x^{[p]} for even x and x^{[2p]} = (x^2)^{[p]} for odd x."""
    par = L.parity_of(x)
    if par is None:
        raise ParityError("element is not homogeneous")
    if par == 0:
        return pmap_eval(L, x, pmap)
    return pmap_eval(L, L.square(x), pmap)


def jacobson_solve(L: LieSuperalgebra) -> PMap:
    """Solve ad_f = ad_{e_j}^p with f even, for each even basis vector e_j."""
    p = L.p
    ev = L.even
    cols = [L.ad(L.basis(i)).reshape(-1) for i in ev]
    M = np.array(cols, dtype=np.int64).T if ev else np.zeros((L.dim * L.dim, 0), dtype=np.int64)
    images = {}
    for j in ev:
        target = matpow(L.ad(L.basis(j)), p, p).reshape(-1)
        sol = solve(M, target, p) if ev else None
        if sol is None:
            raise NotRestrictable(f"(ad {L.names[j]})^p is not inner")
        f = L.zero()
        f[ev] = sol
        images[j] = f
    center = L.center()
    return PMap(p, images, center)


def check_restricted(L: LieSuperalgebra, pmap: PMap | None = None, samples: int = 200, seed: int = 0) -> Report:
    pmap = pmap or L.pmap
    p = L.p
    rep = Report("restricted-lie", seed=seed)
    rng = np.random.default_rng(seed)
    # ad_{x^[p]} = ad_x^p against all of L, on the even basis
    for j in L.even:
        f = pmap.images[j] % p
        lhs = L.ad(f)
        rhs = matpow(L.ad(L.basis(j)), p, p)
        diff = np.argwhere((lhs - rhs) % p)
        wit = None
        if diff.size:
            wit = f"({L.names[j]}, {L.names[diff[0][1]]})"
        rep.add(f"ad-power({L.names[j]})", "def-2/RRRS", not diff.size, wit)
        if L.parity_of(f) != 0:
            rep.add(f"image-even({L.names[j]})", "p|2p-structure", False, f"({L.names[j]}, {L.format(f)})")
    if pmap.evaluator is not None:
        for j in L.even:
            ok = np.array_equal(pmap.evaluator(L.basis(j)) % p, pmap.images[j] % p)
            rep.add(f"evaluator-basis({L.names[j]})", "Jacobson", ok, L.names[j])
    if not L.even:
        return rep
    bad1 = bad2 = bad3 = None
    for _ in range(samples):
        x = L.random_homogeneous(rng, 0)
        y = L.random_homogeneous(rng, 0)
        c = int(rng.integers(0, p))
        xp = pmap_eval(L, x, pmap)
        if bad1 is None and not np.array_equal(pmap_eval(L, c * x % p, pmap), pow(c, p, p) * xp % p):
            bad1 = f"x={L.format(x)}, c={c}"
        yp = pmap_eval(L, y, pmap)
        s = sum(s_coefficients(L, x, y)) % p
        xy = pmap_eval(L, (x + y) % p, pmap)
        if bad2 is None and not np.array_equal(xy, (xp + yp + s) % p):
            bad2 = f"x={L.format(x)}, y={L.format(y)}"
        if bad3 is None and not np.array_equal(L.ad(xy), matpow(L.ad((x + y) % p), p, p)):
            bad3 = f"x={L.format(x)}, y={L.format(y)}"
    rep.add("p-homogeneity", "def-1", bad1 is None, bad1)
    rep.add("additivity", "si", bad2 is None, bad2)
    rep.add("ad-power(sampled)", "def-2", bad3 is None, bad3)
    return rep


@dataclass
class LieModule:
    """A module over a Lie superalgebra: one matrix per basis element of L."""

    p: int
    names: list[str]
    parities: np.ndarray
    action: np.ndarray  # action[j] is the matrix of e_j

    def __post_init__(self):
        self.parities = np.asarray(self.parities, dtype=np.int64) % 2
        self.action = modp(self.action, self.p)

    @property
    def dim(self) -> int:
        return len(self.names)

    def of(self, x) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), self.action) % self.p


def check_module(L: LieSuperalgebra, M: LieModule) -> Report:
    rep = Report("lie-module")
    p = L.p
    for j in range(L.dim):
        ok = not np.any(M.action[j]) or _map_parity(M.action[j], M.parities, M.parities) == L.parities[j]
        rep.add(f"parity({L.names[j]})", "graded action", ok, L.names[j])
    for a in range(L.dim):
        for b in range(L.dim):
            s = koszul(L.parities[a], L.parities[b])
            lhs = M.of(L.bracket(L.basis(a), L.basis(b)))
            rhs = (M.action[a] @ M.action[b] - s * M.action[b] @ M.action[a]) % p
            if not np.array_equal(lhs, rhs):
                rep.add("morphism", "L-module", False, f"({L.names[a]}, {L.names[b]})")
                return rep
    rep.add("morphism", "L-module", True)
    return rep


def check_restricted_module(L: LieSuperalgebra, pmap: PMap | None, M: LieModule) -> Report:
    pmap = pmap or L.pmap
    rep = check_module(L, M)
    rep.suite = "restricted-module"
    p = L.p
    for j in L.even:
        lhs = matpow(M.action[j], p, p)
        rhs = M.of(pmap_eval(L, L.basis(j), pmap))
        bad = np.argwhere((lhs - rhs) % p)
        wit = None if not bad.size else f"({L.names[j]}, {M.names[bad[0][1]]})"
        rep.add(f"x^p.m=x^[p].m({L.names[j]})", "restricted module", not bad.size, wit)
    return rep


def adjoint_module(L: LieSuperalgebra) -> LieModule:
    return LieModule(L.p, list(L.names), L.parities.copy(), np.array([L.ad(L.basis(j)) for j in range(L.dim)]))


def trivial_module(L: LieSuperalgebra, dim: int = 1) -> LieModule:
    return LieModule(L.p, [f"m{i}" for i in range(dim)], np.zeros(dim), np.zeros((L.dim, dim, dim), dtype=np.int64))


# -- Der(A) as a restricted Lie superalgebra ---------------------------------

@dataclass
class DerivationAlgebra:
    """Der(A) with its basis matrices, bracket, and the p-map D -> D^p."""

    A: SuperAlgebra
    L: LieSuperalgebra
    matrices: list[np.ndarray]
    coords: Coordinates

    def matrix(self, x) -> np.ndarray:
        return np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), np.array(self.matrices)) % self.A.p

    def element(self, M) -> np.ndarray:
        return self.coords(M)


def derivation_algebra(A: SuperAlgebra, maps: Sequence[GradedLinearMap] | None = None,
                       names: Sequence[str] | None = None) -> DerivationAlgebra:
    """Der(A) with commutator bracket.  ``maps`` may supply a preferred basis;
    it is checked to span the computed derivation space."""
    p = A.p
    computed = derivation_space(A)
    if maps is None:
        maps = computed
    else:
        maps = list(maps)
        if len(maps) != len(computed):
            raise StructureViolation(f"supplied {len(maps)} derivations, Der(A) has dimension {len(computed)}")
        for D in maps:
            if derivation_defects(A, D.matrix, D.parity):
                raise StructureViolation(f"{D.name or 'map'} is not a derivation")
    maps = sorted(maps, key=lambda D: D.parity)
    mats = [modp(D.matrix, p) for D in maps]
    pars = [D.parity for D in maps]
    if names is None:
        names = [D.name or f"D{i + 1}" for i, D in enumerate(maps)]
    coords = Coordinates(mats, p)
    n = len(mats)
    T = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            C = (mats[i] @ mats[j] - koszul(pars[i], pars[j]) * mats[j] @ mats[i]) % p
            T[i, j] = coords(C)
    L = LieSuperalgebra(p, list(names), pars, T)
    stack = np.array(mats)

    def evaluator(x):
        D = np.einsum("j,jab->ab", np.asarray(x, dtype=np.int64), stack) % p
        return coords(matpow(D, p, p))

    images = {j: evaluator(L.basis(j)) for j in L.even}
    L.pmap = PMap(p, images, L.center(), evaluator)
    return DerivationAlgebra(A, L, mats, coords)


def witt_basis(A: SuperAlgebra, n: int) -> list[GradedLinearMap]:
    """xi^S d/dxi_i on Lambda(n), the standard basis of W(n)."""
    p = A.p
    subsets = [s for k in range(n + 1) for s in itertools.combinations(range(1, n + 1), k)]
    pos = {s: t for t, s in enumerate(subsets)}
    out = []
    for S in subsets:
        for i in range(1, n + 1):
            D = np.zeros((A.dim, A.dim), dtype=np.int64)
            for U in subsets:
                if i not in U:
                    continue
                # d/dxi_i of xi_U: move xi_i to the front, then drop it
                k = U.index(i)
                rest = tuple(u for u in U if u != i)
                sign = (-1) ** k
                # multiply xi^S * xi^rest
                if set(S) & set(rest):
                    continue
                inv = sum(1 for s in S for u in rest if s > u)
                D[pos[tuple(sorted(S + rest))], pos[U]] = sign * (-1) ** inv % p
            name = ("*".join(f"xi{s}" for s in S) + "*" if S else "") + f"d{i}"
            out.append(GradedLinearMap(D % p, (len(S) + 1) % 2, name))
    return out


# -- JSON ---------------------------------------------------------------------

def _basis_json(X: _Graded) -> list[dict]:
    return [{"name": n, "parity": int(q)} for n, q in zip(X.names, X.parities)]


def _tensor_json(X: _Graded, T: np.ndarray) -> list:
    out = []
    for i in range(X.dim):
        for j in range(X.dim):
            terms = [[X.names[k], int(T[i, j, k])] for k in range(T.shape[2]) if T[i, j, k]]
            if terms:
                out.append([X.names[i], X.names[j], terms])
    return out


def _tensor_from_json(entries, names_i, names_j, names_k, p) -> np.ndarray:
    T = np.zeros((len(names_i), len(names_j), len(names_k)), dtype=np.int64)
    for i, j, terms in entries:
        for k, c in terms:
            T[names_i.index(i), names_j.index(j), names_k.index(k)] += int(c)
    return T % p


def _element_json(X: _Graded, v) -> list:
    return [[X.names[k], int(c)] for k, c in enumerate(np.asarray(v) % X.p) if c]


def _element_from_json(X: _Graded, terms) -> np.ndarray:
    v = X.zero()
    for k, c in terms:
        v[X.index(k)] += int(c)
    return v % X.p


def algebra_to_json(A: SuperAlgebra) -> dict:
    out = {"p": A.p, "basis": _basis_json(A), "product": _tensor_json(A, A.table)}
    if A.unit is not None:
        out["unit"] = A.names[A.unit]
    return out


def algebra_from_json(obj: dict) -> SuperAlgebra:
    p = int(obj["p"])
    names = [b["name"] for b in obj["basis"]]
    pars = [int(b["parity"]) for b in obj["basis"]]
    T = _tensor_from_json(obj.get("product", []), names, names, names, p)
    unit = names.index(obj["unit"]) if obj.get("unit") is not None else None
    return SuperAlgebra(p, names, pars, T, unit)


def lie_to_json(L: LieSuperalgebra) -> dict:
    out = {"p": L.p, "basis": _basis_json(L), "bracket": _tensor_json(L, L.table)}
    if L.pmap is not None:
        out["pmap"] = [[L.names[j], _element_json(L, L.pmap.images[j])] for j in L.even]
    return out


def lie_from_json(obj: dict) -> LieSuperalgebra:
    p = int(obj["p"])
    names = [b["name"] for b in obj["basis"]]
    pars = [int(b["parity"]) for b in obj["basis"]]
    T = _tensor_from_json(obj.get("bracket", []), names, names, names, p)
    L = LieSuperalgebra(p, names, pars, T)
    if "pmap" in obj:
        images = {L.index(n): _element_from_json(L, terms) for n, terms in obj["pmap"]}
        missing = [L.names[j] for j in L.even if j not in images]
        if missing:
            raise StructureViolation(f"p-map image missing for {missing}")
        L.pmap = PMap(p, images, L.center())
    return L


def dumps(obj: dict) -> str:
    """Canonical JSON text: sorted keys, compact separators."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))
