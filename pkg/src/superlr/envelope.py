"""Restricted enveloping algebras U_p(L) and U_p(A, L) by rewriting words.

Words are tuples of letter indices.  Normal words are an optional
non-unit A-letter followed by L-letters in basis order, with even
exponents below p and odd exponents at most one.

U_p(A, L) is built one of two ways.  When L is free over A with a known
frame (the Grassmann/Witt bundles) the frame letters carry the PBW part and
the normal forms are already a basis.  Otherwise the words are normalised
in A # U_p(L) and then reduced modulo the ideal generated by a.x - (ax).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .algebra import LieSuperalgebra, koszul, pmap_eval
from .linalg import rref
from .report import Report

Word = tuple
Elem = dict  # Word -> coefficient in [1, p)


@dataclass(frozen=True)
class Letter:
    name: str
    parity: int
    kind: str  # "A", "L" (kept in normal forms) or "X" (expanded on sight)


@dataclass
class PBWElement:
    terms: dict
    p: int

    def __post_init__(self):
        self.terms = {w: c % self.p for w, c in self.terms.items() if c % self.p}

    def __eq__(self, other):
        return isinstance(other, PBWElement) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms


def _add(acc: dict, w: Word, c: int, p: int):
    v = (acc.get(w, 0) + c) % p
    if v:
        acc[w] = v
    else:
        acc.pop(w, None)


class RewriteSystem:
    """Rules: A-products, unit deletion, x a -> (+-) a x + rho(x)(a),
    ordered swaps with bracket terms, x^p -> x^[p], f f -> [f,f]/2, and
    expansion of X-letters."""

    def __init__(self, p: int, letters: Sequence[Letter], unit: int | None,
                 a_mul: Callable, anchor: Callable, bracket: Callable, pmap: Callable,
                 expand: Callable | None = None):
        self.p = p
        self.letters = list(letters)
        self.unit = unit
        self.a_mul = a_mul
        self.anchor = anchor
        self.bracket = bracket
        self.pmap = pmap
        self.expand = expand
        self.kind = [l.kind for l in self.letters]
        self.par = [l.parity for l in self.letters]
        self.index = {l.name: i for i, l in enumerate(self.letters)}
        self._half = pow(2, -1, p)

    # -- sites --------------------------------------------------------------

    def sites(self, w: Word) -> list[tuple[int, str]]:
        k, out = self.kind, []
        n = len(w)
        for i in range(n):
            if k[w[i]] == "X":
                out.append((i, "expand"))
            elif w[i] == self.unit:
                out.append((i, "unit"))
        for i in range(n - 1):
            a, b = w[i], w[i + 1]
            ka, kb = k[a], k[b]
            if ka == "X" or kb == "X":
                continue
            if ka == "A" and kb == "A":
                out.append((i, "amul"))
            elif ka == "L" and kb == "A":
                out.append((i, "anchor"))
            elif ka == "L" and kb == "L":
                if a > b:
                    out.append((i, "swap"))
                elif a == b and self.par[a] == 1:
                    out.append((i, "square"))
        p = self.p
        for i in range(n - p + 1):
            a = w[i]
            if k[a] == "L" and self.par[a] == 0 and all(w[i + t] == a for t in range(p)):
                out.append((i, "power"))
        return out

    def apply(self, w: Word, site: tuple[int, str]) -> dict:
        i, rule = site
        p = self.p
        out: dict = {}
        if rule == "expand":
            for mid, c in self.expand(w[i]).items():
                _add(out, w[:i] + mid + w[i + 1:], c, p)
        elif rule == "unit":
            _add(out, w[:i] + w[i + 1:], 1, p)
        elif rule == "amul":
            for mid, c in self.a_mul(w[i], w[i + 1]).items():
                _add(out, w[:i] + mid + w[i + 2:], c, p)
        elif rule == "anchor":
            x, a = w[i], w[i + 1]
            _add(out, w[:i] + (a, x) + w[i + 2:], koszul(self.par[a], self.par[x]), p)
            for mid, c in self.anchor(x, a).items():
                _add(out, w[:i] + mid + w[i + 2:], c, p)
        elif rule == "swap":
            b, a = w[i], w[i + 1]
            _add(out, w[:i] + (a, b) + w[i + 2:], koszul(self.par[a], self.par[b]), p)
            for mid, c in self.bracket(b, a).items():
                _add(out, w[:i] + mid + w[i + 2:], c, p)
        elif rule == "square":
            for mid, c in self.bracket(w[i], w[i]).items():
                _add(out, w[:i] + mid + w[i + 2:], c * self._half, p)
        elif rule == "power":
            for mid, c in self.pmap(w[i]).items():
                _add(out, w[:i] + mid + w[i + p:], c, p)
        else:  # pragma: no cover
            raise ValueError(rule)
        return out

    def degree(self, w: Word) -> int:
        return sum(1 for a in w if self.kind[a] != "A")

    def normal_form(self, elem: dict | Word, rng: np.random.Generator | None = None) -> dict:
        """Rewrite to the unique irreducible combination.  ``rng`` picks the
        word and the site at random; otherwise the leftmost site is used."""
        p = self.p
        todo: dict = {}
        if isinstance(elem, tuple):
            todo[elem] = 1
        else:
            for w, c in elem.items():
                _add(todo, w, c, p)
        done: dict = {}
        while todo:
            if rng is None:
                w = next(iter(todo))
            else:
                keys = list(todo)
                w = keys[int(rng.integers(len(keys)))]
            c = todo.pop(w)
            s = self.sites(w)
            if not s:
                _add(done, w, c, p)
                continue
            site = s[0] if rng is None else s[int(rng.integers(len(s)))]
            for w2, c2 in self.apply(w, site).items():
                _add(todo, w2, c * c2, p)
        return done

    def words_of(self, text: str | Sequence[str]) -> Word:
        toks = text.split() if isinstance(text, str) else list(text)
        try:
            return tuple(self.index[t] for t in toks)
        except KeyError as e:
            raise KeyError(f"unknown generator {e.args[0]!r}") from None

    def format(self, elem: dict) -> str:
        if not elem:
            return "0"
        parts = []
        for w in sorted(elem, key=lambda w: (len(w), w)):
            c = elem[w]
            body = self.format_word(w)
            if body == "1":
                parts.append(str(c))
            else:
                parts.append(body if c == 1 else f"{c}*{body}")
        return " + ".join(parts)

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        out, i = [], 0
        while i < len(w):
            j = i
            while j < len(w) and w[j] == w[i]:
                j += 1
            nm = self.letters[w[i]].name
            out.append(nm if j - i == 1 else f"{nm}^{j - i}")
            i = j
        return " ".join(out)


# -- assembling systems ----------------------------------------------------------

def _vec_terms(v, offset: int, p: int) -> dict:
    return {(offset + k,): int(c) for k, c in enumerate(np.asarray(v) % p) if c}


def lie_system(L: LieSuperalgebra) -> RewriteSystem:
    p = L.p
    order = sorted(range(L.dim), key=lambda i: (L.parities[i], i))
    pos = {j: t for t, j in enumerate(order)}
    letters = [Letter(L.names[j], int(L.parities[j]), "L") for j in order]

    def relabel(v):
        return {(pos[k],): int(c) for k, c in enumerate(np.asarray(v) % p) if c}

    def bracket(b, a):
        return relabel(L.bracket(L.basis(order[b]), L.basis(order[a])))

    def pmap(a):
        return relabel(pmap_eval(L, L.basis(order[a])))

    none = lambda *args: {}
    sys = RewriteSystem(p, letters, None, none, none, bracket, pmap)
    sys.l_index = [pos[j] for j in range(L.dim)]
    return sys


def _a_mul(data):
    A, p = data.A, data.p

    def a_mul(i, j):
        return _vec_terms(A.mul(A.basis(i), A.basis(j)), 0, p)

    return a_mul


def lr_ambient_system(data) -> RewriteSystem:
    """Letters: A-basis then L-basis; rules (i)-(v)."""
    A, L, p = data.A, data.L, data.p
    nA = A.dim
    order = sorted(range(L.dim), key=lambda i: (L.parities[i], i))
    pos = {j: t for t, j in enumerate(order)}
    letters = [Letter(n, int(q), "A") for n, q in zip(A.names, A.parities)]
    letters += [Letter(L.names[j], int(L.parities[j]), "L") for j in order]

    def relabel(v):
        return {(nA + pos[k],): int(c) for k, c in enumerate(np.asarray(v) % p) if c}

    def bracket(b, a):
        return relabel(L.bracket(L.basis(order[b - nA]), L.basis(order[a - nA])))

    def pmap(a):
        return relabel(pmap_eval(L, L.basis(order[a - nA])))

    def anchor(x, a):
        return _vec_terms(data.anchor[order[x - nA]][:, a], 0, p)

    sys = RewriteSystem(p, letters, A.unit, _a_mul(data), anchor, bracket, pmap)
    sys.l_index = [nA + pos[j] for j in range(L.dim)]
    return sys


@dataclass
class Frame:
    """An A-basis d_1..d_r of L (as L-vectors) and A-coordinates of L-vectors."""

    d: list
    coords: Callable  # L-vector -> list of A-vectors
    names: list = field(default_factory=list)


def grassmann_frame(data, n: int) -> Frame:
    A = data.A
    gens = [A.index(f"xi{i}") for i in range(1, n + 1)]
    from .lierinehart import _grassmann_frame

    raw = _grassmann_frame(data, n)

    def coords(v):
        R = data.rho(v)
        return [R[:, g] % data.p for g in gens]

    return Frame(raw["d"], coords, [f"d{i}" for i in range(1, n + 1)])


def verify_frame(data, frame: Frame) -> bool:
    L, p = data.L, data.p
    for x in range(L.dim):
        v = L.basis(x)
        rec = L.zero()
        for c, d in zip(frame.coords(v), frame.d):
            rec = (rec + data.act(c, d)) % p
        if not np.array_equal(rec, v):
            return False
    return True


def lr_free_system(data, frame: Frame) -> RewriteSystem:
    """Letters: A-basis, frame letters, then L-basis letters that expand
    into A-combinations of frame letters."""
    A, L, p = data.A, data.L, data.p
    nA, r = A.dim, len(frame.d)
    fpar = [L.parity_of(d) for d in frame.d]
    order = sorted(range(r), key=lambda k: (fpar[k], k))
    pos = {k: t for t, k in enumerate(order)}
    letters = [Letter(n, int(q), "A") for n, q in zip(A.names, A.parities)]
    letters += [Letter(frame.names[k], int(fpar[k]), "L") for k in order]
    letters += [Letter(n, int(q), "X") for n, q in zip(L.names, L.parities)]

    def over_frame(v):
        out: dict = {}
        for k, c in enumerate(frame.coords(v)):
            for i, ci in enumerate(np.asarray(c) % p):
                if ci:
                    w = (nA + pos[k],) if i == A.unit else (i, nA + pos[k])
                    _add(out, w, int(ci), p)
        return out

    def dvec(letter):
        return frame.d[order[letter - nA]]

    def bracket(b, a):
        return over_frame(L.bracket(dvec(b), dvec(a)))

    def pmap(a):
        return over_frame(pmap_eval(L, dvec(a)))

    def anchor(x, a):
        return _vec_terms(data.rho(dvec(x))[:, a], 0, p)

    def expand(x):
        return over_frame(L.basis(x - nA - r))

    sys = RewriteSystem(p, letters, A.unit, _a_mul(data), anchor, bracket, pmap, expand)
    sys.l_index = [nA + r + j for j in range(L.dim)]
    sys.letter_vectors = {nA + pos[k]: frame.d[k] for k in range(r)}
    return sys


# -- the algebra -----------------------------------------------------------------

def pbw_words(sys: RewriteSystem) -> list[Word]:
    """Normal words: optional non-unit A-letter, then a PBW monomial."""
    p = sys.p
    ls = [i for i, k in enumerate(sys.kind) if k == "L"]
    ranges = [range(p) if sys.par[i] == 0 else range(2) for i in ls]
    monos = []
    for exps in itertools.product(*ranges):
        w = tuple(itertools.chain.from_iterable([i] * e for i, e in zip(ls, exps)))
        monos.append(w)
    heads: list[Word] = [()]
    heads += [(i,) for i, k in enumerate(sys.kind) if k == "A" and i != sys.unit]
    return [h + m for h in heads for m in monos]


class Envelope:
    """A finite-dimensional algebra presented by a rewrite system and,
    optionally, a two-sided ideal of the normal-word span."""

    def __init__(self, sys: RewriteSystem, name: str = "", ideal_gens: Sequence[dict] | None = None):
        self.sys = sys
        self.p = sys.p
        self.name = name
        self.words = pbw_words(sys)
        # columns ordered by degree, highest first, so pivots land on long words
        self.words.sort(key=lambda w: (-sys.degree(w), w))
        self.col = {w: i for i, w in enumerate(self.words)}
        self.R = np.zeros((0, len(self.words)), dtype=np.int64)
        self.pivots: list[int] = []
        if ideal_gens:
            self._close_ideal(ideal_gens)
        piv = set(self.pivots)
        self.basis = [w for i, w in enumerate(self.words) if i not in piv]

    # vectors <-> elements
    def vec(self, elem: dict) -> np.ndarray:
        v = np.zeros(len(self.words), dtype=np.int64)
        for w, c in elem.items():
            v[self.col[w]] = (v[self.col[w]] + c) % self.p
        return v

    def elem(self, v) -> dict:
        return {self.words[i]: int(c) for i, c in enumerate(np.asarray(v) % self.p) if c}

    def reduce(self, elem: dict) -> dict:
        if not self.pivots:
            return elem
        v = self.vec(elem)
        for row, c in zip(self.R, self.pivots):
            if v[c]:
                v = (v - v[c] * row) % self.p
        return self.elem(v)

    def nf(self, x, rng=None) -> dict:
        if isinstance(x, str):
            x = self.sys.words_of(x)
        return self.reduce(self.sys.normal_form(x, rng))

    def mul(self, u: dict, v: dict, rng=None) -> dict:
        out: dict = {}
        for w1, c1 in u.items():
            for w2, c2 in v.items():
                _add(out, w1 + w2, c1 * c2, self.p)
        return self.nf(out, rng)

    def add(self, u: dict, v: dict, c: int = 1) -> dict:
        out = dict(u)
        for w, x in v.items():
            _add(out, w, c * x, self.p)
        return out

    def one(self) -> dict:
        return {(): 1}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def _close_ideal(self, gens):
        p = self.p
        letters = [i for i, k in enumerate(self.sys.kind) if k != "X"]
        rows: list[np.ndarray] = []
        queue = [self.vec(self.sys.normal_form(g)) for g in gens]
        R = np.zeros((0, len(self.words)), dtype=np.int64)
        piv: list[int] = []

        def reduce(v):
            for row, c in zip(R, piv):
                if v[c]:
                    v = (v - v[c] * row) % p
            return v

        while queue:
            v = reduce(queue.pop() % p)
            if not np.any(v):
                continue
            R, piv = rref(np.vstack([R, v]), p)
            R = R[: len(piv)]
            e = self.elem(v)
            for l in letters:
                queue.append(self.vec(self.sys.normal_form(self._concat((l,), e))))
                queue.append(self.vec(self.sys.normal_form(self._concat_r(e, (l,)))))
        self.R, self.pivots = R, piv

    @staticmethod
    def _concat(w: Word, e: dict) -> dict:
        return {w + u: c for u, c in e.items()}

    @staticmethod
    def _concat_r(e: dict, w: Word) -> dict:
        return {u + w: c for u, c in e.items()}

    def format(self, elem: dict) -> str:
        return self.sys.format(elem)


@dataclass
class LREnvelope:
    env: Envelope
    data: object
    route: str

    def i_A(self, a) -> dict:
        p = self.env.p
        out = {}
        for i, c in enumerate(np.asarray(a) % p):
            if c:
                _add(out, (i,), int(c), p)
        return self.env.nf(out)

    def i_L(self, x) -> dict:
        p = self.env.p
        out = {}
        for j, c in enumerate(np.asarray(x) % p):
            if c:
                _add(out, (self.env.sys.l_index[j],), int(c), p)
        return self.env.nf(out)


def enveloping_algebra(L: LieSuperalgebra) -> Envelope:
    return Envelope(lie_system(L), "U_p(L)")


def lr_enveloping_algebra(data, frame: Frame | None = None) -> LREnvelope:
    """U_p(A, L): free route when a frame is given, quotient route otherwise."""
    if frame is not None:
        if not verify_frame(data, frame):
            raise ValueError("frame does not reconstruct L")
        return LREnvelope(Envelope(lr_free_system(data, frame), "U_p(A,L)"), data, "free")
    sys = lr_ambient_system(data)
    A, L, p = data.A, data.L, data.p
    gens = []
    for a in range(A.dim):
        if a == A.unit:
            continue
        for x in range(L.dim):
            g = {(a, sys.l_index[x]): 1}
            for j, c in enumerate(data.act(A.basis(a), L.basis(x))):
                if c:
                    _add(g, (sys.l_index[j],), -int(c), p)
            gens.append(g)
    return LREnvelope(Envelope(sys, "U_p(A,L)", gens), data, "quotient")


def envelope_for(bundle) -> LREnvelope:
    frame = None
    if bundle.frame is not None:
        frame = grassmann_frame(bundle.data, int(bundle.params["n"]))
    return lr_enveloping_algebra(bundle.data, frame)


def dimension(L: LieSuperalgebra) -> int:
    ne, no = L.sdim
    return L.p ** ne * 2 ** no


def normal_form(word, sys: RewriteSystem | Envelope) -> PBWElement:
    if isinstance(sys, Envelope):
        return PBWElement(sys.nf(word), sys.p)
    if isinstance(word, str):
        word = sys.words_of(word)
    return PBWElement(sys.normal_form(word), sys.p)


# -- sampling suites ----------------------------------------------------------------

def _generators(env: Envelope) -> list[int]:
    return [i for i, k in enumerate(env.sys.kind) if k in ("A", "X") or (k == "L" and "X" not in env.sys.kind)]


def random_word(env: Envelope, rng, max_len: int = 6) -> Word:
    gens = _generators(env)
    n = int(rng.integers(0, max_len + 1))
    return tuple(int(gens[int(rng.integers(len(gens)))]) for _ in range(n))


def confluence_sample(env: Envelope, n_words: int = 1000, max_len: int = 6, seed: int = 0) -> Report:
    rep = Report("confluence", seed=seed)
    rng = np.random.default_rng(seed)
    r1 = np.random.default_rng([seed, 1])
    r2 = np.random.default_rng([seed, 2])
    mismatches, wit, degree_up = 0, None, None
    for _ in range(n_words):
        w = random_word(env, rng, max_len)
        a = env.nf(w, r1)
        b = env.nf(w, r2)
        if a != b:
            mismatches += 1
            wit = wit or env.sys.format_word(w)
        d = max((env.sys.degree(u) for u in a), default=0)
        if d > env.sys.degree(w) and degree_up is None:
            degree_up = env.sys.format_word(w)
    rep.add("two-orders", "PBW normal form", mismatches == 0, wit)
    rep.add("filtration", "PBW normal form", degree_up is None, degree_up)
    rep.extra = {"words": n_words, "mismatches": mismatches}
    return rep


def associativity_sample(env: Envelope, n: int = 500, seed: int = 0) -> Report:
    rep = Report("associativity", seed=seed)
    rng = np.random.default_rng(seed)
    wit = None
    for _ in range(n):
        u, v, w = (env.nf(random_word(env, rng, 3)) for _ in range(3))
        if env.mul(env.mul(u, v), w) != env.mul(u, env.mul(v, w)):
            wit = wit or "triple"
    rep.add("associativity", "PBW normal form", wit is None, wit)
    return rep


def multiplication_table(env: Envelope) -> Report:
    """Distinct normal forms for the basis and closure of all basis products."""
    rep = Report("multiplication-table")
    seen = set()
    wit = None
    for w in env.basis:
        f = env.nf(w)
        key = tuple(sorted(f.items()))
        if f != {w: 1} or key in seen:
            wit = wit or env.sys.format_word(w)
        seen.add(key)
    rep.add("basis-normal", "PBW basis", wit is None, wit)
    span = set(env.basis)
    wit = None
    for u in env.basis:
        for v in env.basis:
            f = env.nf(u + v)
            if not set(f) <= span:
                wit = wit or f"{env.sys.format_word(u)} * {env.sys.format_word(v)}"
    rep.add("closure", "PBW basis", wit is None, wit)
    rep.extra = {"dimension": env.dim}
    return rep


def check_up_relations(U: LREnvelope) -> Report:
    data = U.data
    A, L, p = data.A, data.L, data.p
    env = U.env
    rep = Report("up-relations")
    if A.unit is not None:
        ok = all(env.mul(U.i_A(A.one()), U.i_L(L.basis(x))) == U.i_L(L.basis(x)) for x in range(L.dim))
        rep.add("unit", "i_A(1) i_L(x) = i_L(x)", ok, None if ok else "unit")
    wit = None
    for a in range(A.dim):
        for x in range(L.dim):
            lhs = env.mul(U.i_A(A.basis(a)), U.i_L(L.basis(x)))
            if lhs != U.i_L(data.act(A.basis(a), L.basis(x))):
                wit = wit or f"({A.names[a]}, {L.names[x]})"
    rep.add("module", "i_A(a)i_L(x) = i_L(ax)", wit is None, wit)
    wit = None
    for a in range(A.dim):
        for x in range(L.dim):
            ea, ex = U.i_A(A.basis(a)), U.i_L(L.basis(x))
            s = koszul(A.parities[a], L.parities[x])
            lhs = env.add(env.mul(ex, ea), env.mul(ea, ex), -s)
            rhs = U.i_A(data.anchor[x][:, a])
            if env.reduce(env.sys.normal_form(lhs)) != rhs:
                wit = wit or f"({A.names[a]}, {L.names[x]})"
    rep.add("anchor", "i_A(rho(x)(a)) = [i_L(x), i_A(a)]", wit is None, wit)
    wit = None
    for x in L.even:
        ex = U.i_L(L.basis(x))
        pw = env.one()
        for _ in range(p):
            pw = env.mul(pw, ex)
        if pw != U.i_L(pmap_eval(L, L.basis(x))):
            wit = wit or L.names[x]
    rep.add("restricted", "x^p = x^[p]", wit is None, wit)
    wit = None
    for a in range(A.dim):
        for b in range(A.dim):
            if env.mul(U.i_A(A.basis(a)), U.i_A(A.basis(b))) != U.i_A(A.mul(A.basis(a), A.basis(b))):
                wit = wit or f"({A.names[a]}, {A.names[b]})"
    rep.add("i_A-multiplicative", "i_A algebra morphism", wit is None, wit)
    return rep


# -- universal property ---------------------------------------------------------------

class PreconditionViolated(ValueError):
    pass


class MatrixTarget:
    """End(M) for a graded module M."""

    def __init__(self, parities, p: int):
        self.parities = np.asarray(parities, dtype=np.int64) % 2
        self.p = p
        self.n = len(self.parities)

    def one(self):
        return np.eye(self.n, dtype=np.int64)

    def zero(self):
        return np.zeros((self.n, self.n), dtype=np.int64)

    def mul(self, u, v):
        return u @ v % self.p

    def add(self, u, v, c: int = 1):
        return (u + c * v) % self.p

    def eq(self, u, v) -> bool:
        return bool(np.array_equal(u % self.p, v % self.p))

    def parity(self, u):
        from .algebra import _map_parity

        return _map_parity(u % self.p, self.parities, self.parities)


class EnvelopeTarget:
    """U_p(A, L) as a target algebra."""

    def __init__(self, U: LREnvelope):
        self.U = U
        self.env = U.env
        self.p = U.env.p

    def one(self):
        return self.env.one()

    def zero(self):
        return {}

    def mul(self, u, v):
        return self.env.mul(u, v)

    def add(self, u, v, c: int = 1):
        return self.env.add(u, v, c)

    def eq(self, u, v) -> bool:
        return self.env.reduce(self.env.sys.normal_form(u)) == self.env.reduce(self.env.sys.normal_form(v))

    def parity(self, u):
        ps = {sum(self.env.sys.par[a] for a in w) % 2 for w in u}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None


def _lin(target, images, v, p):
    out = target.zero()
    for i, c in enumerate(np.asarray(v) % p):
        if c:
            out = target.add(out, images[i], int(c))
    return out


def _power(target, u, k):
    out = target.one()
    for _ in range(k):
        out = target.mul(out, u)
    return out


def factor_through(U: LREnvelope, target, jA: Sequence, jL: Sequence, samples: int = 100, seed: int = 0):
    """The morphism psi: U_p(A, L) -> target with psi i_A = jA, psi i_L = jL."""
    data = U.data
    A, L, p = data.A, data.L, data.p
    env = U.env
    bad = []
    for a in range(A.dim):
        par = target.parity(jA[a])
        if par is not None and par != A.parities[a] and not target.eq(jA[a], target.zero()):
            bad.append(f"j_A({A.names[a]}) not even")
    if A.unit is not None and not target.eq(jA[A.unit], target.one()):
        bad.append("j_A(1) != 1")
    for a in range(A.dim):
        for b in range(A.dim):
            if not target.eq(target.mul(jA[a], jA[b]), _lin(target, jA, A.mul(A.basis(a), A.basis(b)), p)):
                bad.append(f"j_A not multiplicative at ({A.names[a]}, {A.names[b]})")
    for x in range(L.dim):
        par = target.parity(jL[x])
        if par is not None and par != L.parities[x] and not target.eq(jL[x], target.zero()):
            bad.append(f"j_L({L.names[x]}) not even")
    for x in range(L.dim):
        for y in range(L.dim):
            s = koszul(L.parities[x], L.parities[y])
            comm = target.add(target.mul(jL[x], jL[y]), target.mul(jL[y], jL[x]), -s)
            if not target.eq(comm, _lin(target, jL, L.bracket(L.basis(x), L.basis(y)), p)):
                bad.append(f"j_L not a Lie morphism at ({L.names[x]}, {L.names[y]})")
    for x in L.even:
        if not target.eq(_power(target, jL[x], p), _lin(target, jL, pmap_eval(L, L.basis(x)), p)):
            bad.append(f"j_L not restricted at {L.names[x]}")
    for a in range(A.dim):
        for x in range(L.dim):
            if not target.eq(_lin(target, jL, data.act(A.basis(a), L.basis(x)), p), target.mul(jA[a], jL[x])):
                bad.append(f"j_L(ax) != j_A(a) j_L(x) at ({A.names[a]}, {L.names[x]})")
            s = koszul(A.parities[a], L.parities[x])
            comm = target.add(target.mul(jL[x], jA[a]), target.mul(jA[a], jL[x]), -s)
            if not target.eq(comm, _lin(target, jA, data.anchor[x][:, a], p)):
                bad.append(f"j_A(rho(x)(a)) != [j_L(x), j_A(a)] at ({A.names[a]}, {L.names[x]})")
    if bad:
        raise PreconditionViolated("; ".join(bad[:5]))

    sys = env.sys
    letter_img = {i: jA[i] for i, k in enumerate(sys.kind) if k == "A"}
    for j in range(L.dim):
        letter_img[sys.l_index[j]] = jL[j]
    for i, v in getattr(sys, "letter_vectors", {}).items():
        letter_img[i] = _lin(target, jL, v, p)

    def psi_word(w):
        out = target.one()
        for a in w:
            out = target.mul(out, letter_img[a])
        return out

    def psi(u: dict):
        out = target.zero()
        for w, c in u.items():
            out = target.add(out, psi_word(w), c)
        return out

    rep = Report("universal-property", seed=seed)
    wit = None
    for a in range(A.dim):
        if not target.eq(psi(U.i_A(A.basis(a))), jA[a]):
            wit = wit or A.names[a]
    rep.add("triangle-A", "psi i_A = j_A", wit is None, wit)
    wit = None
    for x in range(L.dim):
        if not target.eq(psi(U.i_L(L.basis(x))), jL[x]):
            wit = wit or L.names[x]
    rep.add("triangle-L", "psi i_L = j_L", wit is None, wit)
    rng = np.random.default_rng(seed)
    wit = None
    basis = env.basis
    for _ in range(samples):
        u = env.nf({basis[int(rng.integers(len(basis)))]: int(rng.integers(1, p))})
        v = env.nf({basis[int(rng.integers(len(basis)))]: int(rng.integers(1, p))})
        if not target.eq(psi(env.mul(u, v)), target.mul(psi(u), psi(v))):
            wit = wit or f"{env.format(u)} * {env.format(v)}"
    rep.add("multiplicative", "univ-prop", wit is None, wit)
    return psi, rep
