"""The smash product V#H with H = Z[delta] primitive, and the polynomials
Gamma_{k,j} defined by (x0#delta)^k = sum_j Gamma_{k,j} # delta^j.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping

from .superpoly import (
    EVEN_ODD,
    ParityCase,
    ParityCaseMismatch,
    SuperPoly,
    apply_delta,
)


class SmashElement:
    """Finite sum  sum_j v_j # delta^j  with v_j in V."""

    __slots__ = ("parts", "case")

    def __init__(self, parts: Mapping[int, SuperPoly] | None = None, case: ParityCase = EVEN_ODD):
        self.case = case
        clean = {}
        for j, v in (parts or {}).items():
            if v.case != case:
                raise ParityCaseMismatch(f"{v.case} vs {case}")
            if not v.is_zero():
                clean[j] = v
        self.parts: dict[int, SuperPoly] = clean

    @classmethod
    def one(cls, case: ParityCase) -> "SmashElement":
        return cls({0: SuperPoly.one(case)}, case)

    def component(self, j: int) -> SuperPoly:
        return self.parts.get(j, SuperPoly.zero(self.case))

    def __add__(self, other: "SmashElement") -> "SmashElement":
        if other.case != self.case:
            raise ParityCaseMismatch(f"{self.case} vs {other.case}")
        out = dict(self.parts)
        for j, v in other.parts.items():
            out[j] = out[j] + v if j in out else v
        return SmashElement(out, self.case)

    def __eq__(self, other):
        if not isinstance(other, SmashElement):
            return NotImplemented
        return self.case == other.case and self.parts == other.parts

    def parity_of(self, j: int) -> int | None:
        """|v_j # delta^j| = |v_j| + j|delta|."""
        par = self.component(j).parity()
        return None if par is None else (par + j * self.case.delta) % 2

    def __repr__(self):
        body = " + ".join(f"({v})#d^{j}" for j, v in sorted(self.parts.items())) or "0"
        return f"SmashElement({body}, case={self.case})"


def smash_mul_primitive(v: SuperPoly, w_h: SmashElement) -> SmashElement:
    """Left multiplication by (v # delta):
    (v#delta)(w#h) = (-1)^{|w||delta|} v w # delta h + v delta(w) # h.
    """
    if v.case != w_h.case:
        raise ParityCaseMismatch(f"{v.case} vs {w_h.case}")
    case = v.case
    out: dict[int, SuperPoly] = {}

    def put(j: int, poly: SuperPoly):
        out[j] = out[j] + poly if j in out else poly

    for h, w in w_h.parts.items():
        for par, piece in _split_by_parity(w):
            sign = -1 if (case.delta and par) else 1
            put(h + 1, (v * piece).scale(sign))
        put(h, v * apply_delta(w))
    return SmashElement(out, case)


def _split_by_parity(w: SuperPoly):
    from .superpoly import mono_parity

    buckets: dict[int, dict] = {}
    for m, c in w.terms.items():
        buckets.setdefault(mono_parity(m, w.case), {})[m] = c
    for par, terms in sorted(buckets.items()):
        yield par, SuperPoly(terms, w.case)


def gamma_parity(k: int, j: int, case: ParityCase) -> int:
    """Parity of Gamma_{k,j}: k factors of x0 and k - j applications of delta."""
    return (k * case.x0 + (k - j) * case.delta) % 2


@dataclass
class GammaTable:
    """Memoized Gamma_{k,j} over Z for one parity case.

    ``max_diagonal`` restricts storage to k - j <= max_diagonal, which is all
    the shape calculus needs.  Entries outside 1 <= j <= k are zero (with
    Gamma_{0,0} = 1).
    """

    case: ParityCase
    k_max: int = 0
    max_diagonal: int | None = None
    entries: dict[tuple[int, int], SuperPoly] = field(default_factory=dict)

    def __post_init__(self):
        self.entries.setdefault((0, 0), SuperPoly.one(self.case))
        self._built = 0
        self.extend(self.k_max)

    def _in_range(self, k: int, j: int) -> bool:
        if k == 0:
            return j == 0
        if j < 1 or j > k:
            return False
        return self.max_diagonal is None or k - j <= self.max_diagonal

    def extend(self, k_max: int):
        x0 = SuperPoly.var(0, self.case)
        for k in range(self._built + 1, k_max + 1):
            lo = 1 if self.max_diagonal is None else max(1, k - self.max_diagonal)
            for j in range(lo, k + 1):
                prev = self.get(k - 1, j)
                left = self.get(k - 1, j - 1)
                sign = -1 if (self.case.delta and gamma_parity(k - 1, j - 1, self.case)) else 1
                val = x0 * apply_delta(prev) + (x0 * left).scale(sign)
                self.entries[(k, j)] = val
        self._built = max(self._built, k_max)
        self.k_max = self._built

    def get(self, k: int, j: int) -> SuperPoly:
        if not self._in_range(k, j):
            if k >= 1 and 1 <= j <= k:
                raise KeyError(f"Gamma_{k},{j} lies beyond the stored diagonal")
            return SuperPoly.zero(self.case)
        if k > self._built:
            self.extend(k)
        return self.entries[(k, j)]

    def row(self, k: int) -> dict[int, SuperPoly]:
        return {j: self.get(k, j) for j in range(1, k + 1) if self._in_range(k, j)}


@lru_cache(maxsize=None)
def _table(case: ParityCase) -> GammaTable:
    return GammaTable(case)


def gamma_recursive(k: int, j: int, case: ParityCase = EVEN_ODD) -> SuperPoly:
    """Gamma_{k,j} by the three-branch recursion (zero outside 1 <= j <= k)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _table(case).get(k, j)


def gamma_oracle(k: int, case: ParityCase = EVEN_ODD) -> dict[int, SuperPoly]:
    """Components of (x0#delta)^k from repeated smash multiplication."""
    x0 = SuperPoly.var(0, case)
    acc = SmashElement.one(case)
    for _ in range(k):
        acc = smash_mul_primitive(x0, acc)
    return dict(acc.parts)


def x0_delta_power(k: int, case: ParityCase = EVEN_ODD) -> SuperPoly:
    """(x0 delta)^k (x0), the operator v -> x0*delta(v) iterated on x0."""
    x0 = SuperPoly.var(0, case)
    v = x0
    for _ in range(k):
        v = x0 * apply_delta(v)
    return v


def two_step_identities(k: int, j: int, case: ParityCase = EVEN_ODD) -> dict[str, bool]:
    """The identity (F) and its differentiated form, both in the even/odd case:

      Gamma_{k,j} = x0^2 G_{k-2,j-2} + (-1)^{k-j} x0^2 delta(G_{k-2,j-1}) + x0 delta(G_{k-1,j})
      Gamma_{k,j} = x0^2 G_{k-2,j-2} + x0^2 delta^2(G_{k-2,j})
                    + x0 x1 (delta(G_{k-2,j}) - (-1)^{k-j} G_{k-2,j-1})
    """
    g = lambda a, b: gamma_recursive(a, b, case)
    x0 = SuperPoly.var(0, case)
    x0sq = x0 * x0
    x0x1 = x0 * SuperPoly.var(1, case)
    sgn = (-1) ** (k - j)
    target = g(k, j)
    f_rhs = x0sq * g(k - 2, j - 2) + (x0sq * apply_delta(g(k - 2, j - 1))).scale(sgn) + x0 * apply_delta(g(k - 1, j))
    u_rhs = (
        x0sq * g(k - 2, j - 2)
        + x0sq * apply_delta(g(k - 2, j), 2)
        + x0x1 * (apply_delta(g(k - 2, j)) - g(k - 2, j - 1).scale(sgn))
    )
    return {"F": target == f_rhs, "UUU": target == u_rhs}


def check_two_step_identities(k: int, j: int, case: ParityCase = EVEN_ODD) -> bool:
    if case != EVEN_ODD:
        raise ValueError("the two-step identities are stated for x0 even, delta odd")
    if k < 3 or not 2 <= j <= k - 1:
        raise ValueError("need k >= 3 and 2 <= j <= k-1")
    return all(two_step_identities(k, j, case).values())


@dataclass
class VanishingReport:
    p: int
    rows: dict[int, bool]
    witnesses: dict[int, str]

    @property
    def all_vanish(self) -> bool:
        return all(self.rows.values())


def gamma_mod_p_vanishing(p: int, case: ParityCase = EVEN_ODD) -> VanishingReport:
    """Whether every coefficient of Gamma_{2p,j} is divisible by p, 3 <= j <= 2p-1."""
    rows, wit = {}, {}
    for j in range(3, 2 * p):
        poly = gamma_recursive(2 * p, j, case)
        bad = [(m, c) for m, c in poly.terms.items() if c % p]
        rows[j] = not bad
        if bad:
            wit[j] = f"{bad[0][0]} has coefficient {bad[0][1]}"
    return VanishingReport(p, rows, wit)


class ModuleCompatibilityViolated(ValueError):
    pass


def apply_to_module(S: SmashElement, A, a, alpha, beta, m, mult, beta_parity: int | None = None):
    """Act by S on m in an A-module M through v#1 -> f(v), 1#delta -> beta.

    ``mult(b)`` is the matrix of b on M, ``alpha`` a derivation of A and
    ``beta`` an endomorphism of M with
    beta(b m) = alpha(b) m + (-1)^{|b||beta|} b beta(m) on basis elements b.
    """
    import numpy as np

    from .linalg import matpow
    from .superpoly import eval_hom

    p = A.p
    beta = np.asarray(beta, dtype=np.int64) % p
    alpha = np.asarray(alpha, dtype=np.int64) % p
    bp = S.case.delta if beta_parity is None else beta_parity
    for i in range(A.dim):
        b = A.basis(i)
        s = -1 if (bp and A.parities[i]) else 1
        lhs = beta @ mult(b) % p
        rhs = (mult(alpha @ b % p) + s * mult(b) @ beta) % p
        if not np.array_equal(lhs, rhs):
            raise ModuleCompatibilityViolated(f"beta(b m) rule fails for b = {A.names[i]}")
    m = np.asarray(m, dtype=np.int64) % p
    out = np.zeros_like(m)
    for j, v in S.parts.items():
        fv = eval_hom(v, A, a, alpha, bp)
        out = (out + mult(fv) @ (matpow(beta, j, p) @ m % p)) % p
    return out


def smash_power(k: int, case: ParityCase) -> SmashElement:
    """(x0 # delta)^k as a smash element."""
    return SmashElement(gamma_oracle(k, case), case)


def gamma_rows(k_max: int, case: ParityCase, j_range: tuple[int, int] | None = None) -> list[dict]:
    """Records {k, j, case, polynomial} for 1 <= k <= k_max."""
    from .superpoly import format_poly

    out = []
    for k in range(1, k_max + 1):
        lo, hi = (1, k) if j_range is None else j_range
        for j in range(lo, hi + 1):
            out.append({"k": k, "j": j, "case": case.name, "polynomial": format_poly(gamma_recursive(k, j, case))})
    return out
