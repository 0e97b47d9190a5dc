"""The free supercommutative ring V = Z[x0, x1, ...] with |x_{i+1}| = |x_i| + |delta|.

A monomial is a tuple of ``(index, exponent)`` pairs with strictly
increasing indices; odd variables carry exponent 1.  The stored order is the
canonical one and every reordering sign lives in the coefficient.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .scalar import Number

Monomial = tuple[tuple[int, int], ...]

EVEN, ODD = 0, 1


class ParityCaseMismatch(ValueError):
    pass


class ParityMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ParityCase:
    """Parities of x0 and of the derivation delta (0 = even, 1 = odd)."""

    x0: int
    delta: int

    def __post_init__(self):
        if self.x0 not in (0, 1) or self.delta not in (0, 1):
            raise ValueError("parities are 0 or 1")

    def var_parity(self, i: int) -> int:
        return (self.x0 + i * self.delta) % 2

    @property
    def name(self) -> str:
        word = ("even", "odd")
        return f"{word[self.x0]}/{word[self.delta]}"

    @classmethod
    def parse(cls, text: str) -> "ParityCase":
        table = {"even": 0, "odd": 1, "0": 0, "1": 1}
        a, b = text.lower().replace("-", "/").split("/")
        return cls(table[a], table[b])

    def __str__(self):
        return self.name


EVEN_EVEN = ParityCase(0, 0)
EVEN_ODD = ParityCase(0, 1)
ODD_EVEN = ParityCase(1, 0)
ODD_ODD = ParityCase(1, 1)
ALL_CASES = (EVEN_EVEN, EVEN_ODD, ODD_EVEN, ODD_ODD)


def mono_parity(m: Monomial, case: ParityCase) -> int:
    return sum(e * case.var_parity(i) for i, e in m) % 2


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def mono_mul(a: Monomial, b: Monomial, case: ParityCase) -> tuple[int, Monomial] | None:
    """Product of canonical monomials as ``(sign, monomial)``; None when it vanishes."""
    if not a:
        return 1, b
    if not b:
        return 1, a
    exps = dict(a)
    sign_exp = 0
    odd_a = [i for i, _ in a if case.var_parity(i)]
    for i, e in b:
        if case.var_parity(i):
            if i in exps:
                return None
            # x_i moves left past the odd factors of ``a`` with larger index
            sign_exp += sum(1 for j in odd_a if j > i)
            exps[i] = 1
        else:
            exps[i] = exps.get(i, 0) + e
    return (-1) ** sign_exp, tuple(sorted(exps.items()))


def make_monomial(factors: Iterable[int], case: ParityCase) -> tuple[int, Monomial] | None:
    """Canonicalize a product of variables given in arbitrary order."""
    sign, mono = 1, ()
    for i in factors:
        r = mono_mul(mono, ((i, 1),), case)
        if r is None:
            return None
        s, mono = r
        sign *= s
    return sign, mono


class SuperPoly:
    """Sparse element of V with int or Fraction coefficients."""

    __slots__ = ("terms", "case")

    def __init__(self, terms: Mapping[Monomial, Number] | None = None, case: ParityCase = EVEN_ODD):
        self.case = case
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                clean[m] = c
        self.terms: dict[Monomial, Number] = clean

    # constructors -------------------------------------------------------
    @classmethod
    def zero(cls, case: ParityCase) -> "SuperPoly":
        return cls({}, case)

    @classmethod
    def one(cls, case: ParityCase) -> "SuperPoly":
        return cls({(): 1}, case)

    @classmethod
    def var(cls, i: int, case: ParityCase, power: int = 1) -> "SuperPoly":
        if power == 0:
            return cls.one(case)
        if case.var_parity(i) and power > 1:
            return cls.zero(case)
        return cls({((i, power),): 1}, case)

    @classmethod
    def monomial(cls, factors: Iterable[int], case: ParityCase, coeff: Number = 1) -> "SuperPoly":
        r = make_monomial(factors, case)
        if r is None:
            return cls.zero(case)
        s, m = r
        return cls({m: s * coeff}, case)

    # ring structure ------------------------------------------------------
    def _check(self, other: "SuperPoly"):
        if other.case != self.case:
            raise ParityCaseMismatch(f"{self.case} vs {other.case}")

    def __add__(self, other: "SuperPoly") -> "SuperPoly":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return SuperPoly(out, self.case)

    def __neg__(self) -> "SuperPoly":
        return SuperPoly({m: -c for m, c in self.terms.items()}, self.case)

    def __sub__(self, other: "SuperPoly") -> "SuperPoly":
        return self + (-other)

    def scale(self, c: Number) -> "SuperPoly":
        return SuperPoly({m: c * v for m, v in self.terms.items()}, self.case)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int) -> "SuperPoly":
        out = SuperPoly.one(self.case)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, SuperPoly):
            return self.case == other.case and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == SuperPoly({(): other}, self.case)
        return NotImplemented

    def __hash__(self):
        return hash((self.case, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    # structure -----------------------------------------------------------
    def parity(self) -> int | None:
        """Parity if homogeneous (zero counts as even), else None."""
        ps = {mono_parity(m, self.case) for m in self.terms}
        if not ps:
            return 0
        return ps.pop() if len(ps) == 1 else None

    def max_var(self) -> int:
        return max((i for m in self.terms for i, _ in m), default=-1)

    def coefficient(self, m: Monomial) -> Number:
        return self.terms.get(m, 0)

    def mod(self, p: int) -> "SuperPoly":
        """Reduce integer coefficients mod p (into the range [0, p))."""
        return SuperPoly({m: int(c) % p for m, c in self.terms.items()}, self.case)

    def map_coefficients(self, fn) -> "SuperPoly":
        return SuperPoly({m: fn(c) for m, c in self.terms.items()}, self.case)

    def __repr__(self):
        return f"SuperPoly({format_poly(self)!r}, case={self.case})"

    def __str__(self):
        return format_poly(self)


def mul(P: SuperPoly, Q: SuperPoly) -> SuperPoly:
    """Supercommutative product with Koszul signs."""
    P._check(Q)
    case = P.case
    out: dict[Monomial, Number] = {}
    for a, ca in P.terms.items():
        for b, cb in Q.terms.items():
            r = mono_mul(a, b, case)
            if r is None:
                continue
            s, m = r
            out[m] = out.get(m, 0) + s * ca * cb
    return SuperPoly(out, case)


def _delta_monomial(m: Monomial, case: ParityCase, step: int = 1) -> dict[Monomial, Number]:
    """Apply x_i -> x_{i+step} as a derivation of parity step*|delta| to a monomial."""
    d_par = (step * case.delta) % 2
    out: dict[Monomial, Number] = {}
    left: Monomial = ()
    left_par = 0
    for pos, (i, e) in enumerate(m):
        right = m[pos + 1 :]
        sign = -1 if (d_par and left_par) else 1
        # D(x_i^e) = e x_i^{e-1} x_{i+step}; x_i odd forces e == 1
        inner: Monomial = ((i, e - 1),) if e > 1 else ()
        r = mono_mul(left, inner, case)
        if r is not None:
            s1, lm = r
            r2 = mono_mul(lm, ((i + step, 1),), case)
            if r2 is not None:
                s2, lm = r2
                r3 = mono_mul(lm, right, case)
                if r3 is not None:
                    s3, mono = r3
                    out[mono] = out.get(mono, 0) + sign * s1 * s2 * s3 * e
        left = left + ((i, e),)
        left_par = (left_par + e * case.var_parity(i)) % 2
    return out


def apply_delta(P: SuperPoly, times: int = 1) -> SuperPoly:
    """delta^times(P), delta being the derivation x_i -> x_{i+1}."""
    for _ in range(times):
        out: dict[Monomial, Number] = {}
        for m, c in P.terms.items():
            for mono, v in _delta_monomial(m, P.case).items():
                out[mono] = out.get(mono, 0) + c * v
        P = SuperPoly(out, P.case)
    return P


def apply_shift_derivation(P: SuperPoly, step: int) -> SuperPoly:
    """The derivation x_i -> x_{i+step} of parity step*|delta| (delta^2 for step 2
    when delta is odd)."""
    out: dict[Monomial, Number] = {}
    for m, c in P.terms.items():
        for mono, v in _delta_monomial(m, P.case, step).items():
            out[mono] = out.get(mono, 0) + c * v
    return SuperPoly(out, P.case)


def coefficient_of(P: SuperPoly, M: Monomial) -> Number:
    """Stored coefficient of M (0 when absent or when M has a negative exponent)."""
    if any(e < 0 for _, e in M):
        return 0
    M = tuple((i, e) for i, e in M if e)
    return P.terms.get(M, 0)


def x0_power_times(power: int, shape: Iterable[int]) -> Monomial | None:
    """Monomial x0^power * x_{a1} ... x_{as} for a sorted shape of positive parts."""
    if power < 0:
        return None
    exps: dict[int, int] = {}
    if power:
        exps[0] = power
    for a in shape:
        exps[a] = exps.get(a, 0) + 1
    return tuple(sorted(exps.items()))


# text form ------------------------------------------------------------------

def format_monomial(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in m)


def format_poly(P: SuperPoly) -> str:
    if not P.terms:
        return "0"
    parts = []
    for m, c in sorted(P.terms.items(), key=lambda it: tuple(it[0])):
        c = Fraction(c)
        body = format_monomial(m)
        if body == "1":
            txt = str(abs(c))
        elif abs(c) == 1:
            txt = body
        else:
            txt = f"{abs(c)}*{body}"
        parts.append(("-" if c < 0 else "+", txt))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for s, t in parts[1:]:
        out += f" {s} {t}"
    return out


_TERM = re.compile(r"\s*([+-])?\s*([^+-]+)")


def parse_poly(text: str, case: ParityCase) -> SuperPoly:
    """Parse the rendering produced by ``format_poly``.

    Factors are multiplied in the order written, so ``x2*x1`` picks up the
    Koszul sign when both variables are odd.
    """
    text = text.strip()
    if text in ("", "0"):
        return SuperPoly.zero(case)
    out = SuperPoly.zero(case)
    pos = 0
    for match in _TERM.finditer(text):
        if match.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = match.end()
        sign = -1 if match.group(1) == "-" else 1
        coeff: Number = sign
        factors: list[int] = []
        for f in match.group(2).strip().split("*"):
            f = f.strip()
            if not f:
                raise ValueError(f"empty factor in {text!r}")
            if f[0] == "x":
                name, _, power = f.partition("^")
                idx = int(name[1:])
                factors.extend([idx] * (int(power) if power else 1))
            else:
                coeff *= Fraction(f)
        if isinstance(coeff, Fraction) and coeff.denominator == 1:
            coeff = int(coeff)
        out = out + SuperPoly.monomial(factors, case, coeff)
    if pos != len(text):
        raise ValueError(f"cannot parse {text!r}")
    return out


# evaluation into a finite-dimensional algebra -------------------------------

def eval_hom(P: SuperPoly, A, a, alpha, alpha_parity: int | None = None):
    """Image of P under the ring map V -> A with x_i -> alpha^i(a).

    ``A`` is a structure-constant superalgebra (anything with ``p``,
    ``mul``, ``one``, ``parity_of`` and ``dim``), ``a`` a homogeneous
    element and ``alpha`` the matrix of a homogeneous derivation of A.
    """
    import numpy as np

    from .scalar import rat_mod_p

    p = A.p
    a = np.asarray(a, dtype=np.int64) % p
    alpha = np.asarray(alpha, dtype=np.int64) % p
    pa = A.parity_of(a)
    if pa is not None and np.any(a) and pa != P.case.x0:
        raise ParityMismatch(f"a has parity {pa}, x0 has parity {P.case.x0}")
    if alpha_parity is None:
        alpha_parity = A.map_parity(alpha)
    if alpha_parity is not None and np.any(alpha) and alpha_parity != P.case.delta:
        raise ParityMismatch(f"alpha has parity {alpha_parity}, delta has parity {P.case.delta}")
    n = P.max_var() + 1
    images = [a]
    for _ in range(1, n):
        images.append(alpha @ images[-1] % p)
    out = np.zeros(A.dim, dtype=np.int64)
    for mono, c in P.terms.items():
        term = A.one()
        for i, e in mono:
            for _ in range(e):
                term = A.mul(term, images[i])
        out = (out + rat_mod_p(c, p) * term) % p
    return out
