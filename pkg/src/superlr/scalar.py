"""Exact scalars: binomials, rationals reduced mod p, prime fields, and
integer-valued polynomials written in the binomial basis C(m, i).

Arbitrary-precision integers are Python ints and rationals are
``fractions.Fraction``; both are already canonical and immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Fraction
Number = Union[int, Fraction]


class DenominatorDivisibleByP(ArithmeticError):
    pass


class InconsistentSamples(ValueError):
    pass


class InsufficientSamples(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def check_prime(p: int) -> int:
    """Validate the characteristic: a prime p >= 3."""
    if not isinstance(p, int) or not is_prime(p) or p < 3:
        raise ValueError(f"modulus must be a prime >= 3, got {p!r}")
    return p


def binom(n: int, k: int) -> int:
    """C(n, k) for n >= 0; zero outside 0 <= k <= n."""
    if n < 0:
        raise ValueError("binom expects n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def gbinom(n: int, k: int) -> int:
    """Generalized binomial n(n-1)...(n-k+1)/k! for any integer n, k >= 0."""
    if k < 0:
        return 0
    if n >= 0:
        return binom(n, k)
    # C(-n', k) = (-1)^k C(n' + k - 1, k)
    return (-1) ** k * math.comb(-n + k - 1, k)


def rat_mod_p(r: Number, p: int) -> int:
    """Image of a rational in F_p, as a residue in [0, p)."""
    r = Fraction(r)
    if r.denominator % p == 0:
        raise DenominatorDivisibleByP(f"{r} has denominator divisible by {p}")
    return r.numerator * pow(r.denominator, -1, p) % p


def signed_residue(x: int, p: int) -> int:
    """Representative of x mod p in (-p/2, p/2]."""
    x %= p
    return x - p if x > p // 2 else x


@dataclass(frozen=True)
class Fp:
    """An element of the prime field F_p."""

    residue: int
    modulus: int

    def __post_init__(self):
        check_prime(self.modulus)
        object.__setattr__(self, "residue", self.residue % self.modulus)

    @classmethod
    def of(cls, value: Number, p: int) -> "Fp":
        return cls(rat_mod_p(value, p), p)

    def _coerce(self, other) -> int:
        if isinstance(other, Fp):
            if other.modulus != self.modulus:
                raise ValueError("mixing different prime fields")
            return other.residue
        return rat_mod_p(other, self.modulus)

    def __add__(self, other):
        return Fp(self.residue + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        return Fp(self.residue - self._coerce(other), self.modulus)

    def __rsub__(self, other):
        return Fp(self._coerce(other) - self.residue, self.modulus)

    def __mul__(self, other):
        return Fp(self.residue * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return Fp(-self.residue, self.modulus)

    def inverse(self) -> "Fp":
        if self.residue == 0:
            raise ZeroDivisionError("zero has no inverse in F_p")
        return Fp(pow(self.residue, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        return self * Fp(self._coerce(other), self.modulus).inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return Fp(pow(self.residue, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, Fp):
            return self.modulus == other.modulus and self.residue == other.residue
        if isinstance(other, (int, Fraction)):
            try:
                return self.residue == rat_mod_p(other, self.modulus)
            except DenominatorDivisibleByP:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.residue, self.modulus))

    def __int__(self):
        return self.residue

    def __repr__(self):
        return f"{self.residue} (mod {self.modulus})"


@dataclass(frozen=True)
class BinomPoly:
    """P(m) = sum_i coeffs[i] * C(m, i), integer coefficients.

    Trailing zeros are stripped, so the zero polynomial has ``coeffs == ()``.
    """

    coeffs: tuple[int, ...]

    def __post_init__(self):
        c = [int(x) for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @property
    def degree(self) -> int:
        """Degree in m; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, m: int) -> int:
        return sum(c * gbinom(m, i) for i, c in enumerate(self.coeffs))

    def leading_coefficient(self) -> Fraction:
        """Coefficient of m^d in the monomial basis, i.e. c_d / d!."""
        if not self.coeffs:
            return Fraction(0)
        d = self.degree
        return Fraction(self.coeffs[d], math.factorial(d))

    def shift(self, s: int) -> "BinomPoly":
        """The polynomial m -> P(m + s)."""
        # Vandermonde: C(m+s, i) = sum_a C(s, a) C(m, i-a)
        out = [0] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            for a in range(i + 1):
                out[i - a] += c * gbinom(s, a)
        return BinomPoly(tuple(out))

    def to_monomial(self) -> tuple[Fraction, ...]:
        """Coefficients of 1, m, m^2, ... as exact rationals."""
        out = [Fraction(0)] * len(self.coeffs)
        for i, c in enumerate(self.coeffs):
            # falling factorial m(m-1)...(m-i+1) / i!
            poly = [Fraction(1)]
            for t in range(i):
                nxt = [Fraction(0)] * (len(poly) + 1)
                for e, a in enumerate(poly):
                    nxt[e + 1] += a
                    nxt[e] -= t * a
                poly = nxt
            scale = Fraction(c, math.factorial(i))
            for e, a in enumerate(poly):
                out[e] += scale * a
        return tuple(out)

    def __add__(self, other: "BinomPoly") -> "BinomPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return BinomPoly(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self) -> "BinomPoly":
        return BinomPoly(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "BinomPoly") -> "BinomPoly":
        return self + (-other)

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"{c}*C(m,{i})" for i, c in enumerate(self.coeffs) if c)


def finite_difference(P: BinomPoly) -> BinomPoly:
    """Backward difference (Delta P)(m) = P(m) - P(m - 1)."""
    # Delta C(m, i) = C(m-1, i-1), so Delta P(m) = sum_i c_i C(m-1, i-1) = Q(m-1)
    # with Q having coefficients c_1, c_2, ...; re-express in C(m, .).
    return BinomPoly(P.coeffs[1:]).shift(-1)


def forward_differences(values: Sequence[Number]) -> list[Number]:
    """Leading entries of the forward-difference table of ``values``."""
    row = list(values)
    out = []
    while row:
        out.append(row[0])
        row = [b - a for a, b in zip(row, row[1:])]
    return out


def binom_fit(samples: Iterable[tuple[int, int]], degree: int | None = None) -> BinomPoly:
    """Interpolate integer samples at consecutive integer points.

    With ``degree`` given, the first ``degree + 1`` samples determine the
    polynomial and the remaining ones are checked against it.  Without it the
    unique interpolant through all samples is returned.
    """
    pts = sorted((int(m), v) for m, v in samples)
    if not pts:
        raise InsufficientSamples("no samples")
    ms = [m for m, _ in pts]
    if ms != list(range(ms[0], ms[0] + len(ms))):
        raise ValueError("samples must sit at consecutive integers")
    if degree is None:
        degree = len(pts) - 1
    if len(pts) < degree + 1:
        raise InsufficientSamples(f"need {degree + 1} samples, got {len(pts)}")
    m0 = ms[0]
    diffs = forward_differences([v for _, v in pts[: degree + 1]])
    if any(Fraction(d).denominator != 1 for d in diffs):
        raise InconsistentSamples("samples are not integer valued")
    # Newton form in C(m - m0, i); shift back to the C(m, i) basis.
    P = BinomPoly(tuple(int(d) for d in diffs)).shift(-m0)
    for m, v in pts[degree + 1 :]:
        if P(m) != v:
            raise InconsistentSamples(f"sample at m={m} is {v}, interpolant gives {P(m)}")
    return P
