"""Shapes (partitions written nondecreasing), the Phi/Psi insertion maps,
Leibniz signs, and the integer-valued polynomials P_lambda(m), Q_lambda(m)
read off the diagonals of the Gamma table.  Everything here lives in the
x0 even / delta odd case.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from .scalar import BinomPoly, InsufficientSamples, binom_fit, check_prime
from .report import Report
from .smash import GammaTable
from .superpoly import (
    EVEN_ODD,
    SuperPoly,
    apply_delta,
    apply_shift_derivation,
    coefficient_of,
    x0_power_times,
)

Shape = tuple[int, ...]
Pointer = tuple[Shape, int]  # (mu, u) with 1 <= u <= len(mu)


def shapes_of_weight(t: int) -> list[Shape]:
    """All nondecreasing sequences of positive integers summing to t."""
    if t < 0:
        raise ValueError("weight must be nonnegative")
    return list(_partitions(t, 1))


@lru_cache(maxsize=None)
def _partitions(t: int, smallest: int) -> tuple[Shape, ...]:
    if t == 0:
        return ((),)
    out = []
    for first in range(smallest, t + 1):
        for rest in _partitions(t - first, first):
            out.append((first,) + rest)
    return tuple(out)


def weight(mu: Shape) -> int:
    return sum(mu)


def is_admissible(mu: Shape) -> bool:
    """No odd part repeats, so x^mu is nonzero when the odd-indexed x_i are odd."""
    odd = [a for a in mu if a % 2]
    return len(odd) == len(set(odd))


def phi(i: int, mu: Shape) -> Shape:
    return tuple(sorted(mu + (i,)))


def phi_inverse(i: int, t: int, nu: Shape, U: Iterable[Shape] | None = None) -> list[Shape]:
    """Preimages of nu under Phi_i on S^t, optionally restricted to U."""
    allowed = None if U is None else set(U)
    if i not in nu or weight(nu) != t + i:
        return []
    rest = list(nu)
    rest.remove(i)
    mu = tuple(rest)
    if allowed is not None and mu not in allowed:
        return []
    return [mu]


def inc(mu: Shape, u: int, i: int) -> tuple[int, ...]:
    if not 1 <= u <= len(mu):
        raise IndexError(f"pointer {u} outside 1..{len(mu)}")
    out = list(mu)
    out[u - 1] += i
    return tuple(out)


def psi(i: int, pointer: Pointer) -> Shape:
    mu, u = pointer
    return tuple(sorted(inc(mu, u, i)))


def psi_inverse(i: int, t: int, nu: Shape, U: Iterable[Shape] | None = None) -> list[Pointer]:
    """All (mu, u) with mu in S^t (or U) and Psi_i(mu, u) = nu."""
    allowed = None if U is None else set(U)
    if weight(nu) != t + i:
        return []
    out = []
    seen = set()
    for pos, b in enumerate(nu):
        if b - i < 1:
            continue
        rest = list(nu[:pos] + nu[pos + 1 :])
        mu = tuple(sorted(rest + [b - i]))
        if mu in seen:
            continue
        seen.add(mu)
        if allowed is not None and mu not in allowed:
            continue
        for u in range(1, len(mu) + 1):
            if psi(i, (mu, u)) == nu:
                out.append((mu, u))
    return sorted(out)


def leibniz_sign(pointer: Pointer) -> int:
    mu, u = pointer
    if not 1 <= u <= len(mu):
        raise IndexError(f"pointer {u} outside 1..{len(mu)}")
    return (-1) ** sum(1 for a in mu[: u - 1] if a % 2)


def is_packed(lam: Shape) -> bool:
    r = weight(lam)
    if r == 0:
        return False
    return lam == packed_shape(r)


def packed_shape(r: int) -> Shape:
    if r % 2 == 0:
        return (2,) * (r // 2)
    return (1,) + (2,) * ((r - 1) // 2)


def no_one(t: int) -> list[Shape]:
    return [mu for mu in shapes_of_weight(t) if 1 not in mu]


def shape_monomial(power: int, mu: Shape) -> SuperPoly:
    m = x0_power_times(power, mu)
    if m is None:
        return SuperPoly.zero(EVEN_ODD)
    # x^mu with ascending factors is the canonical order, coefficient +1;
    # a repeated odd part makes it vanish.
    if not is_admissible(mu):
        return SuperPoly.zero(EVEN_ODD)
    return SuperPoly({m: 1}, EVEN_ODD)


def shape_coefficient(P: SuperPoly, power: int, mu: Shape) -> int:
    """[x0^power x^mu] P, zero for negative powers."""
    if power < 0:
        return 0
    return coefficient_of(P, x0_power_times(power, mu))


# -- Gamma tables restricted to the diagonals the shape calculus needs --------

@lru_cache(maxsize=None)
def _diagonal_table(r_max: int) -> GammaTable:
    return GammaTable(EVEN_ODD, 0, max_diagonal=r_max)


def gamma_diag(k: int, r: int, table: GammaTable | None = None) -> SuperPoly:
    """Gamma_{k, k-r} for r >= 0 (zero outside the valid range)."""
    table = table or _diagonal_table(max(r, 8))
    return table.get(k, k - r)


def P_value(lam: Shape, m: int, table: GammaTable | None = None) -> int:
    r = weight(lam)
    if m < math.ceil((r + 1) / 2):
        return 0
    return shape_coefficient(gamma_diag(2 * m, r, table), 2 * m - len(lam), lam)


def Q_value(lam: Shape, m: int, table: GammaTable | None = None) -> int:
    r = weight(lam)
    if m < math.ceil(r / 2):
        return 0
    return shape_coefficient(gamma_diag(2 * m + 1, r, table), 2 * m + 1 - len(lam), lam)


@dataclass
class PLambda:
    shape: Shape
    kind: str  # "P" or "Q"
    samples: dict[int, int]
    poly: BinomPoly
    held_out_ok: bool

    @property
    def weight(self) -> int:
        return weight(self.shape)

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __call__(self, m: int) -> int:
        return self.poly(m)


def _extract(kind: str, lam: Shape, m_max: int, table: GammaTable | None) -> PLambda:
    r = weight(lam)
    if m_max < r + 2:
        raise InsufficientSamples(f"need m_max >= {r + 2} for a weight-{r} shape, got {m_max}")
    value = P_value if kind == "P" else Q_value
    samples = {m: value(lam, m, table) for m in range(m_max + 1)}
    fit_pts = [(m, samples[m]) for m in range(r + 3)]
    poly = binom_fit(fit_pts, degree=r)
    held = all(poly(m) == samples[m] for m in range(r + 3, m_max + 1))
    return PLambda(lam, kind, samples, poly, held)


def extract_P(lam: Shape, m_max: int, table: GammaTable | None = None) -> PLambda:
    """Samples of P_lambda(m) for m <= m_max, fitted on m <= r+2, the rest held out."""
    return _extract("P", tuple(lam), m_max, table)


def extract_Q(lam: Shape, m_max: int, table: GammaTable | None = None) -> PLambda:
    return _extract("Q", tuple(lam), m_max, table)


# -- coefficient extraction from partial homogeneous sums ---------------------

@dataclass
class PartialSum:
    """H = sum_{mu in U} C_mu x0^{N - |mu|} x^mu for one fixed value of N."""

    t: int
    N: int
    coeffs: Mapping[Shape, int] = field(default_factory=dict)

    def to_poly(self) -> SuperPoly:
        out = SuperPoly.zero(EVEN_ODD)
        for mu, c in self.coeffs.items():
            if self.N - len(mu) >= 0:
                out = out + shape_monomial(self.N - len(mu), mu).scale(c)
        return out

    @classmethod
    def from_poly(cls, P: SuperPoly, t: int) -> "PartialSum":
        """Read a homogeneous weight-t polynomial of constant total degree."""
        coeffs: dict[Shape, int] = {}
        N = None
        for mono, c in P.terms.items():
            e0 = dict(mono).get(0, 0)
            mu: list[int] = []
            for i, e in mono:
                if i:
                    mu.extend([i] * e)
            deg = e0 + len(mu)
            if N is None:
                N = deg
            elif N != deg:
                raise ValueError("polynomial is not of constant total degree")
            if sum(mu) != t:
                raise ValueError("polynomial is not of constant weight")
            coeffs[tuple(mu)] = c
        return cls(t, N if N is not None else 0, coeffs)


def d3_formula(H: PartialSum, nu: Shape) -> int:
    """[x0^{N-|nu|} x^nu] delta(H) through the Phi_1/Psi_1 preimages."""
    U = H.coeffs.keys()
    total = 0
    for mu in phi_inverse(1, H.t, nu, U):
        total += (H.N - len(mu)) * H.coeffs[mu]
    for mu, u in psi_inverse(1, H.t, nu, U):
        total += leibniz_sign((mu, u)) * H.coeffs[mu]
    return total


def d4_formula(H: PartialSum, nu: Shape) -> int:
    """[x0^{N+2-|nu|} x^nu] x0^2 delta^2(H) through the Phi_2/Psi_2 preimages."""
    U = H.coeffs.keys()
    total = 0
    for mu in phi_inverse(2, H.t, nu, U):
        total += (H.N - len(mu)) * H.coeffs[mu]
    for mu, u in psi_inverse(2, H.t, nu, U):
        total += H.coeffs[mu]
    return total


def check_coeff_extraction(H: PartialSum, nu: Shape, which: str = "D3") -> bool:
    """Compare the preimage-sum formula with direct differentiation.

    Only admissible nu name an actual monomial; for the others both sides
    are compared after noting that the monomial is zero in V.
    """
    P = H.to_poly()
    if which == "D3":
        direct = shape_coefficient(apply_delta(P), H.N - len(nu), nu)
        formula = d3_formula(H, nu)
    elif which == "D4":
        x0sq = SuperPoly.var(0, EVEN_ODD, 2)
        direct = shape_coefficient(x0sq * apply_shift_derivation(P, 2), H.N + 2 - len(nu), nu)
        formula = d4_formula(H, nu)
    else:
        raise ValueError(which)
    if not is_admissible(nu):
        return direct == 0
    return direct == formula


# -- the finite-difference recursion for P_lambda ----------------------------

def delta_P_rhs(lam: Shape, m: int, P: Callable[[Shape, int], int]) -> int:
    """Right-hand side of the finite-difference identity for P_lambda(m).

    Four contributions: x0^2 delta^2 of the diagonal r-2 row (Phi_2/Psi_2
    preimages), x0 x1 delta of the same row, and x0 x1 times the diagonal
    r-1 row.  The last carries the sign -(-1)^r of the two-step identity.
    ``P(mu, m)`` must return P_mu(m), with P_() = 1 standing for Gamma_{0,0}.
    """
    r = weight(lam)
    total = 0
    for mu in phi_inverse(2, r - 2, lam):
        total += (2 * m - 2 - len(mu)) * P(mu, m - 1)
    for mu, u in psi_inverse(2, r - 2, lam):
        total += P(mu, m - 1)
    for nu in phi_inverse(1, r - 1, lam, no_one(r - 1)):
        for mu, u in psi_inverse(1, r - 2, nu):
            total += leibniz_sign((mu, u)) * P(mu, m - 1)
    sign = -((-1) ** r)
    for mu in phi_inverse(1, r - 1, lam, no_one(r - 1)):
        total += sign * P(mu, m - 1)
    return total


def _P_with_unit(table: GammaTable | None):
    def P(mu: Shape, m: int) -> int:
        if not mu:
            return 1 if m >= 0 else 0
        return P_value(mu, m, table)

    return P


def check_delta_P(lam: Shape, m_values: Iterable[int], table: GammaTable | None = None) -> bool:
    """P_lambda(m) - P_lambda(m-1) equals the preimage-sum right-hand side."""
    P = _P_with_unit(table)
    return all(P(lam, m) - P(lam, m - 1) == delta_P_rhs(lam, m, P) for m in m_values)


# -- the four packing statements ----------------------------------------------

def packing_statements(r: int) -> dict[str, bool]:
    """Exhaustive check of the four statements about packed preimages at weight r."""
    out = {}
    lams = shapes_of_weight(r)
    if r >= 3:
        prev = packed_shape(r - 2)
        hits = [lam for lam in lams if prev in phi_inverse(2, r - 2, lam)]
        key = "prop1a" if r % 2 else "prop1b"
        out[key] = all(is_packed(lam) for lam in hits) and bool(hits)
    if r >= 2:
        prev = packed_shape(r - 1)
        hits = [lam for lam in lams if prev in phi_inverse(1, r - 1, lam, no_one(r - 1))]
        if r % 2:
            out["prop2a"] = all(is_packed(lam) for lam in hits) and bool(hits)
        else:
            out["prop2b"] = not hits
    return out


def leading_coefficient_packed(r: int) -> Fraction:
    return Fraction(1, math.factorial(r // 2))


# -- the bundled report -------------------------------------------------------

def verify_appendix_bundle(r_max: int = 7, p_list: Iterable[int] = (3, 5)) -> Report:
    """Every appendix claim for weights up to r_max and the listed primes."""
    if r_max < 2:
        raise ValueError("r_max must be at least 2")
    p_list = [check_prime(p) for p in p_list]
    table = GammaTable(EVEN_ODD, 0, max_diagonal=max([r_max] + p_list))
    rep = Report("appendix", extra={"r_max": r_max, "p": p_list})

    m_max = r_max + 4
    fits: dict[Shape, PLambda] = {}
    for r in range(1, r_max + 1):
        for lam in shapes_of_weight(r):
            P = extract_P(lam, m_max, table)
            Q = extract_Q(lam, m_max, table)
            fits[lam] = P
            tag = ",".join(map(str, lam))
            rep.add(f"interp-P({tag})", "polym", P.held_out_ok, "held-out sample mismatch")
            rep.add(f"interp-Q({tag})", "polym", Q.held_out_ok, "held-out sample mismatch")
            rep.add(f"deg-P({tag})<=r", "A16", P.degree <= r, f"degree {P.degree}")
            rep.add(f"deg-Q({tag})<=r", "A16", Q.degree <= r, f"degree {Q.degree}")
            packed = is_packed(lam)
            rep.add(f"deg-P({tag})=r iff packed", "A16", (P.degree == r) == packed, f"degree {P.degree}, packed={packed}")
            if packed:
                lc = P.poly.leading_coefficient()
                want = leading_coefficient_packed(r)
                rep.add(f"lead-P({tag})", "A17", lc == want, f"{lc} != {want}")
            if is_admissible(lam):
                ok = check_delta_P(lam, range(2, m_max + 1), table)
                rep.add(f"delta-P({tag})", "A16 finite difference", ok, "difference mismatch")
        for key, ok in packing_statements(r).items():
            rep.add(f"{key}(r={r})", key, ok, f"r={r}")

    for p in p_list:
        bad = []
        recon = SuperPoly.zero(EVEN_ODD)
        for lam in shapes_of_weight(p):
            fit = fits.get(lam) or extract_P(lam, p + 4, table)
            val = fit(p)
            if val % p:
                bad.append(f"P{lam}({p})={val}")
            recon = recon + shape_monomial(2 * p - len(lam), lam).scale(val)
        rep.add(f"P_lambda({p})=0 mod {p}", "Gamma2pp", not bad, "; ".join(bad))
        target = table.get(2 * p, p)
        rep.add(f"shape-sum=Gamma_{2 * p},{p}", "Gamma2pp", recon == target, "reconstruction differs")
        rep.add(f"Gamma_{2 * p},{p}=0 mod {p}", "Gamma2pp", all(c % p == 0 for c in target.terms.values()), str(target))
    return rep
