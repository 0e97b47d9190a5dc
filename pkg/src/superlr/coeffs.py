"""The mu_{k,i} coefficients of f(Gamma_{k,2}), their closed forms, and the
reduced coefficients lambda_i mod p.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .scalar import Fp, binom, check_prime, rat_mod_p
from .smash import gamma_recursive, x0_delta_power
from .superpoly import EVEN_ODD, SuperPoly

HALF = Fraction(1, 2)


class IndexOutOfRange(ValueError):
    pass


def _check(k: int, i: int, k_min: int = 3):
    if k < k_min or not 0 <= i <= k - 2:
        raise IndexOutOfRange(f"mu({k}, {i}) needs k >= {k_min} and 0 <= i <= k-2")


@lru_cache(maxsize=None)
def mu_row(k: int) -> tuple[Fraction, ...]:
    """(mu_{k,0}, ..., mu_{k,k-2}) from the recursion."""
    if k < 3:
        raise IndexOutOfRange("mu is defined for k >= 3")
    if k == 3:
        return (HALF, HALF)
    prev = mu_row(k - 1)
    row = [prev[0] + (-1) ** k]
    for i in range(1, k - 2):
        row.append(prev[i - 1] + (-1) ** i * prev[i])
    row.append(HALF)
    return tuple(row)


def mu(k: int, i: int) -> Fraction:
    _check(k, i)
    return mu_row(k)[i]


def mu_closed(k: int, i: int) -> Fraction:
    """Binomial closed form of mu_{k,i}, valid for k >= 4."""
    _check(k, i, k_min=4)
    if k % 2 == 0:
        r = (k - 2) // 2
        if i % 2 == 0:
            j = i // 2
            return HALF * binom(r, j) + binom(r - 1, j)
        j = (i - 1) // 2
        return Fraction(-binom(r - 1, j + 1))
    r = (k - 3) // 2
    if i % 2 == 0:
        return HALF * binom(r, i // 2)
    j = (i - 1) // 2
    return HALF * binom(r, j) + binom(r, j + 1)


def pair_sign(k: int, i: int) -> int:
    """Koszul sign of Y_{k-2-i} Y_i = sign * Y_i Y_{k-2-i}, where |Y_i| = i mod 2."""
    return (-1) ** ((i * (k - 2 - i)) % 2)


def simplified_coefficients(k: int) -> tuple[Fraction, ...]:
    """Fold mu_{k,i} and mu_{k,k-2-i} onto the lower index i <= (k-2)/2.

    The second factor is moved into canonical order with its Koszul sign:
    no sign for odd k and (-1)^i for even k, which is the reduced-coefficient
    rule when k = 2p.
    """
    row = mu_row(k)
    n = k - 2
    out = []
    for i in range(n // 2 + 1):
        if i == n - i:
            out.append(row[i])
        else:
            out.append(row[i] + pair_sign(k, i) * row[n - i])
    return tuple(out)


@dataclass(frozen=True)
class LambdaVector:
    p: int
    entries: tuple[Fp, ...]

    def residues(self) -> list[int]:
        return [e.residue for e in self.entries]


def lambda_from_mu(p: int) -> LambdaVector:
    check_prime(p)
    vals = simplified_coefficients(2 * p)
    return LambdaVector(p, tuple(Fp.of(v, p) for v in vals))


def lambda_closed(p: int) -> LambdaVector:
    check_prime(p)
    out = []
    for i in range(p):
        if i == p - 1:
            v = (-1) ** ((p - 1) // 2)
        elif i % 2 == 0:
            v = 2 * (-1) ** (i // 2)
        else:
            v = 2 * (-1) ** ((i - 1) // 2)
        out.append(Fp(v, p))
    return LambdaVector(p, tuple(out))


class RouteDisagreement(AssertionError):
    pass


def lambda_vector(p: int) -> LambdaVector:
    """Reduced coefficients lambda_0..lambda_{p-1}; both routes must agree."""
    a, b = lambda_from_mu(p), lambda_closed(p)
    if a != b:
        raise RouteDisagreement(f"p={p}: mu route {a.residues()} vs closed form {b.residues()}")
    return a


def modp_mu_identities(p: int) -> dict[str, bool]:
    """mu_{2p,2j} = (1/2 + j + 1)(-1)^j and mu_{2p,2j+1} = (j+2)(-1)^j mod p."""
    check_prime(p)
    row = mu_row(2 * p)
    ok_even = all(
        rat_mod_p(row[2 * j], p) == rat_mod_p((HALF + j + 1) * (-1) ** j, p)
        for j in range(0, (2 * p - 2) // 2 + 1)
    )
    ok_odd = all(
        rat_mod_p(row[2 * j + 1], p) == rat_mod_p((j + 2) * (-1) ** j, p)
        for j in range(0, (2 * p - 3) // 2 + 1)
    )
    return {"even": ok_even, "odd": ok_odd}


@dataclass
class Gamma2Decomposition:
    k: int
    mu: tuple[Fraction, ...]
    simplified: tuple[Fraction, ...]
    holds: bool


def gamma2_decompose(k: int) -> Gamma2Decomposition:
    """Check Gamma_{k,2} = sum_i mu_{k,i} Y_i Y_{k-2-i} in V, Y_i = (x0 delta)^i (x0)."""
    if k < 3:
        raise IndexOutOfRange("need k >= 3")
    Y = [x0_delta_power(i, EVEN_ODD) for i in range(k - 1)]
    row = mu_row(k)
    total = SuperPoly.zero(EVEN_ODD)
    for i, c in enumerate(row):
        total = total + (Y[i] * Y[k - 2 - i]).scale(c)
    return Gamma2Decomposition(k, row, simplified_coefficients(k), total == gamma_recursive(k, 2, EVEN_ODD))
