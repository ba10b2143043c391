"""Special values of Dirichlet and induced Hecke L-functions at s <= 0.

All values are exact: rationals for quadratic characters, cyclotomic
rationals otherwise, via generalized Bernoulli numbers
B_{n,chi} = f^(n-1) sum_{a=1..f} chi(a) B_n(a/f).  No floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field
from fractions import Fraction

from .arith import factorize
from .characters import CycSum, DirichletCharacter, HeckeCharacterQF
from .quadfield import IdealQF

_BERNOULLI_CACHE: list[Fraction] = [Fraction(1)]


def bernoulli(n: int) -> Fraction:
    """Classical Bernoulli number B_n (B_1 = -1/2), by the standard recurrence."""
    if n < 0:
        raise ValueError("need n >= 0")
    if n > 10**4:
        raise ValueError("Bernoulli cap is 10^4")
    while len(_BERNOULLI_CACHE) <= n:
        m = len(_BERNOULLI_CACHE)
        # sum_{k<=m} C(m+1,k) B_k = 0
        acc = Fraction(0)
        for k in range(m):
            acc += math.comb(m + 1, k) * _BERNOULLI_CACHE[k]
        _BERNOULLI_CACHE.append(-acc / (m + 1))
    return _BERNOULLI_CACHE[n]


def bernoulli_poly(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_k C(n,k) B_k x^(n-k), exact."""
    acc = Fraction(0)
    xp = Fraction(1)
    for k in range(n, -1, -1):
        acc += math.comb(n, k) * bernoulli(k) * xp
        xp *= x
    return acc


def gen_bernoulli(chi: DirichletCharacter, n: int):
    """B_{n,chi} for chi of modulus equal to its conductor.

    Rational for order <= 2, a CycSum otherwise.  The n = 2 quadratic case
    runs on integers over a common denominator (conductors above 10^5 stay
    fast).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    if not chi.is_primitive() and chi.kind != "trivial":
        raise ValueError("gen_bernoulli needs modulus = conductor")
    f = chi.conductor
    if f == 1:
        return bernoulli_poly(n, Fraction(1))  # B_n(1): B_n for n != 1, +1/2 at n = 1
    if chi.order <= 2:
        if n == 2:
            # B_2(a/f) = (6a^2 - 6af + f^2) / (6 f^2); sum the numerators
            s = 0
            for a in range(1, f):
                c = chi(a)
                if c:
                    s += c * (6 * a * a - 6 * a * f + f * f)
            return Fraction(s, 6 * f)
        acc = Fraction(0)
        for a in range(1, f):
            c = chi(a)
            if c:
                acc += c * bernoulli_poly(n, Fraction(a, f))
        return f ** (n - 1) * acc
    e = chi.zeta_order_eff()
    acc = CycSum(e)
    for a in range(1, f):
        k = chi.value_exp(a)
        if k is not None:
            acc.add_term(k, f ** (n - 1) * bernoulli_poly(n, Fraction(a, f)))
    return acc


@dataclass
class LValueRecord:
    """An exact special value L(s, character) with its stripping history."""

    character: object
    s: int
    value: Fraction
    stripped: tuple = ()
    flags: tuple = dataclass_field(default_factory=tuple)

    @property
    def weight(self) -> int:
        """n with s = 1 - n."""
        return 1 - self.s

    def factorization(self, rho_iters: int = 200000):
        """Prime factorization of the numerator; None on rho failure."""
        num = self.value.numerator
        return factorize(num, rho_iters=rho_iters)

    def to_json(self) -> dict:
        fac = self.factorization()
        return {
            "s": self.s,
            "value": str(self.value.numerator) if self.value.denominator == 1
            else f"{self.value.numerator}/{self.value.denominator}",
            "factorization": None if fac is None else sorted([p, e] for p, e in fac.items()),
            "stripped": [str(q) for q in self.stripped],
            "flags": list(self.flags),
        }


def dirichlet_L_neg(chi: DirichletCharacter, n: int) -> LValueRecord:
    """L(1-n, chi) = -B_{n,chi}/n, exact.

    The excluded point (trivial chi, n = 1, the zeta pole) returns
    -B_1 = 1/2 carrying a "non-primitive-at-infinity" flag instead of
    raising.
    """
    if n < 1:
        raise ValueError("need n >= 1")
    flags = ()
    if chi.is_trivial() and n == 1:
        return LValueRecord(chi, 0, Fraction(1, 2), flags=("non-primitive-at-infinity",))
    b = gen_bernoulli(chi, n)
    if isinstance(b, CycSum):
        raise NotImplementedError("exact L-values only for order <= 2 here")
    return LValueRecord(chi, 1 - n, -b / n, flags=flags)


def hecke_L_neg_induced(eps: HeckeCharacterQF, n: int) -> LValueRecord:
    """L_F(1-n, eps) as the product of the two induced Dirichlet factors."""
    if eps.kind != "induced":
        raise ValueError("need a character from induce_quadratic")
    l1 = dirichlet_L_neg(eps.chi1, n)
    l2 = dirichlet_L_neg(eps.chi2, n)
    return LValueRecord(eps, 1 - n, l1.value * l2.value,
                        flags=tuple(set(l1.flags + l2.flags)))


def strip_euler(rec: LValueRecord, sigma0) -> LValueRecord:
    """Multiply by prod_{q in sigma0} (1 - eps(q) N(q)^(n-1)) at s = 1-n.

    Primes dividing the conductor contribute the factor 1 (eps(q) = 0).
    The exponent is n - 1: the factor is 1 - eps(q) N(q)^(-s) specialized
    to s = 1 - n.
    """
    eps = rec.character
    n = rec.weight
    val = rec.value
    stripped = list(rec.stripped)
    for q in sigma0:
        if not isinstance(q, IdealQF):
            raise TypeError("sigma0 must contain ideals")
        ev = eps.value_on_ideal(q) if isinstance(eps, HeckeCharacterQF) else eps(q.norm)
        val *= 1 - ev * Fraction(q.norm) ** (n - 1)
        stripped.append(q)
    return LValueRecord(eps, rec.s, val, tuple(stripped), rec.flags)
