"""Exact Dirichlet characters, Gauss sums, and quadratic Hecke characters.

Quadratic characters are Kronecker symbols of fundamental discriminants and
evaluate to -1/0/+1 directly.  Characters of higher order store logarithms
against unit-group generators and take values as exact powers of a root of
unity; sums over values are accumulated in Q[x]/(x^e - 1) and reduced mod
the cyclotomic polynomial only for comparison, which keeps everything exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .arith import crt, factorize, fundamental_discriminant, kronecker
from .quadfield import IdealQF, RealQuadraticField, principal_ideal, unit_ideal

EVEN = "even"
ODD = "odd"


# ---------------------------------------------------------------------------
# exact cyclotomic values


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, ascending degree."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, dj in enumerate(den):
            num[i + j] -= c * dj
    assert all(c == 0 for c in num), "inexact cyclotomic division"
    return out


class CycSum:
    """Exact element of Q[x]/(x^e - 1); x stands for a primitive e-th root."""

    __slots__ = ("e", "coeffs")

    def __init__(self, e: int, coeffs=None):
        self.e = e
        self.coeffs = [Fraction(0)] * e if coeffs is None else list(coeffs)

    def add_term(self, exponent: int, scalar) -> None:
        self.coeffs[exponent % self.e] += scalar

    def __add__(self, other: "CycSum") -> "CycSum":
        assert self.e == other.e
        return CycSum(self.e, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other):
        if isinstance(other, CycSum):
            assert self.e == other.e
            out = [Fraction(0)] * self.e
            for i, a in enumerate(self.coeffs):
                if a:
                    for j, b in enumerate(other.coeffs):
                        if b:
                            out[(i + j) % self.e] += a * b
            return CycSum(self.e, out)
        return CycSum(self.e, [a * other for a in self.coeffs])

    __rmul__ = __mul__

    def canonical(self) -> tuple:
        """Residue mod Phi_e as a tuple of Fractions (degree < phi(e))."""
        phi = cyclotomic_poly(self.e)
        deg = len(phi) - 1
        work = list(self.coeffs)
        for i in range(len(work) - 1, deg - 1, -1):
            c = work[i]
            if c:
                for j in range(len(phi)):
                    work[i - deg + j] -= c * phi[j]
        return tuple(work[:deg])

    def as_rational(self) -> Fraction:
        """The value as a rational; raises if it is not one."""
        can = self.canonical()
        if any(c for c in can[1:]):
            raise ValueError("value is not rational")
        return can[0]

    def equals(self, other: "CycSum") -> bool:
        assert self.e == other.e
        return self.canonical() == other.canonical()


# ---------------------------------------------------------------------------
# unit group structure of (Z/m)^x


def _primitive_root(q: int, p: int) -> int:
    """Primitive root mod q = p^e, p odd prime."""
    phi = q - q // p
    fac = factorize(phi)
    for g in range(2, q):
        if math.gcd(g, q) != 1:
            continue
        if all(pow(g, phi // r, q) != 1 for r in fac):
            return g
    raise ArithmeticError("no primitive root found")


class UnitGroup:
    """Generators and orders of (Z/m)^x, with a full dlog table."""

    def __init__(self, m: int):
        self.m = m
        local: list[tuple[int, int]] = []
        if m > 1:
            fac = factorize(m)
            for p in sorted(fac):
                e = fac[p]
                q = p**e
                rest = m // q
                if p == 2:
                    if e == 1:
                        continue
                    if e == 2:
                        local.append((crt(3, q, 1, rest) if rest > 1 else 3, 2))
                    else:
                        g1 = crt(q - 1, q, 1, rest) if rest > 1 else q - 1
                        g2 = crt(5, q, 1, rest) if rest > 1 else 5
                        local.append((g1, 2))
                        local.append((g2, q // 4))
                else:
                    g = _primitive_root(q, p)
                    local.append((crt(g, q, 1, rest) if rest > 1 else g, q - q // p))
        self.gens = tuple(g for g, _ in local)
        self.orders = tuple(o for _, o in local)
        self.table: dict[int, tuple[int, ...]] = {}

        def rec(i: int, a: int, vec: list[int]) -> None:
            if i == len(self.gens):
                self.table[a] = tuple(vec)
                return
            x = a
            for k in range(self.orders[i]):
                vec.append(k)
                rec(i + 1, x, vec)
                vec.pop()
                x = x * self.gens[i] % m
        rec(0, 1 % m, [])

    def dlog(self, a: int) -> tuple[int, ...]:
        if self.m == 1:
            return ()
        a %= self.m
        if a not in self.table:
            raise ValueError(f"{a} is not a unit mod {self.m}")
        return self.table[a]

    def exponent(self) -> int:
        out = 1
        for o in self.orders:
            out = math.lcm(out, o)
        return out

    def units(self) -> list[int]:
        return sorted(self.table)


_UNIT_GROUPS: dict[int, UnitGroup] = {}


def unit_group(m: int) -> UnitGroup:
    if m not in _UNIT_GROUPS:
        _UNIT_GROUPS[m] = UnitGroup(m)
    return _UNIT_GROUPS[m]


# ---------------------------------------------------------------------------
# Dirichlet characters


def is_fundamental_discriminant(D: int) -> bool:
    from .arith import is_squarefree

    if D == 1:
        return True
    if D % 4 == 1:
        return is_squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


class DirichletCharacter:
    """Exact Dirichlet character; quadratic fast path via Kronecker symbols.

    `kind` is "kronecker" (fundamental discriminant D), "trivial", or
    "generic" (log-values against the unit-group generators of the modulus).
    """

    def __init__(self, modulus: int, kind: str, D: int = 0,
                 log_values: tuple[int, ...] = (), zeta_order: int = 1):
        self.modulus = modulus
        self.kind = kind
        self.D = D
        self.log_values = log_values
        self.zeta_order = zeta_order
        if kind == "kronecker":
            self.conductor = abs(D)
            self.order = 2
            self.parity = EVEN if D > 0 else ODD
        elif kind == "trivial":
            self.conductor = 1
            self.order = 1
            self.parity = EVEN
        else:
            ords = [zeta_order // math.gcd(zeta_order, k) if k else 1
                    for k in log_values]
            self.order = math.lcm(*ords) if ords else 1
            self.parity = EVEN if self._log_at(-1) == 0 else ODD
            self.conductor = self._conductor()

    @staticmethod
    def trivial(modulus: int = 1) -> "DirichletCharacter":
        return DirichletCharacter(modulus, "trivial")

    @staticmethod
    def generic(modulus: int, log_values: tuple[int, ...]) -> "DirichletCharacter":
        g = unit_group(modulus)
        e = g.exponent()
        for k, o in zip(log_values, g.orders):
            if (k * o) % e != 0:
                raise ValueError("log value incompatible with generator order")
        return DirichletCharacter(modulus, "generic",
                                  log_values=tuple(log_values), zeta_order=e)

    def _log_at(self, a: int) -> int:
        vec = unit_group(self.modulus).dlog(a)
        return sum(k * v for k, v in zip(self.log_values, vec)) % self.zeta_order

    def _conductor(self) -> int:
        g = unit_group(self.modulus)
        for f in _divisors_of(self.modulus):
            if all(self._log_at(a) == 0 for a in g.table if a % f == 1 % f):
                return f
        return self.modulus

    # -- evaluation ----------------------------------------------------
    def __call__(self, a: int) -> int:
        """Value as an integer; only meaningful for order <= 2."""
        if self.kind == "kronecker":
            return kronecker(self.D, a)
        if self.kind == "trivial":
            return 1
        if self.order > 2:
            raise ValueError("character has order > 2; use value_exp")
        k = self.value_exp(a)
        if k is None:
            return 0
        return 1 if k == 0 else -1

    def value_exp(self, a: int) -> int | None:
        """k with chi(a) = zeta^k, zeta of order zeta_order_eff(); None if 0."""
        if self.kind == "trivial":
            return 0
        if math.gcd(a, self.modulus) != 1:
            return None
        if self.kind == "kronecker":
            return 0 if kronecker(self.D, a) == 1 else 1
        return self._log_at(a)

    def zeta_order_eff(self) -> int:
        if self.kind == "kronecker":
            return 2
        if self.kind == "trivial":
            return 1
        return self.zeta_order

    def is_primitive(self) -> bool:
        return self.conductor == self.modulus

    def is_even(self) -> bool:
        return self.parity == EVEN

    def is_trivial(self) -> bool:
        return self.order == 1

    def mul_quadratic(self, other: "DirichletCharacter") -> "DirichletCharacter":
        """Product of quadratic/trivial Kronecker characters, coprime discs."""
        if self.kind == "trivial":
            return other
        if other.kind == "trivial":
            return self
        if self.kind != "kronecker" or other.kind != "kronecker":
            raise NotImplementedError("general character products not supported")
        if math.gcd(self.D, other.D) != 1:
            raise NotImplementedError("non-coprime discriminant product")
        return kronecker_character(self.D * other.D)

    def to_json(self) -> dict:
        gens = list(unit_group(self.modulus).gens)
        if self.kind == "kronecker":
            vals = [kronecker(self.D, a) for a in gens]
        elif self.kind == "trivial":
            vals = [1 for _ in gens]
        else:
            vals = [f"zeta{self.zeta_order}^{self._log_at(a)}" for a in gens]
        return {"modulus": self.modulus, "conductor": self.conductor,
                "order": self.order, "parity": self.parity,
                "generators": gens, "values": vals}

    def __repr__(self):
        if self.kind == "kronecker":
            return f"chi_{self.D}"
        if self.kind == "trivial":
            return f"1 mod {self.modulus}"
        return f"chi mod {self.modulus} logs {self.log_values}"


def _divisors_of(m: int) -> list[int]:
    out = [1]
    for p, e in factorize(m).items():
        out = [d * p**k for d in out for k in range(e + 1)]
    return sorted(out)


def kronecker_character(D: int) -> DirichletCharacter:
    """The quadratic character a -> (D|a) of modulus and conductor |D|."""
    if D == 1:
        return DirichletCharacter.trivial(1)
    if not is_fundamental_discriminant(D):
        raise ValueError(f"{D} is not a fundamental discriminant")
    return DirichletCharacter(abs(D), "kronecker", D=D)


def enumerate_characters(m: int) -> list[DirichletCharacter]:
    """All Dirichlet characters mod m, as generic-kind objects."""
    g = unit_group(m)
    e = g.exponent()
    out: list[DirichletCharacter] = []

    def rec(i: int, vec: list[int]) -> None:
        if i == len(g.orders):
            out.append(DirichletCharacter.generic(m, tuple(vec)))
            return
        for k in range(0, e, e // g.orders[i]):
            rec(i + 1, vec + [k])

    rec(0, [])
    return out


def primitive_characters(m: int) -> list[DirichletCharacter]:
    return [c for c in enumerate_characters(m) if c.conductor == m]


# ---------------------------------------------------------------------------
# Gauss sums


@dataclass(frozen=True)
class QuadraticGaussSum:
    """Gauss sum of a primitive quadratic character, exactly sqrt(f) or i*sqrt(f).

    The sign is Gauss's theorem: +sqrt(f) for even characters, +i*sqrt(f)
    for odd ones.
    """

    conductor: int
    imaginary: bool

    def abs_squared(self) -> int:
        return self.conductor

    def approx(self):
        import mpmath

        r = mpmath.sqrt(self.conductor)
        return mpmath.mpc(0, r) if self.imaginary else mpmath.mpc(r, 0)

    def __str__(self):
        return ("i*" if self.imaginary else "") + f"sqrt({self.conductor})"


@dataclass(frozen=True)
class ComplexInterval:
    """A complex value with a certified radius bound."""

    real: object
    imag: object
    radius: float


def gauss_sum(chi: DirichletCharacter):
    """tau(chi) = sum_a chi(a) e(a/f); exact for order <= 2, interval beyond."""
    if not chi.is_primitive():
        raise ValueError("gauss_sum requires a primitive character")
    if chi.order == 1:
        return 1
    if chi.order == 2:
        return QuadraticGaussSum(chi.conductor, chi.parity == ODD)
    import mpmath

    f = chi.conductor
    with mpmath.workdps(60):
        e = chi.zeta_order_eff()
        total = mpmath.mpc(0)
        for a in range(1, f):
            k = chi.value_exp(a)
            if k is None:
                continue
            ang = 2 * mpmath.pi * (mpmath.mpf(k) / e + mpmath.mpf(a) / f)
            total += mpmath.mpc(mpmath.cos(ang), mpmath.sin(ang))
        radius = float(f * mpmath.mpf(10) ** -55)
        if radius > 1e-30:
            raise ArithmeticError("conductor too large for certified width")
        return ComplexInterval(total.real, total.imag, radius)


# ---------------------------------------------------------------------------
# quadratic Hecke characters of F, presented by their induced pair


@dataclass(frozen=True)
class HeckeCharacterQF:
    """Character of F whose induction to Q splits as chi1 + chi2.

    Values on ideals coprime to `modulus_ideal` are chi1(N(a)); ideals
    sharing a prime with the modulus map to 0.  `kind` distinguishes the
    induced quadratic family from trivial characters modulo an ideal.
    """

    field: RealQuadraticField
    chi1: DirichletCharacter
    chi2: DirichletCharacter
    conductor_ideal: IdealQF
    modulus_ideal: IdealQF
    kind: str = "induced"
    aux_m: int = 0  # the rational conductor generator, when built by induction

    def value_on_ideal(self, a: IdealQF) -> int:
        return value_on_ideal(self, a)

    def signature(self) -> tuple[str, str]:
        """Parities of the induced pair; (even, even) means totally even."""
        if self.kind == "trivial":
            return (EVEN, EVEN)
        return (self.chi1.parity, self.chi2.parity)

    def is_totally_even(self) -> bool:
        return self.signature() == (EVEN, EVEN)

    def is_totally_odd(self) -> bool:
        return self.signature() == (ODD, ODD)

    def to_json(self) -> dict:
        return {
            "d": self.field.d,
            "m": self.aux_m,
            "kind": self.kind,
            "chi1_disc": self.chi1.D if self.chi1.kind == "kronecker" else 1,
            "chi2_disc": self.chi2.D if self.chi2.kind == "kronecker" else 1,
            "conductor": self.conductor_ideal.to_json(),
            "modulus": self.modulus_ideal.to_json(),
        }


def trivial_hecke(field: RealQuadraticField, modulus: IdealQF | None = None) -> HeckeCharacterQF:
    """The trivial character of F modulo the given ideal (default (1))."""
    triv = DirichletCharacter.trivial(1)
    mod = modulus if modulus is not None else unit_ideal(field)
    return HeckeCharacterQF(field, triv, triv, unit_ideal(field), mod, kind="trivial")


def induce_quadratic(field: RealQuadraticField, m: int) -> HeckeCharacterQF:
    """Quadratic character of F attached to F(sqrt(m))/F with conductor (m).

    chi1 and chi2 are the Kronecker characters of the fundamental
    discriminants of m and d*m.  That the relative extension has conductor
    exactly (m) is the caller's hypothesis, as is h_F^+ = 1.
    """
    from .arith import is_squarefree

    if m < 3:
        raise ValueError("need m >= 3")
    if m % 2 == 0 or math.gcd(m, field.disc) != 1:
        raise ValueError("m must be odd and coprime to the discriminant")
    if not is_squarefree(m):
        raise ValueError("m must be squarefree")
    chi1 = kronecker_character(fundamental_discriminant(m))
    chi2 = kronecker_character(fundamental_discriminant(field.d * m))
    cond = principal_ideal(field, m)
    return HeckeCharacterQF(field, chi1, chi2, cond, cond, kind="induced", aux_m=m)


def value_on_ideal(eps: HeckeCharacterQF, a: IdealQF) -> int:
    """eps(a): 0 on ideals meeting the modulus, else chi1(N(a)), multiplicative."""
    if a.is_one():
        return 1
    if a.shares_rational_prime(eps.modulus_ideal):
        return 0
    if eps.kind == "trivial":
        return 1
    return eps.chi1(a.norm)
