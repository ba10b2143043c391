"""Eisenstein coefficient systems, Hecke action, and the congruence scanner.

Coefficient systems map integral ideals of norm <= bound to exact ring
elements.  The Hecke action follows the classical double-coset relation
C(m, f|V(q)) = sum over ideals c containing m + q of N(c) eps(c) C(c^-2 m q);
for prime q the sum has at most the two terms c = (1) and c = q.

The scanner reproduces the worked congruence-prime search: candidate primes
divide the exact value L_F(-1, eps), then must pass the level-coefficient
test, the residue-unit-group and index coprimality tests, and the
fundamental-unit order test.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field
from .characters import HeckeCharacterQF, induce_quadratic, trivial_hecke
from .lseries import hecke_L_neg_induced
from .quadfield import (
    IdealQF,
    RealQuadraticField,
    enumerate_ideals,
    ideal_divide,
    ideal_divisors,
    ideal_gcd,
    ideal_mul,
    ideal_pow,
    index_iota1,
    principal_ideal,
    unit_power_check,
)


class ProductCharacter:
    """Pointwise product psi1 * psi2 on ideals; the S-operator scalar."""

    def __init__(self, psi1: HeckeCharacterQF, psi2: HeckeCharacterQF):
        self.psi1 = psi1
        self.psi2 = psi2

    def value_on_ideal(self, a: IdealQF):
        return self.psi1.value_on_ideal(a) * self.psi2.value_on_ideal(a)


@dataclass(frozen=True)
class EisensteinSeries:
    """Weight-2 Eisenstein data (psi1, psi2); level is the product of moduli."""

    psi1: HeckeCharacterQF
    psi2: HeckeCharacterQF

    @property
    def field(self) -> RealQuadraticField:
        return self.psi1.field

    @property
    def level(self) -> IdealQF:
        return ideal_mul(self.psi1.modulus_ideal, self.psi2.modulus_ideal)

    def character(self) -> ProductCharacter:
        return ProductCharacter(self.psi1, self.psi2)

    def coefficient_at(self, a: IdealQF):
        """C(a) = sum_{c | a} psi1(a/c) psi2(c) N(c)."""
        acc = 0
        for c in ideal_divisors(a):
            v1 = self.psi1.value_on_ideal(ideal_divide(a, c))
            if v1:
                v2 = self.psi2.value_on_ideal(c)
                if v2:
                    acc += v1 * v2 * c.norm
        return acc

    def t_eigenvalue(self, q: IdealQF):
        """psi1(q) + psi2(q) N(q) for prime q not dividing the level."""
        return self.psi1.value_on_ideal(q) + self.psi2.value_on_ideal(q) * q.norm


@dataclass
class CoefficientSystem:
    """Fourier coefficients C(a) for N(a) <= bound, with the S-scalar data."""

    field: RealQuadraticField
    bound: int
    coeffs: dict
    s_char: object  # value_on_ideal-capable; the S(c)-eigenvalue scalar
    level: IdealQF

    def at(self, a: IdealQF):
        return self.coeffs[a]

    def ideals(self):
        return sorted(self.coeffs, key=lambda i: (i.norm, i.factors))


def eisenstein_coeffs(series: EisensteinSeries, bound: int) -> CoefficientSystem:
    """Divisor-sum coefficients of the Eisenstein series up to the bound."""
    eps = series.character()
    s1, s2 = series.psi1.signature(), series.psi2.signature()
    if any(a != b for a, b in zip(s1, s2)):
        raise ValueError("psi1*psi2 is not totally even; no such series")
    coeffs = {}
    for a in enumerate_ideals(series.field, bound):
        coeffs[a] = series.coefficient_at(a)
    return CoefficientSystem(series.field, bound, coeffs, eps, series.level)


def hecke_T(sys: CoefficientSystem, q: IdealQF) -> CoefficientSystem:
    """T(q) for prime q not dividing the level; bound shrinks to bound//N(q)."""
    if not q.coprime_to(sys.level):
        raise ValueError("q divides the level; use hecke_U")
    nq = q.norm
    new_bound = sys.bound // nq
    out = {}
    for m in sys.coeffs:
        if m.norm > new_bound:
            continue
        acc = sys.coeffs[ideal_mul(m, q)]
        g = ideal_gcd(m, q)
        if not g.is_one():
            # c = q term: N(q) eps(q) C(m q / q^2)
            ev = sys.s_char.value_on_ideal(q)
            if ev:
                acc = acc + nq * ev * sys.coeffs[ideal_divide(m, q)]
        out[m] = acc
    return CoefficientSystem(sys.field, new_bound, out, sys.s_char, sys.level)


def hecke_U(sys: CoefficientSystem, q: IdealQF) -> CoefficientSystem:
    """U(q) for prime q dividing the level: C(m) -> C(mq)."""
    if q.coprime_to(sys.level):
        raise ValueError("q does not divide the level; use hecke_T")
    new_bound = sys.bound // q.norm
    out = {m: sys.coeffs[ideal_mul(m, q)] for m in sys.coeffs if m.norm <= new_bound}
    return CoefficientSystem(sys.field, new_bound, out, sys.s_char, sys.level)


class _TwistedScalar:
    def __init__(self, base, chi):
        self.base = base
        self.chi = chi

    def value_on_ideal(self, a):
        v = self.chi.value_on_ideal(a)
        return self.base.value_on_ideal(a) * v * v


def twist(sys: CoefficientSystem, chi: HeckeCharacterQF) -> CoefficientSystem:
    """C(a) -> C(a) chi(a); the S-scalar picks up chi^2."""
    out = {a: c * chi.value_on_ideal(a) for a, c in sys.coeffs.items()}
    return CoefficientSystem(sys.field, sys.bound, out,
                             _TwistedScalar(sys.s_char, chi),
                             ideal_mul(sys.level, chi.modulus_ideal))


@dataclass
class EigenReport:
    ok: bool
    degenerate: bool = False
    failures: list = dataclass_field(default_factory=list)  # (op, q, ideal, expected, got)
    checked: int = 0


def is_eigenform(sys: CoefficientSystem, primes: list[IdealQF],
                 expected: dict | None = None) -> EigenReport:
    """Check sys|V(q) = lambda_q sys on the shrunken bound for each prime q.

    Expected eigenvalues default to C(q) for U(q) (q | level) and must be
    supplied (or derivable) for T(q).  A zero system is flagged degenerate.
    """
    report = EigenReport(ok=True)
    if all(not c for c in sys.coeffs.values()):
        report.degenerate = True
        return report
    for q in primes:
        if q.coprime_to(sys.level):
            lam = (expected or {}).get(q)
            if lam is None:
                raise ValueError(f"no expected T-eigenvalue for {q}")
            image = hecke_T(sys, q)
            opname = "T"
        else:
            lam = (expected or {}).get(q, sys.coeffs.get(q))
            if lam is None:
                raise ValueError(f"bound too small to read U-eigenvalue at {q}")
            image = hecke_U(sys, q)
            opname = "U"
        for m in image.ideals():
            got = image.at(m)
            want = lam * sys.at(m)
            report.checked += 1
            if got != want:
                report.ok = False
                report.failures.append((opname, str(q), str(m), want, got))
                break
    return report


@dataclass
class CongruenceReport:
    """Per-prime verdict for the congruence-prime hypotheses."""

    d: int
    m: int
    p: int
    lvalue: str
    lvalue_factorization: list | None
    hypothesis_b: bool
    hypothesis_c: bool
    residue_unit_check: bool
    iota1_check: bool
    unit_order_check: bool
    verdict: str
    label: str = "surrogate-candidate"
    unchecked: tuple = (
        "cohomology torsion-freeness (hypothesis (a)) is assumed, not computed",
        "the residue-unit condition stands in for the undefined o_{F,n}^{x2} index",
    )

    def to_json(self) -> dict:
        return {
            "d": self.d, "m": self.m, "p": self.p,
            "lvalue": self.lvalue,
            "lvalue_factorization": self.lvalue_factorization,
            "hypothesis_b": self.hypothesis_b,
            "hypothesis_c": self.hypothesis_c,
            "residue_unit_check": self.residue_unit_check,
            "iota1_check": self.iota1_check,
            "unit_order_check": self.unit_order_check,
            "verdict": self.verdict,
            "label": self.label,
            "unchecked_assumptions": list(self.unchecked),
        }


def stripped_eisenstein(field: RealQuadraticField, m: int) -> EisensteinSeries:
    """E_2(eps, 1 mod (m)): both Euler factors at the level primes removed."""
    eps = induce_quadratic(field, m)
    one_mod_m = trivial_hecke(field, principal_ideal(field, m))
    return EisensteinSeries(eps, one_mod_m)


def scan_congruence(field: RealQuadraticField, m: int, *,
                    rho_iters: int = 200000,
                    threads: int = 1) -> list[CongruenceReport]:
    """Candidate congruence primes for the weight-2 Eisenstein series at (m).

    Candidates are the prime divisors of the exact value L_F(-1, eps)
    surviving the filters (p | 6 Delta_F, p <= 4, p | m); each then faces
    the level-coefficient test (b), the residue-unit and index-coprimality
    tests, and the totally-positive-unit order test.  Verdict "candidate"
    means every implemented check passed; cohomology torsion-freeness
    remains an explicit unchecked assumption.
    """
    eps = induce_quadratic(field, m)
    lrec = hecke_L_neg_induced(eps, 2)
    fac = lrec.factorization(rho_iters=rho_iters)
    lstr = str(lrec.value) if lrec.value.denominator == 1 else \
        f"{lrec.value.numerator}/{lrec.value.denominator}"
    if fac is None:
        return [CongruenceReport(field.d, m, 0, lstr, None,
                                 False, False, False, False, False,
                                 verdict="unfactored")]
    series = stripped_eisenstein(field, m)
    level = series.level
    level_primes = level.prime_factors()
    m_sq = ideal_pow(principal_ideal(field, m), 2)
    iota1 = index_iota1(field, m_sq)
    unit_count = m_sq.residue_unit_count()

    survivors = []
    for p in sorted(fac):
        if p <= 4 or (6 * field.disc) % p == 0 or m % p == 0:
            continue
        survivors.append(p)

    def check(p: int) -> CongruenceReport:
        hyp_b = any((series.coefficient_at(q) - q.norm) % p != 0 for q in level_primes)
        hyp_c = lrec.value != 0 and fac.get(p, 0) >= 1
        res_ok = unit_count % p != 0
        iota_ok = iota1 % p != 0
        unit_ok = unit_power_check(field, p, iota1) == "coprime"
        ok = hyp_b and hyp_c and res_ok and iota_ok and unit_ok
        return CongruenceReport(
            field.d, m, p, lstr, sorted([q, e] for q, e in fac.items()),
            hyp_b, hyp_c, res_ok, iota_ok, unit_ok,
            verdict="candidate" if ok else "rejected",
        )

    if threads > 1 and len(survivors) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = list(pool.map(check, survivors))
    else:
        reports = [check(p) for p in survivors]
    return sorted(reports, key=lambda r: r.p)
