"""Exact arithmetic for Eisenstein congruence primes and Iwasawa invariants.

Modules:
  quadfield   real quadratic fields, units, factored ideals
  characters  Dirichlet characters, Gauss sums, induced Hecke characters
  lseries     exact L-values at non-positive integers
  eisenstein  coefficient systems, Hecke action, congruence scanner
  padic       p-adic scalars with explicit precision
  iwasawa     O[[T]] at finite precision, Weierstrass preparation
  measures    distributions on unit towers, Kubota-Leopoldt branches
  cli         batch front end with JSON reports and a result cache
"""

__version__ = "0.1.0"

from .quadfield import IdealQF, RealQuadraticField, make_field  # noqa: F401
from .characters import (  # noqa: F401
    DirichletCharacter,
    HeckeCharacterQF,
    induce_quadratic,
    kronecker_character,
)
from .iwasawa import IwasawaElement, lambda_mu, weierstrass_prepare  # noqa: F401
