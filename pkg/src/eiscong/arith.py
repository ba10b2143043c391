"""Shared elementary number theory: Kronecker symbols, primality, factoring.

Everything here is exact integer arithmetic.  Primality is deterministic
Miller-Rabin for 64-bit inputs and strong-probable-prime beyond that;
factoring is trial division plus Brent's variant of Pollard rho.
"""

from __future__ import annotations

import math
import random

_SMALL_PRIMES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]

# Sufficient witness set for n < 3.3 * 10^24 (Sorenson-Webster).
_MR_BASES = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41]


def is_prime(n: int) -> bool:
    """Deterministic for n < 3.3e24, strong-probable-prime beyond."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    n += 1
    while not is_prime(n):
        n += 1
    return n


def primes_up_to(bound: int) -> list[int]:
    """Simple sieve."""
    if bound < 2:
        return []
    sieve = bytearray([1]) * (bound + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, math.isqrt(bound) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, v in enumerate(sieve) if v]


def _pollard_brent(n: int, rng: random.Random, iters: int) -> int | None:
    """One Brent-rho attempt; returns a nontrivial factor or None."""
    if n % 2 == 0:
        return 2
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = y
    count = 0
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = math.gcd(q, n)
            k += m
            count += m
            if count > iters:
                return None
        r *= 2
    if g == n:
        g = 1
        while g == 1:
            ys = (ys * ys + c) % n
            g = math.gcd(abs(x - ys), n)
    return g if g != n else None


def factorize(n: int, rho_iters: int = 200000) -> dict[int, int] | None:
    """Factor |n| into primes; None if a composite cofactor resists rho.

    Trial division to 10^5, then Brent rho on cofactors.  Cofactors above
    64 bits that rho cannot split within `rho_iters` make the whole call
    return None (callers report the composite).
    """
    n = abs(n)
    if n in (0, 1):
        return {}
    out: dict[int, int] = {}
    for p in primes_up_to(100000):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        if n == 1:
            return out
    rng = random.Random(0xE15)
    stack = [n]
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        f = None
        for _ in range(8):
            f = _pollard_brent(m, rng, rho_iters)
            if f is not None:
                break
        if f is None:
            return None
        stack.append(f)
        stack.append(m // f)
    return out


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), defined for all integers."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    t = 1
    if n < 0:
        n = -n
        if a < 0:
            t = -1
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            t = -t
    a %= n
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                t = -t
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            t = -t
        a %= n
    return t if n == 1 else 0


def squarefree_part(n: int) -> int:
    """Largest squarefree divisor of |n| times the sign."""
    if n == 0:
        return 0
    sign = -1 if n < 0 else 1
    f = factorize(abs(n))
    if f is None:
        raise ValueError("could not factor %d" % n)
    out = 1
    for p, e in f.items():
        if e % 2:
            out *= p
    return sign * out


def is_squarefree(n: int) -> bool:
    n = abs(n)
    if n == 0:
        return False
    f = factorize(n)
    if f is None:
        raise ValueError("could not factor %d" % n)
    return all(e == 1 for e in f.values())


def fundamental_discriminant(m: int) -> int:
    """Fundamental discriminant of Q(sqrt(m)), m any nonsquare integer."""
    d = squarefree_part(m)
    if d == 1:
        raise ValueError("1 is not a quadratic radicand")
    return d if d % 4 == 1 else 4 * d


def crt(r1: int, m1: int, r2: int, m2: int) -> int:
    """x mod m1*m2 with x = r1 (m1), x = r2 (m2); moduli coprime."""
    g, u, _ = ext_gcd(m1, m2)
    if g != 1:
        raise ValueError("moduli not coprime")
    return (r1 + (r2 - r1) * u % m2 * m1) % (m1 * m2)


def ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def val_p(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v
