"""Arbitrary-precision primality, neighbor-prime search, and power-of-two gaps.

Everything here is a pure function of its arguments; there is no shared
mutable state, so callers may use these from any number of threads.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum

__all__ = [
    "Primality",
    "PrimalityVerdict",
    "DETERMINISTIC_LIMIT",
    "DEFAULT_ROUNDS",
    "is_prime",
    "is_power_of_two",
    "power_of_two_exponent",
    "next_prime",
    "prev_prime",
    "mod_pow",
]


def _small_sieve(limit: int) -> list[int]:
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = bytearray(len(flags[p * p :: p]))
    return [i for i, f in enumerate(flags) if f]


# Trial-division front end. 997 is the largest entry, so "no hit" proves
# primality below 1009^2.
_SMALL_PRIMES = _small_sieve(1000)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)
_TRIAL_PROVEN_LIMIT = 1_018_081  # 1009**2

# The first 13 primes are a complete strong-pseudoprime witness set below
# this bound, so every verdict under it is unconditional.
DETERMINISTIC_LIMIT = 3_317_044_064_679_887_385_961_981
_DETERMINISTIC_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)

# Extra random-base rounds on top of the base-2 + Lucas core; 64 rounds
# push the error bound to 4^-64 = 2^-128.
DEFAULT_ROUNDS = 64


class Primality(Enum):
    COMPOSITE = "composite"
    PROVEN_PRIME = "proven_prime"
    PROBABLE_PRIME = "probable_prime"


@dataclass(frozen=True)
class PrimalityVerdict:
    """Outcome of a primality test.

    COMPOSITE covers every non-prime, including 0 and 1.  PROVEN_PRIME is
    only issued below DETERMINISTIC_LIMIT; above it PROBABLE_PRIME records
    how many extra witness rounds were run.
    """

    kind: Primality
    rounds: int | None = None

    def __bool__(self) -> bool:
        return self.kind is not Primality.COMPOSITE


_COMPOSITE = PrimalityVerdict(Primality.COMPOSITE)
_PROVEN = PrimalityVerdict(Primality.PROVEN_PRIME)


def _strong_probable_prime(n: int, base: int, d: int, s: int) -> bool:
    # n - 1 = d * 2^s with d odd
    x = pow(base, d, n)
    if x == 1 or x == n - 1:
        return True
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return True
    return False


def _jacobi(a: int, n: int) -> int:
    # n odd and positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def _strong_lucas_probable_prime(n: int) -> bool:
    """Strong Lucas test with the standard parameter sweep D = 5, -7, 9, ..."""
    if math.isqrt(n) ** 2 == n:
        return False  # perfect squares admit no D below and are composite anyway
    D = 5
    while True:
        j = _jacobi(D % n, n)
        if j == -1:
            break
        if j == 0 and abs(D) != n:
            return False
        D = -(D + 2) if D > 0 else -(D - 2)
    Q = (1 - D) // 4

    d = n + 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    # Walk the bits of d computing (U_k, V_k, Q^k) with P = 1.
    U, V, qk = 1, 1, Q % n
    inv2 = (n + 1) >> 1
    for bit in bin(d)[3:]:
        U = U * V % n
        V = (V * V - 2 * qk) % n
        qk = qk * qk % n
        if bit == "1":
            U, V = (U + V) * inv2 % n, (D * U + V) * inv2 % n
            qk = qk * Q % n
    if U == 0 or V == 0:
        return True
    for _ in range(s - 1):
        V = (V * V - 2 * qk) % n
        if V == 0:
            return True
        qk = qk * qk % n
    return False


def is_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> PrimalityVerdict:
    """Classify n as composite, proven prime, or probable prime.

    Below DETERMINISTIC_LIMIT the fixed witness set decides exactly.  Above
    it the test is a base-2 strong-pseudoprime check plus a strong Lucas
    check, then `rounds` further random-base rounds; the random bases are
    seeded from n itself so repeated calls agree bit-for-bit.
    """
    if n < 2:
        return _COMPOSITE
    for p in _SMALL_PRIMES:
        if n == p:
            return _PROVEN
        if n % p == 0:
            return _COMPOSITE
    if n < _TRIAL_PROVEN_LIMIT:
        return _PROVEN

    d = n - 1
    s = 0
    while d % 2 == 0:
        d //= 2
        s += 1

    if n < DETERMINISTIC_LIMIT:
        for base in _DETERMINISTIC_BASES:
            if not _strong_probable_prime(n, base, d, s):
                return _COMPOSITE
        return _PROVEN

    if not _strong_probable_prime(n, 2, d, s):
        return _COMPOSITE
    if not _strong_lucas_probable_prime(n):
        return _COMPOSITE
    rng = random.Random(n)
    for _ in range(rounds):
        base = rng.randrange(3, n - 1)
        if not _strong_probable_prime(n, base, d, s):
            return _COMPOSITE
    return PrimalityVerdict(Primality.PROBABLE_PRIME, rounds=rounds)


def power_of_two_exponent(d: int) -> int | None:
    """Return n when d = 2^n (n >= 0 allowed, so d = 1 qualifies), else None.

    d = 0 is rejected: distances between distinct primes are at least 1.
    """
    if d < 1:
        raise ValueError(f"distance must be >= 1, got {d}")
    if d & (d - 1):
        return None
    return d.bit_length() - 1


def is_power_of_two(d: int) -> bool:
    return power_of_two_exponent(d) is not None


def mod_pow(base: int, exp: int, modulus: int) -> int:
    """base**exp mod modulus by square-and-multiply (CPython's three-arg pow)."""
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    return pow(base, exp, modulus)


def next_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> int:
    """The prime strictly above n.

    Scans odd candidates; is_prime's trial-division front end acts as the
    small-prime wheel, which matters when n has hundreds of digits.
    """
    if n < 2:
        return 2
    c = n + 1 if n % 2 == 0 else n + 2
    while True:
        if is_prime(c, rounds):
            return c
        c += 2


def prev_prime(n: int, rounds: int = DEFAULT_ROUNDS) -> int:
    """The prime strictly below n; defined only for n >= 3."""
    if n <= 2:
        raise ValueError(f"no prime below {n}")
    if n == 3:
        return 2
    c = n - 1 if n % 2 == 0 else n - 2
    while c >= 3:
        if is_prime(c, rounds):
            return c
        c -= 2
    return 2
