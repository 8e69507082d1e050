"""Plain and segmented sieves of Eratosthenes."""

from __future__ import annotations

import math

__all__ = ["sieve_flags", "primes_up_to", "primes_in_range", "SegmentTooLarge"]

# Ceiling on a single sieve window; larger requests must be segmented.
MAX_SPAN = 1 << 26


class SegmentTooLarge(ValueError):
    """Raised when a requested range exceeds the sieve memory ceiling."""


def sieve_flags(limit: int) -> bytearray:
    """Bytearray of length limit+1 with flags[i] = 1 iff i is prime."""
    if limit < 0:
        raise ValueError("limit must be non-negative")
    flags = bytearray([1]) * (limit + 1)
    flags[0 : min(2, limit + 1)] = b"\x00" * min(2, limit + 1)
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            step = len(range(p * p, limit + 1, p))
            flags[p * p :: p] = bytearray(step)
    return flags


def primes_up_to(limit: int) -> list[int]:
    flags = sieve_flags(limit)
    return [i for i in range(2, limit + 1) if flags[i]]


def primes_in_range(lo: int, hi: int, max_span: int = MAX_SPAN) -> list[int]:
    """All primes p with lo <= p <= hi, by segmented sieve.

    Memory is proportional to hi - lo plus sqrt(hi), not hi.
    """
    if lo < 0 or hi < lo:
        raise ValueError(f"bad range [{lo}, {hi}]")
    if hi - lo + 1 > max_span:
        raise SegmentTooLarge(
            f"range [{lo}, {hi}] spans {hi - lo + 1} > {max_span}; "
            "sieve it in segments and stitch the results"
        )
    if hi < 2:
        return []
    lo = max(lo, 2)
    base = primes_up_to(math.isqrt(hi))
    size = hi - lo + 1
    flags = bytearray([1]) * size
    for p in base:
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start > hi:
            continue
        count = len(range(start, hi + 1, p))
        flags[start - lo :: p] = bytearray(count)
    return [lo + i for i in range(size) if flags[i]]
