"""Wieferich prime testing and kinship classification of the hits.

A Wieferich prime satisfies 2^(p-1) = 1 mod p^2.  Exactly two are known,
1093 and 3511; the scan re-derives them and then asks where each one lands
in the sibling/cousin partition, attaching a cousin-witness scan when the
hit has no brother.
"""

from __future__ import annotations

from dataclasses import dataclass

from .arith import is_prime, mod_pow
from .classifier import ClassifiedSegment, classify_range
from .search import BMembership, SearchReport, b_membership, candidate_scan
from .sieve import primes_up_to

__all__ = ["WieferichRecord", "is_wieferich", "wieferich_scan", "DEFAULT_COUSIN_BUDGET"]

# Exponent budget for the cousin scan attached to brotherless hits; the
# known witness for 3511 sits at 2^44, so 64 leaves margin.
DEFAULT_COUSIN_BUDGET = 64


@dataclass(frozen=True)
class WieferichRecord:
    p: int
    satisfies: bool
    membership: BMembership
    cousin_scan: SearchReport | None  # only for hits without a brother


def is_wieferich(p: int) -> bool:
    """True iff 2^(p-1) = 1 mod p^2.  p must be prime."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return mod_pow(2, p - 1, p * p) == 1


def wieferich_scan(
    hi: int,
    segment: ClassifiedSegment | None = None,
    cousin_budget: int = DEFAULT_COUSIN_BUDGET,
) -> list[WieferichRecord]:
    """Test every prime <= hi against the Fermat-quotient condition.

    For each hit, the kinship side is worked out: brotherless hits get a
    cousin-witness scan with the given budget.  segment, when supplied,
    must classify [2, hi]; otherwise one is built on demand.
    """
    if hi < 3:
        raise ValueError("hi must be >= 3")
    hits = [p for p in primes_up_to(hi) if mod_pow(2, p - 1, p * p) == 1]

    records: list[WieferichRecord] = []
    for p in hits:
        membership = b_membership(p)
        scan = None
        if not membership.in_b:
            if segment is None:
                segment = classify_range(2, hi)
            scan = candidate_scan(p, segment, i_max=cousin_budget)
        records.append(
            WieferichRecord(p=p, satisfies=True, membership=membership, cousin_scan=scan)
        )
    return records
