"""Unbounded-direction kinship searches for individual primes.

b_membership decides whether an arbitrary prime has a brother (an adjacent
prime at power-of-two distance) by actually finding both neighbors, which
works at any size the neighbor-prime scan can reach.  candidate_scan runs
the bounded isolated-candidate test: no O-partner below, and no O-prime
among p + 2^i up to the exponent budget.  Sums that land on a prime with a
brother do not disqualify the candidate; only a prime in O does.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .arith import (
    DEFAULT_ROUNDS,
    PrimalityVerdict,
    is_prime,
    next_prime,
    power_of_two_exponent,
    prev_prime,
)
from .classifier import ClassifiedSegment

__all__ = [
    "StepStatus",
    "SearchStep",
    "Outcome",
    "SearchReport",
    "BMembership",
    "Claim",
    "WitnessCertificate",
    "verify_certificate",
    "b_membership",
    "candidate_scan",
    "default_budget",
    "expected_hits",
]

# Budget rule when the caller does not supply one: the full exponent range
# i = 1..p is honored where feasible, otherwise capped with the shortfall
# flagged on the report.
FULL_BUDGET_LIMIT = 512


class StepStatus(Enum):
    COMPOSITE = "composite"
    PRIME_IN_B = "prime_in_B"
    PRIME_IN_O = "prime_in_O"


@dataclass(frozen=True)
class SearchStep:
    exponent: int
    value: int  # subject + 2^exponent
    status: StepStatus
    brother: int | None = None  # PRIME_IN_B: the adjacent prime at 2^n

    def fixture_line(self) -> str:
        if self.status is StepStatus.PRIME_IN_B:
            return f"i={self.exponent} value={self.value} status=prime_in_B:brother={self.brother}"
        return f"i={self.exponent} value={self.value} status={self.status.value}"


class Outcome(Enum):
    CANDIDATE_UP_TO = "candidate_up_to"
    COUSIN_FOUND = "cousin_found"


@dataclass(frozen=True)
class SearchReport:
    subject: int
    budget: int
    steps: tuple[SearchStep, ...]
    outcome: Outcome
    witness: int | None = None
    witness_exponent: int | None = None
    witness_below: bool = False  # witness found by the downward O-pair check
    paper_budget_reached: bool = True  # budget covered the full i = 1..subject range

    def fixture_lines(self) -> list[str]:
        return [step.fixture_line() for step in self.steps]


class Claim(Enum):
    IN_B = "in_B"
    IN_O = "in_O"
    COUSIN_PAIR = "cousin_pair"


@dataclass(frozen=True)
class WitnessCertificate:
    """Replayable record backing a kinship claim about specific integers.

    neighbors maps a value to the adjacent primes found for it (None below
    2); verdicts holds the primality verdicts issued.  verify_certificate
    recomputes everything from scratch.
    """

    claim: Claim
    subject: int
    partner: int | None
    exponent: int | None
    neighbors: tuple[tuple[int, int | None, int], ...]  # (value, prev, next)
    verdicts: tuple[tuple[int, PrimalityVerdict], ...]


@dataclass(frozen=True)
class BMembership:
    subject: int
    in_b: bool
    brother: int | None
    exponent: int | None
    below: int | None  # adjacent prime below (None for 2)
    above: int  # adjacent prime above
    certificate: WitnessCertificate


def b_membership(p: int, rounds: int = DEFAULT_ROUNDS) -> BMembership:
    """Decide whether prime p has a brother, by locating both neighbors.

    The lower neighbor is preferred when both gaps are powers of two.
    """
    verdict = is_prime(p, rounds)
    if not verdict:
        raise ValueError(f"{p} is not prime")
    below = prev_prime(p, rounds) if p > 2 else None
    above = next_prime(p, rounds)
    exp_below = power_of_two_exponent(p - below) if below is not None else None
    exp_above = power_of_two_exponent(above - p)

    if exp_below is not None:
        brother, exponent = below, exp_below
    elif exp_above is not None:
        brother, exponent = above, exp_above
    else:
        brother, exponent = None, None

    verdicts = [(p, verdict)]
    if below is not None:
        verdicts.append((below, is_prime(below, rounds)))
    verdicts.append((above, is_prime(above, rounds)))
    cert = WitnessCertificate(
        claim=Claim.IN_B if brother is not None else Claim.IN_O,
        subject=p,
        partner=brother,
        exponent=exponent,
        neighbors=((p, below, above),),
        verdicts=tuple(verdicts),
    )
    return BMembership(
        subject=p,
        in_b=brother is not None,
        brother=brother,
        exponent=exponent,
        below=below,
        above=above,
        certificate=cert,
    )


def verify_certificate(cert: WitnessCertificate, rounds: int = DEFAULT_ROUNDS) -> bool:
    """Replay a certificate's assertions through the arithmetic layer."""
    for value, stated in cert.verdicts:
        if bool(is_prime(value, rounds)) != bool(stated):
            return False
    for value, below, above in cert.neighbors:
        if below is not None and prev_prime(value) != below:
            return False
        if value == 2 and below is not None:
            return False
        if next_prime(value) != above:
            return False

    gaps: dict[int, tuple[int | None, int | None]] = {}
    for value, below, above in cert.neighbors:
        gap_below = value - below if below is not None else None
        gaps[value] = (gap_below, above - value)

    def has_brother(value: int) -> bool:
        gb, ga = gaps[value]
        below_pow = gb is not None and power_of_two_exponent(gb) is not None
        return below_pow or power_of_two_exponent(ga) is not None

    if cert.claim is Claim.IN_B:
        if cert.partner is None or cert.exponent is None:
            return False
        entry = next((n for n in cert.neighbors if n[0] == cert.subject), None)
        if entry is None or cert.partner not in entry[1:]:
            return False
        return abs(cert.subject - cert.partner) == 1 << cert.exponent
    if cert.claim is Claim.IN_O:
        return cert.subject in gaps and not has_brother(cert.subject)
    # COUSIN_PAIR: both endpoints prime and brotherless, power-of-two apart.
    if cert.partner is None or cert.exponent is None:
        return False
    if abs(cert.subject - cert.partner) != 1 << cert.exponent:
        return False
    recorded = {value for value, _, _ in cert.neighbors}
    if not {cert.subject, cert.partner} <= recorded:
        return False
    return not has_brother(cert.subject) and not has_brother(cert.partner)


def default_budget(p: int) -> int:
    """Exponent budget honoring the full i = 1..p rule where feasible."""
    if p <= FULL_BUDGET_LIMIT:
        return max(p, 64)
    return FULL_BUDGET_LIMIT


def candidate_scan(
    p: int,
    segment: ClassifiedSegment,
    i_max: int | None = None,
    full_scan: bool = False,
    rounds: int = DEFAULT_ROUNDS,
) -> SearchReport:
    """Run the isolated-candidate test for an O-member p.

    segment must classify [2, p] so the downward O-pair clause can be
    checked.  The upward scan tests p + 2^i for i = 1..i_max, recording
    every step; it stops at the first O-prime hit (the cousin witness)
    unless full_scan keeps it going for a complete transcript.
    """
    if segment.lo != 2 or segment.hi < p:
        raise ValueError(f"segment [{segment.lo}, {segment.hi}] does not cover [2, {p}]")
    if not is_prime(p, rounds):
        raise ValueError(f"{p} is not prime")
    others = segment.other_members()
    if p not in others:
        raise ValueError(
            f"{p} has an adjacent prime at power-of-two distance; "
            "primes with brothers are never isolated candidates"
        )
    if i_max is None:
        i_max = default_budget(p)
    if i_max < 1:
        raise ValueError("i_max must be >= 1")

    # Downward clause: any O-partner below p settles the question at once.
    for n in range(p.bit_length()):
        q = p - (1 << n)
        if q >= 2 and q in others:
            return SearchReport(
                subject=p,
                budget=i_max,
                steps=(),
                outcome=Outcome.COUSIN_FOUND,
                witness=q,
                witness_exponent=n,
                witness_below=True,
                paper_budget_reached=i_max >= p,
            )

    steps: list[SearchStep] = []
    witness: tuple[int, int] | None = None
    for i in range(1, i_max + 1):
        value = p + (1 << i)
        if not is_prime(value, rounds):
            steps.append(SearchStep(i, value, StepStatus.COMPOSITE))
            continue
        membership = b_membership(value, rounds)
        if membership.in_b:
            steps.append(SearchStep(i, value, StepStatus.PRIME_IN_B, brother=membership.brother))
            continue
        steps.append(SearchStep(i, value, StepStatus.PRIME_IN_O))
        if witness is None:
            witness = (value, i)
        if not full_scan:
            break

    if witness is not None:
        return SearchReport(
            subject=p,
            budget=i_max,
            steps=tuple(steps),
            outcome=Outcome.COUSIN_FOUND,
            witness=witness[0],
            witness_exponent=witness[1],
            paper_budget_reached=i_max >= p,
        )
    return SearchReport(
        subject=p,
        budget=i_max,
        steps=tuple(steps),
        outcome=Outcome.CANDIDATE_UP_TO,
        paper_budget_reached=i_max >= p,
    )


def expected_hits(i_max: int) -> float:
    """Heuristic expected number of primes among p + 2^m for m = 1..i_max.

    Each term is the prime-density lower bound 1/((m+1) ln 2); the series
    is harmonic, so the value grows without bound as the budget does.
    """
    if i_max < 1:
        raise ValueError("i_max must be >= 1")
    ln2 = math.log(2)
    return math.fsum(1.0 / ((m + 1) * ln2) for m in range(1, i_max + 1))
