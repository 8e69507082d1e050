"""Partition the primes of a range into sibling runs and other-prime runs.

Two consecutive primes whose gap is an exact power of two (2^0 = 1 counts,
which is how 2 and 3 end up together) are "brothers & sisters".  Maximal
chains of such gaps form the B-runs; every prime with no adjacent prime at
a power-of-two distance is an "other" prime, and maximal blocks of those
form the O-runs.  Two O-primes at a power-of-two distance from each other
(adjacent or not) are "cousins".
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .arith import is_prime, next_prime, power_of_two_exponent, prev_prime
from .sieve import MAX_SPAN, SegmentTooLarge, primes_in_range

__all__ = [
    "RunKind",
    "Run",
    "StatusKind",
    "KinshipStatus",
    "ClassifiedSegment",
    "classify_range",
    "resolve_cousins",
    "cousin_run_report",
    "is_relative",
    "stitch",
]


class RunKind(Enum):
    BROTHER = "B"
    OTHER = "O"


@dataclass(frozen=True)
class Run:
    kind: RunKind
    index: int  # 1-based, counted per kind from the absolute start at 2
    members: tuple[int, ...]

    def label(self) -> str:
        return f"{self.kind.value}_{self.index}"


class StatusKind(Enum):
    BROTHER = "brother"
    COUSIN_RESOLVED = "cousin_resolved"
    ISOLATED_CANDIDATE = "isolated_candidate"
    UNRESOLVED = "unresolved"


@dataclass(frozen=True)
class KinshipStatus:
    kind: StatusKind
    run_index: int | None = None  # BROTHER
    witness: int | None = None  # COUSIN_RESOLVED: partner q with |p - q| = 2^n
    exponent: int | None = None  # COUSIN_RESOLVED
    budget: int | None = None  # ISOLATED_CANDIDATE / UNRESOLVED: largest exponent searched

    @classmethod
    def brother(cls, run_index: int) -> "KinshipStatus":
        return cls(StatusKind.BROTHER, run_index=run_index)

    @classmethod
    def cousin(cls, witness: int, exponent: int) -> "KinshipStatus":
        return cls(StatusKind.COUSIN_RESOLVED, witness=witness, exponent=exponent)

    @classmethod
    def candidate(cls, budget: int) -> "KinshipStatus":
        return cls(StatusKind.ISOLATED_CANDIDATE, budget=budget)

    @classmethod
    def unresolved(cls, budget: int | None = None) -> "KinshipStatus":
        return cls(StatusKind.UNRESOLVED, budget=budget)


@dataclass(frozen=True)
class ClassifiedSegment:
    """Immutable classification of every prime in [lo, hi].

    context_prev / context_next are the nearest primes outside the range;
    they settle the boundary gaps, so every in-range label is final even
    though the segment is finite.  Runs touching a boundary may continue
    into a neighboring segment (left_open / right_open) and are merged by
    stitch().
    """

    lo: int
    hi: int
    runs: tuple[Run, ...]
    statuses: dict[int, KinshipStatus] = field(compare=False)
    context_prev: int | None = None
    context_next: int | None = None
    left_open: bool = False
    right_open: bool = False
    provisional_indices: bool = False
    cousins_resolved: bool = False

    def primes(self) -> list[int]:
        out: list[int] = []
        for run in self.runs:
            out.extend(run.members)
        return out

    def other_members(self) -> set[int]:
        return {p for run in self.runs if run.kind is RunKind.OTHER for p in run.members}

    def brother_members(self) -> set[int]:
        return {p for run in self.runs if run.kind is RunKind.BROTHER for p in run.members}

    def run_of(self, p: int) -> Run | None:
        for run in self.runs:
            if run.members and run.members[0] <= p <= run.members[-1] and p in run.members:
                return run
        return None

    def max_cousin_exponent(self) -> int:
        """Largest n with 2^n <= hi - lo (the in-range cousin search bound)."""
        width = self.hi - self.lo
        return width.bit_length() - 1 if width >= 1 else 0


def _power_link(a: int, b: int) -> bool:
    return power_of_two_exponent(b - a) is not None


def classify_range(
    lo: int,
    hi: int,
    context_margin: int = 1,
    max_span: int = MAX_SPAN,
) -> ClassifiedSegment:
    """Label every prime in [lo, hi] and group the labels into maximal runs.

    context_margin primes of look-back/look-ahead are fetched outside the
    range; one on each side is enough because a prime's label depends only
    on its two neighboring gaps.
    """
    if lo < 2:
        raise ValueError(f"lo must be >= 2, got {lo}")
    if hi < lo:
        raise ValueError(f"empty range [{lo}, {hi}]")
    if context_margin < 1:
        raise ValueError("context_margin must be >= 1")
    if hi - lo + 1 > max_span:
        raise SegmentTooLarge(
            f"range [{lo}, {hi}] exceeds the sieve ceiling ({max_span}); "
            "classify smaller segments and stitch them"
        )

    primes = primes_in_range(lo, hi, max_span=max_span)

    before: list[int] = []
    if lo > 2:
        c = lo
        for _ in range(context_margin):
            if c <= 2:
                break
            c = prev_prime(c)
            before.append(c)
        before.reverse()
    after: list[int] = []
    c = primes[-1] if primes else hi
    if not primes and lo > 2:
        c = before[-1] if before else hi
    for _ in range(context_margin):
        c = next_prime(c)
        after.append(c)

    seq = before + primes + after
    links = [_power_link(seq[i], seq[i + 1]) for i in range(len(seq) - 1)]

    # A prime is a B-member iff it participates in at least one power link.
    n_before = len(before)
    runs: list[Run] = []
    b_count = 0
    o_count = 0
    cur_kind: RunKind | None = None
    cur_members: list[int] = []
    left_open = False
    right_open = False

    def flush() -> None:
        nonlocal b_count, o_count, cur_kind, cur_members
        if not cur_members:
            return
        if cur_kind is RunKind.BROTHER:
            b_count += 1
            runs.append(Run(RunKind.BROTHER, b_count, tuple(cur_members)))
        else:
            o_count += 1
            runs.append(Run(RunKind.OTHER, o_count, tuple(cur_members)))
        cur_kind = None
        cur_members = []

    for idx in range(n_before, n_before + len(primes)):
        p = seq[idx]
        link_before = links[idx - 1] if idx > 0 else False
        link_after = links[idx] if idx < len(links) else False
        kind = RunKind.BROTHER if (link_before or link_after) else RunKind.OTHER
        # B-runs split where the internal gap is not a power link; O-runs
        # are simply maximal blocks of consecutive O-primes.
        splits = cur_kind is not kind or (kind is RunKind.BROTHER and not link_before)
        if splits:
            flush()
            cur_kind = kind
            if idx == n_before:
                # The run may extend below lo: either a power link into the
                # context prime, or an O-context-neighbor we cannot see.
                left_open = link_before or (kind is RunKind.OTHER and lo > 2)
        cur_members.append(p)
    if cur_members:
        last_idx = n_before + len(primes) - 1
        link_out = links[last_idx] if last_idx < len(links) else False
        right_open = link_out or cur_kind is RunKind.OTHER
    flush()

    statuses: dict[int, KinshipStatus] = {}
    for run in runs:
        for p in run.members:
            if run.kind is RunKind.BROTHER:
                statuses[p] = KinshipStatus.brother(run.index)
            else:
                statuses[p] = KinshipStatus.unresolved()

    return ClassifiedSegment(
        lo=lo,
        hi=hi,
        runs=tuple(runs),
        statuses=statuses,
        context_prev=before[-1] if before else None,
        context_next=after[0] if after else None,
        left_open=left_open and lo > 2,
        right_open=right_open,
        provisional_indices=lo != 2,
    )


def resolve_cousins(segment: ClassifiedSegment) -> ClassifiedSegment:
    """Resolve cousin pairs among the segment's O-members, in range only.

    For each O-member p (ascending) the witness search tries q = p - 2^n
    for ascending n first, then q = p + 2^n, with 2^n bounded by the range
    width; the first O-member hit resolves both ends of the pair.  Members
    with no in-range witness stay unresolved: a bounded range can prove
    cousinhood but never isolation.
    """
    others = segment.other_members()
    nmax = segment.max_cousin_exponent()
    statuses = dict(segment.statuses)

    for p in sorted(others):
        if statuses[p].kind is StatusKind.COUSIN_RESOLVED:
            continue
        hit: tuple[int, int] | None = None
        for n in range(nmax + 1):
            q = p - (1 << n)
            if q >= segment.lo and q in others:
                hit = (q, n)
                break
        if hit is None:
            for n in range(nmax + 1):
                q = p + (1 << n)
                if q <= segment.hi and q in others:
                    hit = (q, n)
                    break
        if hit is not None:
            q, n = hit
            statuses[p] = KinshipStatus.cousin(q, n)
            if statuses[q].kind is not StatusKind.COUSIN_RESOLVED:
                statuses[q] = KinshipStatus.cousin(p, n)
        else:
            statuses[p] = KinshipStatus.unresolved(budget=nmax)

    return replace(segment, statuses=statuses, cousins_resolved=True)


def cousin_run_report(segment: ClassifiedSegment) -> list[tuple[int, ...]]:
    """Group resolved cousins into chains connected by power-of-two links.

    Presentation only: chains are the connected components of the link
    graph over resolved members, ordered by smallest member.
    """
    resolved = sorted(
        p
        for p, st in segment.statuses.items()
        if st.kind is StatusKind.COUSIN_RESOLVED
    )
    if not resolved:
        return []
    index = {p: i for i, p in enumerate(resolved)}
    parent = list(range(len(resolved)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    nmax = segment.max_cousin_exponent()
    member_set = set(resolved)
    for p in resolved:
        for n in range(nmax + 1):
            q = p + (1 << n)
            if q in member_set:
                union(index[p], index[q])

    chains: dict[int, list[int]] = {}
    for p in resolved:
        chains.setdefault(find(index[p]), []).append(p)
    return sorted((tuple(sorted(c)) for c in chains.values()), key=lambda c: c[0])


def is_relative(p: int, bound_n: int) -> tuple[int, int] | None:
    """Witness (q, n) if any prime q sits at distance 2^n <= 2^bound_n from p.

    Any prime counts as a witness here, sibling or other; this is the loose
    distance relation, not the cousin one.  Searches downward first, then
    upward, ascending exponents.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if bound_n < 0:
        raise ValueError("bound_n must be >= 0")
    for n in range(bound_n + 1):
        q = p - (1 << n)
        if q >= 2 and is_prime(q):
            return q, n
    for n in range(bound_n + 1):
        q = p + (1 << n)
        if is_prime(q):
            return q, n
    return None


def stitch(segments: list[ClassifiedSegment]) -> ClassifiedSegment:
    """Merge contiguous classified segments into one, renumbering runs.

    Segments must be adjacent ([a,b], [b+1,c], ...).  Runs that continue
    across a boundary (a power link between the boundary primes, or two
    O-blocks with no B-prime between) are joined; indices become global,
    so stitching segments that start at 2 reproduces classify_range(2, N).
    """
    if not segments:
        raise ValueError("nothing to stitch")
    segs = sorted(segments, key=lambda s: s.lo)
    for a, b in zip(segs, segs[1:]):
        if a.hi + 1 != b.lo:
            raise ValueError(f"segments [{a.lo},{a.hi}] and [{b.lo},{b.hi}] are not adjacent")

    merged: list[tuple[RunKind, list[int]]] = []
    for seg in segs:
        for run in seg.runs:
            members = list(run.members)
            if merged:
                pkind, pmembers = merged[-1]
                # Consecutive runs in the stream always have adjacent-prime
                # boundaries (every prime in between would be in a run), so
                # O meets O -> same block; B meets B joins iff the boundary
                # gap is itself a power link.
                joined = pkind is run.kind and (
                    run.kind is RunKind.OTHER or _power_link(pmembers[-1], members[0])
                )
                if joined:
                    pmembers.extend(members)
                    continue
            merged.append((run.kind, members))

    runs: list[Run] = []
    b_count = 0
    o_count = 0
    for kind, members in merged:
        if kind is RunKind.BROTHER:
            b_count += 1
            runs.append(Run(kind, b_count, tuple(members)))
        else:
            o_count += 1
            runs.append(Run(kind, o_count, tuple(members)))

    statuses: dict[int, KinshipStatus] = {}
    for run in runs:
        for p in run.members:
            if run.kind is RunKind.BROTHER:
                statuses[p] = KinshipStatus.brother(run.index)
            else:
                statuses[p] = KinshipStatus.unresolved()

    return ClassifiedSegment(
        lo=segs[0].lo,
        hi=segs[-1].hi,
        runs=tuple(runs),
        statuses=statuses,
        context_prev=segs[0].context_prev,
        context_next=segs[-1].context_next,
        left_open=segs[0].left_open,
        right_open=segs[-1].right_open,
        provisional_indices=segs[0].lo != 2,
    )
