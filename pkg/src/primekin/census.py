"""Empirical statistics over a classified range.

These are the computable shadows of the size questions the partition
raises: how many primes land in each set up to a bound, how the 4n+1 and
4n+3 residue classes balance inside each set, how large the sibling runs
get, and how many twin pairs drive the run structure.  Whether any of the
sets is infinite is not observable from a finite range, and nothing here
pretends otherwise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from enum import Enum

from .classifier import ClassifiedSegment, RunKind, StatusKind
from .search import candidate_scan, Outcome

__all__ = [
    "CENSUS_SCHEMA_ID",
    "CensusReport",
    "TwinDensityRecord",
    "PsiMarker",
    "run_census",
    "tally_isolated_candidates",
    "twin_density_check",
    "psi_empirical",
    "TWIN_CONSTANT",
]

CENSUS_SCHEMA_ID = "primekin.census/1"

# 2 * prod_{p>2} (1 - (p-1)^-2), rounded as published alongside the twin
# count comparisons this report mirrors.
TWIN_CONSTANT = 1.320

# Threshold below which the twin-density comparison is too noisy to report.
MIN_TWIN_BOUND = 100


@dataclass(frozen=True)
class CensusReport:
    bound: int
    pi_total: int
    pi_b: int
    pi_o: int
    pi_cousin_resolved: int
    pi_unresolved: int
    residues_total: tuple[int, int]  # (count 4n+1, count 4n+3), p = 2 excluded
    residues_b: tuple[int, int]
    residues_o: tuple[int, int]
    b_run_sizes: dict[int, int]  # run size -> number of B-runs of that size
    inter_run_gaps: dict[int, int]  # first(B_{j+1}) - last(B_j) -> count
    twin_pairs: int
    isolated_candidates: int | None = None  # None until a scan pass fills it

    def to_text(self) -> str:
        lines = [
            f"schema: {CENSUS_SCHEMA_ID}",
            f"bound: {self.bound}",
            f"pi: {self.pi_total}",
            f"pi_b: {self.pi_b}",
            f"pi_o: {self.pi_o}",
            f"pi_cousin_resolved: {self.pi_cousin_resolved}",
            f"pi_unresolved: {self.pi_unresolved}",
            f"residues_total_1mod4: {self.residues_total[0]}",
            f"residues_total_3mod4: {self.residues_total[1]}",
            f"residues_b_1mod4: {self.residues_b[0]}",
            f"residues_b_3mod4: {self.residues_b[1]}",
            f"residues_o_1mod4: {self.residues_o[0]}",
            f"residues_o_3mod4: {self.residues_o[1]}",
            f"twin_pairs: {self.twin_pairs}",
        ]
        if self.isolated_candidates is not None:
            lines.append(f"isolated_candidates: {self.isolated_candidates}")
        lines.append("b_run_sizes:")
        for size in sorted(self.b_run_sizes):
            lines.append(f"  {size} {self.b_run_sizes[size]}")
        lines.append("inter_run_gaps:")
        for gap in sorted(self.inter_run_gaps):
            lines.append(f"  {gap} {self.inter_run_gaps[gap]}")
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        tree = {
            "schema": CENSUS_SCHEMA_ID,
            "bound": self.bound,
            "counts": {
                "pi": self.pi_total,
                "pi_b": self.pi_b,
                "pi_o": self.pi_o,
                "pi_cousin_resolved": self.pi_cousin_resolved,
                "pi_unresolved": self.pi_unresolved,
                "twin_pairs": self.twin_pairs,
                "isolated_candidates": self.isolated_candidates,
            },
            "residues": {
                "total": {"1mod4": self.residues_total[0], "3mod4": self.residues_total[1]},
                "b": {"1mod4": self.residues_b[0], "3mod4": self.residues_b[1]},
                "o": {"1mod4": self.residues_o[0], "3mod4": self.residues_o[1]},
            },
            "histograms": {
                "b_run_sizes": {str(k): v for k, v in sorted(self.b_run_sizes.items())},
                "inter_run_gaps": {str(k): v for k, v in sorted(self.inter_run_gaps.items())},
            },
        }
        return json.dumps(tree, sort_keys=True)


def run_census(segment: ClassifiedSegment) -> CensusReport:
    """Single-pass tallies over a classified, cousin-resolved segment."""
    if not segment.cousins_resolved:
        raise ValueError("run resolve_cousins on the segment first")

    pi_b = 0
    pi_o = 0
    resolved = 0
    unresolved = 0
    candidates = 0
    res_total = [0, 0]
    res_b = [0, 0]
    res_o = [0, 0]
    b_sizes: dict[int, int] = {}
    gaps: dict[int, int] = {}
    prev_b_last: int | None = None

    for run in segment.runs:
        if run.kind is RunKind.BROTHER:
            pi_b += len(run.members)
            size = len(run.members)
            b_sizes[size] = b_sizes.get(size, 0) + 1
            if prev_b_last is not None:
                gap = run.members[0] - prev_b_last
                gaps[gap] = gaps.get(gap, 0) + 1
            prev_b_last = run.members[-1]
        else:
            pi_o += len(run.members)
        for p in run.members:
            if p == 2:
                continue  # neither 4n+1 nor 4n+3
            slot = 0 if p % 4 == 1 else 1
            res_total[slot] += 1
            (res_b if run.kind is RunKind.BROTHER else res_o)[slot] += 1

    for p, status in segment.statuses.items():
        if status.kind is StatusKind.COUSIN_RESOLVED:
            resolved += 1
        elif status.kind is StatusKind.ISOLATED_CANDIDATE:
            unresolved += 1
            candidates += 1
        elif status.kind is StatusKind.UNRESOLVED:
            unresolved += 1

    primes = segment.primes()
    twin_pairs = sum(1 for a, b in zip(primes, primes[1:]) if b - a == 2)

    return CensusReport(
        bound=segment.hi,
        pi_total=pi_b + pi_o,
        pi_b=pi_b,
        pi_o=pi_o,
        pi_cousin_resolved=resolved,
        pi_unresolved=unresolved,
        residues_total=(res_total[0], res_total[1]),
        residues_b=(res_b[0], res_b[1]),
        residues_o=(res_o[0], res_o[1]),
        b_run_sizes=b_sizes,
        inter_run_gaps=gaps,
        twin_pairs=twin_pairs,
        isolated_candidates=0 if unresolved == 0 else None,
    )


def tally_isolated_candidates(
    segment: ClassifiedSegment, report: CensusReport, budget: int | None = None
) -> CensusReport:
    """Re-issue the report with the isolated-candidate count filled in.

    Runs the exponent scan on every unresolved O-member; budget None uses
    the per-member default.  This can be slow for wide segments, which is
    why it is a separate opt-in pass.
    """
    if segment.lo != 2:
        raise ValueError("candidate scans need the full downward view from 2")
    count = 0
    for p in sorted(segment.other_members()):
        if segment.statuses[p].kind is not StatusKind.UNRESOLVED:
            continue
        scan = candidate_scan(p, segment, i_max=budget)
        if scan.outcome is Outcome.CANDIDATE_UP_TO:
            count += 1
    return replace(report, isolated_candidates=count)


@dataclass(frozen=True)
class TwinDensityRecord:
    bound: int
    twin_pairs: int
    estimate: float  # TWIN_CONSTANT * N / (ln N)^2
    ratio: float  # observed / estimate
    twin_constant: float = TWIN_CONSTANT


def twin_density_check(segment: ClassifiedSegment) -> TwinDensityRecord:
    """Observed twin-pair count against the constant-density estimate."""
    if segment.lo != 2:
        raise ValueError("twin density is counted from 2; classify [2, N]")
    n = segment.hi
    if n < MIN_TWIN_BOUND:
        raise ValueError(
            f"bound {n} is too small for a density comparison; use N >= {MIN_TWIN_BOUND}"
        )
    primes = segment.primes()
    twins = sum(1 for a, b in zip(primes, primes[1:]) if b - a == 2)
    estimate = TWIN_CONSTANT * n / math.log(n) ** 2
    return TwinDensityRecord(bound=n, twin_pairs=twins, estimate=estimate, ratio=twins / estimate)


class PsiMarker(Enum):
    """Set-size verdict observable from a finite range.

    -1 when no member has been found, 0 when members exist.  The infinite
    value is deliberately unrepresentable: no finite census can emit it,
    whatever the conjectured answer for these sets may be.
    """

    EMPTY_SO_FAR = -1
    NONEMPTY_FINITE_SO_FAR = 0


def psi_empirical(report: CensusReport) -> dict[str, PsiMarker]:
    """Per-set emptiness markers from in-bound counts.

    Keys: B (sibling primes), O (the complement), C (resolved cousins),
    and I (isolated candidates) when a scan pass has produced the count.
    """

    def mark(count: int) -> PsiMarker:
        return PsiMarker.NONEMPTY_FINITE_SO_FAR if count > 0 else PsiMarker.EMPTY_SO_FAR

    markers = {
        "B": mark(report.pi_b),
        "O": mark(report.pi_o),
        "C": mark(report.pi_cousin_resolved),
    }
    if report.isolated_candidates is not None:
        markers["I"] = mark(report.isolated_candidates)
    return markers
