"""Boundedness, total boundedness, Cauchy sequences, and star measures of noncompactness.

The star measure of a set is the collection of coverings at which the set
admits a cover by at most `cap` point stars; the cap is the desk-scale stand-in
for "finitely many" against the ambient space. A member-cover variant (covers
by at most `cap` covering members) backs the limit-compactness checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .covering import CHAIN, AdmissibleFamily
from .proximity import CoverCollection, converges_to_zero
from .space import EmptyInput, Point, bit_count, iter_bits


class NotDecreasing(Exception):
    """A chain of sets fails F_{k+1} contained in F_k."""


class NotClosed(Exception):
    """A set in a chain is not closed under the family closure."""


class CoverSearchBudgetExceeded(Exception):
    """The exact minimum-cover search exceeded its node budget."""


DEFAULT_COVER_NODE_BUDGET = 400_000


@dataclass(frozen=True)
class MeasureValue:
    """A measure of noncompactness: an upward-hereditary covering collection."""

    value: CoverCollection

    @property
    def is_zero(self) -> bool:
        return self.value.is_zero


def default_cap(space_size: int) -> int:
    return max(1, -(-space_size // 4))


def is_bounded(
    Y: frozenset[Point] | set[Point], family: AdmissibleFamily
) -> bool:
    """True iff some covering of the family relates every pair of Y."""
    if not Y:
        raise EmptyInput("boundedness of the empty set is undefined")
    idx = [p.index for p in Y]
    if family.kind == CHAIN:
        T = family.prox_matrix
        return bool(T[np.ix_(idx, idx)].min() >= 0)
    B = family.membership_cube
    return bool(B[:, idx][:, :, idx].all(axis=(1, 2)).any())


def is_totally_bounded(
    Y: frozenset[Point] | set[Point], family: AdmissibleFamily
) -> bool:
    """True iff every covering admits a finite star cover of Y (always, on finite samples)."""
    if not Y:
        raise EmptyInput("total boundedness of the empty set is undefined")
    ymask = family.space.mask_of(Y)
    for cov in family.coverings:
        covered = 0
        for i in iter_bits(ymask):
            covered |= cov.point_star[i]
        if ymask & ~covered:
            return False
    return True


def _greedy_cover(target: int, candidates: Sequence[int], cap: int) -> Optional[int]:
    remaining = target
    used = 0
    while remaining:
        best = max(candidates, key=lambda c: bit_count(c & remaining))
        gain = best & remaining
        if not gain:
            return None
        remaining &= ~best
        used += 1
        if used > cap:
            return None
    return used


def coverable_within(
    target: int,
    candidates: Sequence[int],
    cap: int,
    node_budget: int = DEFAULT_COVER_NODE_BUDGET,
) -> bool:
    """Exact decision: can `target` be covered by at most `cap` candidate sets?

    Greedy success certifies yes; otherwise an exhaustive branch-and-bound on
    the least-covered point decides exactly (desk-scale sets only).
    """
    if target == 0:
        return True
    cands = sorted({c & target for c in candidates if c & target}, key=lambda c: -bit_count(c))
    # drop dominated candidates
    kept: list[int] = []
    for c in cands:
        if not any(c & ~k == 0 for k in kept):
            kept.append(c)
    if not kept:
        return False
    union_all = 0
    for c in kept:
        union_all |= c
    if target & ~union_all:
        return False
    if cap >= len(kept):
        return True
    g = _greedy_cover(target, kept, cap)
    if g is not None and g <= cap:
        return True

    per_point = {i: [c for c in kept if (c >> i) & 1] for i in iter_bits(target)}
    nodes = 0

    def search(remaining: int, depth: int) -> bool:
        nonlocal nodes
        nodes += 1
        if nodes > node_budget:
            raise CoverSearchBudgetExceeded(
                f"cover search exceeded {node_budget} nodes"
            )
        if remaining == 0:
            return True
        if depth == cap:
            return False
        pivot = min(iter_bits(remaining), key=lambda i: len(per_point[i]))
        for c in per_point[pivot]:
            if search(remaining & ~c, depth + 1):
                return True
        return False

    return search(target, 0)


def _measure(
    Y: frozenset[Point] | set[Point],
    family: AdmissibleFamily,
    cap: int,
    candidate_sets,
) -> MeasureValue:
    if not Y:
        raise EmptyInput("measure of the empty set is undefined")
    ymask = family.space.mask_of(Y)
    if family.kind == CHAIN:
        # qualifying levels are downward closed: scan fine-to-coarse
        threshold = -1
        for i in range(family.depth, -1, -1):
            if coverable_within(ymask, candidate_sets(family.coverings[i]), cap):
                threshold = i
                break
        if threshold == family.depth:
            return MeasureValue(CoverCollection.zero(family))
        # verify downward closure explicitly for odd families
        while threshold >= 0 and not coverable_within(
            ymask, candidate_sets(family.coverings[threshold]), cap
        ):
            threshold -= 1
        return MeasureValue(CoverCollection.chain(family, threshold))
    idx = [
        i
        for i, cov in enumerate(family.coverings)
        if coverable_within(ymask, candidate_sets(cov), cap)
    ]
    return MeasureValue(CoverCollection.finite(family, idx))


def star_measure(
    Y: frozenset[Point] | set[Point], family: AdmissibleFamily, cap: int
) -> MeasureValue:
    """Coverings at which Y admits a cover by at most `cap` point stars."""
    return _measure(Y, family, cap, lambda cov: cov.point_star)


def member_measure(
    Y: frozenset[Point] | set[Point], family: AdmissibleFamily, cap: int
) -> MeasureValue:
    """Coverings at which Y admits a cover by at most `cap` covering members."""
    return _measure(Y, family, cap, lambda cov: cov.members)


def is_cauchy(
    seq: Sequence[Point], family: AdmissibleFamily, min_tail: int = 2
) -> bool:
    """For every covering there is a tail whose pairs all share a member.

    Only tails with at least `min_tail` elements count: a one-element tail is
    vacuously related, which would make every truncated sequence Cauchy.
    """
    if not seq:
        raise EmptyInput("a Cauchy check needs a nonempty sequence")
    L = len(seq)
    idx = [p.index for p in seq]
    last_start = L - max(min_tail, 1)
    if last_start < 0:
        last_start = 0
    if family.kind == CHAIN:
        T = family.prox_matrix
        for level in range(family.size):
            ok = False
            for k0 in range(last_start + 1):
                tail = idx[k0:]
                if T[np.ix_(tail, tail)].min() >= level:
                    ok = True
                    break
            if not ok:
                return False
        return True
    B = family.membership_cube
    for level in range(family.size):
        ok = False
        for k0 in range(last_start + 1):
            tail = idx[k0:]
            if B[level][np.ix_(tail, tail)].all():
                ok = True
                break
        if not ok:
            return False
    return True


@dataclass(frozen=True)
class NestedChainReport:
    """Outcome of the nested-closed-chain (Cantor-style) harness."""

    hypothesis_met: bool
    intersection: frozenset[Point]
    measure_trace: tuple[CoverCollection, ...]
    claim: str

    def to_dict(self) -> dict:
        return {
            "hypothesis_met": self.hypothesis_met,
            "intersection": sorted(p.pid for p in self.intersection),
            "trace": [sorted(c.index_set()) for c in self.measure_trace],
            "claim": self.claim,
        }


def cantor_kuratowski_check(
    chain: Sequence[frozenset[Point] | set[Point]],
    family: AdmissibleFamily,
    cap: int,
) -> NestedChainReport:
    """Check a decreasing chain of nonempty closed sets: when the star measures
    converge to zero, assert and report the nonempty intersection; otherwise
    report that the hypothesis is not met (no claim)."""
    if not chain:
        raise EmptyInput("the chain must be nonempty")
    space = family.space
    masks = [space.mask_of(F) for F in chain]
    for k, m in enumerate(masks):
        if m == 0:
            raise EmptyInput(f"chain element {k} is empty")
        if family.closure_mask(m) != m:
            raise NotClosed(f"chain element {k} is not closed under the family closure")
    for k in range(1, len(masks)):
        if masks[k] & ~masks[k - 1]:
            raise NotDecreasing(f"element {k} is not contained in element {k - 1}")
    trace = tuple(star_measure(space.points_of(m), family, cap).value for m in masks)
    met = converges_to_zero(trace)
    inter = masks[-1]
    for m in masks:
        inter &= m
    pts = space.points_of(inter)
    if met:
        if not pts:
            claim = "violated: measures converge but the intersection is empty"
        else:
            claim = "nonempty compact intersection"
    else:
        claim = "hypothesis not met"
    return NestedChainReport(
        hypothesis_met=met, intersection=pts, measure_trace=trace, claim=claim
    )
