"""Covering-valued proximity: the ordered power set of a family and the prox functions.

Distances between points are measured by which coverings place them in a
common star. Values are upward-hereditary collections of covering indices,
ordered by reverse inclusion: the full family plays the role of distance
zero, the empty collection the role of infinity. Chain-kind collections are
downward-closed index intervals and are stored as a single threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .covering import CHAIN, FINITE, AdmissibleFamily, ChainKindUnsupported
from .space import EmptyInput, Point

INF = math.inf


class FamilyMismatch(Exception):
    """Two collection values refer to different covering families."""


Threshold = Union[int, float]


@dataclass(frozen=True, eq=False)
class CoverCollection:
    """An upward-hereditary set of covering indices of one family.

    Chain kind stores a threshold t meaning {levels 0..t}; t = -1 is the empty
    collection and t = inf is the whole family (the zero element). Finite kind
    stores the explicit index set, closed upward along the refinement order.
    """

    family: AdmissibleFamily
    threshold: Optional[Threshold] = None
    indices: Optional[frozenset[int]] = None

    @staticmethod
    def chain(family: AdmissibleFamily, threshold: Threshold) -> "CoverCollection":
        if family.kind != CHAIN:
            raise ChainKindUnsupported("threshold encoding needs a chain family")
        if threshold != INF:
            threshold = int(threshold)
            if threshold >= family.depth:
                threshold = INF
            elif threshold < -1:
                threshold = -1
        return CoverCollection(family=family, threshold=threshold)

    @staticmethod
    def finite(family: AdmissibleFamily, indices: Iterable[int]) -> "CoverCollection":
        if family.kind != FINITE:
            raise ChainKindUnsupported("index-set encoding needs a finite family")
        idx = set(int(i) for i in indices)
        R = family.refine_matrix
        # upward closure: a member's every coarsening is present
        grown = set(idx)
        for i in idx:
            grown.update(int(j) for j in np.nonzero(R[i])[0])
        return CoverCollection(family=family, indices=frozenset(grown))

    @staticmethod
    def zero(family: AdmissibleFamily) -> "CoverCollection":
        """The whole family: the least element, playing the role of distance zero."""
        if family.kind == CHAIN:
            return CoverCollection.chain(family, INF)
        return CoverCollection(family=family, indices=frozenset(range(family.size)))

    @staticmethod
    def infinity(family: AdmissibleFamily) -> "CoverCollection":
        """The empty collection: the greatest element."""
        if family.kind == CHAIN:
            return CoverCollection(family=family, threshold=-1)
        return CoverCollection(family=family, indices=frozenset())

    def index_set(self) -> frozenset[int]:
        if self.family.kind == CHAIN:
            if self.threshold == INF:
                return frozenset(range(self.family.size))
            return frozenset(range(int(self.threshold) + 1))
        return self.indices

    def contains_index(self, i: int) -> bool:
        if self.family.kind == CHAIN:
            return i <= self.threshold
        return i in self.indices

    @property
    def is_zero(self) -> bool:
        if self.family.kind == CHAIN:
            return self.threshold == INF
        return len(self.indices) == self.family.size

    @property
    def is_empty(self) -> bool:
        if self.family.kind == CHAIN:
            return self.threshold == -1
        return not self.indices

    def _raw(self) -> Threshold:
        return self.family.depth if self.threshold == INF else self.threshold

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoverCollection):
            return NotImplemented
        _check_family(self, other)
        if self.family.kind == CHAIN:
            return self.threshold == other.threshold
        return self.indices == other.indices

    def __hash__(self) -> int:
        if self.family.kind == CHAIN:
            return hash((id(self.family), self.threshold))
        return hash((id(self.family), self.indices))

    def __and__(self, other: "CoverCollection") -> "CoverCollection":
        _check_family(self, other)
        if self.family.kind == CHAIN:
            return CoverCollection.chain(self.family, min(self._raw(), other._raw()))
        return CoverCollection(family=self.family, indices=self.indices & other.indices)

    def __or__(self, other: "CoverCollection") -> "CoverCollection":
        _check_family(self, other)
        if self.family.kind == CHAIN:
            return CoverCollection.chain(self.family, max(self._raw(), other._raw()))
        return CoverCollection(family=self.family, indices=self.indices | other.indices)

    def __repr__(self) -> str:
        if self.family.kind == CHAIN:
            t = "inf" if self.threshold == INF else self.threshold
            return f"CoverCollection(<=U_{t})"
        return f"CoverCollection({sorted(self.indices)})"


def _check_family(a: CoverCollection, b: CoverCollection) -> None:
    if a.family is not b.family:
        raise FamilyMismatch("values belong to different families")


def precedes(E1: CoverCollection, E2: CoverCollection) -> bool:
    """Order by reverse inclusion: E1 precedes E2 iff E1 contains E2."""
    _check_family(E1, E2)
    if E1.family.kind == CHAIN:
        return E1._raw() >= E2._raw()
    return E1.indices >= E2.indices


def _chain_coarsen_witness(family: AdmissibleFamily, n: int) -> np.ndarray:
    """W[i] = least source level whose n-step double-refinement reaches level i."""
    cache = family.__dict__.setdefault("_coarsen_witness", {})
    if n not in cache:
        reach = family.reach_matrix(n)
        L = family.size
        W = np.full(L, L + 1, dtype=np.int32)
        for i in range(L):
            src = np.nonzero(reach[:, i])[0]
            if src.size:
                W[i] = int(src.min())
        cache[n] = W
    return cache[n]


def coarsen(E: CoverCollection, n: int) -> CoverCollection:
    """The collection of coverings n-step double-refined by some member of E.

    Order preserving, and fixes the zero element whenever the family's levels
    supply the required refinement witnesses.
    """
    if n < 1:
        raise ValueError("n must be a positive integer")
    fam = E.family
    if fam.kind == CHAIN:
        if E.is_empty:
            return CoverCollection.infinity(fam)
        W = _chain_coarsen_witness(fam, n)
        raw = E._raw()
        qualifying = np.nonzero(W <= raw)[0]
        return CoverCollection.chain(fam, int(qualifying.max()) if qualifying.size else -1)
    reach = fam.reach_matrix(n)
    out = set()
    for j in E.indices:
        out.update(int(i) for i in np.nonzero(reach[j])[0])
    return CoverCollection(family=fam, indices=frozenset(out))


def converges_to_zero(seq: Sequence[CoverCollection]) -> bool:
    """Truncated-net convergence: every covering index is present from some
    position on (equivalently: present in every sufficiently late element)."""
    return all(k is not None for k in convergence_trace(seq))


def convergence_trace(seq: Sequence[CoverCollection]) -> list[Optional[int]]:
    """Per covering index: the first position after which it is always present."""
    if not seq:
        raise EmptyInput("convergence needs at least one element")
    fam = seq[0].family
    for e in seq:
        _check_family(seq[0], e)
    out = []
    for i in range(fam.size):
        k0 = 0
        for k, e in enumerate(seq):
            if not e.contains_index(i):
                k0 = k + 1
        out.append(k0 if k0 < len(seq) else None)
    return out


def prox(x: Point, y: Point, family: AdmissibleFamily) -> CoverCollection:
    """The collection of coverings whose star at x captures y."""
    if family.kind == CHAIN:
        return CoverCollection.chain(family, int(family.prox_matrix[x.index, y.index]))
    B = family.membership_cube
    return CoverCollection(
        family=family,
        indices=frozenset(int(i) for i in np.nonzero(B[:, x.index, y.index])[0]),
    )


def prox_to_set(
    x: Point, A: frozenset[Point] | set[Point], family: AdmissibleFamily
) -> CoverCollection:
    """Union of prox(x, a) over a in A: coverings whose star at x meets A."""
    if not A:
        raise EmptyInput("prox to the empty set is undefined")
    if family.kind == CHAIN:
        T = family.prox_matrix
        t = max(int(T[x.index, a.index]) for a in A)
        return CoverCollection.chain(family, t)
    B = family.membership_cube
    cols = [a.index for a in A]
    mask = B[:, x.index, cols].any(axis=1)
    return CoverCollection(
        family=family, indices=frozenset(int(i) for i in np.nonzero(mask)[0])
    )


def semi_prox(
    A: frozenset[Point] | set[Point],
    B: frozenset[Point] | set[Point],
    family: AdmissibleFamily,
) -> CoverCollection:
    """One-sided set proximity: coverings at which every point of B is star-close to A."""
    if not A or not B:
        raise EmptyInput("semi_prox needs nonempty sets")
    out = CoverCollection.zero(family)
    for b in B:
        out = out & prox_to_set(b, A, family)
    return out


def semi_prox_masks(amask: int, bmask: int, family: AdmissibleFamily) -> CoverCollection:
    space = family.space
    return semi_prox(space.points_of(amask), space.points_of(bmask), family)


def point_sequence_converges(
    seq: Sequence[Point], x: Point, family: AdmissibleFamily
) -> bool:
    """Truncated convergence of a point sequence: eventually inside every star of x."""
    if not seq:
        raise EmptyInput("convergence needs at least one point")
    for i in range(family.size):
        star = family.coverings[i].point_star[x.index]
        k0 = 0
        for k, p in enumerate(seq):
            if not (star >> p.index) & 1:
                k0 = k + 1
        if k0 >= len(seq):
            return False
    return True


def sets_equal_at_resolution(
    A: frozenset[Point] | set[Point],
    B: frozenset[Point] | set[Point],
    family: AdmissibleFamily,
) -> bool:
    """Set equality up to the family's resolution: mutual semi-prox domination."""
    if not A and not B:
        return True
    if not A or not B:
        return False
    return semi_prox(A, B, family).is_zero and semi_prox(B, A, family).is_zero


def subset_at_resolution(
    A: frozenset[Point] | set[Point],
    B: frozenset[Point] | set[Point],
    family: AdmissibleFamily,
) -> bool:
    """A is contained in B up to resolution: every point of A is star-close to B."""
    if not A:
        return True
    if not B:
        return False
    return semi_prox(B, A, family).is_zero
