"""Open coverings, stars, the refinement calculus, and admissible covering families.

A covering is a finite set of nonempty member sets (bitmasks) whose union is
the whole space. Coverings are compared by refinement and double-refinement;
an admissible family is an indexed list of coverings that is either a chain
(each level double-refines its predecessor) or a finite directed collection.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional, Sequence

import numpy as np

from .space import EmptyInput, Point, Space, ball_mask, iter_bits


class CoveringError(Exception):
    """Base class for covering construction and comparison errors."""


class SpaceMismatch(CoveringError):
    """Two coverings (or a covering and a point set) live on different spaces."""


class DegenerateChain(CoveringError):
    """A requested chain could not be certified: some level fails to double-refine its predecessor."""


class TooManyOpens(CoveringError):
    """Exhaustive covering enumeration is guarded to small finite topologies."""


class ChainKindUnsupported(CoveringError):
    """The operation is defined for finite-kind families only."""


MAX_OPENS_FOR_ENUMERATION = 12


@dataclass(frozen=True, eq=False)
class Covering:
    """An open covering stored as explicit member bitmasks (deduplicated, sorted)."""

    space: Space
    members: tuple[int, ...]
    label: str = ""

    @cached_property
    def point_members(self) -> tuple[tuple[int, ...], ...]:
        """For each point index, the indices of members containing it."""
        per = [[] for _ in range(self.space.n)]
        for mi, m in enumerate(self.members):
            for b in iter_bits(m):
                per[b].append(mi)
        return tuple(tuple(v) for v in per)

    @cached_property
    def point_star(self) -> tuple[int, ...]:
        """For each point index, the union of members containing it."""
        out = []
        for i in range(self.space.n):
            s = 0
            for mi in self.point_members[i]:
                s |= self.members[mi]
            out.append(s)
        return tuple(out)

    def star_mask(self, ymask: int) -> int:
        if ymask == 0:
            raise EmptyInput("star of the empty set is undefined")
        s = 0
        for m in self.members:
            if m & ymask:
                s |= m
        return s

    def same_members(self, other: "Covering") -> bool:
        return self.members == other.members

    def __repr__(self) -> str:
        return f"Covering({self.label or len(self.members)})"


def make_covering(
    space: Space, member_sets: Iterable[Iterable[Point]], label: str = ""
) -> Covering:
    """Validate and build a covering from explicit member point sets."""
    masks = sorted({space.mask_of(m) for m in member_sets})
    return make_covering_masks(space, masks, label)


def make_covering_masks(space: Space, masks: Iterable[int], label: str = "") -> Covering:
    members = tuple(sorted(set(masks)))
    if not members or members[0] == 0:
        raise EmptyInput("covering members must be nonempty")
    union = 0
    for m in members:
        union |= m
    if union != space.full_mask:
        missing = space.point_list(space.full_mask & ~union)
        raise CoveringError(f"members do not cover the space; missing {missing[:4]}")
    if space.opens is not None:
        opens = set(space.opens)
        for m in members:
            if m not in opens:
                raise CoveringError(
                    f"member {sorted(p.pid for p in space.points_of(m))} is not open"
                )
    return Covering(space=space, members=members, label=label)


def _check_same_space(a: Covering, b: Covering) -> None:
    if a.space is not b.space:
        raise SpaceMismatch("coverings belong to different spaces")


def star(Y: frozenset[Point] | set[Point], U: Covering) -> frozenset[Point]:
    """Union of covering members meeting Y."""
    mask = U.space.mask_of(Y)
    return U.space.points_of(U.star_mask(mask))


def refines(V: Covering, U: Covering) -> bool:
    """True iff every member of V is contained in some member of U."""
    _check_same_space(V, U)
    for v in V.members:
        anchor = next(iter_bits(v))
        if not any(v & ~U.members[mi] == 0 for mi in U.point_members[anchor]):
            return False
    return True


def double_refines(V: Covering, U: Covering) -> bool:
    """True iff any two intersecting members of V fit jointly inside one member of U."""
    _check_same_space(V, U)
    pairs = set()
    for mis in V.point_members:
        for a, b in itertools.combinations(mis, 2):
            pairs.add((a, b))
    pairs.update((i, i) for i in range(len(V.members)))
    for a, b in pairs:
        union = V.members[a] | V.members[b]
        anchor = next(iter_bits(union))
        if not any(union & ~U.members[mi] == 0 for mi in U.point_members[anchor]):
            return False
    return True


def n_refines(V: Covering, U: Covering, n: int, pool: Sequence[Covering] = ()) -> bool:
    """True iff a length-n double-refinement chain from V to U exists with
    intermediates drawn from `pool` (searched exhaustively)."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    _check_same_space(V, U)
    if n == 1:
        return double_refines(V, U)
    frontier = [W for W in pool if double_refines(V, W)]
    for _ in range(n - 2):
        if not frontier:
            return False
        nxt = []
        seen = set()
        for W in pool:
            if id(W) in seen:
                continue
            if any(double_refines(F, W) for F in frontier):
                nxt.append(W)
                seen.add(id(W))
        frontier = nxt
    return any(double_refines(F, U) for F in frontier)


CHAIN = "chain"
FINITE = "finite"


@dataclass(frozen=True, eq=False)
class AdmissibleFamily:
    """An indexed family of coverings: a double-refinement chain or a finite directed set.

    Chain families are indexed coarse-to-fine; the construction certifies that
    each level double-refines its predecessor. Finite families are arbitrary
    listings (typically every open covering of a finite topology).
    """

    space: Space
    kind: str
    coverings: tuple[Covering, ...]
    label: str = ""

    def __post_init__(self):
        if self.kind not in (CHAIN, FINITE):
            raise ValueError(f"unknown family kind {self.kind!r}")
        if not self.coverings:
            raise EmptyInput("a family needs at least one covering")
        for c in self.coverings:
            if c.space is not self.space:
                raise SpaceMismatch("family coverings must share one space")

    @property
    def depth(self) -> int:
        return len(self.coverings) - 1

    @property
    def size(self) -> int:
        return len(self.coverings)

    @property
    def finest_index(self) -> int:
        """Index of the designated finest covering (last level for chains)."""
        return self.depth

    @cached_property
    def refine_matrix(self) -> np.ndarray:
        """R[i, j] = covering i refines covering j."""
        L = self.size
        R = np.zeros((L, L), dtype=bool)
        for i in range(L):
            for j in range(L):
                R[i, j] = refines(self.coverings[i], self.coverings[j])
        return R

    @cached_property
    def double_refine_matrix(self) -> np.ndarray:
        """D[i, j] = covering i double-refines covering j."""
        L = self.size
        D = np.zeros((L, L), dtype=bool)
        for i in range(L):
            for j in range(L):
                D[i, j] = double_refines(self.coverings[i], self.coverings[j])
        return D

    def reach_matrix(self, n: int) -> np.ndarray:
        """Exact n-step double-refinement reachability within the family."""
        cache = self.__dict__.setdefault("_reach_cache", {})
        if n not in cache:
            if n == 1:
                cache[n] = self.double_refine_matrix.copy()
            else:
                prev = self.reach_matrix(n - 1).astype(np.int64)
                cache[n] = (prev @ self.double_refine_matrix.astype(np.int64)) > 0
        return cache[n]

    @cached_property
    def prox_matrix(self) -> np.ndarray:
        """T[x, y] = greatest index i with y in St[x, U_i], or -1 (chain kind).

        For chains the membership sets are downward closed in the index, so a
        single threshold encodes the whole index set.
        """
        if self.kind != CHAIN:
            raise ChainKindUnsupported("threshold matrix is a chain-kind encoding")
        n = self.space.n
        T = np.full((n, n), -1, dtype=np.int32)
        for i, cov in enumerate(self.coverings):
            for x in range(n):
                for y in iter_bits(cov.point_star[x]):
                    if T[x, y] < i:
                        T[x, y] = i
        return T

    @cached_property
    def membership_cube(self) -> np.ndarray:
        """B[i, x, y] = y in St[x, U_i] (finite kind; small spaces only)."""
        L, n = self.size, self.space.n
        B = np.zeros((L, n, n), dtype=bool)
        for i, cov in enumerate(self.coverings):
            for x in range(n):
                for y in iter_bits(cov.point_star[x]):
                    B[i, x, y] = True
        return B

    def closure_mask(self, ymask: int) -> int:
        if ymask == 0:
            raise EmptyInput("closure of the empty set is undefined")
        out = self.space.full_mask
        for cov in self.coverings:
            out &= cov.star_mask(ymask)
        return out

    def star_mask_at(self, ymask: int, index: int) -> int:
        return self.coverings[index].star_mask(ymask)


def chain_family(
    space: Space, coverings: Sequence[Covering], label: str = ""
) -> AdmissibleFamily:
    """Assemble a chain family, certifying every consecutive double-refinement."""
    for i in range(1, len(coverings)):
        if not double_refines(coverings[i], coverings[i - 1]):
            raise DegenerateChain(
                f"level {i} ({coverings[i].label}) does not double-refine "
                f"level {i - 1} ({coverings[i - 1].label})"
            )
    return AdmissibleFamily(space=space, kind=CHAIN, coverings=tuple(coverings), label=label)


def metric_chain_family(
    space: Space, eps0: float, depth: int, ratio: float = 0.25
) -> AdmissibleFamily:
    """Chain of ball coverings with radii eps0 * ratio**i, one ball per sample point.

    The default ratio 1/4 guarantees the double-refinement certificate: two
    intersecting radius-r balls have centers within 2r, so their union lies in
    the radius-4r ball around either center. Repeated member sets at
    consecutive levels are allowed (deep levels of a finite sample saturate).
    """
    space.require_metric()
    if eps0 <= 0:
        raise ValueError("eps0 must be positive")
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if not 0 < ratio < 1:
        raise ValueError("ratio must be in (0, 1)")
    coverings = []
    for i in range(depth + 1):
        r = eps0 * ratio**i
        masks = {ball_mask(space, p, r) for p in space.points}
        coverings.append(make_covering_masks(space, masks, label=f"balls[r={r:.8g}]"))
    return chain_family(space, coverings, label=f"metric-chain(eps0={eps0:g},depth={depth})")


def enumerate_open_coverings(space: Space) -> list[Covering]:
    """All coverings by open sets of a finite-topology space (guarded)."""
    if space.opens is None:
        raise ChainKindUnsupported("covering enumeration needs a finite topology")
    nonempty = [o for o in space.opens if o != 0]
    if len(nonempty) > MAX_OPENS_FOR_ENUMERATION:
        raise TooManyOpens(
            f"{len(nonempty)} opens exceeds the enumeration guard "
            f"({MAX_OPENS_FOR_ENUMERATION})"
        )
    out = []
    seen = set()
    full = space.full_mask
    for r in range(1, len(nonempty) + 1):
        for combo in itertools.combinations(nonempty, r):
            union = 0
            for m in combo:
                union |= m
            if union != full:
                continue
            key = tuple(sorted(combo))
            if key in seen:
                continue
            seen.add(key)
            out.append(make_covering_masks(space, key, label=f"cov{len(out)}"))
    return out


def finite_all_coverings_family(space: Space) -> AdmissibleFamily:
    """The family of all open coverings of a finite topology, with its axiom report attached."""
    coverings = enumerate_open_coverings(space)
    fam = AdmissibleFamily(
        space=space, kind=FINITE, coverings=tuple(coverings), label="all-open-coverings"
    )
    report = verify_admissible(fam)
    fam.__dict__["admissibility_report"] = report
    return fam


def closure(
    Y: frozenset[Point] | set[Point], family: AdmissibleFamily
) -> frozenset[Point]:
    """Family closure: the intersection of the stars of Y over every covering.

    On finite-topology spaces whose family satisfies the star-basis axiom this
    equals the topological closure computed from the opens alone.
    """
    mask = family.space.mask_of(Y)
    return family.space.points_of(family.closure_mask(mask))


def replete_closure(family: AdmissibleFamily) -> AdmissibleFamily:
    """Extend a finite-kind family with every open covering coarsened by a member."""
    if family.kind != FINITE:
        raise ChainKindUnsupported("replete closure is defined for finite-kind families")
    universe = enumerate_open_coverings(family.space)
    have = {c.members for c in family.coverings}
    extra = []
    for cand in universe:
        if cand.members in have:
            continue
        if any(refines(u, cand) for u in family.coverings):
            extra.append(cand)
            have.add(cand.members)
    return AdmissibleFamily(
        space=family.space,
        kind=FINITE,
        coverings=tuple(family.coverings) + tuple(extra),
        label=family.label + "+replete",
    )


@dataclass(frozen=True)
class AxiomCheck:
    name: str
    passed: bool
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class AxiomReport:
    checks: tuple[AxiomCheck, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> AxiomCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [c.to_dict() for c in self.checks],
        }


def _default_target_opens(family: AdmissibleFamily) -> list[int]:
    space = family.space
    if space.opens is not None:
        return [o for o in space.opens if o != 0]
    # metric discretizations resolve to the discrete topology
    return [1 << i for i in range(space.n)]


def verify_admissible(
    family: AdmissibleFamily, target_opens: Optional[Sequence[int]] = None
) -> AxiomReport:
    """Check the admissibility axioms and both repleteness conditions, with witnesses.

    Axioms: (1) every covering admits a double-refinement in the family;
    (2) point stars resolve every target open (star basis); (3) common
    refinements exist. Repleteness: stars of each point exhaust the space,
    and every pair admits a common double-coarsening in the family.
    """
    space = family.space
    covs = family.coverings
    D = family.double_refine_matrix
    checks = []

    ok, wit = True, None
    for j in range(len(covs)):
        if not D[:, j].any():
            ok, wit = False, f"no double-refinement of {covs[j].label or j}"
            break
    checks.append(AxiomCheck("double_refinement_exists", ok, wit))

    targets = list(target_opens) if target_opens is not None else _default_target_opens(family)
    ok, wit = True, None
    for x in range(space.n):
        for o in targets:
            if not (o >> x) & 1:
                continue
            if not any(cov.point_star[x] & ~o == 0 for cov in covs):
                ok = False
                wit = (
                    f"no star of {space.points[x].pid} fits inside open "
                    f"{sorted(p.pid for p in space.points_of(o))}"
                )
                break
        if not ok:
            break
    checks.append(AxiomCheck("star_basis", ok, wit))

    R = family.refine_matrix
    ok, wit = True, None
    for i in range(len(covs)):
        for j in range(len(covs)):
            if not (R[:, i] & R[:, j]).any():
                ok, wit = False, f"no common refinement of ({i},{j})"
                break
        if not ok:
            break
    checks.append(AxiomCheck("common_refinement", ok, wit))

    ok, wit = True, None
    for x in range(space.n):
        u = 0
        for cov in covs:
            u |= cov.point_star[x]
        if u != space.full_mask:
            ok, wit = False, f"stars of {space.points[x].pid} do not exhaust the space"
            break
    checks.append(AxiomCheck("stars_exhaust_space", ok, wit))

    ok, wit = True, None
    for i in range(len(covs)):
        for j in range(len(covs)):
            if not (D[i, :] & D[j, :]).any():
                ok, wit = False, f"no common double-coarsening of ({i},{j})"
                break
        if not ok:
            break
    checks.append(AxiomCheck("common_double_coarsening", ok, wit))

    return AxiomReport(checks=tuple(checks))
