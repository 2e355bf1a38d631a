"""Finite discretized phase spaces: metric point samples and explicit finite topologies.

A Space is a finite set of points carrying either a validated metric (as a
distance matrix) or a validated finite topology (as a list of open sets).
Point subsets are handled internally as integer bitmasks; public helpers
convert between masks and frozensets of points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np


class SpaceError(Exception):
    """Base class for space construction and query errors."""


class EmptyInput(SpaceError):
    """An operation that requires a nonempty point set got an empty one."""


class DuplicatePoint(SpaceError):
    """Two points coincide (same coordinates or same id)."""


class MetricAxiomViolation(SpaceError):
    """A metric axiom failed; carries the axiom name and a witness tuple."""

    def __init__(self, axiom: str, witness: tuple):
        self.axiom = axiom
        self.witness = witness
        super().__init__(f"metric axiom {axiom!r} violated at {witness!r}")


class NotMetricSpace(SpaceError):
    """A metric-only operation was applied to a finite-topology space."""


class MissingEmptyOrFull(SpaceError):
    """A finite topology must contain the empty set and the full point set."""


class NotClosedUnderUnion(SpaceError):
    def __init__(self, a: frozenset, b: frozenset):
        self.witness = (a, b)
        super().__init__(f"opens not closed under union: {sorted(a)} | {sorted(b)}")


class NotClosedUnderIntersection(SpaceError):
    def __init__(self, a: frozenset, b: frozenset):
        self.witness = (a, b)
        super().__init__(f"opens not closed under intersection: {sorted(a)} & {sorted(b)}")


# comparisons on computed distances are exact up to this slack; scenario radii
# are always chosen away from realized distances
TRIANGLE_SLACK = 1e-12

METRICS = ("euclidean", "sup")


@dataclass(frozen=True)
class Point:
    """A sample point: opaque id, index within its space, optional coordinates."""

    pid: str
    index: int
    coords: Optional[tuple[float, ...]] = None

    def __repr__(self) -> str:
        return f"Point({self.pid})"


def _fmt_coords(coords: Sequence[float]) -> str:
    return "(" + ",".join(f"{c:.10g}" for c in coords) + ")"


@dataclass(frozen=True, eq=False)
class Space:
    """A finite point set with either metric or finite-topology geometry."""

    points: tuple[Point, ...]
    metric_name: Optional[str] = None
    dist: Optional[np.ndarray] = None
    opens: Optional[tuple[int, ...]] = None

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def is_metric(self) -> bool:
        return self.dist is not None

    def require_metric(self) -> None:
        if not self.is_metric:
            raise NotMetricSpace("operation requires a metric space")

    def mask_of(self, pts: Iterable[Point]) -> int:
        mask = 0
        for p in pts:
            mask |= 1 << p.index
        return mask

    def points_of(self, mask: int) -> frozenset[Point]:
        return frozenset(self.points[i] for i in iter_bits(mask))

    def point_list(self, mask: int) -> list[Point]:
        return [self.points[i] for i in iter_bits(mask)]

    def by_id(self, pid: str) -> Point:
        for p in self.points:
            if p.pid == pid:
                return p
        raise KeyError(pid)

    def distance(self, a: Point, b: Point) -> float:
        self.require_metric()
        return float(self.dist[a.index, b.index])

    def diameter(self) -> float:
        self.require_metric()
        return float(self.dist.max())

    def min_positive_distance(self) -> float:
        self.require_metric()
        d = self.dist[self.dist > 0]
        return float(d.min()) if d.size else 0.0

    def nearest_index(self, coords: Sequence[float]) -> int:
        """Index of the sample point nearest to raw coordinates (ties: lowest index)."""
        self.require_metric()
        c = np.asarray(coords, dtype=float)
        pts = np.array([p.coords for p in self.points], dtype=float)
        if self.metric_name == "sup":
            d = np.abs(pts - c).max(axis=1)
        else:
            d = np.sqrt(((pts - c) ** 2).sum(axis=1))
        return int(d.argmin())

    def topology_closure(self, mask: int) -> int:
        """Topological closure from the opens alone (independent of any covering family)."""
        if self.opens is None:
            raise NotMetricSpace("topological closure needs a finite-topology space")
        full = self.full_mask
        out = full
        for o in self.opens:
            closed = full & ~o
            if mask & ~closed == 0:
                out &= closed
        return out


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_count(mask: int) -> int:
    return mask.bit_count()


def _pairwise_distances(coords: np.ndarray, metric: str) -> np.ndarray:
    diff = coords[:, None, :] - coords[None, :, :]
    if metric == "euclidean":
        return np.sqrt((diff**2).sum(axis=2))
    if metric == "sup":
        return np.abs(diff).max(axis=2)
    raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")


def _validate_metric(dist: np.ndarray, ids: Sequence[str]) -> None:
    n = dist.shape[0]
    if np.any(np.diag(dist) != 0.0):
        i = int(np.nonzero(np.diag(dist))[0][0])
        raise MetricAxiomViolation("zero-on-diagonal", (ids[i],))
    if np.any(dist != dist.T):
        i, j = map(int, np.argwhere(dist != dist.T)[0])
        raise MetricAxiomViolation("symmetry", (ids[i], ids[j]))
    off = dist + np.eye(n)
    if np.any(off <= 0):
        i, j = map(int, np.argwhere(off <= 0)[0])
        raise DuplicatePoint(f"points {ids[i]} and {ids[j]} are indistinguishable")
    for k in range(n):
        via = dist[:, k, None] + dist[None, k, :]
        if np.any(dist > via + TRIANGLE_SLACK):
            i, j = map(int, np.argwhere(dist > via + TRIANGLE_SLACK)[0])
            raise MetricAxiomViolation("triangle", (ids[i], ids[j], ids[k]))


def build_metric_space(
    coords: Sequence[Sequence[float]],
    metric: str = "euclidean",
    ids: Optional[Sequence[str]] = None,
) -> Space:
    """Build a metric space from coordinate vectors; validates all metric axioms."""
    if len(coords) == 0:
        raise EmptyInput("a space needs at least one point")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    arr = np.array([[float(c) for c in row] for row in coords], dtype=float)
    if arr.ndim != 2:
        raise ValueError("all coordinate vectors must have the same length")
    if ids is None:
        ids = [_fmt_coords(row) for row in coords]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if list(ids).count(i) > 1)
        raise DuplicatePoint(f"duplicate point id {dup!r}")
    dist = _pairwise_distances(arr, metric)
    _validate_metric(dist, ids)
    points = tuple(
        Point(pid=ids[i], index=i, coords=tuple(arr[i])) for i in range(len(ids))
    )
    return Space(points=points, metric_name=metric, dist=dist)


def space_from_distance_matrix(dist: Sequence[Sequence[float]], ids: Sequence[str]) -> Space:
    """Build a metric space from an explicit distance matrix (axioms validated)."""
    d = np.asarray(dist, dtype=float)
    if d.shape[0] == 0:
        raise EmptyInput("a space needs at least one point")
    _validate_metric(d, ids)
    points = tuple(Point(pid=ids[i], index=i) for i in range(len(ids)))
    return Space(points=points, metric_name="explicit", dist=d)


def line_grid(start: float, stop: float, count: int, metric: str = "euclidean") -> Space:
    """Evenly spaced sample of the interval [start, stop] with `count` points."""
    xs = np.linspace(start, stop, count)
    return build_metric_space([[x] for x in xs], metric=metric)


def ball_mask(space: Space, center: Point, radius: float) -> int:
    space.require_metric()
    if radius <= 0:
        raise ValueError("radius must be positive")
    row = space.dist[center.index]
    mask = 0
    for i in np.nonzero(row < radius)[0]:
        mask |= 1 << int(i)
    return mask


def ball(space: Space, center: Point, radius: float) -> frozenset[Point]:
    """Open metric ball: points strictly closer than `radius` to the center."""
    return space.points_of(ball_mask(space, center, radius))


def build_finite_topology(
    point_ids: Sequence[str], opens: Iterable[Iterable[str]]
) -> Space:
    """Build a finite-topology space; closure under union/intersection is checked exhaustively."""
    if len(point_ids) == 0:
        raise EmptyInput("a space needs at least one point")
    if len(set(point_ids)) != len(point_ids):
        raise DuplicatePoint("duplicate point ids")
    idx = {pid: i for i, pid in enumerate(point_ids)}
    masks = set()
    for o in opens:
        o = list(o)
        bad = [x for x in o if x not in idx]
        if bad:
            raise ValueError(f"open set mentions unknown point {bad[0]!r}")
        masks.add(sum(1 << idx[x] for x in set(o)))
    full = (1 << len(point_ids)) - 1
    if 0 not in masks or full not in masks:
        raise MissingEmptyOrFull("opens must contain the empty set and the full point set")
    ordered = sorted(masks)
    points = tuple(Point(pid=pid, index=i) for pid, i in idx.items())
    id_set = lambda m: frozenset(point_ids[i] for i in iter_bits(m))
    for a, b in itertools.combinations(ordered, 2):
        if (a | b) not in masks:
            raise NotClosedUnderUnion(id_set(a), id_set(b))
        if (a & b) not in masks:
            raise NotClosedUnderIntersection(id_set(a), id_set(b))
    return Space(points=points, opens=tuple(ordered))


def enumerate_topologies(n: int) -> list[tuple[tuple[int, ...], ...]]:
    """All topologies on n labeled points, each as a sorted tuple of open masks."""
    if n > 4:
        raise ValueError("topology enumeration is intended for tiny spaces")
    full = (1 << n) - 1
    proper = [m for m in range(full + 1) if m not in (0, full)]
    out = []
    for r in range(len(proper) + 1):
        for combo in itertools.combinations(proper, r):
            fam = set(combo) | {0, full}
            ok = all((a | b) in fam and (a & b) in fam for a in fam for b in fam)
            if ok:
                out.append(tuple(sorted(fam)))
    return out
