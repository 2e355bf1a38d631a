import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdyn.space import (
    DuplicatePoint,
    EmptyInput,
    MetricAxiomViolation,
    MissingEmptyOrFull,
    NotClosedUnderIntersection,
    NotClosedUnderUnion,
    NotMetricSpace,
    ball,
    build_finite_topology,
    build_metric_space,
    enumerate_topologies,
    line_grid,
    space_from_distance_matrix,
)


def test_three_point_line():
    s = build_metric_space([[0.0], [1.0], [2.0]])
    assert s.n == 3
    assert s.distance(s.points[0], s.points[2]) == 2.0


def test_grid_101_points():
    s = line_grid(0.0, 1.0, 101)
    assert s.n == 101
    assert s.min_positive_distance() == pytest.approx(0.01)
    assert s.diameter() == pytest.approx(1.0)


def test_duplicate_coordinates_rejected():
    with pytest.raises(DuplicatePoint):
        build_metric_space([[0.0, 0.0], [0.0, 0.0]])


def test_empty_rejected():
    with pytest.raises(EmptyInput):
        build_metric_space([])


def test_bad_distance_matrix_symmetry():
    d = [[0.0, 1.0], [2.0, 0.0]]
    with pytest.raises(MetricAxiomViolation) as e:
        space_from_distance_matrix(d, ["a", "b"])
    assert e.value.axiom == "symmetry"


def test_bad_distance_matrix_triangle():
    d = [[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]]
    with pytest.raises(MetricAxiomViolation) as e:
        space_from_distance_matrix(d, ["a", "b", "c"])
    assert e.value.axiom == "triangle"


def test_ball_basic():
    s = build_metric_space([[0.0], [1.0], [2.0]])
    p0 = s.points[0]
    assert {p.pid for p in ball(s, p0, 1.5)} == {"(0)", "(1)"}
    # radius above the diameter captures everything
    assert ball(s, p0, 10.0) == frozenset(s.points)
    # radius below the smallest positive distance captures only the center
    assert ball(s, p0, 0.5) == frozenset({p0})


def test_ball_is_open_strict():
    s = build_metric_space([[0.0], [1.0], [2.0]])
    assert {p.pid for p in ball(s, s.points[0], 1.0)} == {"(0)"}


def test_ball_needs_metric():
    t = build_finite_topology(["a", "b"], [[], ["a"], ["a", "b"]])
    with pytest.raises(NotMetricSpace):
        ball(t, t.points[0], 1.0)


@settings(max_examples=60)
@given(
    r1=st.floats(min_value=0.001, max_value=3.0),
    r2=st.floats(min_value=0.001, max_value=3.0),
    center=st.integers(min_value=0, max_value=20),
)
def test_ball_monotone_in_radius(r1, r2, center):
    s = line_grid(0.0, 1.0, 21)
    lo, hi = sorted([r1, r2])
    c = s.points[center]
    assert ball(s, c, lo) <= ball(s, c, hi)


def test_sierpinski_style_topology():
    s = build_finite_topology(["a", "b"], [[], ["a"], ["a", "b"]])
    assert s.opens == (0, 1, 3)


def test_discrete_topology_three_points():
    pts = ["a", "b", "c"]
    opens = [list(c) for r in range(4) for c in itertools.combinations(pts, r)]
    s = build_finite_topology(pts, opens)
    assert len(s.opens) == 8


def test_missing_full_set():
    with pytest.raises(MissingEmptyOrFull):
        build_finite_topology(["a", "b"], [[], ["a"]])


def test_not_closed_under_union():
    with pytest.raises(NotClosedUnderUnion):
        build_finite_topology(["a", "b", "c"], [[], ["a"], ["b"], ["a", "b", "c"]])


def test_not_closed_under_intersection():
    with pytest.raises(NotClosedUnderIntersection):
        build_finite_topology(
            ["a", "b", "c"], [[], ["a", "b"], ["b", "c"], ["a", "b", "c"]]
        )


def _closure_brute(masks: set[int], full: int) -> set[int]:
    out = set(masks) | {0, full}
    changed = True
    while changed:
        changed = False
        for a in list(out):
            for b in list(out):
                for c in (a | b, a & b):
                    if c not in out:
                        out.add(c)
                        changed = True
    return out


def test_validation_matches_bruteforce_closure():
    # families accepted by the validator are exactly the union/intersection-closed ones
    pts = ["a", "b", "c"]
    full = 7
    proper = [m for m in range(8) if m not in (0, full)]
    ids = lambda m: [pts[i] for i in range(3) if (m >> i) & 1]
    accepted = 0
    for r in range(len(proper) + 1):
        for combo in itertools.combinations(proper, r):
            fam = set(combo) | {0, full}
            is_closed = _closure_brute(fam, full) == fam
            try:
                build_finite_topology(pts, [ids(m) for m in fam])
                ok = True
            except (NotClosedUnderUnion, NotClosedUnderIntersection):
                ok = False
            assert ok == is_closed
            accepted += ok
    assert accepted == 29  # labeled topologies on three points


def test_enumerate_topologies_counts():
    assert len(enumerate_topologies(1)) == 1
    assert len(enumerate_topologies(2)) == 4
    assert len(enumerate_topologies(3)) == 29


def test_topology_closure():
    s = build_finite_topology(["a", "b"], [[], ["a"], ["a", "b"]])
    a, b = s.points
    # the only open containing b is the whole space, which meets {a}
    assert s.topology_closure(s.mask_of([a])) == s.full_mask
    assert s.topology_closure(s.mask_of([b])) == s.mask_of([b])
