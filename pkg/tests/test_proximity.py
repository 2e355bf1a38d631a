import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from coverdyn.covering import (
    chain_family,
    closure,
    finite_all_coverings_family,
    make_covering,
    metric_chain_family,
)
from coverdyn.proximity import (
    INF,
    CoverCollection,
    FamilyMismatch,
    coarsen,
    converges_to_zero,
    convergence_trace,
    point_sequence_converges,
    precedes,
    prox,
    prox_to_set,
    semi_prox,
    sets_equal_at_resolution,
)
from coverdyn.space import build_finite_topology, build_metric_space, line_grid


@pytest.fixture(scope="module")
def grid():
    return line_grid(0.0, 1.0, 101)


@pytest.fixture(scope="module")
def fam(grid):
    # coarsest radius above the diameter; finest resolves single grid points
    return metric_chain_family(grid, 2.0, 5)


@pytest.fixture(scope="module")
def tiny():
    s = build_finite_topology(["a", "b"], [[], ["a"], ["b"], ["a", "b"]])
    return finite_all_coverings_family(s)


def naive_prox_indices(x, y, family):
    """Independent oracle: direct membership scan over every covering."""
    out = set()
    for i, cov in enumerate(family.coverings):
        if any((m >> x.index) & 1 and (m >> y.index) & 1 for m in cov.members):
            out.add(i)
    return frozenset(out)


def test_zero_precedes_everything(fam):
    zero = CoverCollection.zero(fam)
    for t in (-1, 0, 2, INF):
        assert precedes(zero, CoverCollection.chain(fam, t))


def test_empty_is_upper_bound(fam):
    top = CoverCollection.infinity(fam)
    for t in (-1, 0, 2, INF):
        assert precedes(CoverCollection.chain(fam, t), top)


def test_precedes_reflexive_antisymmetric(fam):
    vals = [CoverCollection.chain(fam, t) for t in (-1, 0, 3, INF)]
    for a in vals:
        assert precedes(a, a)
    for a, b in itertools.combinations(vals, 2):
        assert precedes(a, b) != precedes(b, a)


def test_family_mismatch(fam, tiny):
    with pytest.raises(FamilyMismatch):
        precedes(CoverCollection.zero(fam), CoverCollection.zero(tiny))


def test_chain_threshold_canonical(fam):
    # a threshold at full depth is the whole family, canonicalized to inf
    assert CoverCollection.chain(fam, fam.depth).threshold == INF
    assert CoverCollection.chain(fam, fam.depth) == CoverCollection.zero(fam)


def test_coarsen_zero_fixed_point(fam):
    zero = CoverCollection.zero(fam)
    for n in range(1, fam.depth + 1):
        assert coarsen(zero, n) == zero


def test_coarsen_shifts_thresholds(fam):
    # mid thresholds move down by n on this chain (witnesses are consecutive levels)
    for t in range(1, fam.depth - 1):
        for n in range(1, t + 1):
            out = coarsen(CoverCollection.chain(fam, t), n)
            assert out.threshold == t - n


def test_coarsen_empty(fam):
    top = CoverCollection.infinity(fam)
    assert coarsen(top, 1) == top


def test_coarsen_order_preserving(fam):
    vals = [CoverCollection.chain(fam, t) for t in (-1, 0, 1, 3, INF)]
    for a, b in itertools.product(vals, repeat=2):
        if precedes(a, b):
            assert precedes(coarsen(a, 1), coarsen(b, 1))


def test_coarsen_finite_kind(tiny):
    zero = CoverCollection.zero(tiny)
    assert coarsen(zero, 1) == zero
    top = CoverCollection.infinity(tiny)
    assert coarsen(top, 1) == top


def test_converges_constant_zero(fam):
    assert converges_to_zero([CoverCollection.zero(fam)] * 3)


def test_converges_increasing_thresholds(fam):
    seq = [CoverCollection.chain(fam, t) for t in range(fam.depth + 1)]
    assert converges_to_zero(seq)
    trace = convergence_trace(seq)
    assert trace == [i for i in range(fam.size)]


def test_converges_stuck_threshold(fam):
    seq = [CoverCollection.chain(fam, 0)] * 4
    assert not converges_to_zero(seq)


def test_prox_matches_oracle_exhaustive():
    grid = line_grid(0.0, 1.0, 31)
    fam31 = metric_chain_family(grid, 2.0, 4)
    for x, y in itertools.product(grid.points, repeat=2):
        assert prox(x, y, fam31).index_set() == naive_prox_indices(x, y, fam31)


def test_prox_matches_oracle_finite(tiny):
    pts = tiny.space.points
    for x, y in itertools.product(pts, repeat=2):
        assert prox(x, y, tiny).index_set() == naive_prox_indices(x, y, tiny)


def test_prox_symmetry_exhaustive(grid, fam):
    T = fam.prox_matrix
    assert (T == T.T).all()


def test_prox_self_is_zero(grid, fam):
    for x in grid.points[::10]:
        assert prox(x, x, fam).is_zero


def test_prox_hausdorff_separation(grid, fam):
    # finest covering resolves singletons: distinct points never at distance zero
    for x, y in itertools.combinations(grid.points[::10], 2):
        assert not prox(x, y, fam).is_zero


def test_prox_grid_threshold_bruteforce(grid):
    # threshold of (0, 0.1) on the quarter chain with eps0=1: brute force over centers
    fam1 = metric_chain_family(grid, 1.0, 5)
    x, y = grid.points[0], grid.points[10]
    expected = -1
    for i in range(6):
        r = 1.0 * 0.25**i
        if any(
            grid.distance(c, x) < r and grid.distance(c, y) < r for c in grid.points
        ):
            expected = i
    got = prox(x, y, fam1)
    assert got.threshold == expected


def test_prox_triangle_single_intermediate():
    grid = line_grid(0.0, 1.0, 30)
    fam30 = metric_chain_family(grid, 2.0, 4)
    pts = grid.points
    for x, y, z in itertools.product(pts[::3], pts[::3], pts[::3]):
        lhs = prox(x, y, fam30)
        rhs = coarsen(prox(x, z, fam30) & prox(z, y, fam30), 1)
        assert precedes(lhs, rhs), (x.pid, y.pid, z.pid)


def test_prox_triangle_two_intermediates():
    grid = line_grid(0.0, 1.0, 16)
    fam16 = metric_chain_family(grid, 2.0, 3)
    pts = grid.points
    rng = random.Random(7)
    for _ in range(300):
        x, y, z1, z2 = (rng.choice(pts) for _ in range(4))
        lhs = prox(x, y, fam16)
        rhs = coarsen(
            prox(x, z1, fam16) & prox(z1, z2, fam16) & prox(z2, y, fam16), 2
        )
        assert precedes(lhs, rhs)


def test_sequence_convergence_iff_prox_converges(grid, fam):
    x = grid.points[0]
    rng = random.Random(3)
    # convergent: walk down to x and stay
    walk = [grid.points[k] for k in (50, 30, 14, 6, 2, 1, 0, 0, 0, 0, 0, 0)]
    # non-convergent: alternate between two separated points
    flip = [grid.points[k] for k in (0, 40)] * 6
    for seq in (walk, flip):
        lhs = point_sequence_converges(seq, x, fam)
        rhs = converges_to_zero([prox(p, x, fam) for p in seq])
        assert lhs == rhs
    assert point_sequence_converges(walk, x, fam)
    assert not point_sequence_converges(flip, x, fam)
    for _ in range(20):
        seq = [rng.choice(grid.points) for _ in range(6)] + [x] * 4
        assert point_sequence_converges(seq, x, fam) == converges_to_zero(
            [prox(p, x, fam) for p in seq]
        )


def test_prox_to_set_membership(grid, fam):
    x = grid.points[0]
    A = frozenset({grid.points[0], grid.points[50]})
    assert prox_to_set(x, A, fam).is_zero  # x in A
    B = frozenset({grid.points[50]})
    assert not prox_to_set(x, B, fam).is_zero


def test_prox_to_set_closure_criterion(tiny):
    # distance zero to a set exactly on its closure, cross-checked per point
    s = tiny.space
    for mask in range(1, 4):
        A = s.points_of(mask)
        cl = closure(A, tiny)
        for x in s.points:
            assert prox_to_set(x, A, tiny).is_zero == (x in cl)


def test_prox_to_set_closure_invariant(grid, fam):
    # prox to a set equals prox to its closure
    A = frozenset(grid.points[10:20])
    cl = closure(A, fam)
    for x in grid.points[::7]:
        assert prox_to_set(x, A, fam) == prox_to_set(x, cl, fam)


def test_semi_prox_examples(grid, fam):
    A = frozenset({grid.points[0]})
    B = frozenset({grid.points[0], grid.points[10]})
    one = semi_prox(A, B, fam)
    # bounded by the worst point: equals prox(0.1, {0})
    assert one == prox_to_set(grid.points[10], A, fam)
    assert semi_prox(B, A, fam).is_zero  # A inside B


def test_semi_prox_zero_iff_subset_of_closure(tiny):
    s = tiny.space
    for am in range(1, 4):
        for bm in range(1, 4):
            A, B = s.points_of(am), s.points_of(bm)
            lhs = semi_prox(A, B, tiny).is_zero
            rhs = B <= closure(A, tiny)
            assert lhs == rhs


def test_convergent_net_closure_criterion(grid, fam):
    # for a sequence converging to x: x lies in cls(A) iff the set proximities
    # of the sequence to A converge to zero
    x = grid.points[0]
    seq = [grid.points[k] for k in (30, 12, 5, 2, 1, 0, 0, 0)]
    for A in (
        frozenset({grid.points[0], grid.points[70]}),
        frozenset({grid.points[40]}),
        frozenset(grid.points[0:3]),
    ):
        in_closure = x in closure(A, fam)
        traj = [semi_prox(A, frozenset({p}), fam) for p in seq]
        assert converges_to_zero(traj) == in_closure


@settings(max_examples=80, deadline=None)
@given(data=st.data())
def test_prox_to_set_monotone(data):
    grid9 = line_grid(0.0, 1.0, 9)
    fam9 = metric_chain_family(grid9, 2.0, 2)
    a = data.draw(st.sets(st.integers(0, 8), min_size=1, max_size=9))
    extra = data.draw(st.sets(st.integers(0, 8), max_size=9))
    x = grid9.points[data.draw(st.integers(0, 8))]
    A = frozenset(grid9.points[i] for i in a)
    B = A | frozenset(grid9.points[i] for i in extra)
    assert precedes(prox_to_set(x, B, fam9), prox_to_set(x, A, fam9))


@settings(max_examples=80, deadline=None)
@given(
    t1=st.one_of(st.integers(-1, 2), st.just(INF)),
    t2=st.one_of(st.integers(-1, 2), st.just(INF)),
)
def test_lattice_laws_chain(t1, t2):
    grid5 = line_grid(0.0, 1.0, 5)
    fam5 = metric_chain_family(grid5, 2.0, 3)
    a, b = CoverCollection.chain(fam5, t1), CoverCollection.chain(fam5, t2)
    assert (a & b).index_set() == a.index_set() & b.index_set()
    assert (a | b).index_set() == a.index_set() | b.index_set()
    # reverse inclusion: the union is closer to zero, the intersection farther
    assert precedes(a | b, a)
    assert precedes(a, a & b)


def test_sets_equal_at_resolution(grid, fam):
    A = frozenset({grid.points[5]})
    assert sets_equal_at_resolution(A, A, fam)
    B = frozenset({grid.points[5], grid.points[80]})
    assert not sets_equal_at_resolution(A, B, fam)
    # a coarse family cannot tell near neighbors apart
    coarse = metric_chain_family(grid, 2.0, 1)
    C = frozenset({grid.points[5], grid.points[6]})
    assert sets_equal_at_resolution(A, C, coarse)


def test_empty_inputs_raise(grid, fam):
    from coverdyn.space import EmptyInput

    with pytest.raises(EmptyInput):
        prox_to_set(grid.points[0], frozenset(), fam)
    with pytest.raises(EmptyInput):
        semi_prox(frozenset(), frozenset({grid.points[0]}), fam)
    with pytest.raises(EmptyInput):
        convergence_trace([])
