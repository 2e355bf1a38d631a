import itertools

import pytest

from coverdyn.covering import double_refines, star
from coverdyn.funcspace import (
    build_function_model,
    constraint,
    in_pointwise_star,
    pointwise_chain,
    pointwise_covering,
)


@pytest.fixture(scope="module")
def model():
    # scalar functions on three arguments
    args = (-1.0, 0.0, 1.0)
    tables = [
        [(0.0,), (0.0,), (0.0,)],
        [(-1.0,), (0.0,), (1.0,)],
        [(-0.5,), (0.0,), (0.5,)],
        [(1.0,), (0.0,), (1.0,)],
        [(0.5,), (0.5,), (0.5,)],
    ]
    labels = ["zero", "id", "half", "vee", "const"]
    return build_function_model(args, tables, labels)


def test_model_basics(model):
    assert model.space.n == 5
    zero = model.space.by_id("zero")
    assert model.table(zero) == ((0.0,), (0.0,), (0.0,))
    assert model.lookup(((0.0,), (0.0,), (0.0,))) == zero
    assert model.lookup(((9.0,), (9.0,), (9.0,))) is None
    assert model.observed_values(1) == ((0.0,), (0.5,))


def test_duplicate_tables_rejected():
    with pytest.raises(ValueError):
        build_function_model(
            (0.0,), [[(1.0,)], [(1.0,)]], ["a", "b"]
        )


def test_pointwise_covering_members_cover(model):
    cov = pointwise_covering(model, [constraint(model, 0, 0.6)])
    union = 0
    for m in cov.members:
        union |= m
    assert union == model.space.full_mask


def test_star_membership_two_routes(model):
    # covering-star route versus the direct per-argument formula
    for radii in ((0.6,), (0.3, 0.6), (1.2, 0.8, 0.4)):
        cons = [constraint(model, a, r) for a, r in enumerate(radii)]
        cov = pointwise_covering(model, cons)
        for f, g in itertools.product(model.space.points, repeat=2):
            via_star = g in star(frozenset({f}), cov)
            via_formula = in_pointwise_star(model, f, g, cons)
            assert via_star == via_formula, (f.pid, g.pid, radii)


def test_unconstrained_argument_is_free(model):
    # constraining only the first argument ignores differences elsewhere
    cons = [constraint(model, 0, 0.2)]
    cov = pointwise_covering(model, cons)
    idf = model.space.by_id("id")
    vee = model.space.by_id("vee")
    zero = model.space.by_id("zero")
    # id(-1) = -1 and vee(-1) = 1 are far apart at the constrained argument
    assert vee not in star(frozenset({idf}), cov)
    # half(-1) = -0.5 and zero(-1) = 0: no common 0.2-ball center among values
    half = model.space.by_id("half")
    assert in_pointwise_star(model, half, zero, cons) == (
        half in star(frozenset({zero}), cov)
    )


def test_pointwise_chain_certifies(model):
    radii = [2.0, 0.5, 0.125]
    levels = [[constraint(model, a, r) for a in range(3)] for r in radii]
    fam = pointwise_chain(model, levels)
    for i in range(1, fam.size):
        assert double_refines(fam.coverings[i], fam.coverings[i - 1])


def test_vector_valued_model():
    args = ((0.0, 0.0), (1.0, 1.0))
    tables = [
        [(0.0, 0.0), (0.0, 0.0)],
        [(0.0, 0.0), (2.0, 2.0)],
        [(0.0, 0.0), (2.0, 1.0)],
    ]
    m = build_function_model(args, tables, ["zero", "two", "mix"], value_dim=2)
    # centers default to observed values; at radius 1.2 the ball at (2,1)
    # holds both (2,2) and (2,1), while (0,0) stays separated
    cons = [constraint(m, 1, 1.2)]
    cov = pointwise_covering(m, cons)
    zero, two, mix = m.space.points
    assert two not in star(frozenset({zero}), cov)
    assert mix in star(frozenset({two}), cov)
