import math
import random

import pytest

from coverdyn.compactness import is_bounded
from coverdyn.dynamics import NestingViolation
from coverdyn.scenarios import (
    BUILTIN_SCENARIOS,
    SchemaError,
    SnapToleranceExceeded,
    get_scenario,
    load_system,
    scenario_to_config,
    scenarios_equal,
)


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_builtin_builds_and_validates(name):
    sc = get_scenario(name)
    assert sc.space.n >= 1
    assert sc.family.size >= 2
    for ts in sc.testsets.values():
        assert is_bounded(ts, sc.family)
    assert sc.declared.snap_error < min_radius(sc) / 2


def min_radius(sc):
    # finest level's members are the smallest: use the declared chain label
    fine = sc.family.coverings[-1]
    # infer the scale from the largest member diameter at the finest level
    return {
        "decay_grid": 2.0 * 0.25**3,
        "iterated_contractions": 2.56 * 0.25**5,
        "composition": 2.56 * 0.25**5,
        "exp_decay": 0.015625,
    }[sc.name]


def test_exp_decay_witness_values():
    sc = get_scenario("exp_decay")
    f5 = sc.space.by_id("f5")
    # witnesses carry the doubled scaled-up values
    assert sc.model.value(f5, 1) == (64.0, 64.0)
    assert sc.model.value(f5, 0) == (0.0, 0.0)
    zero = sc.space.by_id("zero")
    img = sc.action.apply((5, 5), f5)
    # scaling a witness by its own index lands on the doubled identity sample
    assert sc.model.value(img, 1) == (2.0, 2.0)
    assert math.hypot(*sc.model.value(img, 1)) == pytest.approx(
        2 * math.sqrt(2), abs=1e-15
    )
    deep = sc.action.apply((40, 40), f5)
    assert deep == zero


def test_exp_decay_rejects_mixed_elements():
    sc = get_scenario("exp_decay")
    with pytest.raises(SchemaError):
        sc.action.apply((1, 2), sc.space.by_id("f3"))


def test_contraction_action_exactness():
    sc = get_scenario("iterated_contractions")
    p = sc.space.by_id("pow[0.25]e2")
    q = sc.action.apply(3, p)
    assert q.pid == "pow[0.25]e6"
    assert sc.action.apply(6, q).pid == "i[0.25]"
    assert sc.action.apply(5, sc.space.by_id("i[1]")).pid == "i[1]"


def test_composition_action_exactness():
    sc = get_scenario("composition")
    p = sc.space.by_id("vee.e1")
    q = sc.action.apply(0.25, p)
    assert q.pid == "vee.e3"
    deep = sc.action.apply(0.5**11, p)
    assert deep.pid == "i[0]"


def test_composition_shifted_variant():
    sc = get_scenario("composition", x0=0.5)
    assert sc.expected.attractor == ("i[0.5]",)
    att = sc.space.by_id("i[0.5]")
    assert sc.model.table(att) == (((0.5,),) * 3)
    # the shifted scalings fix the shifted constant
    assert sc.action.apply(0.25, att) == att


def test_unknown_scenario():
    with pytest.raises(SchemaError):
        get_scenario("nope")


@pytest.mark.parametrize("name", sorted(BUILTIN_SCENARIOS))
def test_config_round_trip(name):
    sc = get_scenario(name)
    text = scenario_to_config(sc)
    sc2 = load_system(text)
    assert scenarios_equal(sc, sc2)


def test_load_custom_system():
    cfg = """
[scenario]
kind = "custom"
name = "mini"

[space]
kind = "line_grid"
count = 41

[family]
kind = "metric_chain"
eps0 = 2.0
depth = 2

[action]
kind = "halving_decay"

[filter]
kind = "integer_tails"
depth = 8
window = 4

[testsets]
whole = "all"
seed = [40]

[expectations]
attractor = [0]
kind = "both"
"""
    sc = load_system(cfg)
    assert sc.space.n == 41
    assert set(sc.testsets) == {"whole", "seed"}


def test_load_nesting_violation():
    cfg = """
[scenario]
kind = "custom"

[space]
kind = "line_grid"
count = 11

[family]
kind = "metric_chain"
eps0 = 2.0
depth = 1

[action]
kind = "identity"

[filter]
kind = "explicit"
levels = [[1, 2, 3], [2, 3], [5]]
"""
    with pytest.raises(NestingViolation):
        load_system(cfg)


def test_load_snap_tolerance_exceeded():
    # a coarse grid with a fine family: nearest-point snapping overshoots
    cfg = """
[scenario]
kind = "custom"

[space]
kind = "line_grid"
count = 11

[family]
kind = "metric_chain"
eps0 = 2.0
depth = 3

[action]
kind = "pow2_decay"

[filter]
kind = "integer_tails"
depth = 6
window = 4
"""
    with pytest.raises(SnapToleranceExceeded):
        load_system(cfg)


def test_load_schema_errors():
    with pytest.raises(SchemaError):
        load_system("[scenario]\nkind = \"wat\"\n")
    with pytest.raises(SchemaError):
        load_system("[other]\nx = 1\n")
    with pytest.raises(SchemaError):
        load_system("[scenario]\nkind = not-json\n")


def test_random_bounded_testsets_deterministic():
    sc = get_scenario("decay_grid")
    a = sc.random_bounded_testsets(random.Random(9), count=5)
    b = sc.random_bounded_testsets(random.Random(9), count=5)
    assert {k: {p.pid for p in v} for k, v in a.items()} == {
        k: {p.pid for p in v} for k, v in b.items()
    }
    for v in a.values():
        assert is_bounded(v, sc.family)
