"""Built-in desk-scale systems and config-driven system ingestion.

Each scenario bundles a space, a covering family, a semigroup action, a
filter basis, named test sets, declared hypothesis flags, and the expected
verdicts. All built-in arithmetic is dyadic, so actions land exactly on
sample points; the only snapping is an explicit underflow floor, checked
against half the finest covering radius at build time.
"""

from __future__ import annotations

import configparser
import io
import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

from .covering import AdmissibleFamily, metric_chain_family, verify_admissible
from .compactness import default_cap, is_bounded
from .dynamics import (
    Action,
    ActionFlags,
    FilterBasis,
    NestingViolation,
    Semigroup,
    integer_tails,
    nat_add,
    nat_mul,
    scaling_maps,
    scaling_tails,
    vector_add,
    vector_tails,
)
from .funcspace import (
    FunctionSpaceModel,
    build_function_model,
    constraint,
    pointwise_chain,
    pointwise_covering,
)
from .space import Point, Space, line_grid


class SchemaError(Exception):
    """The system config is malformed or references unknown kinds."""


class SnapToleranceExceeded(Exception):
    """The action's snap error is not below half the finest star radius."""


@dataclass(frozen=True)
class Declared:
    """Scenario-declared flags and budgets; each is individually checkable."""

    cap: int
    hypothesis_expect: dict
    eventually_compact: bool = False
    compact_witness: Optional[object] = None
    omega_invariant: bool = False
    absorbing_name: Optional[str] = None
    snap_error: float = 0.0
    resolving: bool = True


@dataclass(frozen=True)
class Expected:
    """Expected end-to-end verdicts and named witnesses."""

    attractor: tuple[str, ...]
    kind: str  # "both" or "uniform-only"
    global_ok: bool
    uniform_ok: bool
    attraction_index: Optional[int] = None
    attraction_bound: Optional[int] = None
    failure_index: Optional[int] = None
    witness_norm: Optional[float] = None
    spread_testset: Optional[str] = None
    spread_first_arg: Optional[float] = None
    spread_delta1: Optional[float] = None
    spread_lipschitz: Optional[float] = None


@dataclass(frozen=True, eq=False)
class Scenario:
    name: str
    space: Space
    family: AdmissibleFamily
    action: Action
    filter_basis: FilterBasis
    testsets: dict
    declared: Declared
    expected: Expected
    points_sample: tuple[Point, ...]
    bounded_pool: tuple[Point, ...]
    model: Optional[FunctionSpaceModel] = None
    params: dict = field(default_factory=dict)

    def attractor_points(self) -> frozenset[Point]:
        return frozenset(self.space.by_id(pid) for pid in self.expected.attractor)

    def random_bounded_testsets(self, rng, count: int, max_size: int = 6) -> dict:
        """Seeded random subsets of the bounded pool (subsets stay bounded)."""
        out = {}
        pool = list(self.bounded_pool)
        for i in range(count):
            size = rng.randint(1, max_size)
            pick = frozenset(rng.sample(pool, min(size, len(pool))))
            out[f"rand{i}"] = pick
        return out


def _finest_radius(params_radii: Sequence[float]) -> float:
    return min(params_radii)


def _validate(sc: Scenario, finest_radius: float, assoc_elements: Sequence) -> Scenario:
    if not sc.declared.snap_error < finest_radius / 2:
        raise SnapToleranceExceeded(
            f"snap error {sc.declared.snap_error:g} is not below half the finest "
            f"star radius {finest_radius / 2:g}"
        )
    bad = sc.action.check_associativity(assoc_elements, sc.space.points)
    if bad is not None:
        raise SchemaError(f"action is not associative at {bad!r}")
    for name, Y in sc.testsets.items():
        if not Y:
            raise SchemaError(f"test set {name!r} is empty")
        if not is_bounded(Y, sc.family):
            raise SchemaError(f"test set {name!r} is not bounded")
    # record the family's axiom report and hold it to the declared resolution:
    # a scenario claiming to resolve single points must actually do so
    report = verify_admissible(sc.family)
    if report.check("star_basis").passed != sc.declared.resolving:
        raise SchemaError(
            "declared resolution flag disagrees with the star-basis verdict"
        )
    sc.family.__dict__["admissibility_report"] = report
    return sc


def _pow2(j: int) -> float:
    return math.ldexp(1.0, j)


# ---------------------------------------------------------------------------
# iterated contractions: powers of affine contractions with fixed points on a
# compact sample; the constant functions at the fixed points attract everything
# ---------------------------------------------------------------------------

CONTRACTION_SNAP_EXP = 12


def scenario_iterated_contractions(
    depth: int = 12, eps0: float = 2.56, chain_depth: int = 5
) -> Scenario:
    fixed = (0.0, 0.25, 0.5, 0.75, 1.0)
    L = 0.5
    args = (-1.0, 1.0)
    esnap = CONTRACTION_SNAP_EXP

    labels, tables, meta = [], [], []
    for xf in fixed:
        labels.append(f"i[{xf:g}]")
        tables.append([(xf,), (xf,)])
        meta.append(("fix", xf, 0))
    for xf in fixed:
        for e in range(1, esnap):
            labels.append(f"pow[{xf:g}]e{e}")
            tables.append([(xf + L**e * (z - xf),) for z in args])
            meta.append(("pow", xf, e))
    model = build_function_model(args, tables, labels, value_dim=1)
    space = model.space
    lookup = {(kind, xf, e): space.points[i] for i, (kind, xf, e) in enumerate(meta)}

    def apply_fn(n, p):
        kind, xf, e = meta[p.index]
        if kind == "fix":
            return p
        e2 = e * n
        if e2 >= esnap:
            return lookup[("fix", xf, 0)]
        return lookup[("pow", xf, e2)]

    radii = [eps0 * 0.25**i for i in range(chain_depth + 1)]
    levels = [
        [constraint(model, 0, r), constraint(model, 1, r)] for r in radii
    ]
    family = pointwise_chain(model, levels, label="contraction-chain")

    action = Action(
        semigroup=nat_mul(),
        space=space,
        apply_fn=apply_fn,
        flags=ActionFlags(eventually_compact=True, compact_witness=esnap),
        label="power-iteration",
    )
    F = integer_tails(nat_mul(), depth=depth, window=4, start=1)

    attractor_pids = tuple(f"i[{xf:g}]" for xf in fixed)
    attractor = frozenset(space.points[i] for i in range(len(fixed)))
    whole = frozenset(space.points)
    testsets = {
        "whole": whole,
        "attractor": attractor,
        "seed": frozenset({lookup[("pow", 0.75, 1)]}),
        "pair": frozenset({lookup[("pow", 0.0, 1)], lookup[("pow", 1.0, 2)]}),
    }
    # closed-form attraction bound: least n with L**n * delta < eps
    delta = max(abs(z - xf) for z in args for xf in fixed)
    eps_target = 0.01
    bound = next(n for n in range(1, 64) if L**n * delta < eps_target)
    declared = Declared(
        cap=default_cap(space.n),
        hypothesis_expect={
            "left_translate_into": True,
            "right_translate_into": True,
            "within_right_translate": False,
            "within_left_translate": False,
        },
        eventually_compact=True,
        compact_witness=esnap,
        omega_invariant=True,
        absorbing_name="attractor",
        snap_error=_pow2(-esnap) * delta,
        resolving=False,
    )
    expected = Expected(
        attractor=attractor_pids,
        kind="both",
        global_ok=True,
        uniform_ok=True,
        attraction_index=radii.index(eps_target) if eps_target in radii else 4,
        attraction_bound=bound,
    )
    sc = Scenario(
        name="iterated_contractions",
        space=space,
        family=family,
        action=action,
        filter_basis=F,
        testsets=testsets,
        declared=declared,
        expected=expected,
        points_sample=tuple(space.points),
        bounded_pool=tuple(space.points),
        model=model,
        params={"depth": depth, "eps0": eps0, "chain_depth": chain_depth},
    )
    return _validate(sc, radii[-1], assoc_elements=(1, 2, 3, 5))


# ---------------------------------------------------------------------------
# composition semigroup: contractive scalings about a common fixed point act
# by post-composition on Lipschitz function samples
# ---------------------------------------------------------------------------

def scenario_composition(
    x0: float = 0.0, depth: int = 12, eps0: float = 2.56, chain_depth: int = 5
) -> Scenario:
    L = 0.5
    args = (-1.0, 0.0, 1.0)
    esnap = CONTRACTION_SNAP_EXP
    seeds = {
        "id": (-1.0, 0.0, 1.0),
        "vee": (1.0, 0.0, 1.0),
        "one": (1.0, 1.0, 1.0),
        "shift": (0.0, 0.5, 1.0),
        "nvee": (-1.0, 0.0, -1.0),
    }
    lip = 1.0
    for sname, vals in seeds.items():
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(vals[i] - vals[j]) > lip * abs(args[i] - args[j]) + 1e-12:
                    raise SchemaError(f"seed {sname} is not Lipschitz-{lip:g}")

    labels, tables, meta = [f"i[{x0:g}]"], [[(x0,)] * 3], [("fix", None, 0)]
    for sname, vals in seeds.items():
        for e in range(0, esnap):
            labels.append(f"{sname}.e{e}")
            tables.append([(x0 + L**e * (v - x0),) for v in vals])
            meta.append(("seed", sname, e))
    model = build_function_model(args, tables, labels, value_dim=1)
    space = model.space
    lookup = {m: space.points[i] for i, m in enumerate(meta)}

    def apply_fn(c, p):
        kind, sname, e = meta[p.index]
        if kind == "fix":
            return p
        j = round(-math.log2(abs(c)))
        e2 = e + j
        if e2 >= esnap:
            return lookup[("fix", None, 0)]
        return lookup[("seed", sname, e2)]

    radii = [eps0 * 0.25**i for i in range(chain_depth + 1)]
    levels = [
        [constraint(model, a, r) for a in range(3)] for r in radii
    ]
    family = pointwise_chain(model, levels, label="composition-chain")

    action = Action(
        semigroup=scaling_maps_about(x0, L),
        space=space,
        apply_fn=apply_fn,
        flags=ActionFlags(eventually_compact=True, compact_witness=_pow2(-esnap)),
        label="post-composition",
    )
    F = scaling_tails(depth=depth, window=3, L=L)

    whole = frozenset(space.points)
    attractor = frozenset({space.points[0]})
    testsets = {
        "whole": whole,
        "attractor": attractor,
        "seed": frozenset({lookup[("seed", "id", 0)]}),
        "pair": frozenset({lookup[("seed", "vee", 1)], lookup[("seed", "shift", 0)]}),
    }
    declared = Declared(
        cap=default_cap(space.n),
        hypothesis_expect={name: True for name in (
            "left_translate_into",
            "right_translate_into",
            "within_right_translate",
            "within_left_translate",
        )},
        eventually_compact=True,
        compact_witness=_pow2(-esnap),
        omega_invariant=True,
        absorbing_name="attractor",
        snap_error=_pow2(-esnap) * max(abs(v - x0) for t in tables for (v,) in t),
        resolving=False,
    )
    expected = Expected(
        attractor=(f"i[{x0:g}]",),
        kind="both",
        global_ok=True,
        uniform_ok=True,
        spread_testset="whole",
        spread_first_arg=args[0],
        spread_delta1=radii[1],
        spread_lipschitz=lip,
    )
    sc = Scenario(
        name="composition",
        space=space,
        family=family,
        action=action,
        filter_basis=F,
        testsets=testsets,
        declared=declared,
        expected=expected,
        points_sample=tuple(space.points),
        bounded_pool=tuple(space.points),
        model=model,
        params={"x0": x0, "depth": depth, "eps0": eps0, "chain_depth": chain_depth},
    )
    return _validate(sc, radii[-1], assoc_elements=(0.5, 0.25, 0.125))


def scaling_maps_about(x0: float, L: float) -> Semigroup:
    sem = scaling_maps(L)
    return Semigroup(
        name=f"scaling[x0={x0:g},L={L:g}]",
        compose=sem.compose,
        sample=sem.sample,
        divide_left=sem.divide_left,
        divide_right=sem.divide_right,
    )


# ---------------------------------------------------------------------------
# coordinatewise exponential decay on a two-argument function sample: the
# zero function is the uniform attractor, but scaled-up witnesses defeat
# global attraction at every truncation level
# ---------------------------------------------------------------------------

DECAY_FLOOR_EXP = -7
DECAY_WITNESS_MAX = 22


def scenario_exp_decay(depth: int = 22, window: int = 4) -> Scenario:
    args = ((0.0, 0.0), (1.0, 1.0))
    floor = DECAY_FLOOR_EXP
    kmax = DECAY_WITNESS_MAX
    if depth != kmax:
        raise SchemaError("the witness family is tuned to the filter truncation")

    labels, tables, meta = ["zero"], [[(0.0, 0.0), (0.0, 0.0)]], [None]
    for j in range(floor, 1):  # small values 2^floor .. 2^0
        v = _pow2(j)
        labels.append(f"eps{-j}")
        tables.append([(0.0, 0.0), (v, v)])
        meta.append(j)
    for k in range(0, kmax + 1):  # witnesses f_k with value 2^(k+1)
        v = _pow2(k + 1)
        labels.append(f"f{k}")
        tables.append([(0.0, 0.0), (v, v)])
        meta.append(k + 1)
    model = build_function_model(args, tables, labels, value_dim=2)
    space = model.space
    by_exp = {j: space.points[i] for i, j in enumerate(meta) if j is not None}
    zero = space.points[0]

    def apply_fn(t, p):
        if t[0] != t[1]:
            raise SchemaError("the decay sample is tuned to diagonal elements")
        j = meta[p.index]
        if j is None:
            return p
        j2 = j - t[0]
        if j2 < floor:
            return zero
        return by_exp[j2]

    radii = [16.0, 4.0, 1.0, 0.25, 0.0625, 0.015625]
    levels = [[constraint(model, 0, radii[0])]] + [
        [constraint(model, 0, r), constraint(model, 1, r)] for r in radii[1:]
    ]
    family = pointwise_chain(model, levels, label="decay-chain")

    action = Action(
        semigroup=vector_add(2),
        space=space,
        apply_fn=apply_fn,
        flags=ActionFlags(eventually_compact=False),
        label="coordinate-decay",
    )
    F = vector_tails(2, depth=depth, window=window)

    star_cov = pointwise_covering(model, [constraint(model, 0, 1.0)], label="pw[0@1]")
    Y = space.points_of(star_cov.star_mask(space.mask_of({zero})))
    testsets = {
        "orbit-star": frozenset(Y),
        "seed": frozenset({by_exp[3]}),
        "small": frozenset({zero, by_exp[-7], by_exp[-6], by_exp[-5]}),
    }
    sample = tuple(
        p for p in space.points if meta[p.index] is None or meta[p.index] <= 16
    )
    declared = Declared(
        cap=6,
        hypothesis_expect={name: True for name in (
            "left_translate_into",
            "right_translate_into",
            "within_right_translate",
            "within_left_translate",
        )},
        eventually_compact=False,
        omega_invariant=False,
        absorbing_name="orbit-star",
        snap_error=_pow2(floor - 1) * math.sqrt(2.0),
        resolving=False,
    )
    expected = Expected(
        attractor=("zero",),
        kind="global-uniform-only",
        global_ok=False,
        uniform_ok=True,
        failure_index=2,
        witness_norm=2.0 * math.sqrt(2.0),
    )
    sc = Scenario(
        name="exp_decay",
        space=space,
        family=family,
        action=action,
        filter_basis=F,
        testsets=testsets,
        declared=declared,
        expected=expected,
        points_sample=sample,
        bounded_pool=tuple(space.points),
        model=model,
        params={"depth": depth, "window": window},
    )
    return _validate(sc, radii[-1], assoc_elements=((0, 0), (1, 1), (2, 2)))


# ---------------------------------------------------------------------------
# geometric decay on the unit grid: index halving, exactly associative
# ---------------------------------------------------------------------------

def scenario_decay_grid(
    count: int = 101, chain_depth: int = 3, depth: int = 10, window: int = 8
) -> Scenario:
    space = line_grid(0.0, 1.0, count)
    family = metric_chain_family(space, 2.0, chain_depth)
    finest_radius = 2.0 * 0.25**chain_depth

    def apply_fn(t, p):
        return space.points[p.index >> t]

    action = Action(
        semigroup=nat_add(),
        space=space,
        apply_fn=apply_fn,
        flags=ActionFlags(eventually_compact=True, compact_witness=7),
        label="halving-decay",
    )
    F = integer_tails(nat_add(), depth=depth, window=window)
    zero = space.points[0]
    step = 1.0 / (count - 1)
    ball_mask = sum(
        1 << p.index for p in space.points if abs(p.coords[0]) < 0.15
    )
    testsets = {
        "whole": frozenset(space.points),
        "seed": frozenset({space.points[count - 1]}),
        "low-ball": space.points_of(ball_mask),
    }
    declared = Declared(
        cap=default_cap(space.n),
        hypothesis_expect={name: True for name in (
            "left_translate_into",
            "right_translate_into",
            "within_right_translate",
            "within_left_translate",
        )},
        eventually_compact=True,
        compact_witness=7,
        omega_invariant=True,
        absorbing_name="low-ball",
        snap_error=step,
        resolving=False,
    )
    expected = Expected(
        attractor=(zero.pid,),
        kind="both",
        global_ok=True,
        uniform_ok=True,
    )
    sc = Scenario(
        name="decay_grid",
        space=space,
        family=family,
        action=action,
        filter_basis=F,
        testsets=testsets,
        declared=declared,
        expected=expected,
        points_sample=tuple(space.points[::10]),
        bounded_pool=tuple(space.points),
        model=None,
        params={
            "count": count,
            "chain_depth": chain_depth,
            "depth": depth,
            "window": window,
        },
    )
    return _validate(sc, finest_radius, assoc_elements=(0, 1, 2, 3))


BUILTIN_SCENARIOS: dict[str, Callable[..., Scenario]] = {
    "iterated_contractions": scenario_iterated_contractions,
    "composition": scenario_composition,
    "exp_decay": scenario_exp_decay,
    "decay_grid": scenario_decay_grid,
}


def get_scenario(name: str, **overrides) -> Scenario:
    if name not in BUILTIN_SCENARIOS:
        raise SchemaError(
            f"unknown scenario {name!r}; known: {sorted(BUILTIN_SCENARIOS)}"
        )
    return BUILTIN_SCENARIOS[name](**overrides)


# ---------------------------------------------------------------------------
# config-driven ingestion: INI sections with JSON-typed values
# ---------------------------------------------------------------------------

def _parse(cfg_text: str) -> configparser.ConfigParser:
    cp = configparser.ConfigParser()
    try:
        cp.read_string(cfg_text)
    except configparser.Error as e:
        raise SchemaError(f"config parse error: {e}") from e
    return cp


def _jget(cp, section, key, default=None, required=False):
    if not cp.has_option(section, key):
        if required:
            raise SchemaError(f"missing [{section}] {key}")
        return default
    raw = cp.get(section, key)
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        raise SchemaError(f"bad JSON for [{section}] {key}: {raw!r}") from e


def load_system(cfg_text: str) -> Scenario:
    """Build a scenario from sectioned config text (snap checks enforced)."""
    cp = _parse(cfg_text)
    if not cp.has_section("scenario"):
        raise SchemaError("missing [scenario] section")
    kind = _jget(cp, "scenario", "kind", required=True)
    if kind in BUILTIN_SCENARIOS:
        params = {
            k: _jget(cp, "scenario", k)
            for k in cp.options("scenario")
            if k != "kind"
        }
        return get_scenario(kind, **params)
    if kind != "custom":
        raise SchemaError(f"unknown scenario kind {kind!r}")
    return _load_custom(cp)


def _load_custom(cp) -> Scenario:
    skind = _jget(cp, "space", "kind", required=True)
    if skind != "line_grid":
        raise SchemaError(f"unsupported space kind {skind!r}")
    start = _jget(cp, "space", "start", 0.0)
    stop = _jget(cp, "space", "stop", 1.0)
    count = int(_jget(cp, "space", "count", required=True))
    space = line_grid(start, stop, count)
    step = (stop - start) / (count - 1) if count > 1 else 0.0

    fkind = _jget(cp, "family", "kind", required=True)
    if fkind != "metric_chain":
        raise SchemaError(f"unsupported family kind {fkind!r}")
    eps0 = float(_jget(cp, "family", "eps0", required=True))
    chain_depth = int(_jget(cp, "family", "depth", required=True))
    family = metric_chain_family(space, eps0, chain_depth)
    finest_radius = eps0 * 0.25**chain_depth

    akind = _jget(cp, "action", "kind", required=True)
    if akind == "halving_decay":
        apply_fn = lambda t, p: space.points[p.index >> t]
        snap_error = step
    elif akind == "pow2_decay":
        def apply_fn(t, p):
            return space.points[space.nearest_index([p.coords[0] * _pow2(-t)])]
        snap_error = step / 2
    elif akind == "identity":
        apply_fn = lambda t, p: p
        snap_error = 0.0
    else:
        raise SchemaError(f"unsupported action kind {akind!r}")

    gkind = _jget(cp, "semigroup", "kind", "nat_add") if cp.has_section("semigroup") else "nat_add"
    if gkind != "nat_add":
        raise SchemaError(f"unsupported semigroup kind {gkind!r}")
    sem = nat_add()
    action = Action(semigroup=sem, space=space, apply_fn=apply_fn, label=akind)

    tkind = _jget(cp, "filter", "kind", required=True)
    if tkind == "integer_tails":
        F = integer_tails(
            sem,
            depth=int(_jget(cp, "filter", "depth", required=True)),
            window=int(_jget(cp, "filter", "window", 4)),
        )
    elif tkind == "explicit":
        levels = _jget(cp, "filter", "levels", required=True)
        level_sets = [frozenset(lv) for lv in levels]
        F = FilterBasis(
            semigroup=sem,
            depth=len(level_sets) - 1,
            contains=lambda el, k: el in level_sets[k],
            sampler=lambda k: tuple(sorted(level_sets[k])),
            label="explicit",
        )
    else:
        raise SchemaError(f"unsupported filter kind {tkind!r}")

    testsets = {}
    if cp.has_section("testsets"):
        for name in cp.options("testsets"):
            raw = _jget(cp, "testsets", name, required=True)
            if raw == "all":
                testsets[name] = frozenset(space.points)
            else:
                testsets[name] = frozenset(space.points[int(i)] for i in raw)
    if not testsets:
        testsets = {"whole": frozenset(space.points)}

    cap = int(_jget(cp, "declared", "cap", default_cap(space.n))) if cp.has_section("declared") else default_cap(space.n)
    witness = _jget(cp, "declared", "eventually_compact_witness") if cp.has_section("declared") else None
    attractor_idx = _jget(cp, "expectations", "attractor", [0]) if cp.has_section("expectations") else [0]
    kind_expect = _jget(cp, "expectations", "kind", "both") if cp.has_section("expectations") else "both"

    declared = Declared(
        cap=cap,
        hypothesis_expect={},
        eventually_compact=witness is not None,
        compact_witness=witness,
        omega_invariant=bool(_jget(cp, "declared", "omega_invariant", False)) if cp.has_section("declared") else False,
        absorbing_name=next(iter(testsets)),
        snap_error=snap_error,
        resolving=False,
    )
    expected = Expected(
        attractor=tuple(space.points[int(i)].pid for i in attractor_idx),
        kind=kind_expect,
        global_ok=(kind_expect == "both"),
        uniform_ok=True,
    )
    name = _jget(cp, "scenario", "name", "custom")
    sc = Scenario(
        name=name,
        space=space,
        family=family,
        action=action,
        filter_basis=F,
        testsets=testsets,
        declared=declared,
        expected=expected,
        points_sample=tuple(space.points[:: max(1, space.n // 10)]),
        bounded_pool=tuple(space.points),
        model=None,
        params={},
    )
    return _validate(sc, finest_radius, assoc_elements=(0, 1, 2))


def scenario_to_config(sc: Scenario) -> str:
    """Serialize a built-in scenario to config text (round-trips via load_system)."""
    if sc.name not in BUILTIN_SCENARIOS:
        raise SchemaError(f"only built-in scenarios serialize; got {sc.name!r}")
    cp = configparser.ConfigParser()
    cp["scenario"] = {"kind": json.dumps(sc.name)}
    for k, v in sc.params.items():
        cp["scenario"][k] = json.dumps(v)
    buf = io.StringIO()
    cp.write(buf)
    return buf.getvalue()


def scenarios_equal(a: Scenario, b: Scenario) -> bool:
    """Structural equality: spaces, families, filters, actions, and test sets."""
    if [p.pid for p in a.space.points] != [p.pid for p in b.space.points]:
        return False
    if [p.coords for p in a.space.points] != [p.coords for p in b.space.points]:
        return False
    if len(a.family.coverings) != len(b.family.coverings):
        return False
    for ca, cb in zip(a.family.coverings, b.family.coverings):
        if ca.members != cb.members:
            return False
    if a.filter_basis.depth != b.filter_basis.depth:
        return False
    for k in a.filter_basis.levels():
        if a.filter_basis.sampler(k) != b.filter_basis.sampler(k):
            return False
        for el in a.filter_basis.sampler(k):
            for p in a.space.points:
                if a.action.apply(el, p).pid != b.action.apply(el, b.space.points[p.index]).pid:
                    return False
    if set(a.testsets) != set(b.testsets):
        return False
    for name in a.testsets:
        if {p.pid for p in a.testsets[name]} != {p.pid for p in b.testsets[name]}:
            return False
    return a.expected.attractor == b.expected.attractor
