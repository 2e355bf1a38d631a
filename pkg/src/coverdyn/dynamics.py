"""Semigroup actions, filter bases, limit sets, attraction, and dissipativity checks.

Limit behavior is directed by a filter basis given as a nested chain of
semigroup subsets with per-level samplers. Nets are replaced by sequences
indexed by the chain truncation; all verdicts are "verified up to budget".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

import numpy as np

from .compactness import is_bounded, member_measure, star_measure
from .covering import AdmissibleFamily
from .proximity import converges_to_zero, semi_prox
from .space import EmptyInput, Point, Space, iter_bits


class NestingViolation(Exception):
    """Filter levels are not nested on their samples."""


@dataclass(frozen=True)
class Semigroup:
    """An enumerable semigroup carrier with composition and optional division.

    `divide_left(t, s)` returns a with s*a = t (None if no such element);
    `divide_right(t, s)` returns a with a*s = t. Division backs the exact
    translation-hypothesis checks.
    """

    name: str
    compose: Callable
    sample: Callable[[int], tuple]
    divide_left: Optional[Callable] = None
    divide_right: Optional[Callable] = None

    def check_associativity(self, triples: Iterable[tuple]) -> Optional[tuple]:
        """Return a violating triple, or None when all sampled triples pass."""
        for a, b, c in triples:
            if self.compose(self.compose(a, b), c) != self.compose(a, self.compose(b, c)):
                return (a, b, c)
        return None


def nat_add() -> Semigroup:
    """Nonnegative integers under addition."""
    return Semigroup(
        name="nat_add",
        compose=lambda a, b: a + b,
        sample=lambda count: tuple(range(count)),
        divide_left=lambda t, s: t - s if t - s >= 0 else None,
        divide_right=lambda t, s: t - s if t - s >= 0 else None,
    )


def nat_mul() -> Semigroup:
    """Positive integers under multiplication."""
    def div(t, s):
        return t // s if s != 0 and t % s == 0 and t // s >= 1 else None

    return Semigroup(
        name="nat_mul",
        compose=lambda a, b: a * b,
        sample=lambda count: tuple(range(1, count + 1)),
        divide_left=div,
        divide_right=div,
    )


def vector_add(dim: int) -> Semigroup:
    """Nonnegative integer vectors under componentwise addition."""
    def sample(count):
        out = []
        k = 0
        while len(out) < count:
            base = (k,) * dim
            out.append(base)
            if dim > 1 and len(out) < count:
                out.append((k + 1,) + (k,) * (dim - 1))
            k += 1
        return tuple(out[:count])

    def div(t, s):
        a = tuple(x - y for x, y in zip(t, s))
        return a if all(v >= 0 for v in a) else None

    return Semigroup(
        name=f"vector_add[{dim}]",
        compose=lambda a, b: tuple(x + y for x, y in zip(a, b)),
        sample=sample,
        divide_left=div,
        divide_right=div,
    )


def scaling_maps(L: float = 0.5) -> Semigroup:
    """Contractive scalings about a common fixed point, composed by factor product."""
    def div(t, s):
        if s == 0:
            return None
        a = t / s
        return a if abs(a) <= 1.0 else None

    return Semigroup(
        name=f"scaling[L={L:g}]",
        compose=lambda a, b: a * b,
        sample=lambda count: tuple(L**j for j in range(1, count + 1)),
        divide_left=div,
        divide_right=div,
    )


@dataclass(frozen=True)
class FilterBasis:
    """A nested chain of semigroup subsets with per-level samplers.

    `contains(el, k)` is the membership predicate of level k; `sampler(k)`
    returns a deterministic finite sample of level k. `enumerate_level`,
    when present, lists every element of level k up to a carrier bound and
    backs exhaustive hypothesis checks.
    """

    semigroup: Semigroup
    depth: int
    contains: Callable[[object, int], bool]
    sampler: Callable[[int], tuple]
    enumerate_level: Optional[Callable[[int, int], tuple]] = None
    label: str = ""

    def __post_init__(self):
        for k in range(self.depth + 1):
            sample = self.sampler(k)
            if not sample:
                raise NestingViolation(f"level {k} has an empty sample")
            for el in sample:
                if not self.contains(el, k):
                    raise NestingViolation(f"sample {el!r} is not in level {k}")
                if k > 0 and not self.contains(el, k - 1):
                    raise NestingViolation(
                        f"sample {el!r} of level {k} escapes level {k - 1}"
                    )

    def levels(self) -> range:
        return range(self.depth + 1)


def integer_tails(
    semigroup: Semigroup, depth: int, window: int = 4, start: int = 0
) -> FilterBasis:
    """Tail sets {t : t >= k} of an integer semigroup.

    Level samples run from the level's floor to the common truncation edge
    `depth + window`, so sampled level images nest like the tail sets do.
    """
    lo = lambda k: max(k, start)
    return FilterBasis(
        semigroup=semigroup,
        depth=depth,
        contains=lambda el, k: el >= lo(k),
        sampler=lambda k: tuple(range(lo(k), lo(depth) + window)),
        enumerate_level=lambda k, bound: tuple(range(lo(k), bound + 1)),
        label=f"tails[{semigroup.name}]",
    )


def vector_tails(
    dim: int, depth: int, window: int = 4, include_mixed: bool = False
) -> FilterBasis:
    """Tail sets {t : t_i >= k for all i} of the vector-addition semigroup,
    sampled along the diagonal up to the truncation edge."""
    def sampler(k):
        out = [(m,) * dim for m in range(k, depth + window)]
        if include_mixed and dim > 1:
            out.append((k + 1,) + (k,) * (dim - 1))
            out.append((k,) + (k + 1,) * (dim - 1))
        return tuple(out)

    return FilterBasis(
        semigroup=vector_add(dim),
        depth=depth,
        contains=lambda el, k: all(v >= k for v in el),
        sampler=sampler,
        label=f"vector-tails[{dim}]",
    )


def scaling_tails(depth: int, window: int = 3, L: float = 0.5) -> FilterBasis:
    """Levels {c : |c| <= L**m}: iterated contractions of scale at least m."""
    tol = 1e-12
    return FilterBasis(
        semigroup=scaling_maps(L),
        depth=depth,
        contains=lambda el, m: abs(el) <= L ** max(m, 1) + tol,
        sampler=lambda m: tuple(
            L**j for j in range(max(m, 1), max(depth, 1) + window)
        ),
        label=f"scaling-tails[L={L:g}]",
    )


@dataclass(frozen=True)
class ActionFlags:
    open_map: bool = False
    surjective: bool = False
    eventually_compact: bool = False
    compact_witness: Optional[object] = None


@dataclass(frozen=True, eq=False)
class Action:
    """A semigroup action on a finite space; every image is again a sample point."""

    semigroup: Semigroup
    space: Space
    apply_fn: Callable[[object, Point], Point]
    flags: ActionFlags = field(default_factory=ActionFlags)
    label: str = ""

    def apply(self, el, p: Point) -> Point:
        q = self.apply_fn(el, p)
        return q

    def image_indices(self, el) -> np.ndarray:
        """Image of every point under one element, cached per element."""
        cache = self.__dict__.setdefault("_image_cache", {})
        if el not in cache:
            cache[el] = np.array(
                [self.apply(el, p).index for p in self.space.points], dtype=np.int64
            )
        return cache[el]

    def image_mask(self, el, ymask: int) -> int:
        row = self.image_indices(el)
        out = 0
        for i in iter_bits(ymask):
            out |= 1 << int(row[i])
        return out

    def check_associativity(
        self, elements: Sequence, points: Sequence[Point]
    ) -> Optional[tuple]:
        """Return a violating (s, t, x), or None when all sampled triples pass."""
        for s in elements:
            for t in elements:
                st = self.semigroup.compose(s, t)
                for x in points:
                    if self.apply(s, self.apply(t, x)) != self.apply(st, x):
                        return (s, t, x)
        return None


def orbit(
    level: int, Y: frozenset[Point] | set[Point], action: Action, F: FilterBasis
) -> frozenset[Point]:
    """Image of Y under the sampled elements of filter level `level`."""
    if not Y:
        raise EmptyInput("orbit of the empty set is undefined")
    return action.space.points_of(orbit_mask(level, action.space.mask_of(Y), action, F))


def orbit_mask(level: int, ymask: int, action: Action, F: FilterBasis) -> int:
    out = 0
    for el in F.sampler(level):
        out |= action.image_mask(el, ymask)
    return out


def divergent_sequence(F: FilterBasis, length: Optional[int] = None) -> list[tuple[int, object]]:
    """A canonical divergent sequence: the k-th block is drawn from level k."""
    out = []
    for k in F.levels():
        for el in F.sampler(k):
            out.append((k, el))
            if length is not None and len(out) >= length:
                return out
    return out


@dataclass(frozen=True)
class LimitSetReport:
    """A computed limit set with the certification data that produced it."""

    points: frozenset[Point]
    resolution: int
    truncation: int
    witnesses: dict

    def pids(self) -> list[str]:
        return sorted(p.pid for p in self.points)

    def to_dict(self) -> dict:
        return {
            "points": self.pids(),
            "resolution": self.resolution,
            "truncation": self.truncation,
            "witnesses": {
                p.pid: {"element": repr(el), "source": src.pid}
                for p, (el, src) in sorted(
                    self.witnesses.items(), key=lambda kv: kv[0].pid
                )
            },
        }


def _limit_witnesses(
    acc_mask: int,
    deepest_pairs: Sequence[tuple[object, Point]],
    action: Action,
    family: AdmissibleFamily,
) -> dict:
    fine = family.coverings[family.finest_index]
    out = {}
    for i in iter_bits(acc_mask):
        star = fine.point_star[i]
        for el, src in deepest_pairs:
            img = action.apply(el, src)
            if (star >> img.index) & 1:
                out[action.space.points[i]] = (el, src)
                break
    return out


def omega_limit(
    Y: frozenset[Point] | set[Point],
    F: FilterBasis,
    action: Action,
    family: AdmissibleFamily,
) -> LimitSetReport:
    """Intersection over filter levels of the closures of the level orbits."""
    if not Y:
        raise EmptyInput("limit set of the empty set is undefined")
    space = action.space
    ymask = space.mask_of(Y)
    acc = space.full_mask
    for k in F.levels():
        acc &= family.closure_mask(orbit_mask(k, ymask, action, F))
    deepest = [
        (el, y) for el in F.sampler(F.depth) for y in sorted(Y, key=lambda p: p.index)
    ]
    return LimitSetReport(
        points=space.points_of(acc),
        resolution=family.finest_index,
        truncation=F.depth,
        witnesses=_limit_witnesses(acc, deepest, action, family),
    )


def prolongational_limit(
    x: Point,
    F: FilterBasis,
    action: Action,
    family: AdmissibleFamily,
    perturb_depth: Optional[int] = None,
) -> LimitSetReport:
    """Limit points of divergent orbits started from shrinking stars around x."""
    space = action.space
    if perturb_depth is None:
        perturb_depth = family.finest_index
    perturb_depth = min(perturb_depth, family.finest_index)
    acc = space.full_mask
    deepest_pairs = []
    for k in F.levels():
        i = min(k, perturb_depth)
        pmask = family.coverings[i].point_star[x.index]
        block = 0
        for el in F.sampler(k):
            block |= action.image_mask(el, pmask)
        acc &= family.closure_mask(block)
        if k == F.depth:
            deepest_pairs = [
                (el, src)
                for el in F.sampler(k)
                for src in space.point_list(pmask)
            ]
    return LimitSetReport(
        points=space.points_of(acc),
        resolution=family.finest_index,
        truncation=F.depth,
        witnesses=_limit_witnesses(acc, deepest_pairs, action, family),
    )


@dataclass(frozen=True)
class AttractionReport:
    """Per covering index: the absorbing filter level, or a failure witness."""

    attracted: bool
    levels: dict
    failures: dict
    prox_form_agrees: bool
    prox_form_attracted: bool

    def to_dict(self) -> dict:
        return {
            "attracted": self.attracted,
            "levels": {str(i): k for i, k in sorted(self.levels.items())},
            "failures": {
                str(i): {"element": repr(el), "point": p.pid, "image": img.pid}
                for i, (el, p, img) in sorted(self.failures.items())
            },
            "prox_form_agrees": self.prox_form_agrees,
            "prox_form_attracted": self.prox_form_attracted,
        }


def attracts(
    Y: frozenset[Point] | set[Point],
    Z: frozenset[Point] | set[Point],
    F: FilterBasis,
    action: Action,
    family: AdmissibleFamily,
) -> AttractionReport:
    """Level search per covering index, cross-validated against the proximity
    formulation (set proximities along a divergent sequence converge to zero)."""
    if not Y or not Z:
        raise EmptyInput("attraction needs nonempty sets")
    space = action.space
    ymask, zmask = space.mask_of(Y), space.mask_of(Z)
    levels, failures = {}, {}
    for i in range(family.size):
        found = None
        for k in F.levels():
            om = orbit_mask(k, zmask, action, F)
            if om & ~family.star_mask_at(ymask, i) == 0:
                found = k
                break
        if found is not None:
            levels[i] = found
        else:
            star = family.star_mask_at(ymask, i)
            wit = None
            for el in F.sampler(F.depth):
                for z in sorted(Z, key=lambda p: p.index):
                    img = action.apply(el, z)
                    if not (star >> img.index) & 1:
                        wit = (el, z, img)
                        break
                if wit:
                    break
            if wit is None:
                # every deepest sampled image lands inside: cite the earliest level instead
                k0 = 0
                el0 = F.sampler(k0)[0]
                z0 = sorted(Z, key=lambda p: p.index)[0]
                wit = (el0, z0, action.apply(el0, z0))
            failures[i] = wit
    attracted = not failures

    traj = []
    for k, el in divergent_sequence(F):
        img = action.image_mask(el, zmask)
        traj.append(semi_prox(Y, space.points_of(img), family))
    prox_attracted = converges_to_zero(traj)
    return AttractionReport(
        attracted=attracted,
        levels=levels,
        failures=failures,
        prox_form_agrees=(attracted == prox_attracted),
        prox_form_attracted=prox_attracted,
    )


def absorbs(
    Y: frozenset[Point] | set[Point],
    Z: frozenset[Point] | set[Point],
    F: FilterBasis,
    action: Action,
) -> Optional[int]:
    """Least sampled filter level whose orbit of Z lies inside Y, if any."""
    if not Y or not Z:
        raise EmptyInput("absorption needs nonempty sets")
    space = action.space
    ymask, zmask = space.mask_of(Y), space.mask_of(Z)
    for k in F.levels():
        if orbit_mask(k, zmask, action, F) & ~ymask == 0:
            return k
    return None


HYPOTHESIS_NAMES = {
    "left_translate_into": "for all s, A there is B with s*B inside A",
    "right_translate_into": "for all s, A there is B with B*s inside A",
    "within_right_translate": "for all s, A there is B inside A*s",
    "within_left_translate": "for all s, A there is B inside s*A",
}


@dataclass(frozen=True)
class HypothesisReport:
    verdicts: dict
    witnesses: dict
    counterexamples: dict

    def passed(self, name: str) -> bool:
        return self.verdicts[name]

    def to_dict(self) -> dict:
        return {
            "verdicts": dict(self.verdicts),
            "witnesses": {k: dict(v) for k, v in self.witnesses.items()},
            "counterexamples": {
                k: {"s": repr(v[0]), "level": v[1], "element": repr(v[2])}
                for k, v in self.counterexamples.items()
            },
        }


def check_hypotheses(
    F: FilterBasis,
    s_samples: Optional[Sequence] = None,
    enumeration_bound: int = 1000,
    max_level: Optional[int] = None,
) -> HypothesisReport:
    """Exact translation-compatibility checks between the filter basis and the
    semigroup, per sampled element and level, using semigroup division.

    Levels are checked up to `max_level` (default: depth minus a headroom of 4)
    so that witness levels can exist inside the truncation.
    """
    sem = F.semigroup
    if s_samples is None:
        s_samples = sem.sample(4)
    if max_level is None:
        max_level = max(0, F.depth - 4)
    levels = range(min(max_level, F.depth) + 1)

    def elements_of(j):
        if F.enumerate_level is not None:
            return F.enumerate_level(j, enumeration_bound)
        return F.sampler(j)

    def holds(name, s, k, j) -> bool:
        return all(_single_ok(name, F, s, k, b) for b in elements_of(j))

    verdicts, witnesses, counterexamples = {}, {}, {}
    for name in HYPOTHESIS_NAMES:
        ok_all = True
        wit = {}
        for s in s_samples:
            for k in levels:
                found = None
                for j in F.levels():
                    if holds(name, s, k, j):
                        found = j
                        break
                if found is None:
                    ok_all = False
                    blocker = None
                    for j in F.levels():
                        for b in elements_of(j):
                            if not _single_ok(name, F, s, k, b):
                                blocker = b
                                break
                        if blocker is not None:
                            break
                    counterexamples.setdefault(name, (s, k, blocker))
                else:
                    wit[f"s={s!r},level={k}"] = found
        verdicts[name] = ok_all
        witnesses[name] = wit
    return HypothesisReport(
        verdicts=verdicts, witnesses=witnesses, counterexamples=counterexamples
    )


def _single_ok(name: str, F: FilterBasis, s, k, b) -> bool:
    sem = F.semigroup
    if name == "left_translate_into":
        return F.contains(sem.compose(s, b), k)
    if name == "right_translate_into":
        return F.contains(sem.compose(b, s), k)
    if name == "within_right_translate":
        a = sem.divide_right(b, s) if sem.divide_right else None
        return a is not None and F.contains(a, k)
    a = sem.divide_left(b, s) if sem.divide_left else None
    return a is not None and F.contains(a, k)


@dataclass(frozen=True)
class CheckOutcome:
    name: str
    passed: bool
    witness: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"name": self.name, "verdict": "pass" if self.passed else "fail"}
        if self.witness:
            d["witness"] = self.witness
        return d


@dataclass(frozen=True)
class TaxonomyReport:
    outcomes: tuple[CheckOutcome, ...]

    def outcome(self, name: str) -> CheckOutcome:
        for o in self.outcomes:
            if o.name == name:
                return o
        raise KeyError(name)

    def passed(self, name: str) -> bool:
        return self.outcome(name).passed

    def to_dict(self) -> dict:
        return {"outcomes": [o.to_dict() for o in self.outcomes]}


def _stable_cluster_exists(
    blocks: Sequence[Point],
    family: AdmissibleFamily,
    tail_window: int,
    min_hits: int = 2,
) -> Optional[Point]:
    """A point whose finest star is hit at least `min_hits` times among the
    last `tail_window` block images (truncated stand-in for a cluster point)."""
    fine = family.coverings[family.finest_index]
    tail = blocks[-tail_window:]
    for cand in family.space.points:
        star = fine.point_star[cand.index]
        hits = sum(1 for img in tail if (star >> img.index) & 1)
        if hits >= min_hits:
            return cand
    return None


def _sequence_patterns(
    B: Sequence[Point], n_blocks: int, declared: Sequence[Sequence[Point]] = ()
) -> list[tuple[str, list[Point]]]:
    pts = sorted(B, key=lambda p: p.index)
    big = max(3, (len(pts) + max(1, n_blocks // 2) - 1) // max(1, n_blocks // 2))
    patterns = []
    for stride in sorted({1, 2, big}):
        seq = [pts[min(stride * k, len(pts) - 1)] for k in range(n_blocks)]
        patterns.append((f"stride-{stride}", seq))
    patterns.append(("constant-first", [pts[0]] * n_blocks))
    patterns.append(("constant-last", [pts[-1]] * n_blocks))
    for i, seq in enumerate(declared):
        patterns.append((f"declared-{i}", list(seq)[:n_blocks]))
    return patterns


def check_dissipativity(
    action: Action,
    F: FilterBasis,
    family: AdmissibleFamily,
    testsets: dict[str, frozenset[Point]],
    cap: int,
    points_sample: Optional[Sequence[Point]] = None,
    absorb_candidate: Optional[frozenset[Point]] = None,
    escape_patterns: Sequence[Sequence[Point]] = (),
    tail_window: int = 4,
) -> TaxonomyReport:
    """Verdicts with witnesses for the five dissipativity/compactness notions,
    evaluated on the supplied bounded test sets up to the sampling budget."""
    if not testsets:
        raise EmptyInput("the taxonomy needs at least one test set")
    space = action.space
    outcomes = []

    ok, wit = True, None
    for name, Y in sorted(testsets.items()):
        found = None
        for k in F.levels():
            if is_bounded(orbit(k, Y, action, F), family):
                found = k
                break
        if found is None:
            ok, wit = False, f"orbit of {name} never becomes bounded"
            break
    outcomes.append(CheckOutcome("eventually_bounded", ok, wit))

    candidates = []
    if absorb_candidate:
        candidates.append(("declared", absorb_candidate))
        for i in range(family.size):
            m = family.star_mask_at(space.mask_of(absorb_candidate), i)
            candidates.append((f"declared-star-{i}", space.points_of(m)))
    if is_bounded(frozenset(space.points), family):
        candidates.append(("whole-space", frozenset(space.points)))
    ok, wit, chosen = False, "no bounded absorbing candidate", None
    for cname, D in candidates:
        if not is_bounded(D, family):
            continue
        if all(absorbs(D, Y, F, action) is not None for Y in testsets.values()):
            ok, wit, chosen = True, f"absorbing set: {cname}", D
            break
    if not ok and candidates:
        wit = "no candidate absorbs every test set"
    outcomes.append(CheckOutcome("bounded_dissipative", ok, wit))

    sample = list(points_sample) if points_sample is not None else list(space.points)
    ok, wit = False, "no bounded candidate absorbs every sampled point"
    for cname, D in candidates:
        if not is_bounded(D, family):
            continue
        if all(absorbs(D, frozenset({x}), F, action) is not None for x in sample):
            ok, wit = True, f"absorbing set: {cname}"
            break
    outcomes.append(CheckOutcome("point_dissipative", ok, wit))

    ok, wit = True, None
    n_blocks = F.depth + 1
    for name, Y in sorted(testsets.items()):
        for pname, xs in _sequence_patterns(
            sorted(Y, key=lambda p: p.index), n_blocks, escape_patterns
        ):
            images = []
            for k in F.levels():
                el = F.sampler(k)[0]
                images.append(action.apply(el, xs[min(k, len(xs) - 1)]))
            if _stable_cluster_exists(images, family, tail_window) is None:
                ok = False
                trail = ",".join(p.pid for p in images[-tail_window:])
                wit = f"{name}/{pname}: tail images [{trail}] admit no cluster"
                break
        if not ok:
            break
    outcomes.append(CheckOutcome("asymptotically_compact", ok, wit))

    ok, wit = True, None
    for name, Y in sorted(testsets.items()):
        for i in range(family.size):
            if not any(
                member_measure(orbit(k, Y, action, F), family, cap).value.contains_index(i)
                for k in F.levels()
            ):
                ok = False
                wit = f"{name}: no level keeps covering {i} in the member measure"
                break
        if not ok:
            break
    outcomes.append(CheckOutcome("limit_compact", ok, wit))

    return TaxonomyReport(outcomes=tuple(outcomes))


def verify_eventual_compactness(
    action: Action,
    witness_element,
    testsets: dict[str, frozenset[Point]],
    family: AdmissibleFamily,
    cap: int,
) -> CheckOutcome:
    """Check a declared witness: images of the test sets under it close to
    measure-zero sets at the configured cap."""
    space = action.space
    for name, Y in sorted(testsets.items()):
        img = space.points_of(
            family.closure_mask(action.image_mask(witness_element, space.mask_of(Y)))
        )
        if not star_measure(img, family, cap).is_zero:
            return CheckOutcome(
                "eventually_compact",
                False,
                f"closure of the image of {name} is not measure-zero",
            )
    return CheckOutcome("eventually_compact", True, f"witness {witness_element!r}")
