"""Finite function-space models with pointwise-convergence covering families.

A model holds finitely many functions sampled on a finite argument grid, each
stored as a table of value vectors. Coverings constrain finitely many
arguments to open value balls (all other arguments are free), mirroring the
product-style base for pointwise convergence; member sets are materialized as
explicit point sets over the model.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Sequence

from .covering import AdmissibleFamily, Covering, chain_family, make_covering_masks
from .space import Point, Space, build_metric_space

Value = tuple[float, ...]
Table = tuple[Value, ...]


@dataclass(frozen=True, eq=False)
class FunctionSpaceModel:
    """Functions on a finite argument grid, one sample point per function table."""

    args: tuple[Value, ...]
    value_dim: int
    space: Space
    tables: tuple[Table, ...]

    @cached_property
    def point_of_table(self) -> dict:
        return {t: self.space.points[i] for i, t in enumerate(self.tables)}

    def table(self, p: Point) -> Table:
        return self.tables[p.index]

    def value(self, p: Point, arg_index: int) -> Value:
        return self.tables[p.index][arg_index]

    def lookup(self, table: Table) -> Optional[Point]:
        return self.point_of_table.get(table)

    def observed_values(self, arg_index: int) -> tuple[Value, ...]:
        return tuple(sorted({t[arg_index] for t in self.tables}))

    def constant_table(self, value: Value) -> Table:
        return tuple(value for _ in self.args)


def as_value(v, dim: int) -> Value:
    if isinstance(v, (int, float)):
        if dim != 1:
            raise ValueError("scalar value in a vector-valued model")
        return (float(v),)
    out = tuple(float(x) for x in v)
    if len(out) != dim:
        raise ValueError(f"value {v!r} has dimension {len(out)}, expected {dim}")
    return out


def build_function_model(
    args: Sequence, tables: Sequence[Sequence], labels: Sequence[str], value_dim: int = 1
) -> FunctionSpaceModel:
    """Build the model space; point coordinates are the flattened tables."""
    arg_tuples = tuple(as_value(a, _arg_dim(a)) for a in args)
    norm_tables = []
    for t in tables:
        norm_tables.append(tuple(as_value(v, value_dim) for v in t))
    if len(set(norm_tables)) != len(norm_tables):
        raise ValueError("duplicate function tables")
    coords = [[x for v in t for x in v] for t in norm_tables]
    space = build_metric_space(coords, metric="sup", ids=list(labels))
    return FunctionSpaceModel(
        args=arg_tuples,
        value_dim=value_dim,
        space=space,
        tables=tuple(norm_tables),
    )


def _arg_dim(a) -> int:
    if isinstance(a, (int, float)):
        return 1
    return len(tuple(a))


def _dist2(a: Value, b: Value) -> float:
    return sum((x - y) ** 2 for x, y in zip(a, b))


@dataclass(frozen=True)
class ArgConstraint:
    """One constrained argument: open value balls of one radius around each center."""

    arg_index: int
    radius: float
    centers: tuple[Value, ...]


def constraint(
    model: FunctionSpaceModel,
    arg_index: int,
    radius: float,
    centers: Optional[Sequence] = None,
) -> ArgConstraint:
    if centers is None:
        cs = model.observed_values(arg_index)
    else:
        cs = tuple(sorted(as_value(c, model.value_dim) for c in centers))
    return ArgConstraint(arg_index=arg_index, radius=float(radius), centers=cs)


def _slabs(model: FunctionSpaceModel, c: ArgConstraint) -> list[int]:
    """Distinct nonempty point masks of the per-center value balls at one argument."""
    r2 = c.radius * c.radius
    out = set()
    for center in c.centers:
        m = 0
        for i, t in enumerate(model.tables):
            if _dist2(t[c.arg_index], center) < r2:
                m |= 1 << i
        if m:
            out.add(m)
    return sorted(out)


def pointwise_covering(
    model: FunctionSpaceModel,
    constraints: Sequence[ArgConstraint],
    label: str = "",
) -> Covering:
    """Members are all nonempty products of per-argument value balls."""
    members = [model.space.full_mask]
    for c in constraints:
        slabs = _slabs(model, c)
        members = sorted(
            {m & s for m in members for s in slabs if m & s}
        )
        if not members:
            raise ValueError(f"constraint at arg {c.arg_index} empties every member")
    if not label:
        parts = ",".join(f"{c.arg_index}@{c.radius:g}" for c in constraints)
        label = f"pw[{parts}]"
    return make_covering_masks(model.space, members, label=label)


def in_pointwise_star(
    model: FunctionSpaceModel,
    f: Point,
    g: Point,
    constraints: Sequence[ArgConstraint],
) -> bool:
    """Direct membership formula: per constrained argument, some center holds
    both function values within the radius (arguments are independent)."""
    for c in constraints:
        fv = model.value(f, c.arg_index)
        gv = model.value(g, c.arg_index)
        r2 = c.radius * c.radius
        if not any(
            _dist2(fv, ctr) < r2 and _dist2(gv, ctr) < r2 for ctr in c.centers
        ):
            return False
    return True


def pointwise_chain(
    model: FunctionSpaceModel,
    levels: Sequence[Sequence[ArgConstraint]],
    label: str = "",
) -> AdmissibleFamily:
    """Chain of pointwise coverings; double-refinements certified on construction."""
    covs = [pointwise_covering(model, cs) for cs in levels]
    return chain_family(model.space, covs, label=label or "pointwise-chain")
