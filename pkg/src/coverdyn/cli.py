"""Config-driven command-line frontend emitting deterministic structured reports.

Subcommands: `verify-axioms` (the proposition battery), `omega` (limit set of
a named test set), `attractor` (full verification against the scenario's
expectations), and `scenario` (summary of a built-in system). Exit codes:
0 expectations met, 1 property violation, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass
from typing import Optional

from .attractor import (
    check_equivalence,
    check_uniqueness,
    construct_candidate,
    verify_global,
)
from .checks import grid_battery, proximity_suite
from .covering import chain_family
from .dynamics import FilterBasis, omega_limit
from .proximity import CoverCollection, prox
from .scenarios import (
    BUILTIN_SCENARIOS,
    Scenario,
    SchemaError,
    get_scenario,
    load_system,
)


@dataclass(frozen=True)
class RunConfig:
    command: str
    scenario: Optional[str] = None
    config_path: Optional[str] = None
    target: Optional[str] = None
    max_level: Optional[int] = None
    resolution: Optional[int] = None
    cap: Optional[int] = None
    seed: int = 0
    budget: int = 32
    format: str = "json"
    out: Optional[str] = None
    mutate: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "scenario": self.scenario,
            "config": self.config_path,
            "target": self.target,
            "max_level": self.max_level,
            "resolution": self.resolution,
            "cap": self.cap,
            "seed": self.seed,
            "budget": self.budget,
            "format": self.format,
        }


def _truncate_filter(F: FilterBasis, depth: int) -> FilterBasis:
    if depth >= F.depth:
        return F
    return FilterBasis(
        semigroup=F.semigroup,
        depth=depth,
        contains=F.contains,
        sampler=F.sampler,
        enumerate_level=F.enumerate_level,
        label=F.label + f"|<= {depth}",
    )


def _load_scenario(rc: RunConfig) -> Scenario:
    if rc.scenario:
        sc = get_scenario(rc.scenario)
    elif rc.config_path:
        with open(rc.config_path, "r", encoding="utf-8") as fh:
            sc = load_system(fh.read())
    else:
        raise SchemaError("either --scenario or --config is required")
    if rc.max_level is not None:
        object.__setattr__(sc, "filter_basis", _truncate_filter(sc.filter_basis, rc.max_level))
    if rc.resolution is not None and rc.resolution < sc.family.size - 1:
        fam = chain_family(
            sc.space, sc.family.coverings[: rc.resolution + 1], label=sc.family.label
        )
        object.__setattr__(sc, "family", fam)
    return sc


def _decorate(rows: list[dict], budget: int, resolution: int) -> list[dict]:
    out = []
    for r in rows:
        r = dict(r)
        r.setdefault("budget", budget)
        r.setdefault("resolution", resolution)
        out.append(r)
    return out


def _emit(rc: RunConfig, payload: dict) -> str:
    if rc.format == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["name", "verdict", "witness", "budget", "resolution"])
    for row in payload.get("results", []):
        w.writerow(
            [
                row.get("name", ""),
                row.get("verdict", ""),
                row.get("witness", ""),
                row.get("budget", ""),
                row.get("resolution", ""),
            ]
        )
    return buf.getvalue()


def _write(rc: RunConfig, text: str) -> None:
    if rc.out:
        with open(rc.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _broken_prox(x, y, family):
    # deliberately asymmetric: drops the finest level on ordered pairs
    v = prox(x, y, family)
    if x.index < y.index and not v.is_empty:
        raw = v._raw()
        return CoverCollection.chain(family, raw - 1) if raw >= 0 else v
    return v


def cmd_verify_axioms(rc: RunConfig) -> int:
    if rc.scenario or rc.config_path:
        sc = _load_scenario(rc)
        from .checks import (
            boundedness_suite,
            closure_criteria_suite,
            measure_suite,
        )

        rng = random.Random(rc.seed)
        results = []
        results += proximity_suite(
            sc.family,
            resolving=sc.declared.resolving,
            triangle_exhaustive=sc.space.n <= 40,
            rng=rng,
            prox_fn=_broken_prox if rc.mutate == "prox-asymmetry" else None,
        )
        results += closure_criteria_suite(
            sc.family, rng=rng, trials=40, star_basis_holds=sc.declared.resolving
        )
        results += boundedness_suite(sc.family, rng=rng, trials=40)
        results += measure_suite(sc.family, cap=rc.cap or sc.declared.cap, rng=rng, trials=60)
        resolution = sc.family.finest_index
    else:
        if rc.mutate == "prox-asymmetry":
            from .covering import metric_chain_family
            from .space import line_grid

            grid = line_grid(0.0, 1.0, 101)
            fam = metric_chain_family(grid, 2.0, 6)
            results = proximity_suite(
                fam, resolving=True, rng=random.Random(rc.seed), prox_fn=_broken_prox
            )
            resolution = fam.finest_index
        else:
            results = grid_battery(seed=rc.seed, cap=rc.cap)
            resolution = 6
    rows = _decorate([r.to_dict() for r in results], rc.budget, resolution)
    payload = {"command": "verify-axioms", "config": rc.to_dict(), "results": rows}
    _write(rc, _emit(rc, payload))
    return 0 if all(r["verdict"] == "pass" for r in rows) else 1


def cmd_omega(rc: RunConfig) -> int:
    sc = _load_scenario(rc)
    if rc.target not in sc.testsets:
        raise SchemaError(
            f"unknown test set {rc.target!r}; known: {sorted(sc.testsets)}"
        )
    rep = omega_limit(sc.testsets[rc.target], sc.filter_basis, sc.action, sc.family)
    payload = {
        "command": "omega",
        "config": rc.to_dict(),
        "target": rc.target,
        "limit_set": rep.to_dict(),
        "results": _decorate(
            [
                {
                    "name": f"omega[{rc.target}]",
                    "verdict": "computed",
                    "witness": ",".join(rep.pids()[:8]),
                }
            ],
            rc.budget,
            rep.resolution,
        ),
    }
    _write(rc, _emit(rc, payload))
    return 0


def cmd_attractor(rc: RunConfig) -> int:
    sc = _load_scenario(rc)
    rng = random.Random(rc.seed)
    testsets = dict(sc.testsets)
    testsets.update(sc.random_bounded_testsets(rng, count=min(rc.budget, 50)))
    object.__setattr__(sc, "testsets", testsets)
    if rc.cap is not None:
        object.__setattr__(sc, "declared", sc.declared.__class__(
            **{**sc.declared.__dict__, "cap": rc.cap}
        ))

    report = check_equivalence(sc)
    candidate = sc.attractor_points()
    constructed = construct_candidate(
        testsets, sc.filter_basis, sc.action, sc.family
    )
    built_verdict = verify_global(
        constructed, testsets, sc.filter_basis, sc.action, sc.family, sc.declared.cap
    )
    uniqueness = None
    if report.global_verdict.all_passed and built_verdict.all_passed:
        uniqueness = check_uniqueness(
            candidate, constructed, {"attractor": candidate}, sc.family
        )

    hyp_match = all(
        report.hypothesis_ok.get(name) == expect
        for name, expect in sc.declared.hypothesis_expect.items()
    )
    expectations_met = (
        report.kind == sc.expected.kind
        and report.forward_holds
        and hyp_match
        and (uniqueness is None or uniqueness.passed)
    )

    rows = []
    for v in report.global_verdict.checks:
        rows.append({"name": f"global.{v.name}", "verdict": "pass" if v.passed else "fail", "witness": v.witness or ""})
    for v in report.uniform_verdict.checks:
        rows.append({"name": f"uniform.{v.name}", "verdict": "pass" if v.passed else "fail", "witness": v.witness or ""})
    for o in report.taxonomy.outcomes:
        rows.append({"name": f"taxonomy.{o.name}", "verdict": "pass" if o.passed else "fail", "witness": o.witness or ""})
    for name, ok in sorted(report.hypothesis_ok.items()):
        rows.append({"name": f"hypothesis.{name}", "verdict": "pass" if ok else "fail", "witness": ""})
    rows.append(
        {
            "name": "expectations",
            "verdict": "pass" if expectations_met else "fail",
            "witness": f"kind={report.kind} expected={sc.expected.kind}",
        }
    )
    payload = {
        "command": "attractor",
        "config": rc.to_dict(),
        "kind": report.kind,
        "expected_kind": sc.expected.kind,
        "equivalence": report.to_dict(),
        "constructed_candidate": sorted(p.pid for p in constructed),
        "constructed_verdict": built_verdict.to_dict(),
        "uniqueness": uniqueness.to_dict() if uniqueness else None,
        "expectations_met": expectations_met,
        "results": _decorate(rows, rc.budget, sc.family.finest_index),
    }
    _write(rc, _emit(rc, payload))
    return 0 if expectations_met else 1


def cmd_scenario(rc: RunConfig) -> int:
    sc = _load_scenario(rc)
    payload = {
        "command": "scenario",
        "config": rc.to_dict(),
        "name": sc.name,
        "points": sc.space.n,
        "coverings": [len(c.members) for c in sc.family.coverings],
        "filter_depth": sc.filter_basis.depth,
        "testsets": {k: sorted(p.pid for p in v)[:10] for k, v in sorted(sc.testsets.items())},
        "expected": {
            "attractor": list(sc.expected.attractor),
            "kind": sc.expected.kind,
        },
        "results": _decorate(
            [{"name": "scenario", "verdict": "loaded", "witness": sc.name}],
            rc.budget,
            sc.family.finest_index,
        ),
    }
    _write(rc, _emit(rc, payload))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="coverdyn",
        description="covering-uniformity dynamics: axiom suites, limit sets, attractors",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--scenario", choices=sorted(BUILTIN_SCENARIOS), help="built-in system")
        p.add_argument("--config", dest="config_path", help="system config file")
        p.add_argument("--max-level", type=int, dest="max_level", help="filter truncation")
        p.add_argument("--resolution", type=int, help="covering index truncation")
        p.add_argument("--cap", type=int, help="measure cardinality cap")
        p.add_argument("--seed", type=int, default=0, help="seed for randomized test sets")
        p.add_argument("--budget", type=int, default=32, help="sample budget")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", help="write the report to a file instead of stdout")

    p = sub.add_parser("verify-axioms", help="run the labeled proposition battery")
    common(p)
    p.add_argument(
        "--mutate",
        choices=("prox-asymmetry",),
        help="negative-control hook: break an internal law on purpose",
    )

    p = sub.add_parser("omega", help="limit set of a named test set")
    common(p)
    p.add_argument("--target", required=True, help="test set name")

    p = sub.add_parser("attractor", help="construct and verify attractors")
    common(p)

    p = sub.add_parser("scenario", help="describe a system")
    common(p)
    p.add_argument("name", nargs="?", help="built-in scenario name")
    return ap


def main(argv: Optional[list] = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    scen = getattr(ns, "scenario", None) or getattr(ns, "name", None)
    rc = RunConfig(
        command=ns.command,
        scenario=scen,
        config_path=getattr(ns, "config_path", None),
        target=getattr(ns, "target", None),
        max_level=getattr(ns, "max_level", None),
        resolution=getattr(ns, "resolution", None),
        cap=getattr(ns, "cap", None),
        seed=ns.seed,
        budget=ns.budget,
        format=ns.format,
        out=ns.out,
        mutate=getattr(ns, "mutate", None),
    )
    handlers = {
        "verify-axioms": cmd_verify_axioms,
        "omega": cmd_omega,
        "attractor": cmd_attractor,
        "scenario": cmd_scenario,
    }
    try:
        return handlers[rc.command](rc)
    except (SchemaError, FileNotFoundError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
