"""``tq`` command line: run one computation on a scenario file and emit a report.

Exit codes: 0 success, 1 invalid scenario or config, 2 computational
error, 3 global-section search hit its leaf budget.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .config import Tolerances
from .context import ContextPoset, build_poset
from .errors import ParseError, ToposError, ValidationError
from .ks import DEFAULT_LEAF_BUDGET, find_global_section, section_to_valuation
from .presheaf import GelfandPoint
from .quantity import (
    compare_routes,
    daseinisation_table,
    daseinised_proposition,
    pullback_proposition,
    quantity_pair,
)
from .scenario import Scenario, encode_complex, load_scenario
from .truth import truth_object, valuate

log = logging.getLogger("toposq")

COMMANDS = ("contexts", "daseinise", "quantity", "truth", "ks", "compare")
EXIT_OK, EXIT_VALIDATION, EXIT_COMPUTE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


@dataclass
class Config:
    tolerances: Tolerances = field(default_factory=Tolerances)
    leaf_budget: int = DEFAULT_LEAF_BUDGET

    def to_dict(self) -> dict:
        return {"tolerances": self.tolerances.to_dict(), "leaf_budget": self.leaf_budget}


def load_config(path) -> Config:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    if not isinstance(doc, dict):
        raise ParseError("config must be an object", str(path))
    try:
        tol = Tolerances.from_dict(doc.get("tolerances", {}))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"bad tolerances in config: {exc}") from None
    budget = doc.get("leaf_budget", DEFAULT_LEAF_BUDGET)
    if not isinstance(budget, int) or budget < 1:
        raise ValidationError("leaf_budget must be a positive integer")
    return Config(tol, budget)


def _num(x: float) -> float:
    return round(float(x), 12) + 0.0


def _sorted_ids(ids):
    return sorted(ids, key=lambda v: int(v[1:]))


def poset_summary(poset: ContextPoset) -> dict:
    contexts = []
    for vid, ctx in poset.contexts():
        contexts.append({
            "id": vid,
            "atom_ranks": [int(round(float(np.trace(a).real))) for a in ctx.atoms],
            "atoms": [[[encode_complex(x) for x in row] for row in a] for a in ctx.atoms],
        })
    return {
        "contexts": contexts,
        "order": [[sub, sup] for sub, sup in poset.order_pairs()],
        "maximal": poset.maximal(),
    }


def _parse_point(text: str, poset: ContextPoset) -> GelfandPoint:
    vid, _, atom = text.partition(":")
    if not atom.isdigit():
        raise ValidationError(f"point must look like V0:1, got {text!r}")
    vid = poset.id_of(vid)
    if int(atom) >= len(poset[vid]):
        raise ValidationError(f"context {vid} has only {len(poset[vid])} atoms")
    return GelfandPoint(vid, int(atom))


def _proposition(scenario: Scenario, name: str, poset: ContextPoset, tol):
    if name not in scenario.propositions:
        raise ValidationError(f"unknown proposition {name!r}")
    p = scenario.propositions[name]
    a = scenario.operators[p.operator]
    if p.route == "pullback":
        return p, pullback_proposition(poset, a, p.window, tol)
    return p, daseinised_proposition(poset, a, p.window, tol)


def _operator(scenario: Scenario, name: str):
    if name not in scenario.operators:
        raise ValidationError(f"unknown operator {name!r}")
    return scenario.operators[name]


def truth_report(scenario, poset, state, prop, tol) -> dict:
    if state not in scenario.states:
        raise ValidationError(f"unknown state {state!r}")
    p, s = _proposition(scenario, prop, poset, tol)
    t = truth_object(scenario.states[state], poset, tol)
    value = valuate(s, t)
    stages = {}
    for v in poset.ids:
        down = poset.down(v)
        stages[v] = {
            "sieve": _sorted_ids(value[v]),
            "degree": f"{len(value[v])}/{len(down)}",
            "proposition_atoms": sorted(s.sets[v]),
            "truth_object_atoms": sorted(t.thresholds[v]),
        }
    if all(value[v] == poset.down(v) for v in poset.ids):
        verdict = "totally true"
    elif all(not value[v] for v in poset.ids):
        verdict = "totally false"
    else:
        verdict = "intermediate"
    return {"state": state, "proposition": prop, "route": p.route, "verdict": verdict, "stages": stages}


def run(command: str, scenario: Scenario, config: Config | None = None, args: list[str] | None = None) -> dict:
    """Execute ``command`` and return the report as a JSON-compatible dict
    (without the timestamp, which :func:`main` adds)."""
    config = config or Config()
    tol = config.tolerances
    args = list(args or [])
    if command not in COMMANDS:
        raise ValidationError(f"unknown command {command!r}")
    if scenario.dim < 3:
        log.warning("dim %d < 3: Kochen-Specker style statements do not apply", scenario.dim)
    poset = build_poset(scenario.seed_contexts(tol), tol)
    report = {"command": command, "arguments": args, "dim": scenario.dim, "config": config.to_dict()}
    summary = poset_summary(poset)
    report["poset"] = {"size": len(poset), "order": summary["order"], "maximal": summary["maximal"]}

    if command == "contexts":
        report["poset"] = summary
    elif command == "daseinise":
        _need(args, 1, "daseinise <operator>")
        table = daseinisation_table(_operator(scenario, args[0]), poset, tol)
        report["daseinisation"] = {
            v: {"inner": [_num(x) for x in inner], "outer": [_num(x) for x in outer]}
            for v, (inner, outer) in table.items()
        }
    elif command == "quantity":
        _need(args, 2, "quantity <operator> <context:atom>")
        a = _operator(scenario, args[0])
        pair = quantity_pair(poset, a, _parse_point(args[1], poset), tol=tol)
        report["quantity"] = {
            "base": pair.base,
            "mu": {w: _num(x) for w, x in pair.mu.items()},
            "nu": {w: _num(x) for w, x in pair.nu.items()},
            "violations": pair.violations(poset),
        }
    elif command == "truth":
        if args:
            _need(args, 2, "truth <state> <proposition>")
            queries = [tuple(args[:2])]
        else:
            queries = scenario.queries
        report["truth"] = [truth_report(scenario, poset, s, p, tol) for s, p in queries]
    elif command == "ks":
        result = find_global_section(poset, config.leaf_budget)
        ks = {"status": result.status, "exhaustive": result.exhaustive, "leaves": result.leaves}
        if result.section is not None:
            ks["section"] = {v: p.atom for v, p in result.section.items()}
            covered = {}
            for name, op in scenario.operators.items():
                if any(ctx.contains(op) for _, ctx in poset.contexts()):
                    covered[name] = op
            ks["values"] = {n: _num(x) for n, x in section_to_valuation(poset, result.section, covered).items()}
        report["ks"] = ks
    elif command == "compare":
        _need(args, 1, "compare <proposition>")
        if args[0] not in scenario.propositions:
            raise ValidationError(f"unknown proposition {args[0]!r}")
        p = scenario.propositions[args[0]]
        report["compare"] = compare_routes(poset, scenario.operators[p.operator], p.window, tol)
    return report


def _need(args, n, usage):
    if len(args) < n:
        raise ValidationError(f"usage: {usage}")


def dump_report(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def format_text(report: dict) -> str:
    lines = []

    def walk(node, indent):
        pad = "  " * indent
        if isinstance(node, dict):
            for k in sorted(node):
                v = node[k]
                if isinstance(v, (dict, list)) and v and not _flat(v):
                    lines.append(f"{pad}{k}:")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}{k}: {json.dumps(v)}")
        else:
            for i, v in enumerate(node):
                if isinstance(v, (dict, list)) and not _flat(v):
                    lines.append(f"{pad}- [{i}]")
                    walk(v, indent + 1)
                else:
                    lines.append(f"{pad}- {json.dumps(v)}")

    walk(report, 0)
    return "\n".join(lines) + "\n"


def _flat(v) -> bool:
    # lists without nested objects print on one line when short enough
    if isinstance(v, dict):
        return False
    text = json.dumps(v)
    return "{" not in text and len(text) <= 100


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--scenario", required=True, help="scenario JSON file")
    common.add_argument("--config", help="JSON config with 'tolerances' and 'leaf_budget'")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--leaf-budget", type=int, help="override the global-section leaf budget")
    for name in ("herm", "proj", "psd", "cluster", "recon", "norm"):
        common.add_argument(f"--tol-{name}", type=float, help=f"override the {name} tolerance")

    parser = argparse.ArgumentParser(prog="tq", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("contexts", parents=[common], help="build and list the context poset")
    p = sub.add_parser("daseinise", parents=[common], help="inner/outer daseinisation tables")
    p.add_argument("operator")
    p = sub.add_parser("quantity", parents=[common], help="mu/nu tables at a spectral point")
    p.add_argument("operator")
    p.add_argument("point", help="context id and atom index, e.g. V0:2")
    p = sub.add_parser("truth", parents=[common], help="truth value of proposition(s) in a state")
    p.add_argument("state", nargs="?")
    p.add_argument("proposition", nargs="?")
    sub.add_parser("ks", parents=[common], help="search for a global section")
    p = sub.add_parser("compare", parents=[common], help="pullback vs daseinised proposition")
    p.add_argument("proposition")
    return parser


def _config_from_args(ns) -> Config:
    config = load_config(ns.config) if ns.config else Config()
    overrides = {
        name: getattr(ns, f"tol_{name}")
        for name in ("herm", "proj", "psd", "cluster", "recon", "norm")
        if getattr(ns, f"tol_{name}") is not None
    }
    if overrides:
        merged = {**config.tolerances.to_dict(), **overrides}
        config = Config(Tolerances.from_dict(merged), config.leaf_budget)
    if ns.leaf_budget is not None:
        if ns.leaf_budget < 1:
            raise ValidationError("--leaf-budget must be positive")
        config = Config(config.tolerances, ns.leaf_budget)
    return config


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="tq: %(levelname)s: %(message)s")
    ns = build_parser().parse_args(argv)
    positional = {
        "daseinise": lambda: [ns.operator],
        "quantity": lambda: [ns.operator, ns.point],
        "truth": lambda: [x for x in (ns.state, ns.proposition) if x is not None],
        "compare": lambda: [ns.proposition],
    }.get(ns.command, list)()
    try:
        config = _config_from_args(ns)
        scenario = load_scenario(ns.scenario, config.tolerances)
    except (ParseError, ValidationError) as exc:
        print(f"tq: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    try:
        report = run(ns.command, scenario, config, positional)
    except ValidationError as exc:
        print(f"tq: invalid input: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ToposError as exc:
        print(f"tq: computation failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_COMPUTE
    report["generated_at"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    text = dump_report(report) if ns.format == "json" else format_text(report)
    if ns.out:
        Path(ns.out).write_text(text)
    else:
        sys.stdout.write(text)
    if ns.command == "ks" and report["ks"]["status"] == "inconclusive":
        return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
