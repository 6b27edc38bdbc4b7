"""Scenario files: JSON documents describing operators, states and queries.

Layout::

    {
      "dim": 3,
      "operators": {"A": [[1, 0, 0], [0, [2, 0], 0], [0, 0, 3]]},
      "states": {"psi": [[0, 0], [0.7071067811865476, 0], [0.7071067811865476, 0]]},
      "contexts": [["A"]],
      "propositions": {"A_high": {"operator": "A", "window": [2.5, 3.5], "route": "daseinised"}},
      "queries": [{"state": "psi", "proposition": "A_high"}]
    }

Complex entries are ``[re, im]`` pairs; plain numbers are read as real.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import Tolerances, resolve
from .context import Context, generate_context
from .errors import ParseError, ToposError, ValidationError
from .linalg import commutator_norm, is_hermitian
from .quantity import IntervalWindow

ROUTES = ("daseinised", "pullback")


@dataclass(frozen=True)
class Proposition:
    operator: str
    window: IntervalWindow
    route: str = "daseinised"


@dataclass
class Scenario:
    dim: int
    operators: dict[str, np.ndarray] = field(default_factory=dict)
    states: dict[str, np.ndarray] = field(default_factory=dict)
    seeds: list[list[str]] = field(default_factory=list)
    propositions: dict[str, Proposition] = field(default_factory=dict)
    queries: list[tuple[str, str]] = field(default_factory=list)

    def seed_contexts(self, tol: Tolerances | None = None) -> list[Context]:
        return [generate_context([self.operators[n] for n in seed], tol) for seed in self.seeds]


def _number(x, where) -> complex:
    if isinstance(x, bool):
        raise ParseError("expected a number", where)
    if isinstance(x, (int, float)):
        return complex(x)
    if isinstance(x, list) and len(x) == 2 and all(
        isinstance(y, (int, float)) and not isinstance(y, bool) for y in x
    ):
        return complex(x[0], x[1])
    raise ParseError("expected a number or a [re, im] pair", where)


def _matrix(data, dim, where) -> np.ndarray:
    if not isinstance(data, list) or len(data) != dim:
        raise ParseError(f"expected {dim} rows", where)
    rows = []
    for i, row in enumerate(data):
        if not isinstance(row, list) or len(row) != dim:
            raise ParseError(f"expected {dim} entries", f"{where}[{i}]")
        rows.append([_number(x, f"{where}[{i}][{j}]") for j, x in enumerate(row)])
    return np.array(rows, dtype=complex)


def _vector(data, dim, where) -> np.ndarray:
    if not isinstance(data, list) or len(data) != dim:
        raise ParseError(f"expected {dim} amplitudes", where)
    return np.array([_number(x, f"{where}[{i}]") for i, x in enumerate(data)], dtype=complex)


def _mapping(doc, key) -> dict:
    value = doc.get(key, {})
    if not isinstance(value, dict):
        raise ParseError("expected an object", key)
    return value


def parse_scenario(doc) -> Scenario:
    """Build a Scenario from a decoded JSON object (structure only, no validation)."""
    if not isinstance(doc, dict):
        raise ParseError("top level must be an object", "$")
    dim = doc.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError("dim must be a positive integer", "dim")
    ops = {n: _matrix(m, dim, f"operators.{n}") for n, m in _mapping(doc, "operators").items()}
    states = {n: _vector(v, dim, f"states.{n}") for n, v in _mapping(doc, "states").items()}
    seeds = doc.get("contexts", [])
    if not isinstance(seeds, list):
        raise ParseError("expected a list of operator-name lists", "contexts")
    for i, seed in enumerate(seeds):
        if not isinstance(seed, list) or not all(isinstance(n, str) for n in seed):
            raise ParseError("expected a list of operator names", f"contexts[{i}]")
    props = {}
    for name, p in _mapping(doc, "propositions").items():
        where = f"propositions.{name}"
        if not isinstance(p, dict) or not isinstance(p.get("operator"), str):
            raise ParseError("expected an object with an 'operator' name", where)
        window = p.get("window")
        if not (isinstance(window, list) and len(window) == 2
                and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in window)):
            raise ParseError("window must be [lower, upper]", f"{where}.window")
        route = p.get("route", "daseinised")
        if route not in ROUTES:
            raise ParseError(f"route must be one of {ROUTES}", f"{where}.route")
        try:
            w = IntervalWindow(float(window[0]), float(window[1]))
        except ToposError as exc:
            raise ParseError(str(exc), f"{where}.window") from None
        props[name] = Proposition(p["operator"], w, route)
    queries = []
    raw_queries = doc.get("queries", [])
    if not isinstance(raw_queries, list):
        raise ParseError("expected a list", "queries")
    for i, q in enumerate(raw_queries):
        if not (isinstance(q, dict) and isinstance(q.get("state"), str) and isinstance(q.get("proposition"), str)):
            raise ParseError("expected {'state': ..., 'proposition': ...}", f"queries[{i}]")
        queries.append((q["state"], q["proposition"]))
    return Scenario(dim, ops, states, [list(s) for s in seeds], props, queries)


def validate(scenario: Scenario, tol: Tolerances | None = None) -> Scenario:
    tol = resolve(tol)
    for name, m in scenario.operators.items():
        if not is_hermitian(m, tol):
            raise ValidationError(f"operator {name!r} is not Hermitian")
    for name, v in scenario.states.items():
        if abs(np.linalg.norm(v) - 1) > tol.norm:
            raise ValidationError(f"state {name!r} is not unit norm (norm {np.linalg.norm(v):.12g})")
    for i, seed in enumerate(scenario.seeds):
        if not seed:
            raise ValidationError(f"context seed {i} is empty")
        for n in seed:
            if n not in scenario.operators:
                raise ValidationError(f"context seed {i} names unknown operator {n!r}")
        for a in range(len(seed)):
            for b in range(a + 1, len(seed)):
                x, y = scenario.operators[seed[a]], scenario.operators[seed[b]]
                if commutator_norm(x, y) > tol.herm * (1 + np.abs(x).max() * np.abs(y).max()):
                    raise ValidationError(
                        f"context seed {i}: operators {seed[a]!r} and {seed[b]!r} do not commute"
                    )
    for name, p in scenario.propositions.items():
        if p.operator not in scenario.operators:
            raise ValidationError(f"proposition {name!r} names unknown operator {p.operator!r}")
    for state, prop in scenario.queries:
        if state not in scenario.states:
            raise ValidationError(f"query names unknown state {state!r}")
        if prop not in scenario.propositions:
            raise ValidationError(f"query names unknown proposition {prop!r}")
    return scenario


def load_scenario(path, tol: Tolerances | None = None) -> Scenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(str(exc), str(path)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"{path}:{exc.lineno}:{exc.colno}") from None
    return validate(parse_scenario(doc), tol)


def encode_complex(x: complex) -> list[float]:
    return [round(float(x.real), 12) + 0.0, round(float(x.imag), 12) + 0.0]


def scenario_to_dict(scenario: Scenario) -> dict:
    return {
        "dim": scenario.dim,
        "operators": {n: [[encode_complex(x) for x in row] for row in m] for n, m in scenario.operators.items()},
        "states": {n: [encode_complex(x) for x in v] for n, v in scenario.states.items()},
        "contexts": [list(s) for s in scenario.seeds],
        "propositions": {
            n: {"operator": p.operator, "window": [p.window.lower, p.window.upper], "route": p.route}
            for n, p in scenario.propositions.items()
        },
        "queries": [{"state": s, "proposition": p} for s, p in scenario.queries],
    }
