"""Search for global sections of the spectral presheaf over a finite poset.

A global section picks one atom per context, compatibly with restriction.
It is fixed by its values at the maximal contexts, so the search branches
only there and propagates the forced choices downward.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .context import ContextPoset
from .errors import EmptyPoset, InconsistentSection, NotInAlgebra, OperatorNotCovered
from .presheaf import GelfandPoint

DEFAULT_LEAF_BUDGET = 10**7


@dataclass
class SectionSearch:
    status: str  # "found", "none" or "inconclusive"
    section: dict[str, GelfandPoint] | None
    leaves: int
    order: list[str] = field(default_factory=list)

    @property
    def exhaustive(self) -> bool:
        return self.status != "inconclusive"


def is_global_section(poset: ContextPoset, section: Mapping[str, GelfandPoint]) -> bool:
    if set(section) != set(poset.ids):
        return False
    for sub, sup in poset.order_pairs():
        if poset.restriction(sup, sub)[section[sup].atom] != section[sub].atom:
            return False
    return True


class _Budget(Exception):
    pass


def find_global_section(poset: ContextPoset, leaf_budget: int = DEFAULT_LEAF_BUDGET) -> SectionSearch:
    if len(poset) == 0:
        raise EmptyPoset("no contexts")
    maxes = poset.maximal()
    forced = {
        m: [
            {w: poset.restriction(m, w)[i] for w in poset.down(m)}
            for i in range(len(poset[m]))
        ]
        for m in maxes
    }
    shared = {m: sum(len(poset.up(w)) > 1 for w in poset.down(m)) for m in maxes}
    assigned: dict[str, int] = {}
    leaves = 0
    visit_order: list[str] = []

    def pick(remaining):
        return max(
            remaining,
            key=lambda m: (sum(w in assigned for w in poset.down(m)), shared[m], -int(m[1:])),
        )

    def search(remaining) -> bool:
        nonlocal leaves
        if not remaining:
            leaves += 1
            return True
        m = pick(remaining)
        if m not in visit_order:
            visit_order.append(m)
        rest = [x for x in remaining if x != m]
        for choice in forced[m]:
            if any(assigned.get(w, a) != a for w, a in choice.items()):
                leaves += 1
                if leaves > leaf_budget:
                    raise _Budget
                continue
            added = [w for w in choice if w not in assigned]
            for w in added:
                assigned[w] = choice[w]
            if search(rest):
                return True
            for w in added:
                del assigned[w]
        return False

    try:
        found = search(list(maxes))
    except _Budget:
        return SectionSearch("inconclusive", None, leaves, visit_order)
    if not found:
        return SectionSearch("none", None, leaves, visit_order)
    section = {v: GelfandPoint(v, assigned[v]) for v in poset.ids}
    if not is_global_section(poset, section):
        raise InconsistentSection("search produced an incompatible section")
    return SectionSearch("found", section, leaves, visit_order)


def section_to_valuation(poset: ContextPoset, section: Mapping[str, GelfandPoint], ops):
    """Value of each operator under the section.

    ``ops`` may be a sequence or a name -> operator mapping; the result has
    the same shape.  Every context containing an operator must give it the
    same value.
    """
    named = dict(ops) if isinstance(ops, Mapping) else dict(enumerate(ops))
    values = {}
    for name, op in named.items():
        seen = []
        for v, ctx in poset.contexts():
            try:
                vals = ctx.atom_values(op)
            except NotInAlgebra:
                continue
            seen.append(float(vals[section[v].atom]))
        if not seen:
            raise OperatorNotCovered(f"operator {name!r} lies in no context of the poset")
        if max(seen) - min(seen) > 1e-7 * (1 + np.abs(np.asarray(op)).max()):
            raise InconsistentSection(f"operator {name!r} takes several values under the section")
        values[name] = seen[0]
    if isinstance(ops, Mapping):
        return values
    return [values[i] for i in range(len(named))]
