"""Quantity-value pairs and propositions ``A in [a, b]`` as subobjects of Sigma.

A self-adjoint operator ``A`` induces, at each context ``V`` and point
``lambda`` of its spectrum, the pair of functions on the down-set of ``V``

    mu(V')  = lambda|V' (inner daseinisation of A at V')
    nu(V')  = lambda|V' (outer daseinisation of A at V')

with ``mu`` order-preserving, ``nu`` order-reversing and ``mu <= nu``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerances, resolve
from .context import ContextPoset
from .daseinisation import atom_values, outer_atoms
from .errors import EmptyWindow, NotASubcontext
from .linalg import as_operator, hermitian_eig
from .presheaf import ClopenSubobject, GelfandPoint, restrict_point


@dataclass(frozen=True)
class IntervalWindow:
    lower: float
    upper: float

    def __post_init__(self):
        if self.lower > self.upper:
            raise EmptyWindow(f"window [{self.lower}, {self.upper}] is empty")

    def contains(self, x: float, eps: float = 0.0) -> bool:
        return self.lower - eps <= x <= self.upper + eps


@dataclass(frozen=True)
class OrderPair:
    base: str
    mu: dict
    nu: dict

    def violations(self, poset: ContextPoset, eps: float = 1e-9) -> list[str]:
        out = []
        for w in self.mu:
            if self.mu[w] > self.nu[w] + eps:
                out.append(f"mu > nu at {w}")
        for sub, sup in poset.order_pairs():
            if sub in self.mu and sup in self.mu:
                if self.mu[sub] > self.mu[sup] + eps:
                    out.append(f"mu not order-preserving on {sub} <= {sup}")
                if self.nu[sub] < self.nu[sup] - eps:
                    out.append(f"nu not order-reversing on {sub} <= {sup}")
        return out

    def close_to(self, other: "OrderPair", eps: float = 1e-9) -> bool:
        return (
            self.base == other.base
            and self.mu.keys() == other.mu.keys()
            and all(abs(self.mu[w] - other.mu[w]) <= eps for w in self.mu)
            and all(abs(self.nu[w] - other.nu[w]) <= eps for w in self.nu)
        )


def daseinisation_table(a, poset: ContextPoset, tol: Tolerances | None = None) -> dict:
    """``{vid: (inner_values, outer_values)}`` for every context of the poset."""
    return {v: atom_values(a, poset[v], tol) for v in poset.ids}


def quantity_pair(poset: ContextPoset, a, p: GelfandPoint, table=None, tol=None) -> OrderPair:
    if table is None:
        table = daseinisation_table(a, poset, tol)
    mu, nu = {}, {}
    for w in sorted(poset.down(p.context), key=lambda x: int(x[1:])):
        q = restrict_point(poset, p, w)
        inner, outer = table[w]
        mu[w] = float(inner[q.atom])
        nu[w] = float(outer[q.atom])
    return OrderPair(p.context, mu, nu)


def restrict_pair(poset: ContextPoset, pair: OrderPair, v_sub) -> OrderPair:
    v_sub = poset.id_of(v_sub)
    if not poset.leq(v_sub, pair.base):
        raise NotASubcontext(f"{v_sub} is not a subcontext of {pair.base}")
    keep = poset.down(v_sub)
    return OrderPair(
        v_sub,
        {w: x for w, x in pair.mu.items() if w in keep},
        {w: x for w, x in pair.nu.items() if w in keep},
    )


def naturality_check(poset: ContextPoset, a, v, v_sub, table=None, tol=None) -> bool:
    """Whether restricting then evaluating equals evaluating then restricting,
    for every point of ``v``."""
    tol = resolve(tol)
    v, v_sub = poset.id_of(v), poset.id_of(v_sub)
    if table is None:
        table = daseinisation_table(a, poset, tol)
    for i in range(len(poset[v])):
        p = GelfandPoint(v, i)
        left = restrict_pair(poset, quantity_pair(poset, a, p, table), v_sub)
        right = quantity_pair(poset, a, restrict_point(poset, p, v_sub), table)
        if not left.close_to(right, tol.recon):
            return False
    return True


class IntervalTheta:
    """Subobject of the quantity-value presheaf cut out by a constant window:
    a pair over the down-set of ``V`` belongs iff ``lower <= mu`` and
    ``nu <= upper`` at every stage of its domain."""

    def __init__(self, window: IntervalWindow, poset: ContextPoset, eps: float = 1e-9):
        self.window = window
        self.poset = poset
        self.eps = eps

    def contains(self, pair: OrderPair) -> bool:
        w, eps = self.window, self.eps
        return all(w.lower - eps <= pair.mu[x] and pair.nu[x] <= w.upper + eps for x in pair.mu)


def interval_subobject(window: IntervalWindow, poset: ContextPoset, tol=None) -> IntervalTheta:
    return IntervalTheta(window, poset, resolve(tol).cluster)


def pullback_proposition(poset: ContextPoset, a, window: IntervalWindow, tol=None) -> ClopenSubobject:
    """Inverse image of the window subobject along the operator's arrow."""
    tol = resolve(tol)
    table = daseinisation_table(a, poset, tol)
    theta = interval_subobject(window, poset, tol)
    sets = {}
    for v in poset.ids:
        sets[v] = {
            i for i in range(len(poset[v]))
            if theta.contains(quantity_pair(poset, a, GelfandPoint(v, i), table))
        }
    return ClopenSubobject(poset, sets)


def spectral_window_projection(a, window: IntervalWindow, tol=None) -> np.ndarray:
    tol = resolve(tol)
    a = as_operator(a, tol)
    dec = hermitian_eig(a, tol)
    eps = tol.cluster_for(float(np.linalg.norm(a, 2)))
    out = np.zeros_like(a)
    for lam, p in zip(dec.eigenvalues, dec.projections):
        if window.contains(lam, eps):
            out = out + p
    return out


def daseinised_proposition(poset: ContextPoset, a, window: IntervalWindow, tol=None) -> ClopenSubobject:
    """Outer daseinisation of the spectral projection of ``a`` on the window."""
    e = spectral_window_projection(a, window, tol)
    return projection_subobject(poset, e, tol)


def projection_subobject(poset: ContextPoset, p, tol=None) -> ClopenSubobject:
    p = np.asarray(p, dtype=complex)
    return ClopenSubobject(poset, {v: outer_atoms(p, poset[v], tol) for v in poset.ids})


def is_optimal(s: ClopenSubobject) -> bool:
    """Whether every restriction map is onto: image of ``S(V)`` equals ``S(V')``."""
    poset = s.poset
    for sub, sup in poset.order_pairs():
        r = poset.restriction(sup, sub)
        if {r[i] for i in s.sets[sup]} != s.sets[sub]:
            return False
    return True


def compare_routes(poset: ContextPoset, a, window: IntervalWindow, tol=None) -> dict:
    """Per-context comparison of the pullback and daseinised propositions."""
    pb = pullback_proposition(poset, a, window, tol)
    ds = daseinised_proposition(poset, a, window, tol)
    rows = {
        v: {
            "pullback": sorted(pb.sets[v]),
            "daseinised": sorted(ds.sets[v]),
            "agree": pb.sets[v] == ds.sets[v],
        }
        for v in poset.ids
    }
    return {
        "contexts": rows,
        "agree_everywhere": all(r["agree"] for r in rows.values()),
        "pullback_below_daseinised": pb <= ds,
    }
