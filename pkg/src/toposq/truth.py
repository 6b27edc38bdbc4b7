"""Truth objects from state vectors and sieve-valued truth values."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .config import Tolerances, resolve
from .context import ContextPoset
from .daseinisation import outer_atoms
from .errors import DimensionMismatch, EmptyPoset, NotASieve, PosetMismatch
from .linalg import as_state, commutator_norm, expectation, projection_leq, ray_projection
from .presheaf import ClopenSubobject, ClopenSubset, OmegaElement, Sieve, clopen_to_projection

TruthValue = OmegaElement


@dataclass(frozen=True, eq=False)
class TruthObject:
    """Per context, the clopen set of the outer daseinisation of the ray
    projection; a clopen set is a member iff it contains this one."""

    poset: ContextPoset
    psi: np.ndarray
    thresholds: dict = field(repr=False)
    tol: Tolerances = field(default=None, repr=False)

    def threshold_projection(self, vid) -> np.ndarray:
        vid = self.poset.id_of(vid)
        return self.poset[vid].projection(sorted(self.thresholds[vid]))


def truth_object(psi, poset: ContextPoset, tol: Tolerances | None = None) -> TruthObject:
    tol = resolve(tol)
    psi = as_state(psi, tol)
    if poset.dim is not None and psi.size != poset.dim:
        raise DimensionMismatch(f"state of length {psi.size} vs poset dim {poset.dim}")
    p = ray_projection(psi)
    thresholds = {v: frozenset(outer_atoms(p, poset[v], tol)) for v in poset.ids}
    return TruthObject(poset, psi, thresholds, tol)


def member(t: TruthObject, s: ClopenSubset) -> bool:
    vid = t.poset.id_of(s.context)
    return t.thresholds[vid] <= s.atoms


def membership_characterisations(t: TruthObject, s: ClopenSubset) -> dict[str, bool]:
    """The four equivalent membership tests for ``s`` in the truth object."""
    tol = resolve(t.tol)
    p_s = clopen_to_projection(t.poset, s)
    return {
        "expectation_one": expectation(t.psi, p_s, tol) >= 1 - tol.norm,
        "above_ray": projection_leq(ray_projection(t.psi), p_s, tol),
        "above_threshold": projection_leq(t.threshold_projection(s.context), p_s, tol),
        "contains_threshold_set": member(t, s),
    }


@dataclass
class FilterReport:
    members: list[int]
    non_members: list[int]
    upward_closed: bool
    meet_closed: bool
    context_agreement: dict[str, bool]

    @property
    def ok(self) -> bool:
        return self.upward_closed and self.meet_closed and all(self.context_agreement.values())


def bvn_filter_check(psi, projections, poset: ContextPoset | None = None, tol=None) -> FilterReport:
    """Split ``projections`` by membership in the filter of projections above
    the ray of ``psi`` and check the filter laws on that finite family.  With
    a poset, also check that the per-context truth object is the filter
    restricted to each context."""
    tol = resolve(tol)
    psi = as_state(psi, tol)
    ray = ray_projection(psi)
    mats = [np.asarray(p, dtype=complex) for p in projections]
    inside = [projection_leq(ray, p, tol) for p in mats]
    upward = True
    meet = True
    for i, j in combinations(range(len(mats)), 2):
        for x, y in ((i, j), (j, i)):
            if inside[x] and projection_leq(mats[x], mats[y], tol) and not inside[y]:
                upward = False
        if inside[i] and inside[j] and commutator_norm(mats[i], mats[j]) <= tol.proj:
            if not projection_leq(ray, mats[i] @ mats[j], tol):
                meet = False
    agreement = {}
    if poset is not None:
        t = truth_object(psi, poset, tol)
        for v, ctx in poset.contexts():
            ok = True
            for r in range(len(ctx) + 1):
                for atoms in combinations(range(len(ctx)), r):
                    s = ClopenSubset(v, frozenset(atoms))
                    if member(t, s) != projection_leq(ray, ctx.projection(atoms), tol):
                        ok = False
            agreement[v] = ok
    return FilterReport(
        [i for i, x in enumerate(inside) if x],
        [i for i, x in enumerate(inside) if not x],
        upward,
        meet,
        agreement,
    )


def valuate(s: ClopenSubobject, t: TruthObject) -> TruthValue:
    """Truth value of ``s`` in the state: at each ``V`` the subcontexts ``V'``
    whose component ``s(V')`` belongs to the truth object.

    Raises ``NotASieve`` when ``s`` lacks the surjectivity that makes these
    sets sieves (daseinised propositions always have it).
    """
    if s.poset is not t.poset:
        raise PosetMismatch("subobject and truth object live over different posets")
    poset = s.poset
    good = frozenset(v for v in poset.ids if t.thresholds[v] <= s.sets[v])
    sieves = {v: good & poset.down(v) for v in poset.ids}
    for v in poset.ids:
        if not Sieve(poset, v, sieves[v]).is_valid():
            raise NotASieve(f"valuation at {v} is not downward closed")
    return OmegaElement(poset, sieves, check=False)


def truth_constants(poset: ContextPoset) -> tuple[TruthValue, TruthValue]:
    if len(poset) == 0:
        raise EmptyPoset("no contexts")
    return OmegaElement.total_true(poset), OmegaElement.total_false(poset)


def compare_truth_values(v1: TruthValue, v2: TruthValue) -> str:
    if v1.poset is not v2.poset:
        raise PosetMismatch("truth values live over different posets")
    le, ge = v1 <= v2, v2 <= v1
    if le and ge:
        return "equal"
    if le:
        return "less"
    if ge:
        return "greater"
    return "incomparable"
