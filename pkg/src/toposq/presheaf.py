"""Spectral presheaf, clopen subobjects, sieves and global elements of Omega.

In finite dimensions the Gel'fand spectrum of a context is its set of
atoms: the character at atom ``q`` sends ``A`` to the eigenvalue of ``A`` on
``q``.  Clopen subsets are sets of atom indices, and restriction along
``V' <= V`` sends an atom of ``V`` to the atom of ``V'`` above it.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import chain, combinations
from typing import Iterable, Iterator, Mapping

import numpy as np

from .context import ContextPoset
from .errors import BaseMismatch, NotASubcontext, NotInAlgebra, PosetMismatch

HEYTING_OPS = ("meet", "join", "implies", "not")


@dataclass(frozen=True)
class GelfandPoint:
    context: str
    atom: int


@dataclass(frozen=True)
class ClopenSubset:
    context: str
    atoms: frozenset[int]


def spectrum(poset: ContextPoset, vid) -> list[GelfandPoint]:
    vid = poset.id_of(vid)
    return [GelfandPoint(vid, i) for i in range(len(poset[vid]))]


def restrict_point(poset: ContextPoset, p: GelfandPoint, v_sub) -> GelfandPoint:
    v_sub = poset.id_of(v_sub)
    return GelfandPoint(v_sub, poset.restriction(p.context, v_sub)[p.atom])


def evaluate(poset: ContextPoset, p: GelfandPoint, a) -> float:
    """Gel'fand transform of ``a`` at ``p``; ``a`` must lie in the point's context."""
    return float(poset[p.context].atom_values(a)[p.atom])


def clopen_to_projection(poset: ContextPoset, s: ClopenSubset) -> np.ndarray:
    return poset[s.context].projection(sorted(s.atoms))


def projection_to_clopen(poset: ContextPoset, vid, p) -> ClopenSubset:
    vid = poset.id_of(vid)
    values = poset[vid].atom_values(p)
    if np.any(np.abs(values * (values - 1)) > poset.tol.proj):
        raise NotInAlgebra("operator is not a projection of the context")
    return ClopenSubset(vid, frozenset(int(i) for i in np.flatnonzero(values > 0.5)))


def restrict_set(poset: ContextPoset, sup: str, atoms: Iterable[int], sub: str) -> frozenset[int]:
    r = poset.restriction(sup, sub)
    return frozenset(r[i] for i in atoms)


def is_subobject(family: Mapping[str, Iterable[int]], poset: ContextPoset) -> bool:
    for sub, sup in poset.order_pairs():
        if not restrict_set(poset, sup, family[sup], sub) <= frozenset(family[sub]):
            return False
    return True


class ClopenSubobject:
    """Family of clopen subsets, one per context, closed under restriction.

    Supports ``&`` (meet), ``|`` (join), ``>>`` (implication), ``~`` (negation)
    and ``<=``.
    """

    def __init__(self, poset: ContextPoset, sets: Mapping[str, Iterable[int]], check: bool = True):
        self.poset = poset
        self.sets = {v: frozenset(sets[v]) for v in poset.ids}
        if check and not is_subobject(self.sets, poset):
            raise ValueError("family violates the subobject condition")

    @classmethod
    def top(cls, poset):
        return cls(poset, {v: range(len(poset[v])) for v in poset.ids}, check=False)

    @classmethod
    def bottom(cls, poset):
        return cls(poset, {v: () for v in poset.ids}, check=False)

    def __getitem__(self, vid) -> frozenset[int]:
        return self.sets[self.poset.id_of(vid)]

    def subset(self, vid) -> ClopenSubset:
        vid = self.poset.id_of(vid)
        return ClopenSubset(vid, self.sets[vid])

    def projection(self, vid) -> np.ndarray:
        return clopen_to_projection(self.poset, self.subset(vid))

    def _same(self, other):
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        if other.poset is not self.poset:
            raise PosetMismatch("subobjects live over different posets")
        return other

    def __eq__(self, other):
        if not isinstance(other, ClopenSubobject):
            return NotImplemented
        return self.poset is other.poset and self.sets == other.sets

    __hash__ = None

    def __le__(self, other):
        other = self._same(other)
        return all(self.sets[v] <= other.sets[v] for v in self.poset.ids)

    def __and__(self, other):
        other = self._same(other)
        return ClopenSubobject(self.poset, {v: self.sets[v] & other.sets[v] for v in self.poset.ids}, False)

    def __or__(self, other):
        other = self._same(other)
        return ClopenSubobject(self.poset, {v: self.sets[v] | other.sets[v] for v in self.poset.ids}, False)

    def __rshift__(self, other):
        other = self._same(other)
        poset = self.poset
        out = {}
        for v in poset.ids:
            keep = set()
            for i in range(len(poset[v])):
                ok = True
                for w in poset.down(v):
                    j = poset.restriction(v, w)[i]
                    if j in self.sets[w] and j not in other.sets[w]:
                        ok = False
                        break
                if ok:
                    keep.add(i)
            out[v] = keep
        return ClopenSubobject(poset, out, False)

    def __invert__(self):
        return self >> ClopenSubobject.bottom(self.poset)

    def __repr__(self):
        body = ", ".join(f"{v}: {sorted(s)}" for v, s in self.sets.items())
        return f"ClopenSubobject({{{body}}})"


def heyting_on_subobjects(op: str, a: ClopenSubobject, b: ClopenSubobject | None = None) -> ClopenSubobject:
    if op == "not":
        return ~a
    if b is None:
        raise TypeError(f"{op!r} needs two operands")
    return {"meet": a.__and__, "join": a.__or__, "implies": a.__rshift__}[op](b)


def enumerate_subobjects(poset: ContextPoset) -> Iterator[ClopenSubobject]:
    """Every clopen subobject; exponential, for small posets only."""

    def rec(i, acc):
        if i == len(poset.ids):
            yield ClopenSubobject(poset, acc, check=False)
            return
        v = poset.ids[i]
        for s in _powerset(range(len(poset[v]))):
            s = frozenset(s)
            # ids are sorted by decreasing atom count, so larger contexts come first
            if all(restrict_set(poset, w, acc[w], v) <= s for w in poset.up(v) if w in acc and w != v):
                acc[v] = s
                yield from rec(i + 1, acc)
                del acc[v]

    yield from rec(0, {})


def _powerset(items):
    items = list(items)
    return chain.from_iterable(combinations(items, r) for r in range(len(items) + 1))


# -- sieves ----------------------------------------------------------------


@dataclass(frozen=True)
class Sieve:
    """A down-closed set of subcontexts of ``base``."""

    poset: ContextPoset
    base: str
    members: frozenset[str]

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))

    @classmethod
    def maximal(cls, poset, base):
        base = poset.id_of(base)
        return cls(poset, base, poset.down(base))

    @classmethod
    def empty(cls, poset, base):
        return cls(poset, poset.id_of(base), frozenset())

    def is_valid(self) -> bool:
        down = self.poset.down(self.base)
        if not self.members <= down:
            return False
        return all(self.poset.down(m) <= self.members for m in self.members)

    def __le__(self, other: "Sieve") -> bool:
        _check_base(self, other)
        return self.members <= other.members


def _check_base(a: Sieve, b: Sieve):
    if a.poset is not b.poset:
        raise PosetMismatch("sieves live over different posets")
    if a.base != b.base:
        raise BaseMismatch(f"sieves on {a.base} and {b.base}")


def is_sieve(poset: ContextPoset, base, members: Iterable[str]) -> bool:
    return Sieve(poset, poset.id_of(base), frozenset(members)).is_valid()


def pullback_sieve(s: Sieve, v_sub) -> Sieve:
    poset = s.poset
    v_sub = poset.id_of(v_sub)
    if not poset.leq(v_sub, s.base):
        raise NotASubcontext(f"{v_sub} is not a subcontext of {s.base}")
    return Sieve(poset, v_sub, s.members & poset.down(v_sub))


def sieve_implies(a: Sieve, b: Sieve) -> Sieve:
    _check_base(a, b)
    poset = a.poset
    members = {w for w in poset.down(a.base) if (poset.down(w) & a.members) <= b.members}
    return Sieve(poset, a.base, frozenset(members))


def heyting_on_sieves(op: str, a: Sieve, b: Sieve | None = None) -> Sieve:
    if op == "not":
        return sieve_implies(a, Sieve.empty(a.poset, a.base))
    if b is None:
        raise TypeError(f"{op!r} needs two operands")
    _check_base(a, b)
    if op == "meet":
        return Sieve(a.poset, a.base, a.members & b.members)
    if op == "join":
        return Sieve(a.poset, a.base, a.members | b.members)
    if op == "implies":
        return sieve_implies(a, b)
    raise ValueError(f"unknown Heyting operation {op!r}")


def enumerate_sieves(poset: ContextPoset, base) -> list[Sieve]:
    base = poset.id_of(base)
    down = sorted(poset.down(base))
    return [
        Sieve(poset, base, frozenset(m))
        for m in _powerset(down)
        if all(poset.down(x) <= set(m) for x in m)
    ]


# -- global elements of Omega ----------------------------------------------


class OmegaElement:
    """Compatible family of sieves: ``sieve(V') == sieve(V) & down(V')``."""

    def __init__(self, poset: ContextPoset, sieves: Mapping[str, Iterable[str]], check: bool = True):
        self.poset = poset
        self.sieves = {v: frozenset(sieves[v]) for v in poset.ids}
        if check:
            problems = self.violations()
            if problems:
                raise ValueError(problems[0])

    @classmethod
    def total_true(cls, poset):
        return cls(poset, {v: poset.down(v) for v in poset.ids}, check=False)

    @classmethod
    def total_false(cls, poset):
        return cls(poset, {v: () for v in poset.ids}, check=False)

    @classmethod
    def from_top(cls, poset, members: Iterable[str]):
        """Global element determined by a down-closed set of contexts."""
        members = frozenset(members)
        return cls(poset, {v: members & poset.down(v) for v in poset.ids})

    def violations(self) -> list[str]:
        out = []
        for v in self.poset.ids:
            if not self.sieve(v).is_valid():
                out.append(f"component at {v} is not a sieve")
        for sub, sup in self.poset.order_pairs():
            if self.sieves[sub] != self.sieves[sup] & self.poset.down(sub):
                out.append(f"components at {sub} and {sup} are not compatible")
        return out

    def sieve(self, vid) -> Sieve:
        vid = self.poset.id_of(vid)
        return Sieve(self.poset, vid, self.sieves[vid])

    def __getitem__(self, vid) -> frozenset[str]:
        return self.sieves[self.poset.id_of(vid)]

    def _same(self, other):
        if not isinstance(other, OmegaElement):
            return NotImplemented
        if other.poset is not self.poset:
            raise PosetMismatch("truth values live over different posets")
        return other

    def __eq__(self, other):
        if not isinstance(other, OmegaElement):
            return NotImplemented
        return self.poset is other.poset and self.sieves == other.sieves

    __hash__ = None

    def __le__(self, other):
        other = self._same(other)
        return all(self.sieves[v] <= other.sieves[v] for v in self.poset.ids)

    def _apply(self, op, other=None):
        out = {}
        for v in self.poset.ids:
            b = None if other is None else other.sieve(v)
            out[v] = heyting_on_sieves(op, self.sieve(v), b).members
        return OmegaElement(self.poset, out, check=False)

    def __and__(self, other):
        return self._apply("meet", self._same(other))

    def __or__(self, other):
        return self._apply("join", self._same(other))

    def __rshift__(self, other):
        return self._apply("implies", self._same(other))

    def __invert__(self):
        return self._apply("not")

    def __repr__(self):
        body = ", ".join(f"{v}: {sorted(s, key=lambda x: int(x[1:]))}" for v, s in self.sieves.items())
        return f"OmegaElement({{{body}}})"


def heyting_on_omega(op: str, a: OmegaElement, b: OmegaElement | None = None) -> OmegaElement:
    if op == "not":
        return ~a
    if b is None:
        raise TypeError(f"{op!r} needs two operands")
    return {"meet": a.__and__, "join": a.__or__, "implies": a.__rshift__}[op](b)
