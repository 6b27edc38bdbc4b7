"""Abelian subalgebras of M_n(C) and finite posets of them.

A context is stored through its atoms: the minimal projections of the
algebra, which are mutually orthogonal and sum to the identity.  Coarser
subalgebras correspond to partitions of the atom set.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np

from .config import Tolerances, resolve
from .errors import (
    DimensionMismatch,
    NonCommuting,
    NotASubcontext,
    NotInAlgebra,
    TrivialAlgebra,
    UnknownContext,
)
from .linalg import as_operator, commutator_norm, hermitian_eig, projection_leq

KEY_GRID = 1e-6


def projection_key(p: np.ndarray) -> tuple:
    rank = int(round(float(np.trace(p).real)))
    flat = np.concatenate([p.real.ravel(), p.imag.ravel()])
    return (rank, tuple(int(x) for x in np.rint(flat / KEY_GRID)))


@dataclass(frozen=True, eq=False)
class Context:
    atoms: tuple[np.ndarray, ...]
    tol: Tolerances = field(default=None, repr=False)

    def __post_init__(self):
        tol = resolve(self.tol)
        object.__setattr__(self, "tol", tol)
        atoms = tuple(np.asarray(a, dtype=complex) for a in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if len(atoms) < 2:
            raise TrivialAlgebra("a context needs at least two atoms")
        n = atoms[0].shape[0]
        if any(a.shape != (n, n) for a in atoms):
            raise DimensionMismatch("atoms have different shapes")
        for i, j in combinations(range(len(atoms)), 2):
            if np.max(np.abs(atoms[i] @ atoms[j])) > tol.proj:
                raise ValueError(f"atoms {i} and {j} are not orthogonal")
        if np.max(np.abs(sum(atoms) - np.eye(n))) > tol.proj:
            raise ValueError("atoms do not sum to the identity")

    @property
    def dim(self) -> int:
        return self.atoms[0].shape[0]

    def __len__(self) -> int:
        return len(self.atoms)

    @cached_property
    def key(self) -> tuple:
        return tuple(sorted(projection_key(a) for a in self.atoms))

    def __eq__(self, other):
        if not isinstance(other, Context):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        ranks = [int(round(float(np.trace(a).real))) for a in self.atoms]
        return f"Context(dim={self.dim}, atom_ranks={ranks})"

    def projection(self, indices: Iterable[int]) -> np.ndarray:
        out = np.zeros((self.dim, self.dim), dtype=complex)
        for i in indices:
            out = out + self.atoms[i]
        return out

    def operator(self, values: Sequence[float]) -> np.ndarray:
        """The element of the algebra taking ``values[i]`` on atom ``i``."""
        return sum(float(v) * a for v, a in zip(values, self.atoms))

    def atom_values(self, op) -> np.ndarray:
        """Eigenvalue of ``op`` on each atom; raises if ``op`` is not in the algebra."""
        m = np.asarray(op, dtype=complex)
        if m.shape != (self.dim, self.dim):
            raise DimensionMismatch(f"operator shape {m.shape} vs context dim {self.dim}")
        values = []
        for q in self.atoms:
            c = np.trace(q @ m) / np.trace(q)
            if np.max(np.abs(m @ q - c * q)) > self.tol.herm * (1 + np.abs(m).max()):
                raise NotInAlgebra("operator is not constant on an atom of the context")
            values.append(c.real)
        return np.array(values)

    def contains(self, op) -> bool:
        try:
            self.atom_values(op)
        except NotInAlgebra:
            return False
        return True

    def coarsen(self, blocks: Sequence[Sequence[int]]) -> "Context":
        return Context(tuple(self.projection(b) for b in blocks), self.tol)


def basis_context(vectors, tol: Tolerances | None = None) -> Context:
    """Maximal context of an orthonormal basis; ``vectors`` is a sequence of
    (not necessarily normalised) vectors or a unitary whose columns are used."""
    if isinstance(vectors, np.ndarray) and vectors.ndim == 2:
        vectors = list(vectors.T)
    atoms = []
    for v in vectors:
        v = np.asarray(v, dtype=complex)
        v = v / np.linalg.norm(v)
        atoms.append(np.outer(v, v.conj()))
    return Context(tuple(atoms), tol)


def generate_context(ops: Sequence, tol: Tolerances | None = None) -> Context:
    """Context generated by pairwise commuting Hermitian operators.

    The atoms are the joint eigenspaces, found by splitting each current
    atom according to the spectral decomposition of the next operator
    compressed to that atom's range.
    """
    tol = resolve(tol)
    mats = [as_operator(a, tol) for a in ops]
    if not mats:
        raise TrivialAlgebra("no operators given")
    n = mats[0].shape[0]
    if any(m.shape != (n, n) for m in mats):
        raise DimensionMismatch("operators have different shapes")
    for i, j in combinations(range(len(mats)), 2):
        if commutator_norm(mats[i], mats[j]) > tol.herm * (1 + np.abs(mats[i]).max() * np.abs(mats[j]).max()):
            raise NonCommuting(f"operators {i} and {j} do not commute", pair=(i, j))
    bases = [np.eye(n, dtype=complex)]
    for m in mats:
        refined = []
        for u in bases:
            dec = hermitian_eig(u.conj().T @ m @ u, tol)
            for p in dec.projections:
                w, vecs = np.linalg.eigh(p)
                refined.append(u @ vecs[:, w > 0.5])
        bases = refined
    if len(bases) < 2:
        raise TrivialAlgebra("operators generate only the scalars")
    return Context(tuple(u @ u.conj().T for u in bases), tol)


def set_partitions(items: Sequence) -> Iterator[list[list]]:
    """All set partitions of ``items`` (Bell(k) of them), blocks in first-seen order."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def subcontexts(v: Context) -> list[Context]:
    """Every non-trivial coarsening of ``v``, including ``v`` itself."""
    out = []
    for part in set_partitions(range(len(v))):
        if len(part) >= 2:
            out.append(v.coarsen([sorted(b) for b in part]))
    return out


def is_subcontext(v_sub: Context, v: Context) -> bool:
    """Whether ``v_sub`` is a subalgebra of ``v``: every atom of ``v`` lies under
    exactly one atom of ``v_sub``."""
    if v_sub.dim != v.dim:
        raise DimensionMismatch(f"dims {v_sub.dim} and {v.dim} differ")
    tol = v.tol
    for p in v.atoms:
        if sum(projection_leq(p, q, tol) for q in v_sub.atoms) != 1:
            return False
    return True


class ContextPoset:
    """Finite down-closed family of contexts ordered by inclusion.

    Contexts get ids ``V0, V1, ...`` ordered by decreasing atom count and
    then canonical key, so ids do not depend on seed order.
    """

    def __init__(self, contexts: Sequence[Context], tol: Tolerances | None = None):
        self.tol = resolve(tol)
        ordered = sorted(set(contexts), key=lambda c: (-len(c), c.key))
        self.ids: list[str] = [f"V{i}" for i in range(len(ordered))]
        self._contexts = dict(zip(self.ids, ordered))
        self._by_key = {c.key: vid for vid, c in self._contexts.items()}
        self._restriction: dict[tuple[str, str], tuple[int, ...]] = {}
        self._compute_order()
        self._down = {
            v: frozenset(s for s in self.ids if (s, v) in self._restriction) for v in self.ids
        }
        self._up = {
            v: frozenset(s for s in self.ids if (v, s) in self._restriction) for v in self.ids
        }

    def _compute_order(self):
        registry: dict[tuple, int] = {}
        stack = []
        atom_index = {}
        for vid, c in self._contexts.items():
            idx = []
            for a in c.atoms:
                k = projection_key(a)
                if k not in registry:
                    registry[k] = len(stack)
                    stack.append(a)
                idx.append(registry[k])
            atom_index[vid] = idx
        if not stack:
            return
        atoms = np.stack(stack)
        # below[a, b]: atom a <= atom b, tested as b a = a
        prods = np.einsum("bij,ajk->abik", atoms, atoms)
        below = np.max(np.abs(prods - atoms[:, None]), axis=(2, 3)) <= self.tol.proj
        for sup in self.ids:
            for sub in self.ids:
                if len(self._contexts[sub]) > len(self._contexts[sup]):
                    continue
                sub_atoms = atom_index[sub]
                mapping = []
                for a in atom_index[sup]:
                    hits = [j for j, b in enumerate(sub_atoms) if below[a, b]]
                    if len(hits) != 1:
                        break
                    mapping.append(hits[0])
                else:
                    self._restriction[(sub, sup)] = tuple(mapping)

    def __len__(self) -> int:
        return len(self.ids)

    def __iter__(self):
        return iter(self.ids)

    def __getitem__(self, vid: str) -> Context:
        try:
            return self._contexts[vid]
        except KeyError:
            raise UnknownContext(f"no context with id {vid!r}") from None

    def __contains__(self, item) -> bool:
        if isinstance(item, Context):
            return item.key in self._by_key
        return item in self._contexts

    @property
    def dim(self) -> int | None:
        return self[self.ids[0]].dim if self.ids else None

    def id_of(self, item: Context | str) -> str:
        if isinstance(item, str):
            self[item]
            return item
        try:
            return self._by_key[item.key]
        except KeyError:
            raise UnknownContext("context is not a member of the poset") from None

    def contexts(self) -> list[tuple[str, Context]]:
        return list(self._contexts.items())

    def leq(self, sub, sup) -> bool:
        return (self.id_of(sub), self.id_of(sup)) in self._restriction

    def down(self, vid) -> frozenset[str]:
        """The down-set of ``vid`` (all its subcontexts in the poset, itself included)."""
        return self._down[self.id_of(vid)]

    def up(self, vid) -> frozenset[str]:
        return self._up[self.id_of(vid)]

    def restriction(self, sup, sub) -> tuple[int, ...]:
        """Atom map ``sup -> sub``: entry ``i`` is the atom of ``sub`` above atom ``i`` of ``sup``."""
        sup, sub = self.id_of(sup), self.id_of(sub)
        try:
            return self._restriction[(sub, sup)]
        except KeyError:
            raise NotASubcontext(f"{sub} is not a subcontext of {sup}") from None

    def order_pairs(self, strict: bool = True) -> list[tuple[str, str]]:
        """Pairs ``(sub, sup)`` with ``sub <= sup``, sorted by id."""
        pairs = [p for p in self._restriction if not (strict and p[0] == p[1])]
        return sorted(pairs, key=lambda p: (int(p[1][1:]), int(p[0][1:])))

    def maximal(self) -> list[str]:
        return [v for v in self.ids if self._up[v] == {v}]

    def minimal(self) -> list[str]:
        return [v for v in self.ids if self._down[v] == {v}]


def build_poset(seeds: Sequence[Context], tol: Tolerances | None = None) -> ContextPoset:
    """Close ``seeds`` under coarsening and order the result by inclusion."""
    seeds = list(seeds)
    if seeds:
        n = seeds[0].dim
        if any(s.dim != n for s in seeds):
            raise DimensionMismatch("seed contexts have different dimensions")
    closure: dict[tuple, Context] = {}
    for seed in seeds:
        for c in subcontexts(seed):
            closure.setdefault(c.key, c)
    return ContextPoset(list(closure.values()), tol)
