"""Seeded test corpus shared by the property and acceptance tests."""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from toposq.context import ContextPoset, basis_context, build_poset
from toposq.linalg import random_unitary

CABELLO_BASES = [
    [(0, 0, 0, 1), (0, 0, 1, 0), (1, 1, 0, 0), (1, -1, 0, 0)],
    [(0, 0, 0, 1), (0, 1, 0, 0), (1, 0, 1, 0), (1, 0, -1, 0)],
    [(1, -1, 1, -1), (1, -1, -1, 1), (1, 1, 0, 0), (0, 0, 1, 1)],
    [(1, -1, 1, -1), (1, 1, 1, 1), (1, 0, -1, 0), (0, 1, 0, -1)],
    [(0, 0, 1, 0), (0, 1, 0, 0), (1, 0, 0, 1), (1, 0, 0, -1)],
    [(1, -1, -1, 1), (1, 1, 1, 1), (1, 0, 0, -1), (0, 1, -1, 0)],
    [(1, 1, -1, 1), (1, 1, 1, -1), (1, -1, 0, 0), (0, 0, 1, 1)],
    [(1, 1, -1, 1), (-1, 1, 1, 1), (1, 0, 1, 0), (0, 1, 0, -1)],
    [(1, 1, 1, -1), (-1, 1, 1, 1), (1, 0, 0, 1), (0, 1, -1, 0)],
]


def cabello_rays():
    rays = []
    for basis in CABELLO_BASES:
        for r in basis:
            v = np.array(r, dtype=float)
            v /= np.linalg.norm(v)
            if not any(abs(abs(v @ w) - 1) < 1e-12 for w in rays):
                rays.append(v)
    return rays


def cabello_poset() -> ContextPoset:
    return build_poset([basis_context([np.array(v, float) for v in b]) for b in CABELLO_BASES])


@dataclass
class Case:
    a: np.ndarray
    eigvecs: np.ndarray  # columns
    spectrum: np.ndarray  # eigenvalue per column
    poset: ContextPoset
    own: str  # id of the maximal context built from the eigenvectors


@lru_cache(maxsize=None)
def corpus(n=200, seed=20240601) -> tuple[Case, ...]:
    """Random Hermitian operators of dim 3-4 with at most 4 distinct
    eigenvalues, each with a poset seeded by its own eigenbasis, the
    standard basis and one random basis."""
    rng = np.random.default_rng(seed)
    cases = []
    for i in range(n):
        dim = 3 + i % 2
        levels = rng.choice(np.arange(-3, 4), size=rng.integers(2, 5), replace=False).astype(float)
        spectrum = rng.choice(levels, size=dim)
        u = random_unitary(dim, rng)
        a = u @ np.diag(spectrum) @ u.conj().T
        a = 0.5 * (a + a.conj().T)
        own = basis_context(u)
        seeds = [own, basis_context(np.eye(dim)), basis_context(random_unitary(dim, rng))]
        poset = build_poset(seeds)
        cases.append(Case(a, u, spectrum, poset, poset.id_of(own)))
    return tuple(cases)
