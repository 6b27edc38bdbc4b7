"""Inner and outer daseinisation into a context.

For a projection ``P`` and context ``V``:

* outer: the smallest projection of ``V`` above ``P`` -- the sum of atoms
  ``q`` with ``qP != 0``;
* inner: the largest projection of ``V`` below ``P`` -- the sum of atoms
  ``q <= P``.

Self-adjoint operators are handled through their spectral families on the
grid of eigenvalues ``l_1 < ... < l_m`` with steps ``E_k``.  The outer
daseinisation has spectral family ``inner(E_k)``; the inner one has
``outer(E_k)`` (the meet over ``mu > l_k`` collapses onto ``E_k`` by right
continuity).  Read off per atom this gives

    outer value of q = min { l_k : q <= E_k }
    inner value of q = min { l_k : q E_k != 0 }.
"""

from __future__ import annotations

import numpy as np

from .config import Tolerances, resolve
from .context import Context
from .errors import DimensionMismatch
from .linalg import as_operator, spectral_family


def _check_dim(m: np.ndarray, v: Context):
    if m.shape != (v.dim, v.dim):
        raise DimensionMismatch(f"operator shape {m.shape} vs context dim {v.dim}")


def outer_atoms(p: np.ndarray, v: Context, tol: Tolerances | None = None) -> list[int]:
    tol = resolve(tol)
    return [i for i, q in enumerate(v.atoms) if np.max(np.abs(q @ p)) > tol.proj]


def inner_atoms(p: np.ndarray, v: Context, tol: Tolerances | None = None) -> list[int]:
    tol = resolve(tol)
    return [i for i, q in enumerate(v.atoms) if np.max(np.abs(p @ q - q)) <= tol.proj]


def outer_projection(p, v: Context, tol: Tolerances | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    _check_dim(p, v)
    return v.projection(outer_atoms(p, v, tol))


def inner_projection(p, v: Context, tol: Tolerances | None = None) -> np.ndarray:
    p = np.asarray(p, dtype=complex)
    _check_dim(p, v)
    return v.projection(inner_atoms(p, v, tol))


def atom_values(a, v: Context, tol: Tolerances | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Per-atom eigenvalues ``(inner, outer)`` of the two daseinisations of ``a``."""
    tol = resolve(tol)
    a = as_operator(a, tol)
    _check_dim(a, v)
    fam = spectral_family(a, tol)
    k = len(v)
    inner = np.full(k, np.nan)
    outer = np.full(k, np.nan)
    for lam, e in zip(fam.thresholds, fam.steps):
        for i in outer_atoms(e, v, tol):
            if np.isnan(inner[i]):
                inner[i] = lam
        for i in inner_atoms(e, v, tol):
            if np.isnan(outer[i]):
                outer[i] = lam
    return inner, outer


def outer_sa(a, v: Context, tol: Tolerances | None = None) -> np.ndarray:
    """Smallest element of ``V`` spectrally above ``a``."""
    return v.operator(atom_values(a, v, tol)[1])


def inner_sa(a, v: Context, tol: Tolerances | None = None) -> np.ndarray:
    """Largest element of ``V`` spectrally below ``a``."""
    return v.operator(atom_values(a, v, tol)[0])
