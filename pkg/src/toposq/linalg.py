"""Small dense Hermitian linear algebra.

Operators are plain ``numpy`` complex arrays of shape ``(n, n)``; state
vectors are complex arrays of shape ``(n,)``.  Everything here is a pure
function of its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import Tolerances, resolve
from .errors import DimensionMismatch, NonHermitian, NotNormalised


def as_operator(a, tol: Tolerances | None = None) -> np.ndarray:
    """Return ``a`` as a complex square array, checking it is Hermitian."""
    tol = resolve(tol)
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise DimensionMismatch(f"operator must be a non-empty square matrix, got shape {m.shape}")
    if not is_hermitian(m, tol):
        raise NonHermitian("operator is not Hermitian within tolerance")
    return m


def as_state(psi, tol: Tolerances | None = None) -> np.ndarray:
    tol = resolve(tol)
    v = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(v) - 1.0) > tol.norm:
        raise NotNormalised(f"state vector has norm {np.linalg.norm(v):.12g}")
    return v


def is_hermitian(m: np.ndarray, tol: Tolerances | None = None) -> bool:
    tol = resolve(tol)
    return bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol.herm)


def is_projection(m: np.ndarray, tol: Tolerances | None = None) -> bool:
    tol = resolve(tol)
    m = np.asarray(m, dtype=complex)
    return is_hermitian(m, tol) and bool(np.max(np.abs(m @ m - m)) <= tol.proj)


def projection_leq(p: np.ndarray, q: np.ndarray, tol: Tolerances | None = None) -> bool:
    """``p <= q`` for projections, tested as ``q p = p``."""
    tol = resolve(tol)
    return bool(np.max(np.abs(q @ p - p), initial=0.0) <= tol.proj)


def ray_projection(psi) -> np.ndarray:
    v = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(v, v.conj())


def commutator_norm(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a @ b - b @ a), initial=0.0))


@dataclass(frozen=True)
class SpectralDecomposition:
    eigenvalues: tuple[float, ...]
    projections: tuple[np.ndarray, ...]

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projections))


@dataclass(frozen=True)
class SpectralFamily:
    """Right-continuous step family ``lam -> E_lam``; ``steps[k]`` is the value on
    ``[thresholds[k], thresholds[k+1])``."""

    thresholds: tuple[float, ...]
    steps: tuple[np.ndarray, ...]

    @property
    def dim(self) -> int:
        return self.steps[0].shape[0]

    def at(self, lam: float) -> np.ndarray:
        k = int(np.searchsorted(self.thresholds, lam, side="right")) - 1
        if k < 0:
            return np.zeros((self.dim, self.dim), dtype=complex)
        return self.steps[k]


def _cluster(values: np.ndarray, tol: float) -> list[list[int]]:
    groups: list[list[int]] = []
    for i, w in enumerate(values):
        if groups and w - values[groups[-1][-1]] <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
    return groups


def hermitian_eig(op, tol: Tolerances | None = None) -> SpectralDecomposition:
    """Distinct eigenvalues (clustered) with their eigenprojections."""
    tol = resolve(tol)
    m = as_operator(op, tol)
    m = 0.5 * (m + m.conj().T)
    w, vecs = np.linalg.eigh(m)
    scale = tol.cluster_for(float(np.linalg.norm(m, 2)))
    eigenvalues = []
    projections = []
    for group in _cluster(w, scale):
        u = vecs[:, group]
        eigenvalues.append(float(np.mean(w[group])))
        projections.append(u @ u.conj().T)
    return SpectralDecomposition(tuple(eigenvalues), tuple(projections))


def spectral_family(op, tol: Tolerances | None = None) -> SpectralFamily:
    dec = hermitian_eig(op, tol)
    steps = np.cumsum(np.stack(dec.projections), axis=0)
    return SpectralFamily(dec.eigenvalues, tuple(steps))


def is_positive_semidefinite(op, tol: Tolerances | None = None) -> bool:
    tol = resolve(tol)
    m = as_operator(op, tol)
    return bool(np.linalg.eigvalsh(0.5 * (m + m.conj().T))[0] >= -tol.psd)


def spectral_leq(a, b, tol: Tolerances | None = None) -> bool:
    """Spectral order ``a <=_s b``: ``E^a_lam >= E^b_lam`` for every ``lam``."""
    tol = resolve(tol)
    a = as_operator(a, tol)
    b = as_operator(b, tol)
    if a.shape != b.shape:
        raise DimensionMismatch(f"shapes {a.shape} and {b.shape} differ")
    fa = spectral_family(a, tol)
    fb = spectral_family(b, tol)
    # thresholds closer than the clustering tolerance count as equal
    eps = tol.cluster_for(max(np.linalg.norm(a, 2), np.linalg.norm(b, 2)))
    grid = sorted(set(fa.thresholds) | set(fb.thresholds))
    diffs = np.stack([fa.at(lam + eps) - fb.at(lam + eps) for lam in grid])
    diffs = 0.5 * (diffs + np.conj(np.swapaxes(diffs, -1, -2)))
    return bool(np.linalg.eigvalsh(diffs).min() >= -tol.psd)


def expectation(psi, op, tol: Tolerances | None = None) -> float:
    tol = resolve(tol)
    v = np.asarray(psi, dtype=complex).reshape(-1)
    m = np.asarray(op, dtype=complex)
    if m.shape != (v.size, v.size):
        raise DimensionMismatch(f"state of length {v.size} vs operator of shape {m.shape}")
    value = np.vdot(v, m @ v)
    if abs(value.imag) > tol.herm * max(1.0, abs(value.real)):
        raise NonHermitian(f"expectation value has imaginary part {value.imag:.3g}")
    return float(value.real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Ginibre matrix."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(dim: int, rng: np.random.Generator, spectrum=None) -> np.ndarray:
    if spectrum is None:
        spectrum = rng.standard_normal(dim)
    u = random_unitary(dim, rng)
    m = u @ np.diag(np.asarray(spectrum, dtype=float)) @ u.conj().T
    return 0.5 * (m + m.conj().T)


def random_state(dim: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)
