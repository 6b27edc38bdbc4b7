"""Numerical tolerances shared by every module."""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields, replace


@dataclass(frozen=True)
class Tolerances:
    """Absolute tolerances; ``cluster`` is scaled by ``1 + ||op||`` at use."""

    herm: float = 1e-9
    proj: float = 1e-9
    psd: float = 1e-9
    cluster: float = 1e-9
    recon: float = 1e-9
    norm: float = 1e-9

    def cluster_for(self, norm: float) -> float:
        return self.cluster * (1.0 + norm)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Tolerances":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise KeyError(f"unknown tolerance keys: {sorted(unknown)}")
        return replace(cls(), **{k: float(v) for k, v in data.items()})


DEFAULT_TOLERANCES = Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return DEFAULT_TOLERANCES if tol is None else tol
