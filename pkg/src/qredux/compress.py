"""Universal block-compression planning on the dominant eigenspaces of zeta_n(u).

A plan keeps whole eigenspaces, largest eigenvalue first, until the kept
prior mass reaches 1 - epsilon.  Its rate is log2 of the kept dimension per
signal.  :func:`retained_weight` reports how much of a particular source's
n-fold state falls inside the kept subspace.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .entropy import level_weights
from .spectrum import spectrum

__all__ = ["CompressionPlan", "plan", "retained_weight", "rate_curve"]


@dataclass(frozen=True)
class CompressionPlan:
    n: int
    u: float
    epsilon: float
    included_levels: tuple[int, ...]
    subspace_dim: int
    rate_qubits_per_signal: float
    prior_mass: float

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "epsilon": self.epsilon,
            "included_levels": list(self.included_levels),
            "subspace_dim": self.subspace_dim,
            "rate_qubits_per_signal": self.rate_qubits_per_signal,
            "prior_mass": self.prior_mass,
        }


def _cumulative_masses(n: int, u: float) -> tuple[list[float], list[int]]:
    spec = spectrum(n, u)
    masses, dims = [], []
    parts: list[float] = []
    dim = 0
    for lv in spec.levels:
        parts.append(lv.mass)
        dim += lv.multiplicity
        masses.append(math.fsum(parts))
        dims.append(dim)
    return masses, dims


def plan(n: int, u: float, epsilon: float) -> CompressionPlan:
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    masses, dims = _cumulative_masses(n, u)
    target = 1.0 - epsilon
    # the last level is always admissible, which absorbs rounding in the full sum
    k = next((i for i, m in enumerate(masses) if m >= target), len(masses) - 1)
    return CompressionPlan(
        n=n,
        u=u,
        epsilon=epsilon,
        included_levels=tuple(range(k + 1)),
        subspace_dim=dims[k],
        rate_qubits_per_signal=math.log2(dims[k]) / n,
        prior_mass=masses[k],
    )


def retained_weight(p: CompressionPlan, r: float) -> float:
    """Probability that the n-fold source at radius r lies in the kept subspace."""
    w = level_weights(p.n, r)
    return math.fsum(float(w[h]) for h in p.included_levels)


def rate_curve(n: int, u: float, epsilons: Iterable[float]) -> list[tuple[float, float, float]]:
    out = []
    for eps in epsilons:
        pl = plan(n, u, eps)
        out.append((eps, pl.rate_qubits_per_signal, pl.prior_mass))
    return out
