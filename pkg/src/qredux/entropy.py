"""Exact entropies and redundancies built on the spectral summary.

Everything here costs O(n) through the level structure of zeta_n(u): the
n-fold source state puts weight ``w_h(r)`` on the lambda_h eigenspace, so
Tr(rho^{(n)} log zeta_n) = sum_h w_h(r) log lambda_h.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.stats import binom

from .oracle import _check_hermitian, relative_entropy_dense
from .qstate import binary_entropy_nats
from .specfun import binomial, digamma
from .spectrum import SpectrumSummary, multiplicity, spectrum

__all__ = [
    "RedundancyReport",
    "level_weights",
    "level_weight",
    "level_weights_exact",
    "relative_entropy_exact",
    "von_neumann_entropy_zeta",
    "expected_source_entropy",
    "bayes_redundancy_exact",
    "OptimalityGap",
    "bayes_optimality_gap",
]


def _check_r(r: float) -> None:
    if not 0.0 <= r <= 1.0:
        raise ValueError(f"Bloch radius must lie in [0, 1], got {r}")


def level_weights(n: int, r: float) -> np.ndarray:
    """Weights w_h(r), h = 0..floor(n/2), of the n-fold state on each eigenspace."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_r(r)
    h = np.arange(n // 2 + 1, dtype=float)
    if r == 0.0:
        # mult_h / 2^n, rounded once from exact integers
        return np.array([multiplicity(n, k) / 2**n for k in range(n // 2 + 1)])
    if r == 1.0:
        out = np.zeros_like(h)
        out[0] = 1.0
        return out
    # (1+r)^{n+1-h} (1-r)^h / 2^{n+1} is the Binomial(n+1, (1-r)/2) mass at h;
    # the second product in the bracket is that mass times ((1-r)/(1+r))^(n+1-2h)
    pmf = binom.pmf(h, n + 1, 0.5 * (1.0 - r))
    k = n + 1 - 2 * h
    a = math.atanh(r)
    # bracket / r = 2k * phi(2k a) * (a / r) with phi(x) = (1 - e^{-x}) / x; both
    # factors switch to series near zero so that tiny (even subnormal) r is exact
    x = 2.0 * k * a
    phi = np.where(x < 1e-3, 1.0 - x / 2 + x * x / 6 - x**3 / 24 + x**4 / 120, -np.expm1(-x) / np.maximum(x, 1e-300))
    a_over_r = 1.0 + r * r / 3 + r**4 / 5 if r < 1e-4 else a / r
    return (n - 2 * h + 1) / (n + 1) * pmf * 2.0 * k * phi * a_over_r


def level_weight(n: int, h: int, r: float) -> float:
    if not 0 <= h <= n // 2:
        raise ValueError(f"level h={h} outside 0..{n // 2}")
    return float(level_weights(n, r)[h])


def level_weights_exact(n: int, r: Fraction | int) -> list[Fraction]:
    """Rational-arithmetic weights; r = 0 uses the limit form."""
    r = Fraction(r)
    if not 0 <= r <= 1:
        raise ValueError("Bloch radius must lie in [0, 1]")
    out = []
    for h in range(n // 2 + 1):
        coef = Fraction((n - 2 * h + 1) * binomial(n + 1, h), n + 1)
        if r == 0:
            out.append(coef * 2 * (n + 1 - 2 * h) / 2 ** (n + 1))
        else:
            bracket = (1 + r) ** (n + 1 - h) * (1 - r) ** h - (1 + r) ** h * (1 - r) ** (n + 1 - h)
            out.append(coef * bracket / (2 ** (n + 1) * r))
    return out


def _ordered_fsum(terms) -> float:
    terms = sorted((float(t) for t in terms), key=abs, reverse=True)
    return math.fsum(terms)


@dataclass(frozen=True)
class RedundancyReport:
    n: int
    u: float | None
    r: float
    relative_entropy: float
    per_level_weights: list[float] = field(repr=False)
    asymptotic_value: float | None = None
    residual: float | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "u": self.u,
            "r": self.r,
            "relative_entropy": self.relative_entropy,
            "asymptotic": self.asymptotic_value,
            "residual": self.residual,
            "per_level_weights": list(self.per_level_weights),
        }


def relative_entropy_exact(
    n: int,
    u: float,
    r: float,
    spec: SpectrumSummary | None = None,
    with_asymptotic: bool = True,
) -> RedundancyReport:
    """Relative entropy of the n-fold source state with respect to zeta_n(u).

    Passing ``spec`` (e.g. from :func:`spectrum_from_radial_prior`) evaluates
    the same formula against the average over another spherically symmetric
    prior; the asymptotic columns are then left empty.
    """
    _check_r(r)
    custom = spec is not None
    if spec is None:
        spec = spectrum(n, u)
    elif spec.n != n:
        raise ValueError(f"spectrum is for n={spec.n}, not n={n}")
    w = level_weights(n, r)
    logs = spec.log_lambdas
    source = -n * binary_entropy_nats(r)
    terms = [source] + [-(wi * li) for wi, li in zip(w, logs) if wi != 0.0]
    value = _ordered_fsum(terms)
    asym = resid = None
    if with_asymptotic and not custom:
        from .asymptotics import redundancy_asymptotic

        asym = redundancy_asymptotic(u, r).value_at(n)
        resid = value - asym
    return RedundancyReport(n, u, r, value, [float(x) for x in w], asym, resid)


def von_neumann_entropy_zeta(n: int, u: float, spec: SpectrumSummary | None = None) -> float:
    """-sum_h mult_h lambda_h log lambda_h."""
    spec = spec or spectrum(n, u)
    terms = [-lv.mass * lv.log_lam for lv in spec.levels]
    return _ordered_fsum(terms)


def expected_source_entropy(u: float) -> float:
    """Average of the single-qubit entropy S(rho) under q_u."""
    if not u < 1:
        raise ValueError(f"prior parameter u must be < 1, got {u}")
    return (-7.0 + 5.0 * u) / (2.0 * (2.0 - u) * (1.0 - u)) + digamma(5.0 - 2.0 * u) - digamma(1.0 - u)


def bayes_redundancy_exact(n: int, u: float) -> float:
    """Prior-averaged redundancy int S(rho^{(n)} || zeta_n(u)) q_u dV, exactly."""
    return -n * expected_source_entropy(u) + von_neumann_entropy_zeta(n, u)


@dataclass(frozen=True)
class OptimalityGap:
    gap: float
    divergence_from_mixture: float
    mixture: np.ndarray = field(repr=False)

    @property
    def discrepancy(self) -> float:
        return abs(self.gap - self.divergence_from_mixture)


def _check_density(m: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    m = _check_hermitian(np.asarray(m, dtype=complex))
    if abs(np.trace(m).real - 1.0) > tol:
        raise ValueError("density matrix must have unit trace")
    if np.linalg.eigvalsh(m).min() < -tol:
        raise ValueError("density matrix must be positive semidefinite")
    return m


def bayes_optimality_gap(family: Sequence[tuple[float, np.ndarray]], Q: np.ndarray) -> OptimalityGap:
    """Excess average risk of coding with Q instead of the mixture M.

    ``gap`` = sum_i w_i S(P_i || Q) - sum_i w_i S(P_i || M), and
    ``divergence_from_mixture`` = S(M || Q) computed independently; the two
    coincide, which makes M the minimizer of the average risk.
    """
    weights = np.array([w for w, _ in family], dtype=float)
    if np.any(weights < 0) or abs(weights.sum() - 1.0) > 1e-12:
        raise ValueError("weights must be nonnegative and sum to 1")
    mats = [_check_density(m) for _, m in family]
    Q = _check_density(Q)
    dims = {m.shape for m in mats} | {Q.shape}
    if len(dims) != 1:
        raise ValueError(f"dimension mismatch among {sorted(dims)}")
    M = sum(w * m for w, m in zip(weights, mats))
    risk_q = sum(w * relative_entropy_dense(m, Q) for w, m in zip(weights, mats) if w > 0)
    risk_m = sum(w * relative_entropy_dense(m, M) for w, m in zip(weights, mats) if w > 0)
    return OptimalityGap(float(risk_q - risk_m), relative_entropy_dense(M, Q), M)
