"""Spherically symmetric prior densities on the Bloch ball.

Three families are supported:

* ``QU``: the power family proportional to (1 - r^2)^(-u); u = 1/2 is the
  normalized SLD (Jeffreys-type) volume element and u = 0 is uniform.
* ``KUBO_MORI``: the family built on the Kubo-Mori/Bogoliubov volume element,
  which carries an extra log((1+r)/(1-r)) / r radial factor.
* ``MONOTONE``: the normalized volume element of a monotone metric, selected
  by an operator monotone function f with f(1) = 1 and f(t) = t f(1/t).

Densities returned by :func:`radial_density` are Cartesian (with respect to
dx dy dz).  Near r = 1 everything is evaluated from ``1 - r`` directly so
the integrable endpoint singularities can be resolved by the quadrature in
:mod:`qredux.oracle`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

from .qstate import BlochState
from .specfun import log_gamma

__all__ = [
    "PriorKind",
    "MonotoneFunction",
    "PriorSpec",
    "SLD",
    "KUBO_MORI_MEAN",
    "EXPONENTIAL_MEAN",
    "MONOTONE_FUNCTIONS",
    "qu_normalizer",
    "qu_density",
    "sld_jeffreys_volume",
    "sld_fisher_determinant",
    "kubo_mori_density",
    "monotone_volume_element",
    "radial_density",
]


class PriorKind(enum.Enum):
    QU = "qu"
    KUBO_MORI = "kubo"
    MONOTONE = "monotone"


def _check_u(u: float) -> None:
    if not u < 1:
        raise ValueError(f"prior parameter u must be < 1, got {u}")


def _log_ratio(r, one_minus_r):
    """log((1+r)/(1-r)), accurate for small r and for r close to 1."""
    r = np.asarray(r, dtype=float)
    one_minus_r = np.asarray(one_minus_r, dtype=float)
    small = r < 0.5
    safe_r = np.where(small, r, 0.0)
    return np.where(small, 2.0 * np.arctanh(safe_r), np.log1p(r) - np.log(one_minus_r))


# --- monotone functions -----------------------------------------------------

def _f_arithmetic(t):
    return 0.5 * (1.0 + np.asarray(t, dtype=float))


def _f_log_mean(t):
    t = np.asarray(t, dtype=float)
    d = t - 1.0
    near = np.abs(d) < 1e-5
    safe = np.where(near, 2.0, t)
    series = 1.0 + d / 2 - d * d / 12 + d**3 / 24
    return np.where(near, series, (safe - 1.0) / np.log(safe))


def _f_exponential_mean(t):
    t = np.asarray(t, dtype=float)
    d = t - 1.0
    near = np.abs(d) < 1e-5
    safe = np.where(near, 2.0, t)
    # t^{t/(t-1)}/e = exp(t log t/(t-1) - 1); series of t log t/(t-1) - 1 about t=1
    series = np.exp(d / 2 - d * d / 6 + d**3 / 12)
    exact = np.exp(safe * np.log(safe) / (safe - 1.0) - 1.0)
    return np.where(near, series, exact)


@dataclass(frozen=True)
class MonotoneFunction:
    """An operator monotone function tagged with how it behaves near t = 0.

    ``log_singular`` records whether 1/f(t) grows like log(1/t), which the
    radial quadrature needs to know to pick its substitution.
    """

    name: str
    func: Callable = field(compare=False)
    log_singular: bool = False

    def __call__(self, t):
        out = self.func(t)
        return float(out) if np.ndim(out) == 0 else out

    def check(self, samples=(2.0, 3.0, 10.0), tol: float = 1e-10) -> None:
        if abs(self(1.0) - 1.0) > tol:
            raise ValueError(f"monotone function {self.name!r}: f(1) != 1")
        for t in samples:
            lhs = self(t)
            rhs = t * self(1.0 / t)
            if abs(lhs - rhs) > tol * max(1.0, abs(lhs)):
                raise ValueError(f"monotone function {self.name!r} violates f(t) = t f(1/t) at t={t}")


SLD = MonotoneFunction("sld", _f_arithmetic)
KUBO_MORI_MEAN = MonotoneFunction("kmb", _f_log_mean, log_singular=True)
EXPONENTIAL_MEAN = MonotoneFunction("exp", _f_exponential_mean)
MONOTONE_FUNCTIONS = {f.name: f for f in (SLD, KUBO_MORI_MEAN, EXPONENTIAL_MEAN)}


def _monotone_radial_shape(f: MonotoneFunction, r, one_minus_r):
    """r^2 / (f((1-r)/(1+r)) sqrt(1-r^2) (1+r)), without the sin(theta) factor."""
    r = np.asarray(r, dtype=float)
    one_minus_r = np.asarray(one_minus_r, dtype=float)
    one_plus_r = 1.0 + r
    t = one_minus_r / one_plus_r
    return r * r / (f(t) * np.sqrt(one_minus_r * one_plus_r) * one_plus_r)


# --- closed-form densities ----------------------------------------------------

def qu_normalizer(u: float) -> float:
    """Gamma(5/2-u) / (pi^{3/2} Gamma(1-u))."""
    _check_u(u)
    return math.exp(log_gamma(2.5 - u) - log_gamma(1.0 - u)) / math.pi**1.5


def _qu_cartesian(u, r, one_minus_r):
    one_minus_r2 = np.asarray(one_minus_r) * (1.0 + np.asarray(r))
    return qu_normalizer(u) * one_minus_r2 ** (-u)


def qu_density(u: float, s: BlochState) -> float:
    """The power-family density at a point of the ball."""
    _check_u(u)
    r = s.r
    if r >= 1.0 and u > 0:
        raise ValueError("q_u diverges on the unit sphere for u > 0")
    one_minus_r2 = 1.0 - (s.x * s.x + s.y * s.y + s.z * s.z)
    if one_minus_r2 <= 0.0:
        return 0.0 if u < 0 else qu_normalizer(u)
    return qu_normalizer(u) * one_minus_r2 ** (-u)


def sld_fisher_determinant(s: BlochState) -> float:
    """Determinant of the SLD Fisher information matrix, 1 / (1 - r^2)."""
    d = 1.0 - (s.x * s.x + s.y * s.y + s.z * s.z)
    if d <= 0.0:
        raise ValueError("SLD Fisher information is singular on the unit sphere")
    return 1.0 / d


def sld_jeffreys_volume(s: BlochState) -> float:
    """sqrt(det I) / pi^2 = (1 - r^2)^(-1/2) / pi^2."""
    return math.sqrt(sld_fisher_determinant(s)) / math.pi**2


def _kubo_normalizer(u: float) -> float:
    _check_u(u)
    return (1.0 - u) * math.exp(log_gamma(2.5 - u) - log_gamma(1.0 - u)) / (
        math.pi**1.5 * (3.0 - 2.0 * u)
    )


def kubo_mori_density(u: float, r: float, theta: float) -> float:
    """Kubo-Mori family density with respect to dr dtheta dphi."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    return float(
        _kubo_normalizer(u) * r * _log_ratio(r, 1.0 - r) * math.sin(theta)
        / (1.0 - r * r) ** u
    )


def monotone_volume_element(f: MonotoneFunction, r: float, theta: float) -> float:
    """Unnormalized monotone-metric volume element with respect to dr dtheta dphi."""
    f.check()
    if not 0.0 < r < 1.0:
        raise ValueError(f"radius must lie in (0, 1), got {r}")
    return float(_monotone_radial_shape(f, r, 1.0 - r) * math.sin(theta))


# --- prior specification ------------------------------------------------------

@dataclass(frozen=True)
class PriorSpec:
    """A spherically symmetric prior on the Bloch ball.

    Use the ``qu``, ``kubo`` and ``monotone`` constructors rather than the
    raw initializer.
    """

    kind: PriorKind
    u: float | None = None
    f: MonotoneFunction | None = None

    def __post_init__(self):
        if self.kind in (PriorKind.QU, PriorKind.KUBO_MORI):
            if self.u is None:
                raise ValueError(f"{self.kind.value} prior requires u")
            _check_u(self.u)
        elif self.kind is PriorKind.MONOTONE:
            if self.f is None:
                raise ValueError("monotone prior requires a monotone function")
            self.f.check()

    @classmethod
    def qu(cls, u: float) -> "PriorSpec":
        return cls(PriorKind.QU, u=float(u))

    @classmethod
    def kubo(cls, u: float) -> "PriorSpec":
        return cls(PriorKind.KUBO_MORI, u=float(u))

    @classmethod
    def monotone(cls, f: MonotoneFunction | str) -> "PriorSpec":
        if isinstance(f, str):
            try:
                f = MONOTONE_FUNCTIONS[f]
            except KeyError:
                raise ValueError(f"unknown monotone function {f!r}; choose from {sorted(MONOTONE_FUNCTIONS)}") from None
        return cls(PriorKind.MONOTONE, f=f)

    @property
    def label(self) -> str:
        if self.kind is PriorKind.MONOTONE:
            return f"monotone:{self.f.name}"
        return f"{self.kind.value}:{self.u:g}"

    @property
    def endpoint_exponent(self) -> float:
        """alpha such that the radial density behaves like (1 - r)^(-alpha) at r = 1."""
        if self.kind is PriorKind.MONOTONE:
            return 0.5
        return self.u

    @property
    def log_singular(self) -> bool:
        if self.kind is PriorKind.KUBO_MORI:
            return True
        if self.kind is PriorKind.MONOTONE:
            return self.f.log_singular
        return False

    @cached_property
    def _monotone_norm(self) -> float:
        # local import: oracle depends on this module
        from .oracle import radial_integral

        shape = lambda r, omr: 4.0 * np.pi * _monotone_radial_shape(self.f, r, omr)
        return radial_integral(shape, self, order=256)

    def cartesian(self, r, one_minus_r=None):
        """Density w(r) with respect to dx dy dz; vectorized over r."""
        r = np.asarray(r, dtype=float)
        if one_minus_r is None:
            one_minus_r = 1.0 - r
        if self.kind is PriorKind.QU:
            return _qu_cartesian(self.u, r, one_minus_r)
        if self.kind is PriorKind.KUBO_MORI:
            # divide out the r^2 sin(theta) Jacobian; log ratio / r -> 2 at r = 0
            safe_r = np.where(r > 0, r, 1.0)
            lr_over_r = np.where(r > 0, _log_ratio(r, one_minus_r) / safe_r, 2.0)
            one_minus_r2 = one_minus_r * (1.0 + r)
            return _kubo_normalizer(self.u) * lr_over_r * one_minus_r2 ** (-self.u)
        safe_r = np.where(r > 0, r, 1.0)
        shape = np.where(
            r > 0,
            _monotone_radial_shape(self.f, safe_r, one_minus_r) / (safe_r * safe_r),
            1.0,
        )
        return shape / self._monotone_norm

    def density(self, s: BlochState) -> float:
        return float(self.cartesian(s.r))


def radial_density(p: PriorSpec, r) -> float:
    """Cartesian density value w(r) of a spherically symmetric prior."""
    out = p.cartesian(r)
    return float(out) if np.ndim(out) == 0 else out
