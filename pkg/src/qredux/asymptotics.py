"""Closed-form large-n expansions and their classical comparison values.

Each expansion is returned as an :class:`AsymptoticValue`, which keeps the
log n coefficient, the constant and (for entropies) the linear-in-n
coefficient apart so that constants can be compared without choosing n.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .specfun import digamma, log_gamma

__all__ = [
    "AsymptoticValue",
    "quantum_term",
    "redundancy_asymptotic",
    "boundary_asymptotic",
    "vn_entropy_asymptotic",
    "bayes_redundancy_constant",
    "cb_redundancy_classical",
    "cb_minimax_classical",
    "cb_boundary_classical",
]

LOG2 = math.log(2.0)
LOG_PI = math.log(math.pi)
QUANTUM_TERM_SWITCH = 1e-4


@dataclass(frozen=True)
class AsymptoticValue:
    leading_coefficient: float
    constant_term: float
    error_order: str
    linear_coefficient: float = 0.0

    def value_at(self, n: float) -> float:
        if n <= 0:
            raise ValueError("n must be positive")
        return self.linear_coefficient * n + self.leading_coefficient * math.log(n) + self.constant_term

    def to_dict(self) -> dict:
        return {
            "linear_coefficient": self.linear_coefficient,
            "leading_coefficient": self.leading_coefficient,
            "constant_term": self.constant_term,
            "error_order": self.error_order,
        }


def _check_u(u: float) -> None:
    if not u < 1:
        raise ValueError(f"prior parameter u must be < 1, got {u}")


def _check_r(r: float, allow_one: bool = True) -> None:
    hi_ok = r <= 1.0 if allow_one else r < 1.0
    if not (r >= 0.0 and hi_ok):
        raise ValueError(f"Bloch radius out of range: {r}")


def _artanh_over_r(r: float) -> float:
    """artanh(r)/r with the removable singularity at 0 filled in."""
    return 1.0 if r == 0.0 else math.atanh(r) / r


def quantum_term(r: float) -> float:
    """(1/(2r)) ((1-r) log(1-r) - (1+r) log(1+r)), rising from -1 at r=0 to -log 2 at r=1."""
    _check_r(r)
    if r < QUANTUM_TERM_SWITCH:
        r2 = r * r
        return -1.0 + r2 / 6.0 + r2 * r2 / 20.0
    lo = 0.0 if r == 1.0 else (1.0 - r) * math.log1p(-r)
    return (lo - (1.0 + r) * math.log1p(r)) / (2.0 * r)


def _gamma_part(u: float) -> float:
    return log_gamma(1.0 - u) - log_gamma(2.5 - u)


def boundary_asymptotic(u: float) -> AsymptoticValue:
    """Expansion for pure sources (r = 1); u = 1 is allowed and gives log n."""
    if u > 1:
        raise ValueError(f"prior parameter u must be <= 1, got {u}")
    const = (2.0 * u - 3.0) * LOG2 + 0.5 * LOG_PI - log_gamma(2.5 - u)
    if u == 1.0:
        const = 0.0  # the identity log Gamma(3/2) = log(pi)/2 - log 2 makes this exact
    return AsymptoticValue(2.0 - u, const, "1/n")


def redundancy_asymptotic(u: float, r: float) -> AsymptoticValue:
    """Expansion of S(rho^{(n)} || zeta_n(u)) for a source at radius r.

    r = 0 reduces to the limiting form with the direction term equal to -1;
    r = 1 is delegated to :func:`boundary_asymptotic`.
    """
    _check_u(u)
    _check_r(r)
    if r == 1.0:
        return boundary_asymptotic(u)
    # log((1-r)/(1+r)) / (2r) = -artanh(r)/r
    const = (
        -0.5
        - 1.5 * LOG2
        - (1.0 - u) * math.log1p(-r * r)
        - _artanh_over_r(r)
        + _gamma_part(u)
    )
    return AsymptoticValue(1.5, const, "1/n")


def bayes_redundancy_constant(u: float) -> float:
    """u-dependent constant of the prior-averaged redundancy under q_u."""
    _check_u(u)
    gap = digamma(5.0 - 2.0 * u) - digamma(1.0 - u)
    return (
        (-3.5 + 2.0 * u) * LOG2
        - (14.0 - 20.0 * u + 7.0 * u * u) / (2.0 * (2.0 - u) * (1.0 - u))
        + _gamma_part(u)
        + (2.0 - 2.0 * u) * gap
    )


def vn_entropy_asymptotic(u: float) -> AsymptoticValue:
    """S(zeta_n(u)) ~ c(u) n + (3/2) log n + const, error O(n^{-(1-u)})."""
    _check_u(u)
    linear = (-7.0 + 5.0 * u) / (2.0 * (2.0 - u) * (1.0 - u)) + digamma(5.0 - 2.0 * u) - digamma(1.0 - u)
    return AsymptoticValue(1.5, bayes_redundancy_constant(u), f"1/n^{1.0 - u:g}", linear)


def cb_redundancy_classical(u: float, r: float) -> AsymptoticValue:
    """Classical three-parameter redundancy for the Bloch-ball family under q_u."""
    _check_u(u)
    _check_r(r, allow_one=False)
    const = 1.5 * (-LOG2 - 1.0) - (0.5 - u) * math.log1p(-r * r) + _gamma_part(u)
    return AsymptoticValue(1.5, const, "o(1)")


def cb_minimax_classical() -> AsymptoticValue:
    """Classical minimax redundancy, attained by the Jeffreys prior (u = 1/2)."""
    return AsymptoticValue(1.5, 1.5 * (-LOG2 - 1.0) + 0.5 * LOG_PI, "o(1)")


def cb_boundary_classical() -> AsymptoticValue:
    """Classical two-parameter value for sources on the unit sphere."""
    return AsymptoticValue(1.0, LOG2 - 1.0, "o(1)")
