"""Asymptotic minimax and maximin over the q_u family.

The minimax problem is reduced to one variable: the stationarity condition
in u is solved for u as a function of r, and f(r, u(r)) is minimized over r.
The maximin side is the root of a trigamma equation.  Both use scipy's
bracketed scalar solvers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.optimize import brentq, minimize_scalar

from .asymptotics import LOG2, bayes_redundancy_constant
from .specfun import log_gamma, trigamma

__all__ = [
    "MinimaxResult",
    "MaximinResult",
    "f_ru",
    "stationary_u_of_r",
    "stationary_residual",
    "solve_minimax",
    "maximin_equation_residual",
    "solve_maximin",
    "bayes_constant_d8",
    "minimax_constant_at",
]

R_BRACKET = (0.5, 0.999)
U_BRACKET = (0.3, 0.8)
MAX_ITER = 500


class ConvergenceError(RuntimeError):
    pass


@dataclass(frozen=True)
class MinimaxResult:
    u_star: float
    r_star: float
    f_value: float
    constant: float
    iterations: int
    tolerance_achieved: float

    @property
    def residual(self) -> float:
        return stationary_residual(self.r_star, self.u_star)

    def to_dict(self) -> dict:
        return {
            "u_star": self.u_star,
            "r_star": self.r_star,
            "f_value": self.f_value,
            "constant": self.constant,
            "residual": self.residual,
            "iterations": self.iterations,
        }


@dataclass(frozen=True)
class MaximinResult:
    u_star: float
    constant: float
    residual: float
    iterations: int

    def to_dict(self) -> dict:
        return {
            "u_star": self.u_star,
            "constant": self.constant,
            "residual": self.residual,
            "iterations": self.iterations,
        }


def _log_ratio_over_2r(r: float) -> float:
    """log((1-r)/(1+r)) / (2r); -1 at r = 0 and -inf at r = 1."""
    if r == 0.0:
        return -1.0
    if r == 1.0:
        return -math.inf
    return -math.atanh(r) / r


def f_ru(r: float, u: float) -> float:
    """r- and u-dependent part of the redundancy constant.

    Returns ``math.inf`` where it diverges (r = 1 with u < 1/2).
    """
    if not 0.0 < r <= 1.0:
        raise ValueError(f"r must lie in (0, 1], got {r}")
    if not u < 1:
        raise ValueError(f"u must be < 1, got {u}")
    gammas = log_gamma(1.0 - u) - log_gamma(2.5 - u)
    if r == 1.0:
        # the pure-state limit: -(1-u) log(1-r^2) - artanh(r)/r stays finite only for u >= 1/2
        if u < 0.5:
            return math.inf
        if u == 0.5:
            return -LOG2 + gammas
        return -math.inf
    return -(1.0 - u) * math.log1p(-r * r) + _log_ratio_over_2r(r) + gammas


def stationary_u_of_r(r: float) -> float:
    """u at which d f / d r vanishes, as a function of r in (0, 1)."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    if r < 1e-3:
        # 1 - 1/(2r^2) + (1 - r^2) artanh(r) / (2 r^3) expanded about 0
        r2 = r * r
        return 2.0 / 3.0 - r2 / 15.0 - r2 * r2 / 35.0
    return 1.0 - 1.0 / (2.0 * r * r) + (1.0 - r * r) * math.atanh(r) / (2.0 * r**3)


def stationary_residual(r: float, u: float) -> float:
    """Partial derivative of f in r; zero exactly on the curve u = u(r)."""
    if not 0.0 < r < 1.0:
        raise ValueError(f"r must lie in (0, 1), got {r}")
    one_minus_r2 = 1.0 - r * r
    return 2.0 * r * (1.0 - u) / one_minus_r2 - 1.0 / (r * one_minus_r2) + math.atanh(r) / (r * r)


def _constant(f_value: float) -> float:
    return f_value - 0.5 - 1.5 * LOG2


def minimax_constant_at(u: float) -> float:
    """Worst-case constant over r for fixed u; finite for u >= 1/2 only."""
    if u < 0.5:
        return math.inf
    if u == 0.5:
        return _constant(f_ru(1.0, 0.5))
    res = minimize_scalar(lambda r: -f_ru(r, u), bounds=(1e-6, 1.0 - 1e-12), method="bounded",
                          options={"xatol": 1e-12})
    return _constant(-res.fun)


def solve_minimax(tol: float = 1e-10) -> MinimaxResult:
    """Minimize f(r, u(r)) over r in the bracket."""
    if tol < 1e-10:
        raise ValueError("tol must be at least 1e-10")
    res = minimize_scalar(
        lambda r: f_ru(r, stationary_u_of_r(r)),
        bounds=R_BRACKET,
        method="bounded",
        options={"xatol": tol, "maxiter": MAX_ITER},
    )
    if not res.success:
        raise ConvergenceError(f"minimax search failed: {res.message}")
    r_star = float(res.x)
    u_star = stationary_u_of_r(r_star)
    f_value = f_ru(r_star, u_star)
    return MinimaxResult(u_star, r_star, f_value, _constant(f_value), int(res.nfev), tol)


def maximin_equation_residual(u: float) -> float:
    """2 (1-u)^3 (psi'(1-u) - psi'(5/2-u)) - 1; its root is the maximin u."""
    if not u < 1:
        raise ValueError(f"u must be < 1, got {u}")
    return 2.0 * (1.0 - u) ** 3 * (trigamma(1.0 - u) - trigamma(2.5 - u)) - 1.0


def bayes_constant_d8(u: float) -> float:
    """u-dependent constant of the prior-averaged redundancy."""
    return bayes_redundancy_constant(u)


def solve_maximin(tol: float = 1e-10) -> MaximinResult:
    if tol < 1e-10:
        raise ValueError("tol must be at least 1e-10")
    lo, hi = U_BRACKET
    f_lo, f_hi = maximin_equation_residual(lo), maximin_equation_residual(hi)
    if f_lo * f_hi > 0:
        raise ConvergenceError(f"maximin residual does not change sign on {U_BRACKET}")
    u_star, info = brentq(maximin_equation_residual, lo, hi, xtol=min(tol, 1e-14),
                          maxiter=MAX_ITER, full_output=True)
    if not info.converged:
        raise ConvergenceError(f"maximin root search failed: {info.flag}")
    return MaximinResult(u_star, bayes_constant_d8(u_star), maximin_equation_residual(u_star),
                         info.iterations)
