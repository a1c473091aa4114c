"""Special functions and exact combinatorics.

The gamma family is evaluated by shifting the argument upward with the
functional recurrence and then applying the asymptotic (Stirling) series.
All three functions accept scalars or numpy arrays and return the same
shape; scalar input gives a Python float.
"""
from __future__ import annotations

import math
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

__all__ = [
    "log_gamma",
    "log_gamma_ratio",
    "digamma",
    "trigamma",
    "binomial",
    "log_binomial",
    "catalan",
    "pochhammer",
    "gauss_2f1_terminating",
    "Gauss2F1",
]

# B_2, B_4, ..., B_18
_BERNOULLI = (
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
)

# Asymptotic series are used once the argument reaches this value; the
# truncated tail is below 1e-17 there.
_SHIFT_TO = 10.0
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _as_positive(x):
    arr = np.asarray(x, dtype=float)
    if np.any(~(arr > 0)):
        raise ValueError("gamma-family functions require strictly positive arguments")
    return arr


def _unwrap(result, x):
    if np.ndim(x) == 0:
        return float(result)
    return result


def log_gamma(x):
    """Natural logarithm of the gamma function for ``x > 0``."""
    y = _as_positive(x).copy()
    prod = np.ones_like(y)
    small = y < _SHIFT_TO
    while np.any(small):
        prod[small] *= y[small]
        y[small] += 1.0
        small = y < _SHIFT_TO
    inv = 1.0 / y
    inv2 = inv * inv
    series = np.zeros_like(y)
    power = inv.copy()
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k * (2 * k - 1)) * power
        power = power * inv2
    result = (y - 0.5) * np.log(y) - y + _HALF_LOG_2PI + series - np.log(prod)
    return _unwrap(result, x)


def _stirling_tail(y: float) -> float:
    inv = 1.0 / y
    inv2 = inv * inv
    total, power = 0.0, inv
    for k, b in enumerate(_BERNOULLI, start=1):
        total += b / (2 * k * (2 * k - 1)) * power
        power *= inv2
    return total


def log_gamma_ratio(x: float, s: float) -> float:
    """log Gamma(x + s) - log Gamma(x) without forming either large logarithm.

    For large ``x`` and modest ``s`` the two log-gammas are huge and nearly
    equal, so differencing them loses several digits.  Here the Stirling
    forms are subtracted analytically, leaving only O(s log x) sized terms.
    """
    if not (x > 0 and x + s > 0):
        raise ValueError("gamma-family functions require strictly positive arguments")
    shift = 0.0
    while min(x, x + s) < _SHIFT_TO:
        shift += math.log(x) - math.log(x + s)
        x += 1.0
    core = (
        (x - 0.5) * math.log1p(s / x)
        + s * math.log(x + s)
        - s
        + _stirling_tail(x + s)
        - _stirling_tail(x)
    )
    return core + shift


def digamma(x):
    """Digamma function psi(x) = d/dx log Gamma(x) for ``x > 0``."""
    y = _as_positive(x).copy()
    acc = np.zeros_like(y)
    small = y < _SHIFT_TO
    while np.any(small):
        acc[small] -= 1.0 / y[small]
        y[small] += 1.0
        small = y < _SHIFT_TO
    inv2 = 1.0 / (y * y)
    series = np.zeros_like(y)
    power = inv2.copy()
    for k, b in enumerate(_BERNOULLI, start=1):
        series += b / (2 * k) * power
        power = power * inv2
    result = np.log(y) - 0.5 / y - series + acc
    return _unwrap(result, x)


def trigamma(x):
    """Trigamma function psi'(x) for ``x > 0``."""
    y = _as_positive(x).copy()
    acc = np.zeros_like(y)
    small = y < _SHIFT_TO
    while np.any(small):
        acc[small] += 1.0 / (y[small] * y[small])
        y[small] += 1.0
        small = y < _SHIFT_TO
    inv = 1.0 / y
    inv2 = inv * inv
    series = np.zeros_like(y)
    power = inv2 * inv
    for b in _BERNOULLI:
        series += b * power
        power = power * inv2
    result = inv + 0.5 * inv2 + series + acc
    return _unwrap(result, x)


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient; zero when ``k`` lies outside ``[0, n]``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


def log_binomial(n, k):
    """log C(n, k) through log-gamma, for magnitudes where only the scale matters."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    result = log_gamma(n + 1.0) - log_gamma(k + 1.0) - log_gamma(n - k + 1.0)
    return result


def catalan(m: int) -> int:
    """m-th Catalan number C(2m, m) / (m + 1)."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    return math.comb(2 * m, m) // (m + 1)


def pochhammer(a: float, k: int) -> float:
    """Rising factorial (a)_k = a (a+1) ... (a+k-1)."""
    out = 1.0
    for i in range(k):
        out *= a + i
    return out


def _nonpositive_integer(v: float) -> int | None:
    if v <= 0 and abs(v - round(v)) < 1e-12:
        return int(-round(v))
    return None


@dataclass(frozen=True)
class Gauss2F1:
    """Both evaluations of a terminating 2F1 at unit argument."""

    direct: float
    closed_form: float
    terms: int

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.direct), abs(self.closed_form), 1e-300)
        return abs(self.direct - self.closed_form) / scale


def gauss_2f1_terminating(a: float, b: float, c: float) -> Gauss2F1:
    """Evaluate 2F1(a, b; c; 1) for a terminating series two ways.

    ``direct`` sums the hypergeometric series term by term. ``closed_form``
    is Gauss' Gamma(c) Gamma(c-a-b) / (Gamma(c-a) Gamma(c-b)); with
    ``a = -m`` it collapses to the Pochhammer ratio (c-b)_m / (c)_m, which
    is what is evaluated so that negative gamma arguments never occur.
    Both sums are formed exactly and rounded once.
    """
    ma = _nonpositive_integer(a)
    mb = _nonpositive_integer(b)
    if ma is None and mb is None:
        raise ValueError("series does not terminate: neither a nor b is a nonpositive integer")
    if ma is None or (mb is not None and mb < ma):
        a, b, ma = b, a, mb
    m = ma
    mc = _nonpositive_integer(c)
    if mc is not None and mc < m:
        raise ValueError(f"denominator parameter c={c} vanishes before the series terminates")

    # both sides in exact rational arithmetic on the (binary) input values, so
    # heavy cancellation in the alternating series cannot masquerade as a mismatch
    fa, fb, fc = Fraction(a), Fraction(b), Fraction(c)
    total = Fraction(0)
    term = Fraction(1)
    for k in range(m + 1):
        total += term
        if k < m:
            term *= (fa + k) * (fb + k) / ((fc + k) * (k + 1))
    num = den = Fraction(1)
    for k in range(m):
        num *= fc - fb + k
        den *= fc + k
    closed = num / den
    return Gauss2F1(direct=float(total), closed_form=float(closed), terms=m + 1)
