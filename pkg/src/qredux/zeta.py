"""Bayesian density matrices: the prior average of the n-fold tensor power.

Entries depend on (I, J) only through |I|, |J| and |I & J|, so dense
matrices are filled from an (n+1) x (n+1) table indexed by
(|I|, |I & J|); entries with |I| != |J| vanish.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .oracle import NonConvergenceError, angular_rule, radial_expectation
from .priors import PriorSpec
from .qstate import DENSE_CAP, overlap_profile, popcount
from .specfun import log_gamma
from .spectrum import SpectrumSummary, check_symmetric, spectrum

__all__ = [
    "ZetaMatrix",
    "zeta_entry",
    "entry_table",
    "zeta_dense",
    "zeta_matrix",
    "generalized_matrix",
    "averaged_matrix",
]

GENERALIZED_CAP = 10
AVERAGED_CAP = 8


def _check_u(u):
    if not u < 1:
        raise ValueError(f"prior parameter u must be < 1, got {u}")


def _log_entry(n, u, n_ii, n_oo):
    k = (n - n_ii - n_oo) / 2
    return (
        log_gamma(k + 1.0)
        - n * math.log(2.0)
        + log_gamma(2.5 - u)
        + log_gamma(2.0 + n / 2 + n_ii / 2 - n_oo / 2 - u)
        + log_gamma(2.0 + n / 2 + n_oo / 2 - n_ii / 2 - u)
        - log_gamma(2.5 + n / 2 - u)
        - log_gamma(2.0 + n / 2 - u)
        - log_gamma(2.0 + k - u)
    )


def zeta_entry(n: int, u: float, i_mask: int, j_mask: int) -> float:
    """Entry (I, J) of zeta_n(u)."""
    _check_u(u)
    p = overlap_profile(n, i_mask, j_mask)
    if p.n_out_in != p.n_in_out:
        return 0.0
    return math.exp(_log_entry(n, u, p.n_in_in, p.n_out_out))


def entry_table(n: int, u: float) -> np.ndarray:
    """T[c, m] = entry for |I| = |J| = c and |I & J| = m (zero where m > c)."""
    _check_u(u)
    c = np.arange(n + 1)[:, None]
    m = np.arange(n + 1)[None, :]
    valid = (m <= c) & (2 * c - m <= n)
    n_oo = np.where(valid, n - 2 * c + m, 0)
    n_ii = np.where(valid, m, 0)
    vals = np.exp(_log_entry(n, u, n_ii.astype(float), n_oo.astype(float)))
    return np.where(valid, vals, 0.0)


def zeta_dense(n: int, u: float, cap: int = DENSE_CAP) -> np.ndarray:
    if n < 1:
        raise ValueError("n must be positive")
    if n > cap:
        raise ValueError(f"n={n} exceeds the dense-matrix cap {cap}")
    table = entry_table(n, u)
    idx = np.arange(1 << n, dtype=np.int64)
    size = popcount(idx)
    common = popcount(idx[:, None] & idx[None, :])
    same = size[:, None] == size[None, :]
    out = table[size[:, None], common]
    return np.where(same, out, 0.0)


@dataclass(frozen=True)
class ZetaMatrix:
    n: int
    u: float
    spectral: SpectrumSummary
    entries: np.ndarray | None = None

    @property
    def trace_error(self) -> float:
        if self.entries is not None:
            return abs(float(np.trace(self.entries)) - 1.0)
        return self.spectral.trace_error

    def to_dict(self, include_entries: bool = False) -> dict:
        doc = {
            "n": self.n,
            "u": self.u,
            "distinct_eigenvalues": [
                {"h": lv.h, "lambda": lv.lam, "multiplicity": lv.multiplicity}
                for lv in self.spectral.levels
            ],
            "trace_error": self.trace_error,
        }
        if include_entries and self.entries is not None:
            doc["entries"] = self.entries.tolist()
        return doc


def zeta_matrix(n: int, u: float, materialize: bool = True) -> ZetaMatrix:
    """zeta_n(u) with its spectral summary; entries only when ``materialize``."""
    entries = zeta_dense(n, u) if materialize else None
    return ZetaMatrix(n, u, spectrum(n, u), entries)


def generalized_matrix(n: int, u: float, f: Callable) -> np.ndarray:
    """Matrix with entries delta * k! / Gamma(2 + k - u) * f(n_in_in - n_out_out).

    Here k = (n - n_in_in - n_out_out) / 2 and the delta forces |I| = |J|.
    ``f`` must be even; it is called on integers in [-n, n].
    """
    _check_u(u)
    if n > GENERALIZED_CAP:
        raise ValueError(f"n={n} exceeds the generalized-matrix cap {GENERALIZED_CAP}")
    check_symmetric(f, n)
    c = np.arange(n + 1)[:, None]
    m = np.arange(n + 1)[None, :]
    valid = (m <= c) & (2 * c - m <= n)
    k = np.where(valid, c - m, 0).astype(float)
    fvals = np.array([f(2 * cc - n) for cc in range(n + 1)], dtype=float)[:, None]
    table = np.where(valid, np.exp(log_gamma(k + 1.0) - log_gamma(2.0 + k - u)) * fvals, 0.0)
    idx = np.arange(1 << n, dtype=np.int64)
    size = popcount(idx)
    common = popcount(idx[:, None] & idx[None, :])
    out = table[size[:, None], common]
    return np.where(size[:, None] == size[None, :], out, 0.0)


def _flipped_pauli(ox, oy, oz):
    # subset-mask layout: membership <-> first basis state, so the 2x2 factor is flipped
    return 0.5 * np.array([[-oz, ox + 1j * oy], [ox - 1j * oy, oz]])


def _angular_coefficients(n: int, theta_order: int, phi_order: int) -> np.ndarray:
    """Sphere averages of the r^k coefficients of the tensor power, k = 0..n."""
    ox, oy, oz, wa = angular_rule(theta_order, phi_order)
    dim = 1 << n
    acc = np.zeros((n + 1, dim, dim), dtype=complex)
    half_id = 0.5 * np.eye(2)
    for x, y, z, w in zip(ox, oy, oz, wa):
        f1 = _flipped_pauli(x, y, z)
        coeffs = [np.ones((1, 1), dtype=complex)]
        for _ in range(n):
            nxt = [np.kron(coeffs[0], half_id)]
            for k in range(1, len(coeffs)):
                nxt.append(np.kron(coeffs[k], half_id) + np.kron(coeffs[k - 1], f1))
            nxt.append(np.kron(coeffs[-1], f1))
            coeffs = nxt
        acc += w * np.array(coeffs)
    return acc


def averaged_matrix(
    n: int,
    p: PriorSpec,
    radial_order: int = 64,
    theta_order: int | None = None,
    phi_order: int | None = None,
    tol: float = 1e-8,
):
    """Quadrature of the tensor power against a spherically symmetric prior.

    The tensor power is a polynomial of degree n in r at fixed direction, so
    the ball integral splits into radial moments int 4 pi r^{2+k} w(r) dr
    (prior-aware radial rule) times sphere averages of the coefficients
    (product rule exact for degree n).  Both parts are re-evaluated at
    doubled order; the larger change is the error estimate.

    Returns ``(matrix, error_estimate)``.
    """
    if n > AVERAGED_CAP:
        raise ValueError(f"n={n} exceeds the averaged-matrix cap {AVERAGED_CAP}")
    theta_order = theta_order or n // 2 + 2
    phi_order = phi_order or n + 2
    ks = np.arange(n + 1)
    moments = radial_expectation(lambda r, omr: r[:, None] ** ks[None, :], p, order=radial_order)
    coarse = _angular_coefficients(n, theta_order, phi_order)
    fine = _angular_coefficients(n, 2 * theta_order, 2 * phi_order)
    mat = np.tensordot(moments.value, fine, axes=(0, 0))
    ang_err = float(np.max(np.abs(np.tensordot(moments.value, fine - coarse, axes=(0, 0)))))
    err = max(moments.error_estimate, ang_err)
    if err > tol:
        raise NonConvergenceError(f"averaged matrix error estimate {err:.3e} exceeds {tol:.3e}", error=err)
    trace_err = abs(np.trace(mat).real - 1.0)
    if trace_err > tol:
        raise NonConvergenceError(f"averaged matrix trace off by {trace_err:.3e}", error=trace_err)
    return mat, err
