"""Brute-force verification machinery.

Nothing in here uses the closed forms of the analytic modules: dense
eigendecompositions, matrix logarithms, Kronecker powers and product
quadrature over the Bloch ball are the independent side of every
cross-check in the test suite.

Radial rules
------------
``gauss_jacobi``
    Gauss-Jacobi on r in [0, 1] with weight (1 - r)^(-u).  Exact up to the
    smooth factor (1 + r)^(-u) for the q_u family.
``substitution``
    Gauss-Legendre in t after r = 1 - t^p, with p chosen so that the
    endpoint singularity (1 - r)^(-alpha) (and a possible log(1 - r)) is
    multiplied by a positive power of t.  Works for every built-in prior.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .priors import PriorKind, PriorSpec
from .qstate import BlochState

__all__ = [
    "QuadratureSpec",
    "QuadratureResult",
    "NonConvergenceError",
    "SupportError",
    "dense_hermitian_eig",
    "matrix_log_psd",
    "matrix_exp_hermitian",
    "relative_entropy_dense",
    "von_neumann_entropy_dense",
    "kron_power",
    "radial_rule",
    "radial_integral",
    "radial_expectation",
    "angular_rule",
    "ball_average",
    "tensor_power_average",
    "standard_integral_check",
]


class NonConvergenceError(RuntimeError):
    """Quadrature refinement disagreed by more than the requested tolerance."""

    def __init__(self, message, coarse=None, fine=None, error=None):
        super().__init__(message)
        self.coarse = coarse
        self.fine = fine
        self.error = error


class SupportError(ValueError):
    """The first argument of a relative entropy has weight outside the support of the second."""


# --- dense linear algebra -----------------------------------------------------

def _check_hermitian(m: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol * scale:
        raise ValueError("matrix is not Hermitian")
    return m


def dense_hermitian_eig(m: np.ndarray):
    """Eigenvalues (descending) and matching orthonormal eigenvectors (columns)."""
    m = _check_hermitian(m)
    w, v = np.linalg.eigh(m)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def matrix_log_psd(m: np.ndarray, cutoff: float = 0.0) -> np.ndarray:
    """Principal logarithm of a positive definite Hermitian matrix.

    Eigenvalues at or below ``cutoff`` make the logarithm undefined and
    raise :class:`SupportError`; use :func:`relative_entropy_dense` when the
    log only needs to be contracted against a state supported elsewhere.
    """
    w, v = dense_hermitian_eig(m)
    if np.any(w <= cutoff):
        raise SupportError(f"matrix has eigenvalue {w.min():.3e} <= cutoff {cutoff:.3e}")
    return (v * np.log(w)) @ v.conj().T


def matrix_exp_hermitian(m: np.ndarray) -> np.ndarray:
    w, v = dense_hermitian_eig(m)
    return (v * np.exp(w)) @ v.conj().T


def von_neumann_entropy_dense(rho: np.ndarray, cutoff: float = 1e-15) -> float:
    w, _ = dense_hermitian_eig(rho)
    w = w[w > cutoff]
    return float(-np.sum(w * np.log(w)))


def relative_entropy_dense(rho: np.ndarray, sigma: np.ndarray, cutoff: float = 1e-14) -> float:
    """Tr rho (log rho - log sigma), with 0 log 0 = 0 on the kernel of rho."""
    rho = _check_hermitian(rho)
    sigma = _check_hermitian(sigma)
    if rho.shape != sigma.shape:
        raise ValueError(f"dimension mismatch {rho.shape} vs {sigma.shape}")
    mu, _ = dense_hermitian_eig(rho)
    mu = mu[mu > cutoff]
    first = float(np.sum(mu * np.log(mu)))
    nu, w = dense_hermitian_eig(sigma)
    # diagonal of rho in sigma's eigenbasis
    weights = np.real(np.einsum("ij,ik,kj->j", w.conj(), rho, w))
    kernel = nu <= cutoff
    if np.any(weights[kernel] > 1e-12):
        raise SupportError("support of rho is not contained in the support of sigma")
    second = float(np.sum(weights[~kernel] * np.log(nu[~kernel])))
    return first - second


def _flip(rho: np.ndarray) -> np.ndarray:
    # subset membership indexes the *first* basis state of each qubit
    return rho[::-1, ::-1]


def kron_power(rho: np.ndarray, n: int) -> np.ndarray:
    """n-fold tensor power by iterated Kronecker products, in subset-mask layout."""
    f = _flip(np.asarray(rho))
    out = np.ones((1, 1), dtype=f.dtype)
    for _ in range(n):
        out = np.kron(out, f)
    return out


def _batched_kron_power(x, y, z, n):
    """Tensor powers for arrays of Bloch coordinates, shape (m, 2^n, 2^n)."""
    m = x.shape[0]
    f = np.empty((m, 2, 2), dtype=complex)
    f[:, 0, 0] = 0.5 * (1 - z)
    f[:, 0, 1] = 0.5 * (x + 1j * y)
    f[:, 1, 0] = 0.5 * (x - 1j * y)
    f[:, 1, 1] = 0.5 * (1 + z)
    out = np.ones((m, 1, 1), dtype=complex)
    for _ in range(n):
        d = out.shape[1]
        out = np.einsum("mab,mcd->macbd", out, f).reshape(m, 2 * d, 2 * d)
    return out


# --- quadrature rules ---------------------------------------------------------

@dataclass(frozen=True)
class QuadratureSpec:
    radial_rule: str = "auto"
    radial_order: int = 64
    theta_order: int = 12
    phi_order: int = 24
    tol: float = 1e-9

    def refined(self) -> "QuadratureSpec":
        return replace(
            self,
            radial_order=2 * self.radial_order,
            theta_order=2 * self.theta_order,
            phi_order=2 * self.phi_order,
        )


@dataclass(frozen=True)
class QuadratureResult:
    value: np.ndarray | float
    error_estimate: float
    spec: QuadratureSpec


@lru_cache(maxsize=64)
def _leggauss01(order: int):
    s, w = np.polynomial.legendre.leggauss(order)
    return 0.5 * (s + 1.0), 0.5 * w


def _gauss_jacobi(order: int, alpha: float, beta: float = 0.0):
    """Golub-Welsch nodes and weights for (1-s)^alpha (1+s)^beta on [-1, 1].

    scipy.special.roots_jacobi drifts by ~1e-10 at a few hundred nodes when
    alpha is near -1; the symmetric tridiagonal eigenproblem does not.
    """
    k = np.arange(order, dtype=float)
    ab = alpha + beta
    diag = np.empty(order)
    diag[0] = (beta - alpha) / (ab + 2.0)
    kk = k[1:]
    diag[1:] = (beta * beta - alpha * alpha) / ((2 * kk + ab) * (2 * kk + ab + 2.0))
    off = np.sqrt(
        4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab)
        / ((2 * kk + ab) ** 2 * (2 * kk + ab + 1.0) * (2 * kk + ab - 1.0))
    )
    nodes, vecs = eigh_tridiagonal(diag, off)
    mu0 = math.exp((ab + 1.0) * math.log(2.0) + math.lgamma(alpha + 1.0) + math.lgamma(beta + 1.0) - math.lgamma(ab + 2.0))
    return nodes, mu0 * vecs[0] ** 2


@lru_cache(maxsize=64)
def _jacobi01(order: int, alpha: float):
    s, w = _gauss_jacobi(order, alpha)
    # r = (1+s)/2 so (1-s)^alpha = 2^alpha (1-r)^alpha and dr = ds/2
    return 0.5 * (1.0 + s), 0.5 * (1.0 - s), w * 2.0 ** (-alpha - 1.0)


def _substitution_power(alpha: float, log_singular: bool) -> float:
    k = 4.0 if log_singular else 2.0
    return k / (1.0 - max(alpha, 0.0))


def radial_rule(p: PriorSpec | None, order: int, rule: str = "auto"):
    """Nodes ``r``, complements ``1 - r`` and weights ``W`` on [0, 1].

    ``sum(W * g(r, 1 - r))`` approximates ``int_0^1 g dr`` for integrands
    carrying the singular endpoint behaviour of ``p``.
    """
    alpha = p.endpoint_exponent if p is not None else 0.0
    log_singular = p.log_singular if p is not None else False
    if rule == "auto":
        rule = "gauss_jacobi" if (p is not None and p.kind is PriorKind.QU) else "substitution"
    if rule == "gauss_jacobi":
        if log_singular:
            raise ValueError("gauss_jacobi cannot absorb a logarithmic endpoint singularity")
        r, omr, w = _jacobi01(order, -float(alpha))
        absorbed = omr ** (-alpha)
        return r, omr, w / absorbed
    if rule == "substitution":
        pw = _substitution_power(alpha, log_singular)
        t, wt = _leggauss01(order)
        omr = t**pw
        r = 1.0 - omr
        return r, omr, wt * pw * t ** (pw - 1.0)
    raise ValueError(f"unknown radial rule {rule!r}")


def radial_integral(
    func: Callable,
    p: PriorSpec | None = None,
    order: int = 128,
    rule: str = "auto",
) -> float:
    """int_0^1 func(r, 1 - r) dr, using ``p`` only to choose the substitution."""
    r, omr, w = radial_rule(p, order, rule)
    vals = np.asarray(func(r, omr))
    return float(np.sum(w * vals))


def radial_expectation(
    g: Callable,
    p: PriorSpec,
    order: int = 128,
    rule: str = "auto",
    tol: float | None = None,
) -> QuadratureResult:
    """int over the ball of g(r) w(r) dV for a spherically symmetric integrand.

    ``g`` receives ``(r, 1 - r)`` arrays and may return trailing dimensions.
    The error estimate is the change under one doubling of the order.
    """

    def once(order_):
        r, omr, w = radial_rule(p, order_, rule)
        vals = np.asarray(g(r, omr))
        jac = 4.0 * np.pi * r * r * p.cartesian(r, omr) * w
        return np.tensordot(jac, vals, axes=(0, 0))

    coarse = once(order)
    fine = once(2 * order)
    err = float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))
    if tol is not None and err > tol:
        raise NonConvergenceError(
            f"radial quadrature change {err:.3e} exceeds tolerance {tol:.3e}", coarse, fine, err
        )
    value = float(fine) if np.ndim(fine) == 0 else fine
    return QuadratureResult(value, err, QuadratureSpec(rule, 2 * order))


@lru_cache(maxsize=32)
def angular_rule(theta_order: int, phi_order: int):
    """Unit vectors and weights (summing to 1) for averaging over the sphere.

    Gauss-Legendre in cos(theta) times the trapezoid rule in phi; exact for
    spherical polynomials of degree below min(2 * theta_order, phi_order).
    """
    mu, wmu = np.polynomial.legendre.leggauss(theta_order)
    phi = 2.0 * np.pi * np.arange(phi_order) / phi_order
    st = np.sqrt(1.0 - mu * mu)
    ox = np.outer(st, np.cos(phi)).ravel()
    oy = np.outer(st, np.sin(phi)).ravel()
    oz = np.repeat(mu, phi_order)
    w = np.repeat(wmu, phi_order) / (2.0 * phi_order)
    return ox, oy, oz, w


def _ball_nodes(p: PriorSpec, spec: QuadratureSpec):
    r, omr, wr = radial_rule(p, spec.radial_order, spec.radial_rule)
    ox, oy, oz, wa = angular_rule(spec.theta_order, spec.phi_order)
    wrad = 4.0 * np.pi * r * r * p.cartesian(r, omr) * wr
    x = np.outer(r, ox).ravel()
    y = np.outer(r, oy).ravel()
    z = np.outer(r, oz).ravel()
    w = np.outer(wrad, wa).ravel()
    return x, y, z, w


def ball_average(
    integrand: Callable,
    p: PriorSpec,
    spec: QuadratureSpec | None = None,
    batched: bool = False,
    check: bool = False,
) -> QuadratureResult:
    """Integral of ``integrand`` against the prior density over the unit ball.

    With ``batched=False`` the integrand is called once per node with a
    :class:`BlochState`; with ``batched=True`` it receives coordinate arrays
    ``(x, y, z)`` and must return an array whose first axis runs over nodes.
    One refinement (all orders doubled) supplies the error estimate; with
    ``check=True`` an estimate above ``spec.tol`` raises
    :class:`NonConvergenceError` carrying both values.
    """
    spec = spec or QuadratureSpec()

    def once(sp):
        x, y, z, w = _ball_nodes(p, sp)
        if batched:
            vals = np.asarray(integrand(x, y, z))
        else:
            vals = np.array(
                [integrand(BlochState(*_clip(xi, yi, zi))) for xi, yi, zi in zip(x, y, z)]
            )
        return np.tensordot(w, vals, axes=(0, 0))

    coarse = once(spec)
    fine_spec = spec.refined()
    fine = once(fine_spec)
    err = float(np.max(np.abs(np.asarray(fine) - np.asarray(coarse))))
    if check and err > spec.tol:
        raise NonConvergenceError(
            f"ball quadrature change {err:.3e} exceeds tolerance {spec.tol:.3e}", coarse, fine, err
        )
    value = float(np.real(fine)) if np.ndim(fine) == 0 else fine
    return QuadratureResult(value, err, fine_spec)


def _clip(x, y, z):
    rr = math.sqrt(x * x + y * y + z * z)
    if rr > 1.0:
        return x / rr, y / rr, z / rr
    return x, y, z


def tensor_power_average(n: int, p: PriorSpec, spec: QuadratureSpec | None = None) -> QuadratureResult:
    """Quadrature average of the n-fold tensor power against ``p``."""
    return ball_average(lambda x, y, z: _batched_kron_power(x, y, z, n), p, spec, batched=True)


# --- closed-form integral checks -----------------------------------------------

def _double_factorial(k: int) -> int:
    if k <= 0:
        return 1
    return math.prod(range(k, 0, -2))


def _trig_moment(a: int, b: int, upper: float, order: int = 200) -> float:
    x, w = np.polynomial.legendre.leggauss(order)
    th = 0.5 * upper * (x + 1.0)
    return float(0.5 * upper * np.sum(w * np.sin(th) ** a * np.cos(th) ** b))


def standard_integral_check(samples: int = 5, seed: int = 0) -> dict:
    """Numerically confirm the trigonometric moment formulas and the beta integral.

    Returns a dict of check name -> maximum absolute deviation observed.
    """
    rng = np.random.default_rng(seed)
    dev = {"sin_even_cos_even": 0.0, "sin_odd_cos_even": 0.0, "sin_odd_cos_even_full": 0.0,
           "sin_even_cos_odd": 0.0, "sin_odd_cos_odd": 0.0, "beta": 0.0}
    for _ in range(samples):
        M, N = (int(v) for v in rng.integers(0, 6, size=2))
        exact = math.pi * _double_factorial(2 * M - 1) * _double_factorial(2 * N - 1) / _double_factorial(2 * M + 2 * N)
        dev["sin_even_cos_even"] = max(dev["sin_even_cos_even"], abs(_trig_moment(2 * M, 2 * N, math.pi) - exact))
        exact = 2.0 * _double_factorial(2 * M) * _double_factorial(2 * N - 1) / _double_factorial(2 * M + 2 * N + 1)
        dev["sin_odd_cos_even"] = max(dev["sin_odd_cos_even"], abs(_trig_moment(2 * M + 1, 2 * N, math.pi) - exact))
        dev["sin_odd_cos_even_full"] = max(dev["sin_odd_cos_even_full"], abs(_trig_moment(2 * M + 1, 2 * N, 2 * math.pi)))
        dev["sin_even_cos_odd"] = max(dev["sin_even_cos_odd"], abs(_trig_moment(2 * M, 2 * N + 1, math.pi)))
        dev["sin_odd_cos_odd"] = max(dev["sin_odd_cos_odd"], abs(_trig_moment(2 * M + 1, 2 * N + 1, math.pi)))

        m = int(rng.integers(0, 8))
        u = float(rng.uniform(-2.0, 0.9))
        exact = math.exp(math.lgamma((m + 1) / 2) + math.lgamma(1 - u) - math.lgamma((m + 3) / 2 - u)) / 2
        r, omr, w = _jacobi01(96, -u)
        # weight (1-r)^(-u) is built in; remaining factor (1+r)^(-u)
        approx = float(np.sum(w * r**m * (1.0 + r) ** (-u)))
        dev["beta"] = max(dev["beta"], abs(approx - exact))
    return dev
