"""Self-consistency suite used by ``qredux verify``.

Each check compares a closed-form result with an independent route (dense
linear algebra or quadrature) and records the worst deviation seen.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .entropy import relative_entropy_exact, von_neumann_entropy_zeta
from .oracle import (
    QuadratureSpec,
    dense_hermitian_eig,
    kron_power,
    relative_entropy_dense,
    standard_integral_check,
    tensor_power_average,
    von_neumann_entropy_dense,
)
from .optim import solve_maximin, solve_minimax
from .priors import PriorSpec
from .qstate import BlochState, density_matrix
from .specfun import catalan
from .spectrum import ballot_count, ballot_paths, eigenvalue, multiplicity, spectrum
from .zeta import zeta_dense

__all__ = ["Check", "run_suite"]

U_VALUES = (-1.0, 0.0, 0.5, 0.9)


@dataclass(frozen=True)
class Check:
    name: str
    max_error: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.max_error <= self.tolerance)

    def to_dict(self) -> dict:
        return {"name": self.name, "max_error": self.max_error, "tolerance": self.tolerance, "passed": self.passed}


def _entries(n_max: int) -> Check:
    worst = 0.0
    spec = QuadratureSpec(radial_order=48, theta_order=n_max + 2, phi_order=2 * n_max + 4)
    for n in range(1, n_max + 1):
        for u in U_VALUES:
            avg = tensor_power_average(n, PriorSpec.qu(u), spec).value
            worst = max(worst, float(np.max(np.abs(avg - zeta_dense(n, u)))))
    return Check(f"entries vs quadrature (n <= {n_max})", worst, 1e-8)


def _spectra(n_max: int) -> Check:
    worst = 0.0
    for n in range(1, n_max + 1):
        for u in U_VALUES:
            dense = np.sort(dense_hermitian_eig(zeta_dense(n, u))[0])
            closed = np.sort(spectrum(n, u).expanded())
            worst = max(worst, float(np.max(np.abs(dense - closed) / closed)))
    return Check(f"spectrum vs dense eigenvalues (n <= {n_max})", worst, 1e-10)


def _relative_entropy(n_max: int) -> Check:
    worst = 0.0
    rng = np.random.default_rng(12345)
    for n in range(1, n_max + 1):
        for _ in range(3):
            u = float(rng.uniform(-1.5, 0.95))
            r = float(rng.uniform(0.0, 0.99))
            rho = kron_power(density_matrix(BlochState(0.0, 0.0, r)), n)
            dense = relative_entropy_dense(rho, zeta_dense(n, u))
            worst = max(worst, abs(dense - relative_entropy_exact(n, u, r).relative_entropy))
    return Check(f"relative entropy vs dense logarithms (n <= {n_max})", worst, 1e-8)


def _vn_entropy(n_max: int) -> Check:
    worst = 0.0
    for n in range(1, n_max + 1):
        for u in U_VALUES:
            worst = max(worst, abs(von_neumann_entropy_dense(zeta_dense(n, u)) - von_neumann_entropy_zeta(n, u)))
    return Check(f"entropy of zeta vs dense (n <= {n_max})", worst, 1e-9)


def _counting(n_max: int) -> Check:
    worst = 0
    for n in range(1, n_max + 1):
        worst = max(worst, abs(sum(multiplicity(n, h) for h in range(n // 2 + 1)) - 2**n))
        for h in range(n // 2 + 1):
            worst = max(worst, abs(len(ballot_paths(n, h)) - ballot_count(n, h)))
    return Check(f"multiplicities and ballot counts (n <= {n_max})", float(worst), 0.0)


def _catalan(n_max: int) -> Check:
    worst = 0.0
    for n in range(1, n_max + 1):
        lam, _ = eigenvalue(n, 0.5, 0)
        target = catalan(n + 1) / 4**n
        worst = max(worst, abs(lam - target) / target)
    return Check(f"leading eigenvalue at u=1/2 vs Catalan numbers (n <= {n_max})", worst, 1e-12)


def _constants() -> list[Check]:
    mm = solve_minimax()
    mx = solve_maximin()
    return [
        Check("minimax r*", abs(mm.r_star - 0.961574), 1e-4),
        Check("minimax u*", abs(mm.u_star - 0.542593), 1e-4),
        Check("minimax constant", abs(mm.constant + 1.72404), 1e-3),
        Check("maximin u*", abs(mx.u_star - 0.531267), 1e-4),
        Check("maximin constant", abs(mx.constant + 1.77185), 1e-3),
    ]


def _integrals() -> Check:
    report = standard_integral_check()
    return Check("trigonometric moments and beta integral", max(report.values()), 1e-10)


SUITES = ("quick", "entries", "spectrum", "entropy", "integrals", "constants", "all")


def run_suite(suite: str = "quick") -> dict:
    """Run one named group of checks; ``quick`` samples every group at small n."""
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    full = suite != "quick"
    groups = {
        "entries": lambda: [_entries(4 if full else 2)],
        "spectrum": lambda: [_spectra(10 if full else 6), _counting(16 if full else 10), _catalan(12)],
        "entropy": lambda: [_relative_entropy(8 if full else 4), _vn_entropy(8 if full else 5)],
        "integrals": lambda: [_integrals()],
        "constants": _constants,
    }
    chosen = list(groups) if suite in ("quick", "all") else [suite]
    checks = [c for name in chosen for c in groups[name]()]
    return {
        "suite": suite,
        "checks": [c.to_dict() for c in checks],
        "passed": all(c.passed for c in checks),
    }
