"""Bayesian density matrices for qubit sources and the redundancy of universal quantum coding.

The core object is zeta_n(u), the average of the n-fold tensor power of a
qubit state against the prior proportional to (1 - r^2)^(-u) on the Bloch
ball.  Its spectrum is known in closed form, so entropies, redundancies and
their large-n expansions cost O(n) even for n in the thousands.
"""
from .asymptotics import (
    AsymptoticValue,
    boundary_asymptotic,
    cb_boundary_classical,
    cb_minimax_classical,
    cb_redundancy_classical,
    quantum_term,
    redundancy_asymptotic,
    vn_entropy_asymptotic,
)
from .compress import CompressionPlan, plan, rate_curve, retained_weight
from .entropy import (
    RedundancyReport,
    bayes_optimality_gap,
    bayes_redundancy_exact,
    level_weight,
    level_weights,
    relative_entropy_exact,
    von_neumann_entropy_zeta,
)
from .optim import (
    MinimaxResult,
    bayes_constant_d8,
    f_ru,
    maximin_equation_residual,
    solve_maximin,
    solve_minimax,
    stationary_u_of_r,
)
from .priors import PriorKind, PriorSpec
from .qstate import BlochState
from .spectrum import (
    SpectrumSummary,
    ballot_paths,
    eigenbasis,
    eigenvalue,
    eigenvector,
    multiplicity,
    spectrum,
    spectrum_from_radial_prior,
)
from .zeta import ZetaMatrix, averaged_matrix, zeta_entry, zeta_matrix

__version__ = "0.1.0"

__all__ = [
    "AsymptoticValue", "BlochState", "CompressionPlan", "MinimaxResult", "PriorKind", "PriorSpec",
    "RedundancyReport", "SpectrumSummary", "ZetaMatrix", "averaged_matrix", "ballot_paths",
    "bayes_constant_d8", "bayes_optimality_gap", "bayes_redundancy_exact", "boundary_asymptotic",
    "cb_boundary_classical", "cb_minimax_classical", "cb_redundancy_classical", "eigenbasis",
    "eigenvalue", "eigenvector", "f_ru", "level_weight", "level_weights", "maximin_equation_residual",
    "multiplicity", "plan", "quantum_term", "rate_curve", "redundancy_asymptotic",
    "relative_entropy_exact", "retained_weight", "solve_maximin", "solve_minimax", "spectrum",
    "spectrum_from_radial_prior", "stationary_u_of_r", "vn_entropy_asymptotic",
    "von_neumann_entropy_zeta", "zeta_entry", "zeta_matrix",
]
