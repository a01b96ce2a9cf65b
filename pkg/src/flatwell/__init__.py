"""Energy spectra of the flat-well family V(x) = mu |x/a|^N.

The nondimensional problem -psi'' + |xi|^N psi = lambda psi is discretised
by Chebyshev collocation on a truncated box with hard walls and solved with
an in-house dense QR eigensolver; a finite-difference bisection solver and
variational bounds serve as independent checks.
"""

__version__ = "0.1.0"

from .eigensolve import EigenReport, real_eigenvalues, smallest_k
from .grid import ChebOperators, GridSpec, build_operators, cheb_diff_matrix, cheb_points
from .nondim import (
    EnergyPartition,
    PhysicalParams,
    beta_of,
    energy_to_lambda,
    lambda_to_energy,
    partition,
    sigma,
)
from .operators import HamiltonianMatrix, PotentialSpec, assemble, potential_eval
from .pipeline import (
    ConvergencePolicy,
    SpectrumResult,
    domain_halfwidth,
    infinite_well_spectrum,
    solve_spectrum,
    solve_spectrum_fd,
)
from .variational import TrialFamily, VariationalResult, minimize_bound, rayleigh_quotient

__all__ = [
    "ChebOperators",
    "ConvergencePolicy",
    "EigenReport",
    "EnergyPartition",
    "GridSpec",
    "HamiltonianMatrix",
    "PhysicalParams",
    "PotentialSpec",
    "SpectrumResult",
    "TrialFamily",
    "VariationalResult",
    "assemble",
    "beta_of",
    "build_operators",
    "cheb_diff_matrix",
    "cheb_points",
    "domain_halfwidth",
    "energy_to_lambda",
    "infinite_well_spectrum",
    "lambda_to_energy",
    "minimize_bound",
    "partition",
    "potential_eval",
    "rayleigh_quotient",
    "real_eigenvalues",
    "sigma",
    "smallest_k",
    "solve_spectrum",
    "solve_spectrum_fd",
]
