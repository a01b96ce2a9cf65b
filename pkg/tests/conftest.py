import math

import pytest

from flatwell.operators import PotentialSpec
from flatwell.pipeline import ConvergencePolicy, solve_spectrum, solve_spectrum_fd

FINITE_N = (2, 3, 4, 5, 6, 7, 8)


@pytest.fixture(scope="session")
def policy():
    return ConvergencePolicy()


@pytest.fixture(scope="session")
def spectral_table(policy):
    """Six levels for every finite N on the default escalation."""
    return {N: solve_spectrum(PotentialSpec.monomial(N), 6, policy) for N in FINITE_N}


@pytest.fixture(scope="session")
def fd_table(policy):
    return {N: solve_spectrum_fd(PotentialSpec.monomial(N), 6, policy) for N in FINITE_N}


@pytest.fixture(scope="session")
def ground_state(spectral_table):
    return {N: r.levels[0][1] for N, r in spectral_table.items()}


@pytest.fixture(scope="session")
def pi():
    return math.pi
