import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatwell.exceptions import InvalidArgumentError, SearchError, VariationalViolation
from flatwell.variational import (
    BETA_MATCHED,
    GAUSSIAN,
    TrialFamily,
    golden_section,
    minimize_bound,
    rayleigh_quotient,
    trial_integrals,
    upper_bound_audit,
)


def gaussian_quotient(b: float, N: float) -> float:
    """Closed form for psi = exp(-b xi^2), from Gaussian moments with weight exp(-2b xi^2).

    kinetic <psi'^2>/<psi^2> = b; potential = Gamma((N+1)/2) / (Gamma(1/2) (2b)^(N/2)).
    """
    return b + math.gamma((N + 1) / 2) / (math.gamma(0.5) * (2 * b) ** (N / 2))


def test_harmonic_optimum():
    assert rayleigh_quotient(GAUSSIAN, 0.5, 2) == pytest.approx(1.0, rel=1e-12)


def test_harmonic_off_optimum():
    assert rayleigh_quotient(GAUSSIAN, 1.0, 2) == pytest.approx(1.25, rel=1e-12)


@settings(deadline=None, max_examples=40)
@given(st.sampled_from([2, 4, 6, 8]), st.floats(1e-2, 1e2))
def test_quadrature_matches_gaussian_closed_form(N, b):
    assert rayleigh_quotient(GAUSSIAN, b, N) == pytest.approx(gaussian_quotient(b, N), rel=1e-9)


def test_quartic_minimum_closed_form():
    # b + 3/(16 b^2) is smallest at b^3 = 3/8, where it equals (3/4) 3^(1/3)
    res = minimize_bound(GAUSSIAN, 4)
    assert res.energy_bound == pytest.approx(0.75 * 3 ** (1 / 3), rel=1e-10)
    assert res.best_b == pytest.approx((3 / 8) ** (1 / 3), rel=1e-6)


@pytest.mark.parametrize("family", [GAUSSIAN, BETA_MATCHED])
def test_harmonic_bound_is_exact(family):
    res = minimize_bound(family, 2)
    assert res.energy_bound == pytest.approx(1.0, abs=1e-10)
    assert res.quadrature_error_estimate < 1e-9


@pytest.mark.parametrize("p", [1.0, 1.5, 3.0])
@pytest.mark.parametrize("N", [2, 5])
def test_half_line_doubled_equals_full_line(p, N):
    fam = TrialFamily(p, "x")
    half = np.array(trial_integrals(fam, 0.7, N)[:3])
    full = np.array(trial_integrals(fam, 0.7, N, full_line=True)[:3])
    np.testing.assert_allclose(2 * half, full, rtol=1e-9)


@pytest.mark.parametrize("kappa", [0.5, 2.0, 3.0])
@pytest.mark.parametrize("N", [3, 6])
def test_reparametrisation_invariance(kappa, N):
    direct = minimize_bound(GAUSSIAN, N).energy_bound
    # search over t with b = t^kappa, i.e. log b = kappa log t
    lo, hi = math.log(1e-3) / kappa, math.log(1e3) / kappa
    _, other, _ = golden_section(lambda s: rayleigh_quotient(GAUSSIAN, math.exp(kappa * s), N), lo, hi, 1e-8 / kappa)
    assert other == pytest.approx(direct, abs=1e-8)


@settings(deadline=None, max_examples=60)
@given(st.floats(1.0, 4.0), st.floats(0.05, 20.0), st.sampled_from([2, 3, 4, 5, 6, 7, 8]))
def test_variational_theorem(ground_state, p, b, N):
    assert rayleigh_quotient(TrialFamily(p, "any"), b, N) >= ground_state[N] - 1e-6


def test_golden_section_parabola():
    x, fx, n = golden_section(lambda x: (x - 0.3) ** 2 + 1, -2, 5, 1e-10)
    # a flat minimum is only located to ~sqrt(machine eps)
    assert x == pytest.approx(0.3, abs=1e-7)
    assert fx == pytest.approx(1.0)
    assert n > 40


def test_golden_section_rejects_a_hump():
    with pytest.raises(SearchError):
        golden_section(lambda x: -((x - 0.5) ** 2), 0.0, 1.0, 1e-8)


def test_family_validation():
    with pytest.raises(InvalidArgumentError):
        TrialFamily(0.5)
    with pytest.raises(InvalidArgumentError):
        rayleigh_quotient(GAUSSIAN, -1.0, 2)
    assert BETA_MATCHED.exponent_for(6) == 4.0


def test_audit_rows_and_gap_growth(ground_state):
    report = upper_bound_audit(list(range(2, 9)), [GAUSSIAN, BETA_MATCHED], ground_state)
    assert len(report.rows) == 14
    assert all(r.gap >= -1e-6 for r in report.rows)
    assert report.gaussian_gap_increasing
    g = report.for_family("gaussian")
    assert g[0].gap == pytest.approx(0.0, abs=1e-6)
    assert g[-1].bound > 1.226


def test_audit_flags_violation():
    with pytest.raises(VariationalViolation):
        upper_bound_audit([4], [GAUSSIAN], {4: 1.2})


def test_audit_needs_ground_state():
    with pytest.raises(InvalidArgumentError):
        upper_bound_audit([4], [GAUSSIAN], {})
