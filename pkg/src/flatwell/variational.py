"""Variational upper bounds on the ground state from generalised Gaussians.

For psi_b(xi) = exp(-b |xi|^p) the Rayleigh quotient

    R(b) = (int psi'^2 + int |xi|^N psi^2) / int psi^2

bounds the true ground-state eigenvalue from above for every b > 0. The
kinetic term uses psi'^2 (equal to -psi psi'' after integrating by parts),
which stays integrable at the cusp of |xi|^p for p < 2.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .exceptions import IntegrationError, InvalidArgumentError, SearchError, VariationalViolation
from .nondim import beta_of

QUAD_RTOL = 1e-10
B_RANGE = (1e-3, 1e3)
B_RTOL = 1e-8
THEOREM_SLACK = 1e-6

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrialFamily:
    """exp(-b |xi|^p) with p fixed, or p = beta = (N+2)/2 when ``shape_exponent`` is None."""

    shape_exponent: float | None = 2.0
    name: str = "gaussian"

    def __post_init__(self):
        if self.shape_exponent is not None and not self.shape_exponent >= 1:
            raise InvalidArgumentError(f"shape exponent must be >= 1, got {self.shape_exponent}")

    def exponent_for(self, N: float) -> float:
        return beta_of(N) if self.shape_exponent is None else float(self.shape_exponent)


GAUSSIAN = TrialFamily(2.0, "gaussian")
BETA_MATCHED = TrialFamily(None, "beta")
CANDIDATE_FAMILIES = (GAUSSIAN, BETA_MATCHED)


@dataclass(frozen=True)
class VariationalResult:
    family: TrialFamily
    N: float
    best_b: float
    energy_bound: float
    evaluations: int
    quadrature_error_estimate: float


def _quad_half_line(f: Callable[[float], float], full_line: bool = False) -> tuple[float, float]:
    lo = -np.inf if full_line else 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(f, lo, np.inf, epsabs=0.0, epsrel=QUAD_RTOL, limit=200, full_output=1)
    value, err = out[0], out[1]
    if len(out) > 3 or not math.isfinite(value):
        achieved = err / abs(value) if value else math.inf
        raise IntegrationError(f"quadrature did not converge: {out[-1]!r}", achieved=achieved)
    return value, err


def unit_moment(m: float, p: float, full_line: bool = False) -> tuple[float, float]:
    """int_0^inf u^m exp(-u^p) du by adaptive quadrature, with its error estimate.

    ``full_line`` integrates |u|^m exp(-|u|^p) over the whole line instead.
    """
    if full_line:
        return _quad_half_line(lambda u: abs(u) ** m * math.exp(-abs(u) ** p), full_line=True)
    return _quad_half_line(lambda u: u**m * math.exp(-(u**p)))


def trial_integrals(family: TrialFamily, b: float, N: float, full_line: bool = False):
    """(norm, kinetic, potential) integrals of psi_b over [0, inf), or the full line.

    Substituting u = (2b)^(1/p) xi turns every integrand into a fixed
    moment of exp(-u^p), so quadrature sees an O(1)-width integrand for any
    b. Returns the three values and the largest relative error estimate.
    """
    if not b > 0:
        raise InvalidArgumentError(f"b must be positive, got {b}")
    p = family.exponent_for(N)
    s = (2.0 * b) ** (-1.0 / p)
    i_norm, e_norm = unit_moment(0.0, p, full_line)
    i_kin, e_kin = unit_moment(2.0 * p - 2.0, p, full_line)
    i_pot, e_pot = unit_moment(N, p, full_line)
    norm = s * i_norm
    kinetic = b * b * p * p * s ** (2.0 * p - 1.0) * i_kin
    potential = s ** (N + 1.0) * i_pot
    rel_err = max(e_norm / i_norm, e_kin / i_kin, e_pot / i_pot)
    return norm, kinetic, potential, rel_err


def _quotient(family: TrialFamily, b: float, N: float) -> tuple[float, float]:
    norm, kin, pot, err = trial_integrals(family, b, N)
    return (kin + pot) / norm, err


def rayleigh_quotient(family: TrialFamily, b: float, N: float) -> float:
    if not N >= 2:
        raise InvalidArgumentError(f"N must be >= 2, got {N}")
    return _quotient(family, b, N)[0]


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float):
    """Minimise a unimodal f on [lo, hi] down to a bracket narrower than ``tol``.

    Returns ``(x, f(x), evaluations)``. Raises SearchError if both ends lie
    below the interior samples, i.e. f is not a single valley on [lo, hi].
    """
    a, b = lo, hi
    fa, fb = f(a), f(b)
    h = b - a
    c = b - _INV_PHI * h
    d = a + _INV_PHI * h
    fc, fd = f(c), f(d)
    evals = 4
    if fa < min(fc, fd) and fb < min(fc, fd):
        raise SearchError(f"objective is not unimodal on [{lo:g}, {hi:g}]")
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INV_PHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INV_PHI * (b - a)
            fd = f(d)
        evals += 1
    candidates = [(fa, lo), (fb, hi), (fc, c), (fd, d)]
    fx, x = min(candidates)
    return x, fx, evals


def minimize_bound(family: TrialFamily, N: float, b_range: tuple[float, float] = B_RANGE) -> VariationalResult:
    """Best bound over b, searched in log b to relative width 1e-8 in b."""
    if not N >= 2:
        raise InvalidArgumentError(f"N must be >= 2, got {N}")
    worst_err = 0.0

    def objective(log_b: float) -> float:
        nonlocal worst_err
        r, err = _quotient(family, math.exp(log_b), N)
        worst_err = max(worst_err, err)
        return r

    log_b, bound, evals = golden_section(
        objective, math.log(b_range[0]), math.log(b_range[1]), B_RTOL
    )
    return VariationalResult(
        family=family,
        N=N,
        best_b=math.exp(log_b),
        energy_bound=bound,
        evaluations=evals,
        quadrature_error_estimate=worst_err,
    )


@dataclass(frozen=True)
class AuditRow:
    N: float
    family: str
    bound: float
    lambda1: float

    @property
    def gap(self) -> float:
        return self.bound - self.lambda1

    @property
    def relative_gap(self) -> float:
        return self.gap / self.lambda1


@dataclass(frozen=True)
class AuditReport:
    rows: tuple[AuditRow, ...]
    gaussian_gap_increasing: bool

    def for_family(self, name: str) -> list[AuditRow]:
        return [r for r in self.rows if r.family == name]


def upper_bound_audit(
    N_values: Sequence[float],
    families: Sequence[TrialFamily],
    ground_states: dict[float, float],
) -> AuditReport:
    """Compare each family's bound with the numerical ground state for every N.

    ``ground_states`` maps N to lambda_1. Any bound more than 1e-6 below
    lambda_1 raises VariationalViolation.
    """
    rows = []
    for N in N_values:
        if N not in ground_states:
            raise InvalidArgumentError(f"no numerical ground state supplied for N={N}")
        lam1 = ground_states[N]
        for fam in families:
            res = minimize_bound(fam, N)
            row = AuditRow(N=N, family=fam.name, bound=res.energy_bound, lambda1=lam1)
            if row.gap < -THEOREM_SLACK:
                raise VariationalViolation(
                    f"{fam.name} bound {row.bound:.8g} lies below lambda_1 = {lam1:.8g} at N={N}"
                )
            rows.append(row)
    gauss = sorted((r for r in rows if r.family == GAUSSIAN.name), key=lambda r: r.N)
    increasing = all(b.relative_gap > a.relative_gap for a, b in zip(gauss, gauss[1:]))
    return AuditReport(rows=tuple(rows), gaussian_gap_increasing=increasing)
