"""Grid selection, node escalation and the four-figure spectrum."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .eigensolve import DEFAULT_IMAG_TOLERANCE, real_eigenvalues, smallest_k
from .exceptions import ConvergenceFailure, FlatwellError, InvalidArgumentError
from .fd_oracle import DEFAULT_POINTS, fd_assemble, fd_spectrum
from .grid import GridSpec, build_operators
from .operators import PotentialSpec, assemble

log = logging.getLogger(__name__)

MAX_LEVELS = 10
# the box is always sized for at least this many levels; sizing for the
# ground state alone clips its tail at the lower clamp for N = 2
SIZING_LEVELS = 6
HALFWIDTH_CLAMP = (3.0, 12.0)
# agreement beyond this is indistinguishable from rounding noise
MAX_DIGITS = 15


@dataclass(frozen=True)
class ConvergencePolicy:
    node_counts: tuple[int, ...] = (36, 60, 80)
    sig_figs: int = 4
    halfwidth_margin: float = 1.5
    max_extra_escalations: int = 2
    half_width: float | None = None  # fixed L; skips the automatic choice

    def __post_init__(self):
        counts = tuple(int(n) for n in self.node_counts)
        object.__setattr__(self, "node_counts", counts)
        if len(counts) < 2:
            raise InvalidArgumentError("need at least two node counts to judge convergence")
        if any(n < 16 for n in counts) or any(b <= a for a, b in zip(counts, counts[1:])):
            raise InvalidArgumentError(f"node_counts must be strictly ascending and >= 16, got {counts}")
        if not 3 <= self.sig_figs <= 8:
            raise InvalidArgumentError(f"sig_figs must be in [3, 8], got {self.sig_figs}")
        if self.halfwidth_margin < 0:
            raise InvalidArgumentError("halfwidth_margin must be nonnegative")
        if self.max_extra_escalations < 0:
            raise InvalidArgumentError("max_extra_escalations must be nonnegative")
        if self.half_width is not None and not self.half_width > 0:
            raise InvalidArgumentError("half_width override must be positive")

    def as_dict(self) -> dict:
        return {
            "node_counts": list(self.node_counts),
            "sig_figs": self.sig_figs,
            "halfwidth_margin": self.halfwidth_margin,
            "max_extra_escalations": self.max_extra_escalations,
            "half_width": self.half_width,
        }


@dataclass(frozen=True)
class GridTrial:
    """Eigenvalues from one grid, kept for convergence reporting."""

    grid: GridSpec
    eigenvalues: tuple[float, ...]
    max_abs_imag: float = 0.0


@dataclass(frozen=True)
class SpectrumResult:
    potential: PotentialSpec
    levels: tuple[tuple[int, float], ...]
    converged_digits: int
    grid_used: GridSpec | None
    engine: str  # "spectral" | "fd" | "closed_form"
    level_digits: tuple[int, ...] = ()
    trials: tuple[GridTrial, ...] = field(default=(), repr=False)

    @property
    def lambdas(self) -> np.ndarray:
        return np.array([lam for _, lam in self.levels])


def agreed_digits(a: float, b: float) -> int:
    """Significant digits on which ``a`` and ``b`` agree, floor(-log10 |a-b|/|b|)."""
    if a == b:
        return MAX_DIGITS
    rel = abs(a - b) / max(abs(b), np.finfo(float).tiny)
    return int(min(MAX_DIGITS, max(0, math.floor(-math.log10(rel)))))


def infinite_well_spectrum(k: int) -> SpectrumResult:
    """Exact levels (n pi / 2)^2 of the unit-half-width hard-walled box."""
    if k < 1:
        raise InvalidArgumentError(f"k must be >= 1, got {k}")
    levels = tuple((n, (n * math.pi / 2.0) ** 2) for n in range(1, k + 1))
    return SpectrumResult(
        potential=PotentialSpec.infinite_well(),
        levels=levels,
        converged_digits=MAX_DIGITS,
        grid_used=None,
        engine="closed_form",
        level_digits=(MAX_DIGITS,) * k,
    )


def domain_halfwidth(spec: PotentialSpec, lambda_estimate: float, margin: float = 1.5) -> float:
    """L = margin * (3 lambda)^(1/N), clamped to [3, 12].

    (3 lambda)^(1/N) sits beyond the classical turning point lambda^(1/N)
    by a factor 3^(1/N), so the margin keeps the tail well inside the box.
    """
    if spec.is_infinite_well:
        raise InvalidArgumentError("the infinite well half-width is fixed at 1")
    if not lambda_estimate > 0:
        raise InvalidArgumentError(f"lambda_estimate must be positive, got {lambda_estimate}")
    L = margin * (3.0 * lambda_estimate) ** (1.0 / spec.N)
    lo, hi = HALFWIDTH_CLAMP
    return float(min(max(L, lo), hi))


def spectral_eigenvalues(
    spec: PotentialSpec, grid: GridSpec, imag_tolerance: float = DEFAULT_IMAG_TOLERANCE
):
    """Full ascending spectrum report for one grid."""
    H = assemble(build_operators(grid), spec)
    return real_eigenvalues(H.matrix, imag_tolerance)


def solve_grid(spec: PotentialSpec, grid: GridSpec, k: int) -> GridTrial:
    """Lowest k collocation eigenvalues on one fixed grid."""
    report = spectral_eigenvalues(spec, grid)
    vals = smallest_k(report, k)
    return GridTrial(grid=grid, eigenvalues=tuple(float(v) for v in vals), max_abs_imag=report.max_abs_imag)


def choose_halfwidth(spec: PotentialSpec, k: int, policy: ConvergencePolicy, estimator=None) -> float:
    """Truncation half-width for the k lowest levels.

    A first guess uses the infinite-well value (k pi/2)^2, which bounds every
    finite-N level from above. That guess is far too wide for small N and
    starves the centre of nodes, so the k-th level is re-estimated on the
    coarsest grid and L recomputed from it.

    ``estimator(L, k)`` returns the k-th eigenvalue on a cheap grid of
    half-width L; it defaults to the coarsest collocation grid.
    """
    if policy.half_width is not None:
        return float(policy.half_width)
    k = max(k, SIZING_LEVELS)
    L0 = domain_halfwidth(spec, (k * math.pi / 2.0) ** 2, policy.halfwidth_margin)
    if estimator is None:
        def estimator(L, k):
            return solve_grid(spec, GridSpec(policy.node_counts[0], L), k).eigenvalues[-1]
    try:
        lam_k = estimator(L0, k)
    except FlatwellError as exc:
        log.warning("pilot solve failed (%s); keeping L = %.4g", exc, L0)
        return L0
    return domain_halfwidth(spec, lam_k, policy.halfwidth_margin)


def solve_spectrum(spec: PotentialSpec, k: int = 6, policy: ConvergencePolicy | None = None) -> SpectrumResult:
    """Lowest k eigenvalues, escalating the node count until they settle.

    Level n counts as converged when the last two node counts agree on it to
    ``policy.sig_figs`` significant figures. If they do not, a grid 1.5x finer
    than the last is added, up to ``policy.max_extra_escalations`` times.
    The box is never widened on disagreement: a wider box only spreads the
    same nodes thinner.
    """
    policy = policy or ConvergencePolicy()
    if k < 1 or k > MAX_LEVELS:
        raise InvalidArgumentError(f"levels must be in [1, {MAX_LEVELS}], got {k}")
    if spec.is_infinite_well:
        return infinite_well_spectrum(k)

    L = choose_halfwidth(spec, k, policy)
    counts = list(policy.node_counts)
    trials = [solve_grid(spec, GridSpec(n, L), k) for n in counts]
    extra = 0
    while True:
        digits = [agreed_digits(a, b) for a, b in zip(trials[-2].eigenvalues, trials[-1].eigenvalues)]
        if min(digits) >= policy.sig_figs:
            return SpectrumResult(
                potential=spec,
                levels=tuple(enumerate(trials[-1].eigenvalues, start=1)),
                converged_digits=min(digits),
                grid_used=trials[-1].grid,
                engine="spectral",
                level_digits=tuple(digits),
                trials=tuple(trials),
            )
        if extra >= policy.max_extra_escalations:
            break
        extra += 1
        n_next = 2 * round(0.75 * counts[-1])
        log.info("N=%s: %s digits at %d nodes; adding %d nodes", spec.label, digits, counts[-1], n_next)
        counts.append(n_next)
        trials.append(solve_grid(spec, GridSpec(n_next, L), k))
    agreement = {n: d for n, d in enumerate(digits, start=1)}
    raise ConvergenceFailure(
        f"N={spec.label}: levels did not reach {policy.sig_figs} significant figures "
        f"by {counts[-1]} nodes (agreed digits per level: {agreement})",
        agreement=agreement,
    )


def solve_spectrum_fd(
    spec: PotentialSpec,
    k: int = 6,
    policy: ConvergencePolicy | None = None,
    points: int = DEFAULT_POINTS,
) -> SpectrumResult:
    """Finite-difference counterpart of :func:`solve_spectrum`.

    ``converged_digits`` compares ``points`` against half as many points, an
    estimate of the O(h^2) discretisation error. ``grid_used.node_count`` is
    the number of uniform intervals, ``points + 1``.
    """
    policy = policy or ConvergencePolicy()
    if k < 1 or k > MAX_LEVELS:
        raise InvalidArgumentError(f"levels must be in [1, {MAX_LEVELS}], got {k}")
    if spec.is_infinite_well:
        L = 1.0
    else:
        L = choose_halfwidth(
            spec, k, policy, estimator=lambda L0, kk: fd_spectrum(fd_assemble(spec, L0, 400), kk)[-1]
        )
    fine = fd_spectrum(fd_assemble(spec, L, points), k)
    coarse = fd_spectrum(fd_assemble(spec, L, points // 2), k)
    digits = tuple(agreed_digits(a, b) for a, b in zip(coarse, fine))
    return SpectrumResult(
        potential=spec,
        levels=tuple(enumerate((float(v) for v in fine), start=1)),
        converged_digits=min(digits),
        engine="fd",
        level_digits=digits,
        grid_used=GridSpec(points + 1, L),
    )
