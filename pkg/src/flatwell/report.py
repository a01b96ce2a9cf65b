"""Report runners behind the CLI: each returns ``(payload, exit_status)``."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence, TypeVar

from . import __version__
from .exceptions import FlatwellError, InvalidArgumentError
from .fd_oracle import DEFAULT_POINTS, fd_assemble, fd_spectrum
from .grid import GridSpec
from .nondim import PhysicalParams, beta_of, lambda_to_energy, partition, sigma
from .operators import PotentialSpec
from .pipeline import (
    ConvergencePolicy,
    SpectrumResult,
    agreed_digits,
    choose_halfwidth,
    solve_grid,
    solve_spectrum,
    solve_spectrum_fd,
)
from .reference import REFERENCE_LEVELS, REFERENCE_N_VALUES, TABLE1_NUMERICAL_PRINTED, TABLE1_TRIAL_PRINTED
from .render import n_to_json
from .variational import CANDIDATE_FAMILIES, GAUSSIAN, THEOREM_SLACK, minimize_bound

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_VARIATIONAL = 4

ENGINES = ("spectral", "fd", "both")
T = TypeVar("T")


@dataclass(frozen=True)
class ReportConfig:
    command: str = "table2"
    N_values: tuple[float, ...] = REFERENCE_N_VALUES
    levels: int = REFERENCE_LEVELS
    policy: ConvergencePolicy = field(default_factory=ConvergencePolicy)
    engine: str = "spectral"
    output_format: str = "md"
    output_path: str | None = None
    fd_points: int = DEFAULT_POINTS
    physical: PhysicalParams | None = None

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise InvalidArgumentError(f"engine must be one of {ENGINES}, got {self.engine!r}")
        if self.levels < 1:
            raise InvalidArgumentError("levels must be >= 1")


def thread_count() -> int:
    """Worker cap from FLATWELL_THREADS (0 = serial); defaults to serial."""
    raw = os.environ.get("FLATWELL_THREADS", "0")
    try:
        n = int(raw)
    except ValueError:
        raise InvalidArgumentError(f"FLATWELL_THREADS must be an integer, got {raw!r}") from None
    return max(n, 0)


def parallel_map(fn: Callable[..., T], items: Sequence) -> list[T]:
    """Ordered map, threaded when FLATWELL_THREADS > 1."""
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _meta(kind: str, title: str, config: ReportConfig, **extra) -> dict:
    meta = {
        "kind": kind,
        "title": title,
        "engine": config.engine,
        "policy": config.policy.as_dict(),
        "version": __version__,
    }
    if config.engine != "spectral":
        meta["fd_points"] = config.fd_points
    meta.update(extra)
    return meta


def _solve(spec: PotentialSpec, engine: str, config: ReportConfig) -> SpectrumResult:
    if engine == "spectral":
        return solve_spectrum(spec, config.levels, config.policy)
    return solve_spectrum_fd(spec, config.levels, config.policy, config.fd_points)


def _spectrum_rows(config: ReportConfig) -> tuple[list[dict], int]:
    engines = ("spectral", "fd") if config.engine == "both" else (config.engine,)
    jobs = [(engine, N) for engine in engines for N in config.N_values]

    def work(job):
        engine, N = job
        try:
            return _solve(PotentialSpec.from_exponent(N), engine, config), None
        except FlatwellError as exc:
            log.error("N=%s (%s) failed: %s", N, engine, exc)
            return None, str(exc)

    rows: list[dict] = []
    status = EXIT_OK
    for (engine, N), (result, err) in zip(jobs, parallel_map(work, jobs)):
        if result is None:
            status = EXIT_CONVERGENCE
            rows += [
                {"n": n, "N": n_to_json(N), "lambda": None, "converged_digits": None, "engine": engine, "error": err}
                for n in range(1, config.levels + 1)
            ]
            continue
        for (n, lam), digits in zip(result.levels, result.level_digits):
            rows.append({
                "n": n, "N": n_to_json(N), "lambda": lam, "converged_digits": digits, "engine": result.engine,
            })
    # engine block, then level; the stable sort keeps N in request order
    rows.sort(key=lambda r: (engines.index("fd" if r["engine"] == "fd" else "spectral"), r["n"]))
    return rows, status


def run_table2(config: ReportConfig) -> tuple[dict, int]:
    """Levels n = 1..k for every requested N, laid out as the reference spectrum table."""
    rows, status = _spectrum_rows(config)
    meta = _meta("table2", "Energy eigenvalue spectra lambda_n", config)
    return {"meta": meta, "rows": rows}, status


def run_spectrum(config: ReportConfig) -> tuple[dict, int]:
    rows, status = _spectrum_rows(config)
    N = config.N_values[0] if len(config.N_values) == 1 else None
    title = f"Spectrum for N={n_to_json(N)}" if N is not None else "Spectrum"
    return {"meta": _meta("spectrum", title, config), "rows": rows}, status


def ground_states(N_values: Sequence[float], policy: ConvergencePolicy) -> dict[float, float]:
    """lambda_1 per N, solved on the same grids as the full six-level table."""
    results = parallel_map(lambda N: solve_spectrum(PotentialSpec.monomial(N), 1, policy), list(N_values))
    return {N: r.levels[0][1] for N, r in zip(N_values, results)}


def run_table1(config: ReportConfig) -> tuple[dict, int]:
    """Trial-function bounds beside the numerical ground state, N = 2..8."""
    N_values = [N for N in config.N_values if math.isfinite(N)]
    if not N_values:
        raise InvalidArgumentError("table1 needs at least one finite N")
    status = EXIT_OK
    try:
        lam1 = ground_states(N_values, config.policy)
    except FlatwellError as exc:
        log.error("ground-state solve failed: %s", exc)
        lam1 = {}
        status = EXIT_CONVERGENCE
    bounds = parallel_map(
        lambda job: minimize_bound(job[1], job[0]).energy_bound,
        [(N, fam) for N in N_values for fam in CANDIDATE_FAMILIES],
    )
    it = iter(bounds)
    rows = []
    for N in N_values:
        fam_bounds = {fam.name: next(it) for fam in CANDIDATE_FAMILIES}
        l1 = lam1.get(N)
        violation = l1 is not None and any(b < l1 - THEOREM_SLACK for b in fam_bounds.values())
        if violation:
            status = EXIT_VARIATIONAL
        key = int(N) if float(N).is_integer() else None
        rows.append({
            "N": n_to_json(N),
            "reference_trial": TABLE1_TRIAL_PRINTED.get(key, ""),
            "reference_numerical": TABLE1_NUMERICAL_PRINTED.get(key, ""),
            "bounds": fam_bounds,
            "lambda1": l1,
            "violation": violation,
        })
    meta = _meta(
        "table1", "Ground state eigenvalues: trial functions vs numerical", config,
        families=[f.name for f in CANDIDATE_FAMILIES],
    )
    return {"meta": meta, "rows": rows}, status


def run_converge(config: ReportConfig) -> tuple[dict, int]:
    """Eigenvalues on every grid of the escalation and the digits consecutive grids share."""
    if len(config.N_values) != 1:
        raise InvalidArgumentError("converge takes exactly one N")
    N = config.N_values[0]
    if math.isinf(N):
        raise InvalidArgumentError("the infinite well is solved in closed form; there is nothing to converge")
    spec = PotentialSpec.monomial(N)
    status = EXIT_OK
    try:
        result = solve_spectrum(spec, config.levels, config.policy)
        trials = result.trials[-len(config.policy.node_counts):]
    except FlatwellError as exc:
        # the escalation trace is still worth printing on a fixed box
        log.error("convergence failed: %s", exc)
        status = EXIT_CONVERGENCE
        L = choose_halfwidth(spec, config.levels, config.policy)
        trials = [solve_grid(spec, GridSpec(n, L), config.levels) for n in config.policy.node_counts]
    rows = []
    prev = None
    for t in trials:
        for n, lam in enumerate(t.eigenvalues, start=1):
            rows.append({
                "n": n, "N": n_to_json(N), "node_count": t.grid.node_count, "half_width": t.grid.half_width,
                "lambda": lam, "agreed_digits": None if prev is None else agreed_digits(prev.eigenvalues[n - 1], lam),
            })
        prev = t
    grids = [{"node_count": t.grid.node_count, "half_width": t.grid.half_width} for t in trials]
    meta = _meta("converge", f"Node escalation for N={n_to_json(N)}", config)
    return {"meta": meta, "rows": rows, "grids": grids}, status


def run_physical(config: ReportConfig) -> tuple[dict, int]:
    """lambda_n mapped to physical energies E_n = lambda_n E_a^(1-1/beta) mu^(1/beta)."""
    params = config.physical
    if params is None:
        raise InvalidArgumentError("physical needs hbar, mass, a and mu")
    if len(config.N_values) != 1:
        raise InvalidArgumentError("physical takes exactly one N")
    N = config.N_values[0]
    try:
        result = _solve(PotentialSpec.from_exponent(N), "fd" if config.engine == "fd" else "spectral", config)
    except FlatwellError as exc:
        log.error("solve failed: %s", exc)
        return {"meta": _meta("physical", "Physical energies", config), "rows": []}, EXIT_CONVERGENCE
    rows = [
        {"n": n, "N": n_to_json(N), "lambda": lam, "energy": lambda_to_energy(lam, params, N)}
        for n, lam in result.levels
    ]
    meta = _meta(
        "physical", f"Physical energies for N={n_to_json(N)}", config,
        params={"hbar": params.hbar, "mass": params.mass, "a": params.a, "mu": params.mu},
        energy_scale=params.energy_scale,
        beta=None if math.isinf(N) else beta_of(N),
        sigma=sigma(params, N),
        partition=partition(N).describe(),
    )
    return {"meta": meta, "rows": rows}, EXIT_OK


def fd_order_study(points: Sequence[int] = (1023, 2047, 4095), half_width: float = 8.0) -> list[dict]:
    """lambda_1 error of the N = 2 well (exact value 1) as the FD grid is halved."""
    spec = PotentialSpec.monomial(2)
    out = []
    prev = None
    for p in points:
        err = abs(fd_spectrum(fd_assemble(spec, half_width, p), 1)[0] - 1.0)
        out.append({"points": p, "error": err, "ratio": None if prev is None else prev / err})
        prev = err
    return out


def run_audit(config: ReportConfig) -> tuple[dict, int]:
    """Cross-engine agreement, FD convergence order and the variational inequality."""
    finite = [N for N in config.N_values if math.isfinite(N)]
    status = EXIT_OK
    checks = []
    rows = []
    try:
        pairs = parallel_map(
            lambda N: (solve_spectrum(PotentialSpec.monomial(N), config.levels, config.policy),
                       solve_spectrum_fd(PotentialSpec.monomial(N), config.levels, config.policy, config.fd_points)),
            finite,
        )
    except FlatwellError as exc:
        checks.append({"name": "solve", "passed": False, "detail": str(exc)})
        return {"meta": _meta("audit", "Audit", config), "rows": [], "fd_order": [],
                "variational": [], "checks": checks}, EXIT_CONVERGENCE
    worst = 0.0
    for N, (spec_res, fd_res) in zip(finite, pairs):
        for (n, a), (_, b) in zip(spec_res.levels, fd_res.levels):
            rel = abs(a - b) / abs(a)
            worst = max(worst, rel)
            rows.append({"n": n, "N": n_to_json(N), "spectral": a, "fd": b, "rel_diff": rel})
    ok = worst <= 5e-3
    checks.append({"name": "engine agreement", "passed": ok, "detail": f"max relative difference {worst:.2e} (limit 5e-3)"})

    order = fd_order_study()
    ratios = [r["ratio"] for r in order if r["ratio"] is not None]
    order_ok = all(3.6 <= q <= 4.4 for q in ratios)
    checks.append({"name": "fd second order", "passed": order_ok,
                   "detail": "error ratios " + ", ".join(f"{q:.3f}" for q in ratios) + " (expect 3.6-4.4)"})

    lam1 = {N: res.levels[0][1] for N, (res, _) in zip(finite, pairs)}
    var_rows = []
    violation = False
    for N in finite:
        for fam in CANDIDATE_FAMILIES:
            bound = minimize_bound(fam, N).energy_bound
            gap = bound - lam1[N]
            violation |= gap < -THEOREM_SLACK
            var_rows.append({"N": n_to_json(N), "family": fam.name, "bound": bound, "lambda1": lam1[N],
                             "relative_gap": gap / lam1[N]})
    checks.append({"name": "variational upper bound", "passed": not violation,
                   "detail": f"every bound >= lambda_1 - {THEOREM_SLACK:g}"})
    gauss = [r["relative_gap"] for r in var_rows if r["family"] == GAUSSIAN.name]
    widening = all(b > a for a, b in zip(gauss, gauss[1:]))
    checks.append({"name": "gaussian gap widens with N", "passed": widening, "detail": "relative gap strictly increasing"})

    if violation:
        status = EXIT_VARIATIONAL
    elif not (ok and order_ok and widening):
        status = EXIT_CONVERGENCE
    meta = _meta("audit", "Audit", config)
    return {"meta": meta, "rows": rows, "fd_order": order, "variational": var_rows, "checks": checks}, status


RUNNERS = {
    "table2": run_table2,
    "table1": run_table1,
    "spectrum": run_spectrum,
    "converge": run_converge,
    "physical": run_physical,
    "audit": run_audit,
}


def run(config: ReportConfig) -> tuple[dict, int]:
    try:
        runner = RUNNERS[config.command]
    except KeyError:
        raise InvalidArgumentError(f"unknown command {config.command!r}") from None
    return runner(config)


__all__ = [
    "ReportConfig",
    "run",
    "run_table1",
    "run_table2",
    "run_spectrum",
    "run_converge",
    "run_physical",
    "run_audit",
]
