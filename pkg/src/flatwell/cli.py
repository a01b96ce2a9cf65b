"""Command-line interface.

Usage:
    flatwell table2                       # reproduce the six-level spectrum table
    flatwell table1                       # trial-function bounds vs numerical ground state
    flatwell spectrum --N 4 --levels 8    # one potential
    flatwell converge --N 8               # node-escalation study
    flatwell physical --hbar 1 --mass 0.5 --a 1 --mu 16 --N 2
    flatwell audit                        # cross-engine and variational checks

Exit codes: 0 success, 2 usage error, 3 convergence failure,
4 variational-theorem violation.
"""

from __future__ import annotations

import logging
import math
import sys
from pathlib import Path

import click

from .exceptions import InvalidArgumentError
from .nondim import PhysicalParams
from .pipeline import ConvergencePolicy
from .render import render
from .report import ReportConfig, run

REFERENCE_N = "2..8,inf"
FINITE_N = "2..8"


def parse_N_list(text: str, allow_real: bool = False) -> tuple[float, ...]:
    """Parse ``2..8,inf`` style lists: comma-separated values and inclusive integer ranges.

    >>> parse_N_list("2..4,inf")
    (2.0, 3.0, 4.0, inf)
    """
    out: list[float] = []
    for part in text.split(","):
        part = part.strip().lower()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            try:
                a, b = int(lo), int(hi)
            except ValueError:
                raise click.BadParameter(f"range {part!r} needs integer ends") from None
            if b < a:
                raise click.BadParameter(f"empty range {part!r}")
            out.extend(float(v) for v in range(a, b + 1))
            continue
        if part in ("inf", "infinity", "∞"):
            out.append(math.inf)
            continue
        try:
            v = float(part)
        except ValueError:
            raise click.BadParameter(f"cannot read exponent {part!r}") from None
        if not v.is_integer() and not allow_real:
            raise click.BadParameter(f"N={part} is not an integer (pass --allow-real-N to permit it)")
        out.append(v)
    if not out:
        raise click.BadParameter("no exponents given")
    for v in out:
        if v < 2:
            raise click.BadParameter(f"N must be >= 2, got {v:g}")
    return tuple(out)


def parse_nodes(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise click.BadParameter(f"node counts must be integers, got {text!r}") from None


def common_options(default_N: str | None):
    # click 8.4 ignores required=True when default=None is passed explicitly
    n_kw = {"required": True} if default_N is None else {"default": default_N, "show_default": True}

    def wrap(f):
        opts = [
            click.option("--N", "N_text", help="Exponents: comma list, a..b ranges, 'inf' for the infinite well.", **n_kw),
            click.option("--levels", default=6, show_default=True, help="Number of levels n = 1..k."),
            click.option("--nodes", default="36,60,80", show_default=True, help="Node-count escalation."),
            click.option("--sig-figs", default=4, show_default=True, help="Required agreement between the last two grids."),
            click.option("--half-width", type=float, default=None, help="Fix the box half-width L instead of choosing it."),
            click.option("--margin", type=float, default=1.5, show_default=True, help="Half-width safety margin."),
            click.option("--engine", type=click.Choice(["spectral", "fd", "both"]), default="spectral", show_default=True),
            click.option("--fd-points", default=8000, show_default=True, help="Interior points for the finite-difference engine."),
            click.option("--format", "fmt", type=click.Choice(["md", "csv", "json"]), default="md", show_default=True),
            click.option("--out", "out_path", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout."),
            click.option("--allow-real-N", is_flag=True, help="Accept non-integer exponents."),
        ]
        for opt in reversed(opts):
            f = opt(f)
        return f
    return wrap


def _build_config(command: str, N_text, levels, nodes, sig_figs, half_width, margin, engine,
                  fd_points, fmt, out_path, allow_real_n, physical=None) -> ReportConfig:
    try:
        policy = ConvergencePolicy(
            node_counts=parse_nodes(nodes), sig_figs=sig_figs,
            halfwidth_margin=margin, half_width=half_width,
        )
        return ReportConfig(
            command=command, N_values=parse_N_list(N_text, allow_real_n), levels=levels,
            policy=policy, engine=engine, output_format=fmt, output_path=out_path,
            fd_points=fd_points, physical=physical,
        )
    except InvalidArgumentError as exc:
        raise click.UsageError(str(exc)) from None


def _execute(config: ReportConfig) -> None:
    try:
        payload, status = run(config)
    except InvalidArgumentError as exc:
        raise click.UsageError(str(exc)) from None
    text = render(payload, config.output_format)
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)
    sys.exit(status)


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress to stderr (-vv for debug).")
@click.version_option(package_name="flatwell")
def cli(verbose: int) -> None:
    """Energy eigenvalue spectra for the potentials |x|^N."""
    level = logging.WARNING - 10 * min(verbose, 2)
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


@cli.command()
@common_options(REFERENCE_N)
def table2(**kw):
    """Spectrum table: rows n = 1..k, one column per N."""
    _execute(_build_config("table2", **kw))


@cli.command()
@common_options(FINITE_N)
def table1(**kw):
    """Ground state: trial-function bounds next to the numerical value."""
    _execute(_build_config("table1", **kw))


@cli.command()
@common_options(None)
def spectrum(**kw):
    """Lowest levels for the given N."""
    _execute(_build_config("spectrum", **kw))


@cli.command()
@common_options(None)
def converge(**kw):
    """Eigenvalues on each grid of the escalation and the digits they share."""
    _execute(_build_config("converge", **kw))


@cli.command()
@click.option("--hbar", type=float, required=True)
@click.option("--mass", type=float, required=True)
@click.option("--a", "a_len", type=float, required=True, help="Length scale a.")
@click.option("--mu", type=float, required=True, help="Potential strength (energy).")
@common_options(None)
def physical(hbar, mass, a_len, mu, **kw):
    """Map lambda_n to energies in the caller's units."""
    try:
        params = PhysicalParams(hbar=hbar, mass=mass, a=a_len, mu=mu)
    except InvalidArgumentError as exc:
        raise click.UsageError(str(exc)) from None
    _execute(_build_config("physical", physical=params, **kw))


@cli.command()
@common_options(FINITE_N)
def audit(**kw):
    """Spectral vs finite differences, FD order, and variational bounds."""
    _execute(_build_config("audit", **kw))


def main() -> None:
    cli(prog_name="flatwell")


if __name__ == "__main__":
    main()
