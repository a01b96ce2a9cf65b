"""Chebyshev collocation grids and the Dirichlet second-derivative operator."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import InvalidArgumentError

# one interior node at least; ConvergencePolicy demands far more for real work
MIN_NODE_COUNT = 2


@dataclass(frozen=True)
class GridSpec:
    """Collocation grid on [-half_width, half_width].

    ``node_count`` is the number of intervals, so the grid has
    ``node_count + 1`` points including both walls.
    """

    node_count: int
    half_width: float

    def __post_init__(self):
        if int(self.node_count) != self.node_count or self.node_count < MIN_NODE_COUNT:
            raise InvalidArgumentError(
                f"node_count must be an integer >= {MIN_NODE_COUNT}, got {self.node_count}"
            )
        if not np.isfinite(self.half_width) or self.half_width <= 0:
            raise InvalidArgumentError(f"half_width must be positive, got {self.half_width}")


@dataclass(frozen=True, eq=False)
class ChebOperators:
    grid: GridSpec
    nodes_interior: np.ndarray
    d2_interior: np.ndarray

    def __post_init__(self):
        self.nodes_interior.setflags(write=False)
        self.d2_interior.setflags(write=False)


def cheb_points(node_count: int) -> np.ndarray:
    """Chebyshev extreme points cos(j*pi/n), j = 0..n (decreasing from 1 to -1)."""
    if node_count < 1:
        raise InvalidArgumentError(f"node_count must be >= 1, got {node_count}")
    j = np.arange(node_count + 1)
    # sin form is exactly antisymmetric about the midpoint, unlike cos(j*pi/n)
    return np.sin(np.pi * (node_count - 2 * j) / (2 * node_count))


def cheb_diff_matrix(node_count: int) -> np.ndarray:
    """First-derivative collocation matrix on the Chebyshev points.

    Off-diagonal entries are (c_i/c_j)(-1)^(i+j)/(x_i - x_j) with c = 2 at
    the endpoints and 1 elsewhere; the diagonal is the negative row sum.
    """
    x = cheb_points(node_count)
    n = node_count
    c = np.ones(n + 1)
    c[0] = c[-1] = 2.0
    c *= (-1.0) ** np.arange(n + 1)
    dx = x[:, None] - x[None, :]
    D = np.outer(c, 1.0 / c) / (dx + np.eye(n + 1))
    np.fill_diagonal(D, 0.0)
    np.fill_diagonal(D, -D.sum(axis=1))
    return D


def build_operators(grid: GridSpec) -> ChebOperators:
    """Scale to [-L, L], square D and strip the wall rows/columns (psi(+-L) = 0)."""
    L = float(grid.half_width)
    D = cheb_diff_matrix(grid.node_count)
    d2 = (D @ D) / L**2
    nodes = L * cheb_points(grid.node_count)
    return ChebOperators(
        grid=grid,
        nodes_interior=np.ascontiguousarray(nodes[1:-1]),
        d2_interior=np.ascontiguousarray(d2[1:-1, 1:-1]),
    )
