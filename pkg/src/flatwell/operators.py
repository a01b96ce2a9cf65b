"""Potential family |xi|^N and the nondimensional Hamiltonian -d^2/dxi^2 + |xi|^N."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .exceptions import InvalidArgumentError
from .grid import ChebOperators, GridSpec


@dataclass(frozen=True)
class PotentialSpec:
    """Which well to solve.

    ``N`` is the monomial exponent for ``kind == "monomial"``. The infinite
    square well has no pointwise potential: it is V = 0 inside hard walls at
    +-1, and its ``N`` is ``math.inf``.

    ``hook`` optionally replaces |xi|^N by an arbitrary even, nonnegative
    function; only the monomial family is tested.
    """

    kind: str
    N: float
    hook: Callable[[np.ndarray], np.ndarray] | None = None

    def __post_init__(self):
        if self.kind == "monomial":
            if not math.isfinite(self.N) or self.N < 2:
                raise InvalidArgumentError(f"monomial exponent must be finite and >= 2, got {self.N}")
        elif self.kind == "infinite_well":
            if self.N != math.inf:
                raise InvalidArgumentError("infinite well must carry N = inf")
        else:
            raise InvalidArgumentError(f"unknown potential kind {self.kind!r}")

    @classmethod
    def monomial(cls, N: float) -> "PotentialSpec":
        return cls("monomial", float(N))

    @classmethod
    def infinite_well(cls) -> "PotentialSpec":
        return cls("infinite_well", math.inf)

    @classmethod
    def from_exponent(cls, N: float) -> "PotentialSpec":
        """Monomial for finite N, infinite well for N = inf."""
        return cls.infinite_well() if math.isinf(N) else cls.monomial(N)

    @property
    def is_infinite_well(self) -> bool:
        return self.kind == "infinite_well"

    @property
    def beta(self) -> float:
        return (self.N + 2.0) / 2.0

    @property
    def label(self) -> str:
        if self.is_infinite_well:
            return "inf"
        return str(int(self.N)) if float(self.N).is_integer() else repr(self.N)


@dataclass(frozen=True, eq=False)
class HamiltonianMatrix:
    matrix: np.ndarray
    grid: GridSpec
    potential: PotentialSpec


def potential_eval(spec: PotentialSpec, xi):
    """|xi|^N, elementwise on arrays. Undefined for the infinite well."""
    if spec.is_infinite_well:
        raise InvalidArgumentError("the infinite well has no pointwise potential; branch on spec.kind")
    if spec.hook is not None:
        return spec.hook(xi)
    return np.abs(xi) ** spec.N


def assemble(ops: ChebOperators, spec: PotentialSpec) -> HamiltonianMatrix:
    """Dense collocation Hamiltonian -d2 + diag(V) over the interior nodes."""
    H = -np.array(ops.d2_interior, dtype=float)
    if spec.is_infinite_well:
        if ops.grid.half_width != 1.0:
            raise InvalidArgumentError(
                f"infinite well requires half_width = 1, got {ops.grid.half_width}"
            )
    else:
        V = np.asarray(potential_eval(spec, ops.nodes_interior), dtype=float)
        H[np.diag_indices_from(H)] += V
    return HamiltonianMatrix(matrix=H, grid=ops.grid, potential=spec)
