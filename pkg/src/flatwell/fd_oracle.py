"""Second-order finite differences + Sturm bisection, an independent check.

Shares no code with the collocation path: uniform grid instead of Chebyshev
nodes, a symmetric tridiagonal matrix instead of a dense one, and bisection
instead of QR.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import BisectionError, InvalidArgumentError
from .operators import PotentialSpec, potential_eval

DEFAULT_POINTS = 8000
BISECTION_WIDTH = 1e-10


@dataclass(frozen=True, eq=False)
class TridiagonalSystem:
    diagonal: np.ndarray
    offdiagonal: np.ndarray
    step: float

    def __post_init__(self):
        if len(self.offdiagonal) != max(len(self.diagonal) - 1, 0):
            raise InvalidArgumentError("offdiagonal must be one shorter than diagonal")

    @property
    def dimension(self) -> int:
        return len(self.diagonal)


def fd_assemble(spec: PotentialSpec, half_width: float, points: int = DEFAULT_POINTS) -> TridiagonalSystem:
    """Three-point Laplacian on ``points`` interior nodes of (-L, L), walls at +-L.

    Anything below ~100 points is only useful for checking the assembly.
    """
    if points < 1:
        raise InvalidArgumentError(f"points must be >= 1, got {points}")
    if half_width <= 0:
        raise InvalidArgumentError(f"half_width must be positive, got {half_width}")
    h = 2.0 * half_width / (points + 1)
    diag = np.full(points, 2.0 / h**2)
    if spec.is_infinite_well:
        if half_width != 1.0:
            raise InvalidArgumentError(f"infinite well requires half_width = 1, got {half_width}")
    else:
        xi = -half_width + h * np.arange(1, points + 1)
        diag = diag + potential_eval(spec, xi)
    return TridiagonalSystem(diagonal=diag, offdiagonal=np.full(points - 1, -1.0 / h**2), step=h)


def sturm_count(diagonal, offdiagonal_sq, x: float) -> int:
    """Number of eigenvalues strictly below ``x``.

    Counts negative pivots of the LDL^T factorisation of T - xI.
    ``offdiagonal_sq`` holds the squared off-diagonal entries.
    """
    count = 0
    q = 1.0
    tiny = 1e-300
    prev_e2 = 0.0
    for d, e2 in zip(diagonal, offdiagonal_sq):
        q = d - x - prev_e2 / q
        if q == 0.0:
            q = -tiny
        if q < 0.0:
            count += 1
        prev_e2 = e2
    return count


def gershgorin_bounds(diagonal: np.ndarray, offdiagonal: np.ndarray) -> tuple[float, float]:
    radius = np.zeros(len(diagonal))
    a = np.abs(offdiagonal)
    radius[:-1] += a
    radius[1:] += a
    lo = float(np.min(diagonal - radius))
    hi = float(np.max(diagonal + radius))
    pad = 1e-12 * max(abs(lo), abs(hi), 1.0)
    return lo - pad, hi + pad


def bisect_eigenvalues(diagonal, offdiagonal, k: int, width: float = BISECTION_WIDTH) -> np.ndarray:
    """The k smallest eigenvalues of a symmetric tridiagonal matrix, ascending."""
    diagonal = [float(d) for d in diagonal]
    n = len(diagonal)
    if k < 1 or k > n:
        raise InvalidArgumentError(f"k must be in [1, {n}], got {k}")
    # e2[i] couples row i to row i+1; the trailing 0 pads zip() to full length
    e2 = [float(e) ** 2 for e in offdiagonal] + [0.0]
    lo0, hi0 = gershgorin_bounds(np.asarray(diagonal), np.asarray(offdiagonal, dtype=float))
    if sturm_count(diagonal, e2, lo0) != 0 or sturm_count(diagonal, e2, hi0) != n:
        raise BisectionError("Gershgorin interval does not bracket the spectrum")

    out = np.empty(k)
    lower = lo0
    for j in range(k):
        # eigenvalue j (0-based) is the smallest x with count(x) > j
        a, b = lower, hi0
        while b - a > width:
            mid = 0.5 * (a + b)
            if mid == a or mid == b:
                break
            if sturm_count(diagonal, e2, mid) > j:
                b = mid
            else:
                a = mid
        out[j] = 0.5 * (a + b)
        lower = a
    return out


def fd_spectrum(system: TridiagonalSystem, k: int) -> np.ndarray:
    """The k smallest eigenvalues of ``system``, each bracketed to 1e-10."""
    return bisect_eigenvalues(system.diagonal, system.offdiagonal, k)
