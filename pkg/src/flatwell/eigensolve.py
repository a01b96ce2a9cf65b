"""Dense real eigenvalue solver: balancing, Hessenberg reduction, Francis QR.

Only eigenvalues are computed. The collocation Hamiltonian is nonsymmetric,
so the full nonsymmetric machinery is needed even though every eigenvalue of
the underlying operator is real; complex output is treated as a defect.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    EigenNonConvergenceError,
    InvalidArgumentError,
    SpuriousComplexEigenvalueError,
)

DEFAULT_IMAG_TOLERANCE = 1e-8
_EPS = np.finfo(float).eps
_RADIX = 2.0


@dataclass(frozen=True, eq=False)
class EigenReport:
    eigenvalues_real: np.ndarray
    max_abs_imag: float
    iterations: int
    converged: bool

    def __len__(self):
        return len(self.eigenvalues_real)


def balance(A: np.ndarray) -> np.ndarray:
    """Parlett-Reinsch balancing by powers of two (returns a new matrix).

    Row and column norms are equalised by a diagonal similarity, which leaves
    the spectrum unchanged but reduces the norm QR rounding errors scale with.
    """
    A = np.array(A, dtype=float)
    n = A.shape[0]
    sq = _RADIX * _RADIX
    done = False
    while not done:
        done = True
        for i in range(n):
            c = np.abs(A[:, i]).sum() - abs(A[i, i])
            r = np.abs(A[i, :]).sum() - abs(A[i, i])
            if c == 0.0 or r == 0.0:
                continue
            g = r / _RADIX
            f = 1.0
            s = c + r
            while c < g:
                f *= _RADIX
                c *= sq
            g = r * _RADIX
            while c > g:
                f /= _RADIX
                c /= sq
            if (c + r) / f < 0.95 * s:
                done = False
                A[i, :] /= f
                A[:, i] *= f
    return A


def _householder(x: np.ndarray) -> np.ndarray | None:
    """Unit v with (I - 2vv^T)x parallel to e_1, or None if x is zero."""
    alpha = math.sqrt(float(x @ x))
    if alpha == 0.0:
        return None
    v = np.array(x, dtype=float)
    v[0] += math.copysign(alpha, v[0])
    nv = math.sqrt(float(v @ v))
    return v / nv


def hessenberg(A: np.ndarray) -> np.ndarray:
    """Orthogonal reduction to upper Hessenberg form (Householder reflectors)."""
    H = np.array(A, dtype=float)
    n = H.shape[0]
    for k in range(n - 2):
        v = _householder(H[k + 1 :, k])
        if v is None:
            continue
        H[k + 1 :, k:] -= 2.0 * np.outer(v, v @ H[k + 1 :, k:])
        H[:, k + 1 :] -= 2.0 * np.outer(H[:, k + 1 :] @ v, v)
        H[k + 2 :, k] = 0.0
    return H


def _eig2(a: float, b: float, c: float, d: float) -> tuple[complex, complex]:
    p = 0.5 * (a - d)
    disc = p * p + b * c
    mid = 0.5 * (a + d)
    if disc >= 0.0:
        root = math.sqrt(disc)
        # avoid cancellation: take the larger-magnitude root, recover the other from det
        l1 = mid + math.copysign(root, mid) if mid != 0.0 else root
        det = a * d - b * c
        l2 = det / l1 if l1 != 0.0 else mid - root
        return complex(l1), complex(l2)
    root = math.sqrt(-disc)
    return complex(mid, root), complex(mid, -root)


def hqr(H: np.ndarray, max_iterations: int | None = None) -> tuple[np.ndarray, int]:
    """Eigenvalues of an upper Hessenberg matrix by Francis double-shift QR.

    Returns ``(eigenvalues, sweeps)``. Raises EigenNonConvergenceError when
    the total sweep count exceeds ``max_iterations`` (default 100 * n).
    """
    H = np.array(H, dtype=float)
    n = H.shape[0]
    if max_iterations is None:
        max_iterations = 100 * n
    eig = np.full(n, np.nan, dtype=complex)
    anorm = np.abs(H).sum() or 1.0
    hi = n - 1
    its = 0
    total = 0
    while hi >= 0:
        # look for a negligible subdiagonal entry
        l = hi
        while l > 0:
            s = abs(H[l - 1, l - 1]) + abs(H[l, l])
            if s == 0.0:
                s = anorm
            if abs(H[l, l - 1]) <= _EPS * s:
                H[l, l - 1] = 0.0
                break
            l -= 1

        if l == hi:
            eig[hi] = H[hi, hi]
            hi -= 1
            its = 0
            continue
        if l == hi - 1:
            e1, e2 = _eig2(H[hi - 1, hi - 1], H[hi - 1, hi], H[hi, hi - 1], H[hi, hi])
            eig[hi - 1], eig[hi] = e1, e2
            hi -= 2
            its = 0
            continue

        if total >= max_iterations:
            raise EigenNonConvergenceError(
                f"QR failed to deflate eigenvalue {hi} after {total} sweeps",
                partial=EigenReport(
                    eigenvalues_real=np.sort(eig[hi + 1 :].real),
                    max_abs_imag=float(np.abs(eig[hi + 1 :].imag).max(initial=0.0)),
                    iterations=total,
                    converged=False,
                ),
            )

        if its > 0 and its % 10 == 0:
            # exceptional shift breaks cycles
            s = abs(H[hi, hi - 1]) + abs(H[hi - 1, hi - 2])
            tr = 1.5 * s + H[hi, hi]
            det = s * s
        else:
            tr = H[hi - 1, hi - 1] + H[hi, hi]
            det = H[hi - 1, hi - 1] * H[hi, hi] - H[hi - 1, hi] * H[hi, hi - 1]

        x = H[l, l] * H[l, l] + H[l, l + 1] * H[l + 1, l] - tr * H[l, l] + det
        y = H[l + 1, l] * (H[l, l] + H[l + 1, l + 1] - tr)
        z = H[l + 1, l] * H[l + 2, l + 1]
        for k in range(l, hi - 1):
            v = _householder(np.array([x, y, z]))
            if v is not None:
                r = max(l, k - 1)
                blk = H[k : k + 3, r : hi + 1]
                blk -= 2.0 * np.outer(v, v @ blk)
                rr = min(k + 3, hi)
                blk = H[l : rr + 1, k : k + 3]
                blk -= 2.0 * np.outer(blk @ v, v)
            x = H[k + 1, k]
            y = H[k + 2, k]
            if k < hi - 2:
                z = H[k + 3, k]
        v = _householder(np.array([x, y]))
        if v is not None:
            blk = H[hi - 1 : hi + 1, hi - 2 : hi + 1]
            blk -= 2.0 * np.outer(v, v @ blk)
            blk = H[l : hi + 1, hi - 1 : hi + 1]
            blk -= 2.0 * np.outer(blk @ v, v)
        its += 1
        total += 1
    return eig, total


def eigenvalues(A: np.ndarray, max_iterations: int | None = None) -> tuple[np.ndarray, int]:
    """All (complex) eigenvalues of a dense real square matrix."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise InvalidArgumentError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise InvalidArgumentError("matrix contains non-finite entries")
    return hqr(hessenberg(balance(A)), max_iterations)


def real_eigenvalues(
    matrix: np.ndarray,
    imag_tolerance: float = DEFAULT_IMAG_TOLERANCE,
    max_iterations: int | None = None,
) -> EigenReport:
    """Full spectrum of ``matrix``, asserted real, sorted ascending.

    An eigenvalue is accepted when |imag| <= imag_tolerance * (1 + |real|).
    """
    if not imag_tolerance > 0:
        raise InvalidArgumentError("imag_tolerance must be positive")
    eig, sweeps = eigenvalues(matrix, max_iterations)
    rel = np.abs(eig.imag) / (1.0 + np.abs(eig.real))
    worst = int(np.argmax(rel))
    if rel[worst] > imag_tolerance:
        raise SpuriousComplexEigenvalueError(
            f"eigenvalue {eig[worst]:.6g} has relative imaginary part {rel[worst]:.3g}"
            f" > {imag_tolerance:g}",
            eigenvalue=complex(eig[worst]),
        )
    return EigenReport(
        eigenvalues_real=np.sort(eig.real),
        max_abs_imag=float(np.abs(eig.imag).max()),
        iterations=sweeps,
        converged=True,
    )


def smallest_k(report: EigenReport, k: int) -> np.ndarray:
    if not report.converged:
        raise InvalidArgumentError("report did not converge; refusing to extract eigenvalues")
    if k < 1 or k > len(report.eigenvalues_real):
        raise InvalidArgumentError(
            f"k must be in [1, {len(report.eigenvalues_real)}], got {k}"
        )
    return report.eigenvalues_real[:k].copy()
