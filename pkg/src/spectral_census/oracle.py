"""Brute-force ground truth: Nystrom discretization and eigenvalue counting.

The counting function here is only ever a finite-grid quantity.  For the
continuous operator the count is read off in the refinement limit; a single
fixed grid certifies nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import UsageError
from .kernels import KernelSpec
from .quadrature import Quadrature

HERMITIAN_TOL = 1e-10
DEFAULT_GUARD = 1e-9


def hermitian_residual(A: np.ndarray) -> float:
    A = np.asarray(A)
    return float(np.max(np.abs(A - A.conj().T))) if A.size else 0.0


def check_hermitian(A, tol: float = HERMITIAN_TOL) -> np.ndarray:
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {A.shape}")
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    if hermitian_residual(A) > tol * scale:
        raise UsageError("matrix is not Hermitian")
    return A


def hermitize(M: np.ndarray) -> np.ndarray:
    """Mirror the upper triangle so the result is exactly Hermitian."""
    upper = np.triu(M, 1)
    diag = np.diag(np.real(np.diag(M)))
    out = upper + upper.conj().T + diag
    return out.real if not np.iscomplexobj(M) else out


def nystrom_matrix(k: KernelSpec, q: Quadrature) -> np.ndarray:
    """Symmetrized Nystrom matrix ``sqrt(w_i w_j) K(x_i, x_j)``."""
    if q.dim != k.dim:
        raise UsageError(f"quadrature dimension {q.dim} does not match kernel dimension {k.dim}")
    s = np.sqrt(q.weights)
    A = s[:, None] * k.matrix(q.nodes) * s[None, :]
    if k.is_real:
        A = np.real(A)
    return hermitize(A)


def eigenvalues_hermitian(A) -> np.ndarray:
    A = check_hermitian(A)
    return np.linalg.eigvalsh(A)


def inertia_ldl(A) -> tuple[int, int, int]:
    """(negative, zero, positive) counts via Bunch-Kaufman LDL^H with symmetric pivoting.

    An independent route to the inertia: by Sylvester's law the signs of the
    pivot blocks of ``D`` match those of the eigenvalues of ``A``.
    """
    A = np.array(check_hermitian(A), dtype=complex if np.iscomplexobj(A) else float)
    n = A.shape[0]
    alpha = (1.0 + np.sqrt(17.0)) / 8.0
    neg = zero = pos = 0
    k = 0
    while k < n:
        absakk = abs(A[k, k].real)
        if k + 1 < n:
            col = np.abs(A[k + 1:, k])
            imax = k + 1 + int(np.argmax(col))
            colmax = float(col[imax - k - 1])
        else:
            imax, colmax = k, 0.0
        if max(absakk, colmax) == 0.0:
            zero += 1
            k += 1
            continue
        if absakk >= alpha * colmax:
            kp, step = k, 1
        else:
            row = np.abs(A[imax, k:])
            row[imax - k] = 0.0
            rowmax = float(np.max(row))
            if absakk * rowmax >= alpha * colmax * colmax:
                kp, step = k, 1
            elif abs(A[imax, imax].real) >= alpha * rowmax:
                kp, step = imax, 1
            else:
                kp, step = imax, 2
        kk = k + step - 1
        if kp != kk:
            A[[kk, kp], k:] = A[[kp, kk], k:]
            A[k:, [kk, kp]] = A[k:, [kp, kk]]
        if step == 1:
            d = A[k, k].real
            if d < 0:
                neg += 1
            elif d > 0:
                pos += 1
            else:
                zero += 1
            v = A[k + 1:, k].copy()
            A[k + 1:, k + 1:] -= np.outer(v, v.conj()) / d
        else:
            D = A[k:k + 2, k:k + 2].copy()
            det = (D[0, 0] * D[1, 1] - D[0, 1] * D[1, 0]).real
            tr = (D[0, 0] + D[1, 1]).real
            if det < 0:
                neg += 1
                pos += 1
            elif det > 0:
                neg, pos = (neg + 2, pos) if tr < 0 else (neg, pos + 2)
            else:
                zero += 1
                neg, pos = (neg + 1, pos) if tr < 0 else (neg, pos + 1)
            C = A[k + 2:, k:k + 2].copy()
            A[k + 2:, k + 2:] -= C @ np.linalg.solve(D, C.conj().T)
        k += step
    return neg, zero, pos


@dataclass
class SpectralResult:
    eigenvalues: np.ndarray
    grid_size: int
    t: float
    guard: float
    count_below_t: int
    boundary_warning: bool
    # eigenvalues within the guard band of 0 when t == 0 (spectral accumulation point)
    near_zero: int = 0

    def to_dict(self, with_eigenvalues: bool = False) -> dict:
        out = {
            "grid_size": self.grid_size,
            "t": self.t,
            "guard": self.guard,
            "count_below_t": self.count_below_t,
            "boundary_warning": self.boundary_warning,
            "near_zero": self.near_zero,
            "min_eigenvalue": float(self.eigenvalues[0]) if len(self.eigenvalues) else None,
        }
        if with_eigenvalues:
            out["eigenvalues"] = self.eigenvalues.tolist()
        return out


def count_from_eigenvalues(eigs, t: float, guard: float | None = None, grid_size: int | None = None) -> SpectralResult:
    """Strict count of eigenvalues below ``t - guard`` with boundary flagging.

    ``guard`` defaults to ``1e-9 * max|lambda|``.  Eigenvalues in the band
    ``[t - guard, t + guard]`` raise ``boundary_warning``, except when
    ``t == 0``: zero is the accumulation point of every compact operator's
    spectrum, so a band around it is always populated on fine grids.  Those
    eigenvalues are tallied in ``near_zero`` and never counted.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if guard is None:
        guard = DEFAULT_GUARD * (float(np.max(np.abs(eigs))) if eigs.size else 0.0)
    if guard < 0:
        raise UsageError("guard must be nonnegative")
    count = int(np.sum(eigs < t - guard))
    in_band = int(np.sum((eigs >= t - guard) & (eigs <= t + guard)))
    if t == 0:
        warning, near_zero = False, in_band
    else:
        warning, near_zero = in_band > 0, 0
    return SpectralResult(eigs, len(eigs) if grid_size is None else grid_size, float(t), float(guard),
                          count, warning, near_zero)


def count_below(k: KernelSpec, q: Quadrature, t: float, guard: float | None = None) -> SpectralResult:
    eigs = eigenvalues_hermitian(nystrom_matrix(k, q))
    return count_from_eigenvalues(eigs, t, guard, grid_size=len(q))


@dataclass
class RefinementStudy:
    results: list[SpectralResult] = field(default_factory=list)

    @property
    def counts(self) -> list[int]:
        return [r.count_below_t for r in self.results]

    @property
    def converged(self) -> bool:
        if len(self.results) < 2:
            return False
        a, b = self.results[-2:]
        return a.count_below_t == b.count_below_t and not (a.boundary_warning or b.boundary_warning)

    @property
    def final_count(self) -> int:
        return self.results[-1].count_below_t

    def to_dict(self) -> dict:
        return {
            "counts": self.counts,
            "converged": self.converged,
            "grids": [r.to_dict() for r in self.results],
        }


def refine_and_count(k: KernelSpec, q_seq, t: float, guard: float | None = None) -> RefinementStudy:
    q_seq = list(q_seq)
    if len(q_seq) < 2:
        raise UsageError("refinement needs at least two grids")
    sizes = [len(q) for q in q_seq]
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise UsageError("grids must be strictly increasing in size")
    return RefinementStudy([count_below(k, q, t, guard) for q in q_seq])
