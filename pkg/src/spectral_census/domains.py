"""Axis-aligned boxes: Fourier transform of the indicator and boundary layers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .quadrature import sphere_latlong_angles

# surface measure of the unit sphere S^{d-1} in R^d
SPHERE_AREA = {2: 2.0 * np.pi, 3: 4.0 * np.pi}


@dataclass(frozen=True)
class BoxDomain:
    """The box ``[0, L_1] x ... x [0, L_d]``."""

    lengths: tuple[float, ...]

    def __post_init__(self):
        lengths = tuple(float(v) for v in np.atleast_1d(self.lengths))
        if len(lengths) not in (2, 3):
            raise UsageError("boxes are supported in dimensions 2 and 3")
        if any(v <= 0 for v in lengths):
            raise UsageError("box side lengths must be positive")
        object.__setattr__(self, "lengths", lengths)

    @property
    def dim(self) -> int:
        return len(self.lengths)

    @property
    def volume(self) -> float:
        return float(np.prod(self.lengths))


def chi_hat_box(box: BoxDomain, theta) -> np.ndarray | complex:
    """``int_box exp(i theta.x) dx`` for ``theta`` of shape ``(..., d)``.

    The sign of the exponent is the one for which, with
    ``f_u(x) = sum_k exp(-i x.xi_k) u_k``, the quadratic form of ``f_u`` on
    the box equals ``(K u, u) / 2`` exactly (see ``verify_kc_identity``).
    The other sign gives the complex conjugate; moduli, zeros and the
    spectrum of ``K`` are the same either way.

    Each factor ``(exp(i t L) - 1) / (i t)`` is evaluated as
    ``exp(i t L/2) L sinc(t L / 2pi)``, which is smooth through ``t = 0``.
    """
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != box.dim:
        raise UsageError(f"theta must have trailing dimension {box.dim}")
    out = np.ones(theta.shape[:-1], dtype=complex)
    for j, L in enumerate(box.lengths):
        t = theta[..., j]
        out = out * (np.exp(0.5j * t * L) * (L * np.sinc(t * L / (2.0 * np.pi))))
    return complex(out) if out.ndim == 0 else out


def boundary_layer_volume(box: BoxDomain, lam: float) -> float:
    """Volume of ``{x in box : dist(x, boundary) < 1/lam}``."""
    if lam <= 0:
        raise UsageError("lambda must be positive")
    inner = np.prod([max(L - 2.0 / lam, 0.0) for L in box.lengths])
    return box.volume - float(inner)


def direction_grid(d: int, n: int | None = None) -> np.ndarray:
    """Unit directions: ``n`` uniform angles (d=2) or an ``n x n`` lat-long grid (d=3)."""
    if d == 2:
        n = 256 if n is None else n
        ang = 2.0 * np.pi * np.arange(n) / n
        return np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    if d == 3:
        n = 64 if n is None else n
        a, p, _ = sphere_latlong_angles(n, n)
        return np.stack([np.sin(p) * np.cos(a), np.sin(p) * np.sin(a), np.cos(p)], axis=-1)
    raise UsageError("direction grids exist for d in {2, 3}")


def inf_chi_hat_sq(box: BoxDomain, r: float, n_dir: int | None = None) -> float:
    """Minimum of ``|chi_hat|^2`` over the sphere ``|theta| = r`` sampled on a direction grid."""
    dirs = direction_grid(box.dim, n_dir)
    return float(np.min(np.abs(chi_hat_box(box, r * dirs)) ** 2))
