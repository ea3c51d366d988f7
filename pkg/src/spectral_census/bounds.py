"""Lower bounds for the number of eigenvalues below t.

The central quantity is

    C_t(mu) = (sum_atoms w (t - kappa)_+)^2 / sum_{a,b} w_a w_b |K(x_a, x_b)|^2

where the double sum runs over the marginal of the symmetric measure mu.
The count of eigenvalues in (-inf, t) is at least 1/2 + C_t(mu)/16.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy import optimize

from .domains import SPHERE_AREA, BoxDomain, boundary_layer_volume, inf_chi_hat_sq
from .errors import AdmissibilityError, NotApplicableError, UsageError
from .kernels import HFunction, KernelSpec, as_points, kappa
from .measures import AtomicMeasure, SymmetricAtomicMeasure, marginal
from .quadrature import Quadrature

BLOCK = 1024
# denominators below this multiple of mass^2 mean the kernel vanishes on the support
DEGENERATE_TOL = 1e-24
TAIL_ZERO = 1e-14


class CtValue(NamedTuple):
    numerator: float
    denominator: float
    c: float

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.c)


def gram_sum(k: KernelSpec, points, weights, points2=None, weights2=None) -> float:
    """``sum_{a,b} w_a w_b |K(x_a, y_b)|^2``, blockwise with an exact final reduction."""
    x = as_points(points, k.dim)
    wx = np.asarray(weights, float)
    y, wy = (x, wx) if points2 is None else (as_points(points2, k.dim), np.asarray(weights2, float))
    partial = []
    for i in range(0, x.shape[0], BLOCK):
        blk = np.abs(k(x[i:i + BLOCK, None, :], y[None, :, :])) ** 2
        partial.append(float(wx[i:i + BLOCK] @ (blk @ wy)))
    return math.fsum(partial)


def marginal_gram(k: KernelSpec, mu: SymmetricAtomicMeasure) -> float:
    m = marginal(mu).merged()
    return gram_sum(k, m.points, m.weights)


def positive_part_integral(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float) -> float:
    if len(mu) == 0:
        return 0.0
    kap = kappa(k, mu.xi, mu.eta)
    return math.fsum(mu.weights * np.maximum(t - kap, 0.0))


def c_t(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float) -> CtValue:
    """Numerator, denominator and ratio ``C_t(mu)``.

    A denominator that vanishes (relative to ``mass^2``) means the kernel is
    zero on the marginal support; the ratio is then reported as ``+inf``
    instead of raising.
    """
    if len(mu) == 0:
        raise AdmissibilityError("empty measure")
    den = marginal_gram(k, mu)
    if den <= DEGENERATE_TOL * mu.mass ** 2:
        return CtValue(positive_part_integral(k, mu, t), den, math.inf)
    num = positive_part_integral(k, mu, t)
    if not num > 0:
        raise AdmissibilityError(f"(t - kappa)_+ integrates to zero at t={t}: no atom with kappa < t")
    return CtValue(num, den, num * num / den)


def choose_n(c: float) -> int:
    """Integer nearest to (c + 4)/8, at least 1, so that |2n - (c + 4)/4| <= 1."""
    if not c > 0:
        raise UsageError("c must be positive")
    return max(1, int(math.floor((c + 4.0) / 8.0 + 0.5)))


def counting_bound_for_n(c: float, n: int) -> float:
    """The intermediate estimate n - 4 n (n - 1) / c valid for every n >= 1."""
    return n - 4.0 * n * (n - 1) / c


@dataclass
class BoundReport:
    t: float
    c_t: float
    raw_bound: float
    integer_bound: int | None
    n_mu: int | None
    measure_label: str
    numerator: float
    denominator: float

    @property
    def degenerate(self) -> bool:
        return math.isinf(self.c_t)

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "c_t": self.c_t,
            "raw_bound": self.raw_bound,
            "integer_bound": self.integer_bound,
            "n_mu": self.n_mu,
            "measure_label": self.measure_label,
            "numerator": self.numerator,
            "denominator": self.denominator,
            "degenerate": self.degenerate,
        }

    CSV_HEADER = ("label", "t", "numerator", "denominator", "c_t", "raw_bound", "integer_bound")

    def csv_row(self) -> tuple:
        return (self.measure_label, self.t, self.numerator, self.denominator, self.c_t,
                self.raw_bound, self.integer_bound)


def theorem_bound(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float) -> BoundReport:
    if t > 0:
        raise UsageError("the bound requires t <= 0")
    val = c_t(k, mu, t)
    if val.degenerate:
        return BoundReport(float(t), math.inf, math.inf, None, None, mu.label, val.numerator, val.denominator)
    raw = 0.5 + val.c / 16.0
    return BoundReport(float(t), val.c, raw, math.ceil(raw), choose_n(val.c), mu.label,
                       val.numerator, val.denominator)


def trace_hs_bound(k: KernelSpec, quad: Quadrature) -> float:
    """Trace/Hilbert-Schmidt estimate restricted to nodes with negative diagonal."""
    diag = k.diagonal(quad.nodes)
    neg = diag < 0
    if not np.any(neg):
        raise NotApplicableError("kernel diagonal is nonnegative on every node")
    x, w = quad.nodes[neg], quad.weights[neg]
    tr = math.fsum(w * diag[neg])
    return tr * tr / gram_sum(k, x, w)


# ---------------------------------------------------------------------------
# difference kernels


def convolution_bound_point(h: HFunction, theta, t: float, base: AtomicMeasure) -> float:
    """Closed-form bound for the shift measure built from ``base`` and ``theta``."""
    if t > 0:
        raise UsageError("the bound requires t <= 0")
    if abs(base.mass - 1.0) > 1e-12:
        raise UsageError("base measure must be a probability measure")
    theta = np.asarray(theta, float).reshape(h.dim)
    gap = float(np.abs(h(theta))) - h.at_zero() + t
    if not gap > 0:
        raise AdmissibilityError("need |h(theta)| > h(0) - t")
    x, w = base.points, base.weights
    diff = x[:, None, :] - x[None, :, :]
    s = np.abs(h(diff)) ** 2 + np.abs(h(diff + theta)) ** 2
    den = math.fsum((w[:, None] * s * w[None, :]).ravel())
    return 0.5 + gap * gap / (8.0 * den)


def _grid_points(dim: int, radius: float, n: int) -> np.ndarray:
    axis = np.linspace(-radius, radius, n)
    grids = np.meshgrid(*([axis] * dim), indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=-1)
    return pts[np.linalg.norm(pts, axis=1) <= radius]


def _annulus_points(dim: int, r0: float, r1: float, n: int) -> np.ndarray:
    radii = np.linspace(r0, r1, n)
    if dim == 1:
        dirs = np.array([[1.0], [-1.0]])
    elif dim == 2:
        ang = 2.0 * np.pi * np.arange(n) / n
        dirs = np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    else:
        dirs = np.random.default_rng(0).normal(size=(n * n, dim))
        dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    return (radii[:, None, None] * dirs[None, :, :]).reshape(-1, dim)


def _refined_sup(absh, start: np.ndarray, inside) -> float:
    best = float(absh(start))

    def neg(p):
        return -float(absh(p)) if inside(p) else 0.0

    res = optimize.minimize(neg, start, method="Nelder-Mead",
                            options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 4000})
    if inside(res.x) and -res.fun > best:
        best = -res.fun
    return best


def sup_abs_h(h: HFunction, radius: float, grid_n: int, r_min: float = 0.0) -> float:
    """Grid search plus local polish for ``sup |h|`` over ``r_min <= |theta| <= radius``."""
    if r_min > 0:
        pts = _annulus_points(h.dim, r_min, radius, grid_n)
    else:
        pts = _grid_points(h.dim, radius, grid_n)
    vals = np.abs(h(pts))
    start = pts[int(np.argmax(vals))]

    def inside(p):
        r = np.linalg.norm(p)
        return r_min <= r <= radius

    return _refined_sup(lambda p: np.abs(h(p)), start, inside)


@dataclass
class ConvolutionSup:
    bound: float
    sup_h: float
    h0: float
    tail_sup: float
    approximate: bool = True

    def to_dict(self) -> dict:
        return {"bound": self.bound, "sup_h": self.sup_h, "h0": self.h0,
                "tail_sup": self.tail_sup, "approximate": self.approximate}


def convolution_sup_details(h: HFunction, t: float, search_radius: float | None = None,
                            tail_radius: float | None = None, grid_n: int | None = None) -> ConvolutionSup:
    if grid_n is None:
        grid_n = {1: 2001, 2: 201}.get(h.dim, 41)
    if t > 0:
        raise UsageError("the bound requires t <= 0")
    tail_radius = 50.0 * h.decay_scale if tail_radius is None else tail_radius
    search_radius = 2.0 * tail_radius if search_radius is None else search_radius
    h0 = h.at_zero()
    sup_h = sup_abs_h(h, search_radius, grid_n)
    gap = sup_h - h0 + t
    if not gap > 0:
        raise AdmissibilityError("need h(0) - sup|h| < t")
    tail = sup_abs_h(h, 2.0 * tail_radius, grid_n, r_min=tail_radius)
    if tail < TAIL_ZERO:
        return ConvolutionSup(math.inf, sup_h, h0, tail)
    return ConvolutionSup(0.5 + (gap / (4.0 * tail)) ** 2, sup_h, h0, tail)


def convolution_bound_sup(h: HFunction, t: float, search_radius: float | None = None,
                          tail_radius: float | None = None, grid_n: int | None = None) -> float:
    """``1/2 + ((sup|h| - h(0) + t) / (4 limsup|h|))^2`` with the limsup approximated.

    The limsup is replaced by the sup over the annulus
    ``tail_radius <= |theta| <= 2 tail_radius``; a vanishing tail returns
    ``inf``.  The value is approximate, not certified.
    """
    return convolution_sup_details(h, t, search_radius, tail_radius, grid_n).bound


# ---------------------------------------------------------------------------
# Dirichlet-Neumann constants


def fs_constant(box: BoxDomain, lam: float, r: float, n_dir: int | None = None) -> float:
    """``c_{d-1} r^4 / 18 * inf_{|theta|=r} |chi_hat|^2 * lam^(d-4) / |boundary layer|``."""
    if lam <= 0:
        raise UsageError("lambda must be positive")
    if not 0 < r < 2 * lam:
        raise UsageError("r must lie in (0, 2 lambda)")
    d = box.dim
    inf_sq = inf_chi_hat_sq(box, r, n_dir)
    return SPHERE_AREA[d] * r ** 4 / 18.0 * inf_sq * lam ** (d - 4) / boundary_layer_volume(box, lam)


def dn_gap_report(n_k: float, dim_ker: int, n_d: int, c3_asserted: bool) -> int:
    """Lower bound for N_N - N_D: ceil(n_K) + n_D, plus dim ker when (C3) is asserted."""
    if n_k < 0 or dim_ker < 0 or n_d < 0:
        raise UsageError("counts must be nonnegative")
    return int(math.ceil(n_k)) + int(n_d) + (int(dim_ker) if c3_asserted else 0)
