"""Kernels on the sphere |xi| = lambda built from a box, and the N_N - N_D pipeline.

For ``f_u(x) = sum_k w_k exp(-i x.xi_k) u_k`` with nodes on the sphere of
radius lambda,

    ||grad f_u||^2 - lambda^2 ||f_u||^2 = 1/2 (K u, u),
    K(xi, eta) = -|xi - eta|^2 chi_hat(xi - eta),

with both norms over the box.  Negative eigenvectors of K therefore give
functions on which the Neumann-minus-Dirichlet form is negative.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundReport, dn_gap_report, fs_constant, gram_sum, theorem_bound
from .domains import SPHERE_AREA, BoxDomain, boundary_layer_volume, chi_hat_box
from .errors import UsageError
from .kernels import KernelSpec
from .measures import SymmetricAtomicMeasure, chord_measure
from .oracle import count_from_eigenvalues, eigenvalues_hermitian, nystrom_matrix
from .quadrature import Quadrature, make_quadrature

KER_ATOL = 1e-12


def build_dn_kernel(box: BoxDomain, lam: float) -> KernelSpec:
    if lam <= 0:
        raise UsageError("lambda must be positive")

    def evaluate(xi, eta):
        diff = xi - eta
        return -np.sum(diff * diff, axis=-1) * chi_hat_box(box, diff)

    desc = {"name": "dn", "box": list(box.lengths), "lambda": float(lam)}
    return KernelSpec(box.dim, evaluate, False, f"dn(box={list(box.lengths)}, lambda={lam:g})",
                      sphere_radius=float(lam), descriptor=desc)


def sphere_quadrature(d: int, lam: float, n: int) -> Quadrature:
    """Normalized surface rule: ``n`` equispaced nodes (d=2) or an ``n x n`` lat-long grid (d=3)."""
    if d == 2:
        return make_quadrature("circle-uniform", radius=lam, n=n)
    if d == 3:
        return make_quadrature("sphere-latlong", radius=lam, n_azimuth=n, n_polar=n)
    raise UsageError("sphere rules exist for d in {2, 3}")


@dataclass
class SphereField:
    quadrature: Quadrature
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex).reshape(-1)
        if self.values.shape[0] != len(self.quadrature):
            raise UsageError("field values must match quadrature nodes")


@dataclass
class KCResult:
    lhs: float
    rhs: float
    rel_err: float
    under_resolved: bool
    rhs_imag: float = 0.0


def nodes_per_wavelength(box: BoxDomain, lam: float, omega_quad: Quadrature) -> float:
    per_axis = len(omega_quad) ** (1.0 / box.dim)
    return per_axis * (2.0 * np.pi / lam) / max(box.lengths)


def verify_kc_identity(box: BoxDomain, lam: float, u: SphereField, omega_quad: Quadrature) -> KCResult:
    """Compare the quadratic form of ``f_u`` over the box with ``(K u, u) / 2``.

    The left side integrates ``|grad f_u|^2 - lam^2 |f_u|^2`` with
    ``omega_quad``; the right side is the finite double sum over sphere nodes.
    """
    q = u.quadrature
    if q.dim != box.dim or omega_quad.dim != box.dim:
        raise UsageError("dimension mismatch between box, sphere nodes and box quadrature")
    xi, w, vals = q.nodes, q.weights, u.values
    x = omega_quad.nodes
    phase = np.exp(-1j * (x @ xi.T))  # (n_x, n_xi)
    coef = w * vals
    f = phase @ coef
    grad = phase @ (coef[:, None] * (-1j * xi))
    density = np.sum(np.abs(grad) ** 2, axis=1) - lam * lam * np.abs(f) ** 2
    lhs = float(np.sum(omega_quad.weights * density))
    K = build_dn_kernel(box, lam).matrix(xi)
    form = np.conj(coef) @ K @ coef
    rhs = 0.5 * float(form.real)
    rel = abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-30)
    return KCResult(lhs, rhs, rel, nodes_per_wavelength(box, lam, omega_quad) < 8.0, 0.5 * float(form.imag))


def fs_integral(box: BoxDomain, lam: float, n: int) -> float:
    """Quadrature value of the double sphere integral of ``|xi - eta|^4 |chi_hat(xi - eta)|^2``."""
    q = sphere_quadrature(box.dim, lam, n)
    k = KernelSpec(box.dim, lambda a, b: np.sum((a - b) ** 2, axis=-1) * np.abs(chi_hat_box(box, a - b)),
                   True, "fs-integrand")
    return gram_sum(k, q.nodes, q.weights)


def fs_integral_bound(box: BoxDomain, lam: float) -> float:
    """``18 / c_{d-1} * lam^(4-d) * |boundary layer of width 1/lam|``."""
    return 18.0 / SPHERE_AREA[box.dim] * lam ** (4 - box.dim) * boundary_layer_volume(box, lam)


def chord_numerator_lower(box: BoxDomain, r: float, n_dir: int | None = None) -> float:
    """``r^2 inf_{|theta| = r} |chi_hat(theta)|``."""
    from .domains import inf_chi_hat_sq

    return r * r * math.sqrt(inf_chi_hat_sq(box, r, n_dir))


@dataclass
class DNReport:
    box: tuple
    lam: float
    r: float
    c_t: float
    raw_bound: float
    fs_bound: float
    nystrom_count: int
    dn_lower: int
    n_d: int
    bound: BoundReport

    def to_dict(self) -> dict:
        return {"box": list(self.box), "lambda": self.lam, "r": self.r, "c_t": self.c_t,
                "raw_bound": self.raw_bound, "fs_bound": self.fs_bound,
                "nystrom_count": self.nystrom_count, "dn_lower": self.dn_lower, "n_D": self.n_d}

    CSV_HEADER = ("lambda", "r", "c_t", "raw_bound", "fs_bound", "nystrom_count", "dn_lower",
                  "shape_lambda_pow_over_layer")

    def csv_row(self) -> tuple:
        d = len(self.box)
        shape = self.lam ** (d - 4) / boundary_layer_volume(BoxDomain(self.box), self.lam)
        return (self.lam, self.r, self.c_t, self.raw_bound, self.fs_bound, self.nystrom_count,
                self.dn_lower, shape)


def dn_lower_bound(box: BoxDomain, lam: float, r: float, n_sphere: int, n_d: int = 0,
                   chord_n: int | None = None) -> DNReport:
    """Chord-measure bound, closed-form constant and Nystrom count for one (lambda, r).

    The Nystrom count uses the atomic measure on the sphere nodes.  For that
    atomic measure the discretized operator is exact, so the count enters
    ``dn_lower`` as the count of negative eigenvalues.
    """
    if not 0 < r < 2 * lam:
        raise UsageError("r must lie in (0, 2 lambda)")
    k = build_dn_kernel(box, lam)
    mu = chord_measure(lam, r, box.dim, n_sphere if chord_n is None else chord_n)
    rep = theorem_bound(k, mu, 0.0)
    fs = 0.5 + fs_constant(box, lam, r) / 16.0
    res = count_from_eigenvalues(eigenvalues_hermitian(nystrom_matrix(k, sphere_quadrature(box.dim, lam, n_sphere))), 0.0)
    lower = dn_gap_report(res.count_below_t, 0, n_d, False)
    return DNReport(box.lengths, float(lam), float(r), rep.c_t, rep.raw_bound, fs, res.count_below_t,
                    lower, n_d, rep)


@dataclass
class AtomicDNReport:
    bound: BoundReport
    nystrom_count: int
    dim_ker: int
    dn_lower: int
    eigenvalues: np.ndarray

    def to_dict(self) -> dict:
        return {"bound": self.bound.to_dict(), "nystrom_count": self.nystrom_count,
                "dim_ker": self.dim_ker, "dn_lower": self.dn_lower,
                "eigenvalues": self.eigenvalues.tolist()}


def dn_atomic_report(box: BoxDomain, lam: float, nodes, weights=None, n_d: int = 0,
                     c3_asserted: bool = False, mu: SymmetricAtomicMeasure | None = None,
                     ker_atol: float = KER_ATOL) -> AtomicDNReport:
    """Gap estimate for an atomic measure on the sphere (e.g. a pair of points).

    ``mu`` defaults to the uniform symmetric measure on all node pairs.  The
    kernel dimension counts eigenvalues with ``|lambda| <= ker_atol``.
    """
    nodes = np.atleast_2d(np.asarray(nodes, float))
    weights = np.full(len(nodes), 1.0) if weights is None else np.asarray(weights, float)
    k = build_dn_kernel(box, lam)
    q = Quadrature(nodes, weights, "atomic")
    eigs = eigenvalues_hermitian(nystrom_matrix(k, q))
    if mu is None:
        from .measures import symmetrize

        i, j = np.triu_indices(len(nodes), 1)
        mu = symmetrize(nodes[i], nodes[j], np.ones(len(i)), "all-pairs")
    rep = theorem_bound(k, mu, 0.0)
    neg = int(np.sum(eigs < -ker_atol))
    ker = int(np.sum(np.abs(eigs) <= ker_atol))
    return AtomicDNReport(rep, neg, ker, dn_gap_report(neg, ker, n_d, c3_asserted), eigs)
