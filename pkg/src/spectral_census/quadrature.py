"""Node/weight rules representing a measure on the kernel's domain."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import UsageError


@dataclass(frozen=True, eq=False)
class Quadrature:
    nodes: np.ndarray  # (m, d)
    weights: np.ndarray  # (m,)
    domain_label: str = ""

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        if nodes.ndim == 1:
            nodes = nodes[:, None]
        weights = np.asarray(self.weights, dtype=float)
        if nodes.shape[0] != weights.shape[0] or weights.ndim != 1:
            raise UsageError("quadrature nodes and weights must have equal lengths")
        if np.any(weights <= 0):
            raise UsageError("quadrature weights must be positive")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.nodes.shape[1]

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    def integrate(self, values) -> complex | float:
        return np.sum(self.weights * np.asarray(values))


def gauss_legendre(a: float, b: float, n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(int(n))
    half = 0.5 * (b - a)
    return half * x + 0.5 * (a + b), half * w


def _gauss_legendre_interval(a: float, b: float, n: int) -> Quadrature:
    if not b > a:
        raise UsageError("interval must satisfy a < b")
    x, w = gauss_legendre(a, b, n)
    return Quadrature(x[:, None], w, f"gauss-legendre[{a:g},{b:g}]x{n}")


def _box_product(lower, upper, n) -> Quadrature:
    lower = np.atleast_1d(np.asarray(lower, float))
    upper = np.atleast_1d(np.asarray(upper, float))
    if lower.shape != upper.shape or np.any(upper <= lower):
        raise UsageError("box needs matching lower/upper corners with lower < upper")
    counts = np.broadcast_to(np.asarray(n, int), lower.shape)
    rules = [gauss_legendre(lo, hi, m) for lo, hi, m in zip(lower, upper, counts)]
    grids = np.meshgrid(*[r[0] for r in rules], indexing="ij")
    wgrid = np.meshgrid(*[r[1] for r in rules], indexing="ij")
    nodes = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wgrid], axis=-1), axis=-1)
    return Quadrature(nodes, weights, f"box-product{tuple(counts)}")


def _circle_uniform(radius: float, n: int, phase: float = 0.0) -> Quadrature:
    if radius <= 0 or n < 1:
        raise UsageError("circle-uniform needs radius > 0 and n >= 1")
    ang = phase + 2.0 * np.pi * np.arange(n) / n
    nodes = radius * np.stack([np.cos(ang), np.sin(ang)], axis=-1)
    return Quadrature(nodes, np.full(n, 1.0 / n), f"circle-uniform(r={radius:g})x{n}")


def sphere_latlong_angles(n_azimuth: int, n_polar: int):
    """Azimuth/polar node angles and normalized weights of the lat-long rule."""
    az = 2.0 * np.pi * np.arange(n_azimuth) / n_azimuth
    pol = np.pi * (np.arange(n_polar) + 0.5) / n_polar
    A, P = np.meshgrid(az, pol, indexing="ij")
    w = np.sin(P).ravel()
    return A.ravel(), P.ravel(), w / w.sum()


def _sphere_latlong(radius: float, n_azimuth: int, n_polar: int | None = None) -> Quadrature:
    n_polar = n_azimuth if n_polar is None else n_polar
    if radius <= 0 or n_azimuth < 1 or n_polar < 1:
        raise UsageError("sphere-latlong needs radius > 0 and positive node counts")
    a, p, w = sphere_latlong_angles(n_azimuth, n_polar)
    nodes = radius * np.stack([np.sin(p) * np.cos(a), np.sin(p) * np.sin(a), np.cos(p)], axis=-1)
    return Quadrature(nodes, w, f"sphere-latlong(r={radius:g}){n_azimuth}x{n_polar}")


_KINDS = {
    "gauss-legendre-interval": _gauss_legendre_interval,
    "box-product": _box_product,
    "circle-uniform": _circle_uniform,
    "sphere-latlong": _sphere_latlong,
}


def make_quadrature(kind: str, **params) -> Quadrature:
    """Build a standard rule.

    ``gauss-legendre-interval(a, b, n)``, ``box-product(lower, upper, n)``,
    ``circle-uniform(radius, n)`` and ``sphere-latlong(radius, n_azimuth,
    n_polar)``.  The circle and sphere rules carry the normalized surface
    measure (total weight 1).
    """
    try:
        rule = _KINDS[kind]
    except KeyError:
        raise UsageError(f"unknown quadrature kind {kind!r}; choose from {sorted(_KINDS)}") from None
    try:
        return rule(**params)
    except TypeError as exc:
        raise UsageError(f"bad parameters for {kind}: {exc}") from None
