"""Finite atomic measures on M and symmetric atomic measures on M x M."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .kernels import KernelSpec, as_point, as_points, kappa
from .quadrature import make_quadrature

MASS_TOL = 1e-12


def _canon(a: np.ndarray) -> np.ndarray:
    # folds -0.0 into 0.0 so that equal coordinates have equal bytes
    return a + 0.0


@dataclass(frozen=True, eq=False)
class AtomicMeasure:
    points: np.ndarray  # (m, d)
    weights: np.ndarray  # (m,)

    def __post_init__(self):
        pts = as_points(self.points)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if pts.shape[0] != w.shape[0]:
            raise UsageError("atom points and weights must have equal lengths")
        if np.any(w <= 0):
            raise UsageError("atom weights must be positive")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.weights.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def merged(self) -> "AtomicMeasure":
        """Same measure with coincident atoms combined."""
        if len(self) == 0:
            return self
        uniq, inv = np.unique(_canon(self.points), axis=0, return_inverse=True)
        return AtomicMeasure(uniq, np.bincount(inv.reshape(-1), weights=self.weights))


class SymmetricAtomicMeasure:
    """Atoms ``((xi_k, eta_k), w_k)`` closed under the swap ``(xi, eta) -> (eta, xi)``.

    The constructor checks the swap invariance exactly, as a multiset
    identity on ``(xi, eta, w)``; use :func:`make_symmetric` to build one
    from arbitrary pairs.
    """

    def __init__(self, xi, eta, weights, label: str = "measure", *, check: bool = True):
        w = np.asarray(weights, dtype=float).reshape(-1)
        if w.shape[0] == 0:
            d = np.asarray(xi).shape[-1] if np.asarray(xi).ndim == 2 else 0
            xi = eta = np.zeros((0, d))
        else:
            xi = as_points(xi)
            eta = as_points(eta, xi.shape[1])
        if not xi.shape[0] == eta.shape[0] == w.shape[0]:
            raise UsageError("xi, eta and weights must have equal lengths")
        if np.any(w <= 0):
            raise UsageError("atom weights must be positive")
        self.xi = np.array(xi, dtype=float)
        self.eta = np.array(eta, dtype=float)
        self.weights = w.copy()
        self.label = label
        for arr in (self.xi, self.eta, self.weights):
            arr.setflags(write=False)
        if check and not self._is_swap_invariant():
            raise UsageError("atoms are not closed under the swap (xi, eta) -> (eta, xi)")

    def _is_swap_invariant(self) -> bool:
        if len(self) == 0:
            return True
        w = self.weights[:, None]
        a = _canon(np.hstack([self.xi, self.eta, w]))
        b = _canon(np.hstack([self.eta, self.xi, w]))
        a = a[np.lexsort(a.T[::-1])]
        b = b[np.lexsort(b.T[::-1])]
        return bool(np.array_equal(a, b))

    def __len__(self):
        return self.weights.shape[0]

    def __repr__(self):
        return f"SymmetricAtomicMeasure({self.label!r}, atoms={len(self)}, mass={self.mass:.6g})"

    @property
    def dim(self) -> int:
        return self.xi.shape[1]

    @property
    def mass(self) -> float:
        return float(np.sum(self.weights))

    def scaled(self, s: float) -> "SymmetricAtomicMeasure":
        if s <= 0:
            raise UsageError("scale factor must be positive")
        return SymmetricAtomicMeasure(self.xi, self.eta, s * self.weights, self.label, check=False)

    def swap_pairs(self) -> list[tuple[int, int]]:
        """Index pairs ``(i, j)`` matching each atom with its swapped partner.

        Diagonal atoms are returned as ``(i, i)``; every index appears once.
        """
        buckets: dict[bytes, list[int]] = defaultdict(list)
        rows = _canon(np.hstack([self.xi, self.eta, self.weights[:, None]]))
        for i, row in enumerate(rows):
            buckets[row.tobytes()].append(i)
        d = self.dim
        used = np.zeros(len(self), dtype=bool)
        pairs = []
        for i in range(len(self)):
            if used[i]:
                continue
            used[i] = True
            if np.array_equal(self.xi[i], self.eta[i]):
                buckets[rows[i].tobytes()].remove(i)
                pairs.append((i, i))
                continue
            buckets[rows[i].tobytes()].remove(i)
            swapped = np.concatenate([rows[i, d:2 * d], rows[i, :d], rows[i, 2 * d:]])
            j = buckets[swapped.tobytes()].pop(0)
            used[j] = True
            pairs.append((i, j))
        return pairs

    def to_records(self) -> list[dict]:
        return [
            {"xi": self.xi[i].tolist(), "eta": self.eta[i].tolist(), "w": float(self.weights[i])}
            for i in range(len(self))
        ]

    @classmethod
    def from_records(cls, records, label: str = "measure") -> "SymmetricAtomicMeasure":
        try:
            xi = [r["xi"] for r in records]
            eta = [r["eta"] for r in records]
            w = [r["w"] for r in records]
        except (KeyError, TypeError):
            raise UsageError("measure records must be objects with xi, eta and w") from None
        if not records:
            return cls(np.zeros((0, 0)), np.zeros((0, 0)), [], label)
        return cls(np.atleast_2d(np.array(xi, float).reshape(len(xi), -1)),
                   np.atleast_2d(np.array(eta, float).reshape(len(eta), -1)), w, label)


def symmetrize(xi, eta, weights, label: str = "measure") -> SymmetricAtomicMeasure:
    """Vectorized :func:`make_symmetric`: off-diagonal pairs split into two half-weight atoms."""
    w = np.asarray(weights, dtype=float).reshape(-1)
    if np.any(w <= 0):
        raise UsageError("pair weights must be positive")
    if w.shape[0] == 0:
        d = np.asarray(xi).shape[-1] if np.asarray(xi).ndim == 2 else 0
        return SymmetricAtomicMeasure(np.zeros((0, d)), np.zeros((0, d)), [], label)
    xi = as_points(xi)
    eta = as_points(eta, xi.shape[1])
    diag = np.all(_canon(xi) == _canon(eta), axis=1)
    off = ~diag
    X = np.concatenate([xi[diag], xi[off], eta[off]])
    Y = np.concatenate([eta[diag], eta[off], xi[off]])
    W = np.concatenate([w[diag], 0.5 * w[off], 0.5 * w[off]])
    return SymmetricAtomicMeasure(X, Y, W, label, check=False)


def make_symmetric(pairs, label: str = "measure") -> SymmetricAtomicMeasure:
    """Symmetric measure from ``[((p, q), w), ...]``; total mass is preserved."""
    pairs = list(pairs)
    if not pairs:
        return SymmetricAtomicMeasure(np.zeros((0, 0)), np.zeros((0, 0)), [], label)
    xi = np.array([as_point(p) for (p, _), _ in pairs])
    eta = np.array([as_point(q) for (_, q), _ in pairs])
    w = np.array([float(wt) for _, wt in pairs])
    return symmetrize(xi, eta, w, label)


def marginal(mu: SymmetricAtomicMeasure) -> AtomicMeasure:
    """Push-forward onto the first coordinate (each atom keeps its weight)."""
    return AtomicMeasure(mu.xi, mu.weights)


def shift_measure(base: AtomicMeasure, theta) -> SymmetricAtomicMeasure:
    """``sum_k w_k (delta(eta_k, eta_k + theta) + delta(eta_k + theta, eta_k))``, mass 2."""
    theta = as_point(theta, base.dim)
    if not np.any(theta):
        raise UsageError("shift theta must be nonzero")
    if abs(base.mass - 1.0) > MASS_TOL:
        raise UsageError(f"base measure must be a probability measure (mass {base.mass!r})")
    p = base.points
    q = p + theta
    return SymmetricAtomicMeasure(
        np.concatenate([p, q]), np.concatenate([q, p]),
        np.concatenate([base.weights, base.weights]), label=f"shift(theta={theta.tolist()})",
        check=False,
    )


def _orthonormal_complement(v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Two unit vectors spanning the plane orthogonal to the unit 3-vector ``v``."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(v, helper)
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(v, e1)


def chord_measure(lam: float, r: float, d: int, n: int) -> SymmetricAtomicMeasure:
    """Discretized symmetric measure on pairs of sphere points at distance ``r``.

    Outer nodes discretize the normalized measure on the sphere of radius
    ``lam`` (``n`` equispaced angles for d=2, an ``n x n`` lat-long grid for
    d=3).  For each outer node the chord set ``{eta : |xi - eta| = r}`` is two
    points of weight 1/2 (d=2) or a circle discretized by ``n`` equispaced
    angles (d=3).  The result is symmetrized and has total mass 1.
    """
    if not 0 < r < 2 * lam:
        raise UsageError(f"chord length r must lie in (0, 2*lambda) = (0, {2 * lam})")
    if d not in (2, 3):
        raise UsageError("chord measures are implemented for d in {2, 3}")
    if n < 4:
        raise UsageError("chord measure needs n >= 4 nodes")
    if d == 2:
        ang = 2.0 * np.pi * np.arange(n) / n
        half = 2.0 * np.arcsin(r / (2.0 * lam))
        a = np.repeat(ang, 2)
        steps = half * n / (2.0 * np.pi)
        if abs(steps - round(steps)) < 1e-9:
            # chord endpoints fall on the outer grid: reuse the grid angles so atoms coincide exactly
            idx = np.repeat(np.arange(n), 2) + np.tile([1, -1], n) * int(round(steps))
            b = ang[idx % n]
        else:
            b = a + np.tile([half, -half], n)
        xi = lam * np.stack([np.cos(a), np.sin(a)], axis=-1)
        eta = lam * np.stack([np.cos(b), np.sin(b)], axis=-1)
        w = np.full(2 * n, 1.0 / (2 * n))
    else:
        outer = make_quadrature("sphere-latlong", radius=lam, n_azimuth=n, n_polar=n)
        # chord circle: centre c * xi_hat, radius rho, in the plane orthogonal to xi
        c = lam * (1.0 - r * r / (2.0 * lam * lam))
        rho = r * np.sqrt(1.0 - r * r / (4.0 * lam * lam))
        phi = 2.0 * np.pi * np.arange(n) / n
        xis, etas = [], []
        for x in outer.nodes:
            v = x / lam
            e1, e2 = _orthonormal_complement(v)
            ring = c * v + rho * (np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2)
            xis.append(np.repeat(x[None, :], n, axis=0))
            etas.append(ring)
        xi = np.concatenate(xis)
        eta = np.concatenate(etas)
        w = np.repeat(outer.weights / n, n)
    mu = symmetrize(xi, eta, w, label=f"chord(lam={lam:g}, r={r:g}, d={d}, n={n})")
    return mu


def check_c2(mu: SymmetricAtomicMeasure, k: KernelSpec, t: float) -> bool:
    """True iff ``sum_atoms w * (t - kappa)_+ > 0``."""
    if len(mu) == 0:
        return False
    kap = kappa(k, mu.xi, mu.eta)
    return bool(np.sum(mu.weights * np.maximum(t - kap, 0.0)) > 0)
