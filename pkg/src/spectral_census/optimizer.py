"""Heuristic search for symmetric atomic measures with a large C_t.

Both routines work on a fixed set of distinct points.  With ``v`` the
marginal weights on those points and ``G = |K|^2`` the Gram matrix, the
denominator of C_t is ``v' G v`` and the numerator is linear in the atom
weights, so every candidate update is scored in closed form.
"""

from __future__ import annotations

import numpy as np

from .bounds import c_t
from .errors import AdmissibilityError, UsageError
from .kernels import KernelSpec, as_points, kappa
from .measures import SymmetricAtomicMeasure, _canon, symmetrize

IMPROVE_TOL = 1e-9


def grid_pool(points, include_diagonal: bool = True) -> np.ndarray:
    """All unordered pairs of a point set, shape ``(P, 2, d)``; diagonal pairs ``(x, x)`` optional."""
    pts = as_points(points)
    i, j = np.triu_indices(len(pts), 0 if include_diagonal else 1)
    return np.stack([pts[i], pts[j]], axis=1)


def _pool_array(pool, dim: int) -> np.ndarray:
    arr = np.asarray(pool, dtype=float)
    if arr.ndim == 2 and dim == 1:
        arr = arr[..., None]
    if arr.ndim != 3 or arr.shape[1] != 2 or arr.shape[2] != dim:
        raise UsageError(f"pool must have shape (P, 2, {dim})")
    return arr


def _incidence(p_idx, q_idx, n_points):
    """Marginal weight contributed to each point by a unit-mass symmetrized pair."""
    B = np.zeros((len(p_idx), n_points))
    rows = np.arange(len(p_idx))
    np.add.at(B, (rows, p_idx), 0.5)
    np.add.at(B, (rows, q_idx), 0.5)
    return B


def greedy_atoms(k: KernelSpec, t: float, pool, max_atoms: int, trace: list | None = None):
    """Greedily add unit-mass symmetrized atoms from ``pool`` while C_t improves.

    Inadmissible candidates (kappa >= t) are dropped first.  Each step adds
    the candidate maximizing C_t (lowest pool index on ties); a candidate may
    be chosen more than once, which accumulates its weight.  Stops when no
    candidate improves C_t by more than ``IMPROVE_TOL`` or after
    ``max_atoms`` additions.  Returns ``(measure, c)``.

    If ``trace`` is a list, ``(step, c, pool_index)`` tuples are appended.
    """
    if max_atoms < 1:
        raise UsageError("max_atoms must be >= 1")
    arr = _pool_array(pool, k.dim)
    kap = kappa(k, arr[:, 0, :], arr[:, 1, :])
    keep = np.flatnonzero(kap < t)
    if keep.size == 0:
        raise AdmissibilityError("no admissible pair in the pool (inf kappa >= t)")
    arr, gain = arr[keep], t - kap[keep]

    flat = _canon(arr.reshape(-1, k.dim))
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    inv = inv.reshape(-1, 2)
    G = np.abs(k.matrix(uniq)) ** 2
    B = _incidence(inv[:, 0], inv[:, 1], len(uniq))
    self_term = np.einsum("ij,jk,ik->i", B, G, B)

    v = np.zeros(len(uniq))
    counts = np.zeros(len(arr))
    num = den = 0.0
    best_c = -np.inf
    for step in range(max_atoms):
        cross = B @ (G @ v)
        new_num = num + gain
        new_den = den + 2.0 * cross + self_term
        with np.errstate(divide="ignore", invalid="ignore"):
            scores = np.where(new_den > 0, new_num ** 2 / new_den, -np.inf)
        c_idx = int(np.argmax(scores))
        if step > 0 and not scores[c_idx] > best_c + IMPROVE_TOL:
            break
        counts[c_idx] += 1
        v += B[c_idx]
        num, den, best_c = new_num[c_idx], new_den[c_idx], float(scores[c_idx])
        if trace is not None:
            trace.append((step, best_c, int(keep[c_idx])))

    chosen = np.flatnonzero(counts)
    mu = symmetrize(arr[chosen, 0, :], arr[chosen, 1, :], counts[chosen], label=f"greedy({len(chosen)} pairs)")
    return mu, c_t(k, mu, t).c


def _ratio(num, den):
    return num * num / den if den > 0 else -np.inf


def reweight_fixed_support(k: KernelSpec, t: float, mu0: SymmetricAtomicMeasure, iters: int,
                           trace: list | None = None) -> SymmetricAtomicMeasure:
    """Coordinate ascent on the weights of the swap pairs of ``mu0``.

    Each coordinate subproblem maximizes ``(A + a x)^2 / (D + 2 b x + q x^2)``
    over ``x >= 0``; its stationary point is ``(a D - A b) / (A q - a b)``.
    Pairs whose weight reaches zero are dropped.  The total mass of ``mu0``
    is kept.  If ``trace`` is a list, C_t after every sweep is appended.
    """
    if iters < 0:
        raise UsageError("iters must be nonnegative")
    start = c_t(k, mu0, t)
    pairs = mu0.swap_pairs()
    i_idx = np.array([p[0] for p in pairs])
    j_idx = np.array([p[1] for p in pairs])
    P = mu0.xi[i_idx]
    Q = mu0.eta[i_idx]
    w = mu0.weights[i_idx] + np.where(i_idx != j_idx, mu0.weights[j_idx], 0.0)
    a = np.maximum(t - kappa(k, P, Q), 0.0)

    flat = _canon(np.concatenate([P, Q]))
    uniq, inv = np.unique(flat, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    m = len(pairs)
    B = _incidence(inv[:m], inv[m:], len(uniq))
    Qm = B @ (np.abs(k.matrix(uniq)) ** 2) @ B.T
    Qm = 0.5 * (Qm + Qm.T)

    num = float(a @ w)
    den = float(w @ Qm @ w)
    current = _ratio(num, den)
    if trace is not None:
        trace.append(current)
    for _ in range(iters):
        for j in range(m):
            A = num - a[j] * w[j]
            Qw = Qm[j] @ w
            b = Qw - Qm[j, j] * w[j]
            D = den - 2.0 * b * w[j] - Qm[j, j] * w[j] ** 2
            q, aj = Qm[j, j], a[j]
            candidates = [w[j], 0.0]
            denom = A * q - aj * b
            if denom != 0:
                x = (aj * D - A * b) / denom
                if x > 0 and np.isfinite(x):
                    candidates.append(x)
            vals = [_ratio(A + aj * x, D + 2 * b * x + q * x * x) for x in candidates]
            best = int(np.argmax(vals))
            if vals[best] > current:
                x = candidates[best]
                w[j] = x
                num = A + aj * x
                den = D + 2 * b * x + q * x * x
                current = vals[best]
        # recompute to shed drift from the incremental updates
        num = float(a @ w)
        den = float(w @ Qm @ w)
        current = _ratio(num, den)
        if trace is not None:
            trace.append(current)

    keep = w > 0
    w = w * (mu0.mass / w[keep].sum())
    mu = symmetrize(P[keep], Q[keep], w[keep], label=f"reweighted({mu0.label})")
    if c_t(k, mu, t).c < start.c - 1e-12 * max(1.0, start.c):
        return mu0
    return mu
