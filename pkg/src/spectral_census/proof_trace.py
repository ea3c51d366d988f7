"""Finite matrices behind the counting bound, and checks of each intermediate claim.

For a configuration of n admissible pairs ``(xi_j, eta_j)`` (``kappa < t``)
the 2n x 2n kernel matrix is congruent, after scaling each 2x2 block by
``(t - kappa_j)^(-1/2)``, to a matrix whose block-diagonal part has
eigenvalue -1 at least n times.  Its off-diagonal part has a Frobenius norm
whose average over the tilted product measure is ``4 n (n - 1) / C_t``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import c_t
from .errors import AdmissibilityError, UsageError
from .kernels import KernelSpec, as_points, kappa
from .measures import SymmetricAtomicMeasure
from .oracle import check_hermitian, hermitize, inertia_ldl

MULTIPLICITY_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Configuration:
    xi: np.ndarray  # (n, d)
    eta: np.ndarray  # (n, d)

    def __post_init__(self):
        xi = as_points(self.xi)
        eta = as_points(self.eta, xi.shape[1])
        if xi.shape != eta.shape or xi.shape[0] < 1:
            raise UsageError("a configuration needs n >= 1 pairs of equal-dimension points")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return self.xi.shape[0]

    def interleaved(self) -> np.ndarray:
        """Points ordered (xi_1, eta_1, xi_2, eta_2, ...)."""
        return np.stack([self.xi, self.eta], axis=1).reshape(2 * self.n, -1)


@dataclass
class ProofMatrices:
    k2n: np.ndarray
    lambda_diag: np.ndarray
    k_tilde: np.ndarray
    k_diag: np.ndarray
    k_off: np.ndarray
    gaps: np.ndarray  # t - kappa_j > 0


def _gaps(k: KernelSpec, config: Configuration, t: float) -> np.ndarray:
    gaps = t - kappa(k, config.xi, config.eta)
    if np.any(gaps <= 0):
        bad = int(np.argmin(gaps))
        raise UsageError(f"pair {bad} is not admissible: kappa >= t")
    return np.atleast_1d(gaps)


def assemble(k: KernelSpec, config: Configuration, t: float) -> ProofMatrices:
    gaps = _gaps(k, config, t)
    n = config.n
    k2n = hermitize(k.matrix(config.interleaved()))
    scale = np.repeat(gaps ** -0.5, 2)
    lam = np.diag(scale)
    k_tilde = scale[:, None] * (k2n - t * np.eye(2 * n)) * scale[None, :]
    mask = np.kron(np.eye(n, dtype=bool), np.ones((2, 2), dtype=bool))
    k_diag = np.where(mask, k_tilde, 0)
    k_off = np.where(mask, 0, k_tilde)
    return ProofMatrices(k2n, lam, k_tilde, k_diag, k_off, gaps)


def inertia_count(A, t: float, eps: float = 0.0) -> int:
    """Number of eigenvalues of the Hermitian matrix ``A`` strictly below ``t - eps``."""
    A = check_hermitian(A)
    if eps < 0:
        raise UsageError("eps must be nonnegative")
    return int(np.sum(np.linalg.eigvalsh(A) < t - eps))


def inertia_count_ldl(A, t: float) -> int:
    """Same count as :func:`inertia_count` with eps=0, via LDL^H of ``A - tI``."""
    A = check_hermitian(A)
    return inertia_ldl(A - t * np.eye(A.shape[0]))[0]


def hs_off_closed_form(k: KernelSpec, config: Configuration, t: float) -> float:
    """Sum over i != j of the four squared kernel moduli over (t - kappa_i)(t - kappa_j)."""
    gaps = _gaps(k, config, t)
    X, Y = config.xi, config.eta
    four = (np.abs(k.matrix(X, X)) ** 2 + np.abs(k.matrix(X, Y)) ** 2
            + np.abs(k.matrix(Y, X)) ** 2 + np.abs(k.matrix(Y, Y)) ** 2)
    terms = four / np.outer(gaps, gaps)
    np.fill_diagonal(terms, 0.0)
    return float(np.sum(terms))


@dataclass
class MCResult:
    empirical_mean: float
    target: float
    stderr: float
    samples: int
    seed: int

    @property
    def z_score(self) -> float:
        diff = self.empirical_mean - self.target
        if self.stderr == 0:
            return 0.0 if abs(diff) <= 1e-12 * max(1.0, abs(self.target)) else np.inf
        return diff / self.stderr

    def to_dict(self) -> dict:
        return {"empirical_mean": self.empirical_mean, "target": self.target,
                "stderr": self.stderr, "samples": self.samples, "seed": self.seed}


def tilted_support(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float):
    """Atoms with kappa < t and their sampling probabilities proportional to w (t - kappa)."""
    kap = kappa(k, mu.xi, mu.eta)
    keep = kap < t
    if not np.any(keep):
        raise AdmissibilityError("no atom of the measure has kappa < t")
    p = mu.weights[keep] * (t - kap[keep])
    return mu.xi[keep], mu.eta[keep], t - kap[keep], p / p.sum()


def mc_average_check(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float, n: int,
                     samples: int, seed: int) -> MCResult:
    """Monte-Carlo average of the squared off-diagonal norm over the tilted product measure."""
    if n < 1:
        raise UsageError("n must be positive")
    if samples < 100:
        raise UsageError("need at least 100 samples")
    val = c_t(k, mu, t)
    target = 4.0 * n * (n - 1) / val.c
    xi, eta, gaps, prob = tilted_support(k, mu, t)
    # pairwise off-diagonal contributions between support atoms
    four = (np.abs(k.matrix(xi, xi)) ** 2 + np.abs(k.matrix(xi, eta)) ** 2
            + np.abs(k.matrix(eta, xi)) ** 2 + np.abs(k.matrix(eta, eta)) ** 2)
    H = four / np.outer(gaps, gaps)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(prob), size=(samples, n), p=prob)
    vals = np.zeros(samples)
    for i in range(n):
        for j in range(n):
            if i != j:
                vals += H[idx[:, i], idx[:, j]]
    mean = float(np.mean(vals))
    stderr = float(np.std(vals, ddof=1) / np.sqrt(samples))
    return MCResult(mean, target, stderr, samples, seed)


def sample_configuration(k: KernelSpec, mu: SymmetricAtomicMeasure, t: float, n: int,
                         rng: np.random.Generator, max_tries: int = 1000) -> Configuration:
    """Draw n pairs from the tilted measure, conditioned on all 2n points being distinct.

    Coincident points make the 2n x 2n matrix singular, and the inertia
    counts at an exact zero eigenvalue are then decided by rounding.  So
    diagonal atoms are skipped and draws with a repeated point are redrawn.
    """
    xi, eta, _, prob = tilted_support(k, mu, t)
    off = np.any(xi != eta, axis=1)
    if not np.any(off):
        raise UsageError("the measure has no off-diagonal admissible atom")
    xi, eta, prob = xi[off], eta[off], prob[off] / prob[off].sum()
    for _ in range(max_tries):
        idx = rng.choice(len(prob), size=n, p=prob)
        pts = np.concatenate([xi[idx], eta[idx]]) + 0.0
        if len(np.unique(pts, axis=0)) == 2 * n:
            return Configuration(xi[idx], eta[idx])
    raise UsageError(f"could not draw {n} pairs with distinct points from this measure")


def check_configuration(k: KernelSpec, config: Configuration, t: float) -> list[dict]:
    """Run every per-configuration claim; returns ``{check, n, t, value, target, pass}`` records."""
    n = config.n
    pm = assemble(k, config, t)
    out = []

    def record(name, value, target, ok):
        out.append({"check": name, "n": n, "t": float(t), "value": value, "target": target, "pass": bool(ok)})

    a = inertia_count(pm.k2n, t)
    b = inertia_count(pm.k_tilde, 0.0)
    record("inertia_congruence", a, b, a == b)

    ldl = inertia_count_ldl(pm.k2n, t)
    record("inertia_ldl", ldl, a, ldl == a)

    eig_diag = np.linalg.eigvalsh(pm.k_diag)
    mult = int(np.sum(np.abs(eig_diag + 1.0) <= MULTIPLICITY_TOL))
    record("block_eigenvalue_minus_one", mult, n, mult >= n)

    fro = float(np.sum(np.abs(pm.k_off) ** 2))
    closed = hs_off_closed_form(k, config, t)
    rel = abs(fro - closed) / max(abs(closed), 1.0)
    record("off_diagonal_hs_identity", fro, closed, rel <= 1e-11)

    big = int(np.sum(np.linalg.eigvalsh(pm.k_off) >= 1.0))
    record("off_eigs_above_one_vs_hs", big, fro, big <= fro + 1e-12)

    record("combined_count", a, n - fro, a >= n - fro - 1e-12)
    return out
