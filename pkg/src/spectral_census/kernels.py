"""Continuous Hermitian kernels and the two-point function kappa.

Kernels are closed-form callables that broadcast over leading axes: given
point arrays ``xi`` and ``eta`` of shape ``(..., d)`` they return kernel
values of shape ``(...)``.  Points are plain float arrays of shape ``(d,)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .errors import InvalidKernelError, UsageError

# absolute tolerance on the imaginary part of diagonal kernel values
DIAGONAL_REAL_TOL = 1e-12
SPHERE_TOL = 1e-12


def as_point(coords, dim: int | None = None) -> np.ndarray:
    p = np.asarray(coords, dtype=float)
    if p.ndim == 0:
        p = p.reshape(1)
    if p.ndim != 1:
        raise UsageError(f"a point must be a 1-d coordinate vector, got shape {p.shape}")
    if dim is not None and p.shape[0] != dim:
        raise UsageError(f"point has dimension {p.shape[0]}, expected {dim}")
    return p


def as_points(coords, dim: int | None = None) -> np.ndarray:
    """Coerce to an ``(m, d)`` float array; 1-d input is read as m scalar points."""
    p = np.asarray(coords, dtype=float)
    if p.ndim == 1:
        p = p[:, None] if dim in (None, 1) else p[None, :]
    if p.ndim != 2:
        raise UsageError(f"expected an (m, d) array of points, got shape {p.shape}")
    if dim is not None and p.shape[1] != dim:
        raise UsageError(f"points have dimension {p.shape[1]}, expected {dim}")
    return p


# ---------------------------------------------------------------------------
# profiles h(theta) for difference kernels


def _gaussian(r2):
    return np.exp(-r2)


def _mexican_hat(r2):
    return -(1.0 - r2) * np.exp(-r2 / 2.0)


_RADIAL_PROFILES = {
    "gaussian": _gaussian,
    "mexican-hat": _mexican_hat,
}


@dataclass(frozen=True)
class HFunction:
    """A profile ``h`` with ``h(-theta) = conj(h(theta))``.

    The value is ``amplitude * base(theta / width) * exp(i theta.modulation) + offset``
    where ``base`` is one of ``gaussian``, ``mexican-hat`` (radial) or ``cos``
    (``cos(theta.freq)``).
    """

    name: str
    dim: int = 1
    amplitude: float = 1.0
    width: float = 1.0
    offset: float = 0.0
    freq: tuple[float, ...] | None = None
    modulation: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.name not in (*_RADIAL_PROFILES, "cos"):
            raise UsageError(f"unknown profile {self.name!r}")
        if self.dim < 1:
            raise UsageError("profile dimension must be positive")
        if self.width <= 0:
            raise UsageError("profile width must be positive")
        for vec in (self.freq, self.modulation):
            if vec is not None and len(vec) != self.dim:
                raise UsageError("freq/modulation length must equal dim")

    @property
    def is_real(self) -> bool:
        return self.modulation is None or not np.any(self.modulation)

    @property
    def decay_scale(self) -> float:
        return self.width

    def __call__(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float)
        if theta.shape[-1:] != (self.dim,):
            if self.dim == 1 and (theta.ndim == 0 or theta.shape[-1] != 1):
                theta = theta[..., None]
            else:
                raise UsageError(f"theta has trailing dimension {theta.shape[-1:]}, expected {self.dim}")
        s = theta / self.width
        if self.name == "cos":
            freq = np.ones(self.dim) if self.freq is None else np.asarray(self.freq, float)
            base = np.cos(s @ freq)
        else:
            base = _RADIAL_PROFILES[self.name](np.sum(s * s, axis=-1))
        val = self.amplitude * base
        if not self.is_real:
            val = val * np.exp(1j * (theta @ np.asarray(self.modulation, float)))
        return val + self.offset

    def at_zero(self) -> float:
        return float(np.real(self(np.zeros(self.dim))))

    def to_dict(self) -> dict:
        out: dict[str, Any] = {"name": self.name, "dim": self.dim}
        if self.amplitude != 1.0:
            out["amplitude"] = self.amplitude
        if self.width != 1.0:
            out["width"] = self.width
        if self.offset != 0.0:
            out["offset"] = self.offset
        if self.freq is not None:
            out["freq"] = list(self.freq)
        if self.modulation is not None:
            out["modulation"] = list(self.modulation)
        return out

    @classmethod
    def from_dict(cls, desc: dict) -> "HFunction":
        desc = dict(desc)
        for key in ("freq", "modulation"):
            if key in desc and desc[key] is not None:
                desc[key] = tuple(float(v) for v in np.atleast_1d(desc[key]))
        try:
            return cls(**desc)
        except TypeError as exc:
            raise UsageError(f"bad profile descriptor: {exc}") from None


# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class KernelSpec:
    """An evaluatable Hermitian kernel ``K(xi, eta)`` on a subset of R^dim.

    ``evaluate`` must broadcast over leading axes of its two ``(..., dim)``
    arguments.  ``h`` is set for difference kernels ``K(xi, eta) = h(xi - eta)``;
    ``sphere_radius`` marks kernels living on the sphere of that radius.
    """

    dim: int
    evaluate: Callable[[np.ndarray, np.ndarray], np.ndarray]
    is_real: bool = True
    label: str = "kernel"
    h: HFunction | None = None
    sphere_radius: float | None = None
    descriptor: dict = field(default_factory=dict)

    def __call__(self, xi, eta) -> np.ndarray:
        val = np.asarray(self.evaluate(np.asarray(xi, float), np.asarray(eta, float)))
        return val.real if self.is_real and np.iscomplexobj(val) else val

    def matrix(self, x, y=None) -> np.ndarray:
        """Kernel matrix ``[K(x_i, y_j)]`` for point arrays of shape ``(m, d)``."""
        x = as_points(x, self.dim)
        y = x if y is None else as_points(y, self.dim)
        return self(x[:, None, :], y[None, :, :])

    def diagonal(self, x) -> np.ndarray:
        """Real diagonal values ``K(x_i, x_i)``; raises on a non-real diagonal."""
        x = as_points(x, self.dim)
        return _real_diagonal(self(x, x))


def _real_diagonal(values) -> np.ndarray:
    values = np.asarray(values)
    if np.iscomplexobj(values):
        if values.size and np.max(np.abs(values.imag)) > DIAGONAL_REAL_TOL:
            raise InvalidKernelError("kernel diagonal is not real (Hermitian kernels have a real diagonal)")
        values = values.real
    return values.astype(float)


def _check_point(k: KernelSpec, p) -> np.ndarray:
    p = as_point(p, k.dim)
    if k.sphere_radius is not None:
        lam = k.sphere_radius
        if abs(np.linalg.norm(p) - lam) > SPHERE_TOL * lam:
            raise UsageError(f"point {p} is not on the sphere of radius {lam}")
    return p


def eval_kernel(k: KernelSpec, xi, eta) -> complex:
    xi = _check_point(k, xi)
    eta = _check_point(k, eta)
    return complex(k(xi, eta))


def kappa_from_values(kxx, kyy, kxy, kyx=None) -> np.ndarray:
    """Smaller eigenvalue of ``[[kxx, kxy], [conj(kxy), kyy]]``.

    When ``kyx`` is given the off-diagonal modulus is averaged over both
    orderings, which makes the result exactly symmetric under swapping the
    two points even if the kernel is Hermitian only up to rounding.
    """
    a = _real_diagonal(kxx)
    b = _real_diagonal(kyy)
    off = np.abs(kxy) if kyx is None else 0.5 * (np.abs(kxy) + np.abs(kyx))
    return 0.5 * (a + b) - 0.5 * np.hypot(a - b, 2.0 * off)


def kappa(k: KernelSpec, xi, eta):
    """kappa(xi, eta) for single points or broadcastable ``(..., d)`` arrays."""
    xi = np.asarray(xi, float)
    eta = np.asarray(eta, float)
    scalar = xi.ndim <= 1 and eta.ndim <= 1
    if scalar:
        xi = _check_point(k, xi)
        eta = _check_point(k, eta)
    elif xi.shape[-1] != k.dim or eta.shape[-1] != k.dim:
        raise UsageError(f"points must have trailing dimension {k.dim}")
    val = kappa_from_values(k(xi, xi), k(eta, eta), k(xi, eta), k(eta, xi))
    return float(val) if scalar else val


def two_point_matrix(k: KernelSpec, xi, eta) -> np.ndarray:
    """The Hermitian 2x2 matrix of kernel values at ``xi`` and ``eta``."""
    xi = _check_point(k, xi)
    eta = _check_point(k, eta)
    kxy = complex(k(xi, eta))
    return np.array([[k(xi, xi), kxy], [np.conj(kxy), k(eta, eta)]], dtype=complex)


# ---------------------------------------------------------------------------
# built-in catalog


def constant_kernel(c: float, dim: int = 1) -> KernelSpec:
    c = float(c)

    def evaluate(xi, eta):
        return np.full(np.broadcast_shapes(xi.shape[:-1], eta.shape[:-1]), c)

    return KernelSpec(dim, evaluate, True, f"constant({c:g})",
                      descriptor={"name": "constant", "c": c, "dim": dim})


def difference_kernel(h: HFunction, label: str | None = None) -> KernelSpec:
    def evaluate(xi, eta):
        return h(xi - eta)

    desc = {"name": "difference", "h": h.to_dict()}
    return KernelSpec(h.dim, evaluate, h.is_real, label or f"difference({h.name})", h=h, descriptor=desc)


CATALOG = {
    "constant": "K == c (params: c, dim)",
    "difference": "K(x, y) = h(x - y) (params: h = {name: gaussian|mexican-hat|cos, dim, amplitude, width, offset, freq, modulation})",
    "gaussian-bump": "h(theta) = exp(-|theta|^2 / width^2) (params: dim, width, amplitude)",
    "mexican-hat": "h(theta) = -(1 - |s|^2) exp(-|s|^2 / 2), s = theta / width (params: dim, width)",
    "dn": "K(x, y) = -|x - y|^2 chi_hat_box(x - y) on the sphere of radius lambda (params: box, lambda)",
}


def builtin_kernel(name: str, **params) -> KernelSpec:
    """Construct a catalog kernel by name; see ``CATALOG`` for parameters."""
    if name not in CATALOG:
        raise UsageError(f"unknown kernel {name!r}; choose from {sorted(CATALOG)}")
    try:
        if name == "constant":
            k = constant_kernel(params.pop("c"), int(params.pop("dim", 1)))
        elif name == "difference":
            h = params.pop("h")
            k = difference_kernel(h if isinstance(h, HFunction) else HFunction.from_dict(h))
        elif name == "dn":
            from .dn_gap import build_dn_kernel
            from .domains import BoxDomain

            box = params.pop("box")
            lam = params.pop("lambda") if "lambda" in params else params.pop("lam")
            k = build_dn_kernel(box if isinstance(box, BoxDomain) else BoxDomain(tuple(box)), float(lam))
        else:
            base = "gaussian" if name == "gaussian-bump" else "mexican-hat"
            h = HFunction.from_dict({"name": base, **params})
            params = {}
            desc = h.to_dict()
            desc["name"] = name
            k = KernelSpec(h.dim, difference_kernel(h).evaluate, h.is_real, name, h=h, descriptor=desc)
    except KeyError as exc:
        raise UsageError(f"kernel {name!r} is missing parameter {exc}") from None
    if params:
        raise UsageError(f"unexpected parameters for kernel {name!r}: {sorted(params)}")
    return k


def kernel_from_descriptor(desc: dict) -> KernelSpec:
    if not isinstance(desc, dict) or "name" not in desc:
        raise UsageError("kernel descriptor must be an object with a 'name' field")
    desc = dict(desc)
    return builtin_kernel(desc.pop("name"), **desc)
