"""Closed-form gauge geometry: the norm N, Γ = c_Q N^{2-Q}, gradients and K.

For ℍ¹, with ρ = x² + y² and N⁴ = ρ² + t²::

    ∇N   = (4ρx, 4ρy, 2t) / (4N³)
    ∇_H N = (4(ρx + ty), 4(ρy - tx)) / (4N³),   |∇_H N|² = ρ / N²

and since ∇Γ = c_Q(2-Q) N^{1-Q} ∇N (and likewise horizontally),

    K = |∇_H Γ|² / |∇Γ| = c_Q (Q-2) N^{1-Q} |∇_H N|² / |∇N|.

All evaluators are vectorised over arrays of shape (M, N).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import SingularityError, UnsupportedGroupError
from .groups import CarnotGroup

SUPPORTED_KINDS = ("euclidean", "heisenberg1")


def _require_supported(group: CarnotGroup):
    if group.kind not in SUPPORTED_KINDS:
        raise UnsupportedGroupError(
            f"no closed-form gauge norm or fundamental solution for {group.kind!r}")


def _points(group: CarnotGroup, p) -> np.ndarray:
    pts = np.asarray(p, dtype=float)
    if pts.shape[-1] != group.N:
        raise ValueError(f"points have {pts.shape[-1]} coords, group has {group.N}")
    return pts


def norm_values(group: CarnotGroup, pts: np.ndarray) -> np.ndarray:
    _require_supported(group)
    if group.kind == "euclidean":
        return np.sqrt(np.sum(pts * pts, axis=-1))
    x, y, t = pts[..., 0], pts[..., 1], pts[..., 2]
    rho = x * x + y * y
    return np.sqrt(np.sqrt(rho * rho + t * t))


def gauge_norm(group: CarnotGroup, p):
    """Homogeneous norm N(p); scalar in, scalar out."""
    pts = _points(group, p)
    out = norm_values(group, pts)
    return float(out) if out.ndim == 0 else out


def scalar_gauge_norm(group: CarnotGroup, p):
    """N(p) with plain scalar arithmetic, so mpmath and Fractions work."""
    _require_supported(group)
    if group.kind == "euclidean":
        return sum(c * c for c in p) ** 0.5
    x, y, t = p
    rho = x * x + y * y
    return (rho * rho + t * t) ** 0.25


def _nonzero(n: np.ndarray, what: str):
    if np.any(n == 0):
        raise SingularityError(f"{what} is singular at the origin")


def grad_norm(group: CarnotGroup, pts: np.ndarray) -> np.ndarray:
    """Full Euclidean gradient ∇N, shape (..., N)."""
    n = norm_values(group, pts)
    _nonzero(n, "∇N")
    if group.kind == "euclidean":
        return pts / n[..., None]
    x, y, t = pts[..., 0], pts[..., 1], pts[..., 2]
    rho = x * x + y * y
    denom = 4.0 * n ** 3
    return np.stack([4 * rho * x / denom, 4 * rho * y / denom, 2 * t / denom], axis=-1)


def horizontal_grad_norm(group: CarnotGroup, pts: np.ndarray) -> np.ndarray:
    """Coordinates of ∇_G N in the horizontal frame, shape (..., m)."""
    n = norm_values(group, pts)
    _nonzero(n, "∇_G N")
    if group.kind == "euclidean":
        return pts / n[..., None]
    x, y, t = pts[..., 0], pts[..., 1], pts[..., 2]
    rho = x * x + y * y
    denom = 4.0 * n ** 3
    return np.stack([4 * (rho * x + t * y) / denom, 4 * (rho * y - t * x) / denom], axis=-1)


def horizontal_grad_norm_sq(group: CarnotGroup, pts: np.ndarray) -> np.ndarray:
    """|∇_G N|², via the closed form (1 in ℝᴺ, ρ/N² in ℍ¹)."""
    n = norm_values(group, pts)
    _nonzero(n, "|∇_G N|")
    if group.kind == "euclidean":
        return np.ones_like(n)
    rho = pts[..., 0] ** 2 + pts[..., 1] ** 2
    return rho / (n * n)


def euclidean_grad_norm_abs(group: CarnotGroup, pts: np.ndarray) -> np.ndarray:
    """|∇N| (Euclidean length of the full gradient)."""
    n = norm_values(group, pts)
    _nonzero(n, "|∇N|")
    if group.kind == "euclidean":
        return np.ones_like(n)
    x, y, t = pts[..., 0], pts[..., 1], pts[..., 2]
    rho = x * x + y * y
    return np.sqrt(16 * rho ** 3 + 4 * t * t) / (4.0 * n ** 3)


@dataclass(frozen=True)
class GaugeGeometry:
    """Gauge norm, Γ and the mean-value kernel K for a supported group.

    ``gamma_constant`` is c_Q.  :func:`geometry_for` fixes it so that
    ∫_{∂D(0,r)} K dσ = 1.
    """

    group: CarnotGroup
    gamma_constant: float = 1.0
    normalization_meta: tuple = ()

    def __post_init__(self):
        _require_supported(self.group)

    @property
    def Q(self) -> int:
        return self.group.Q

    def with_constant(self, c: float) -> "GaugeGeometry":
        return replace(self, gamma_constant=float(c))

    def norm(self, pts) -> np.ndarray:
        return norm_values(self.group, _points(self.group, pts))

    def gamma(self, pts) -> np.ndarray:
        pts = _points(self.group, pts)
        n = norm_values(self.group, pts)
        _nonzero(n, "Γ")
        return self.gamma_constant * n ** (2 - self.Q)

    def grad_gamma_abs(self, pts) -> np.ndarray:
        """|∇Γ| = c_Q (Q-2) N^{1-Q} |∇N|."""
        pts = _points(self.group, pts)
        n = norm_values(self.group, pts)
        return (self.gamma_constant * (self.Q - 2) * n ** (1 - self.Q)
                * euclidean_grad_norm_abs(self.group, pts))

    def horizontal_grad_gamma_abs(self, pts) -> np.ndarray:
        """|∇_G Γ| = c_Q (Q-2) N^{1-Q} |∇_G N|."""
        pts = _points(self.group, pts)
        n = norm_values(self.group, pts)
        return (self.gamma_constant * (self.Q - 2) * n ** (1 - self.Q)
                * np.sqrt(horizontal_grad_norm_sq(self.group, pts)))

    def kernel(self, pts) -> np.ndarray:
        """K = |∇_G Γ|² / |∇Γ|, simplified to c_Q(Q-2) N^{1-Q} |∇_G N|² / |∇N|."""
        pts = _points(self.group, pts)
        n = norm_values(self.group, pts)
        _nonzero(n, "K")
        return (self.gamma_constant * (self.Q - 2) * n ** (1 - self.Q)
                * horizontal_grad_norm_sq(self.group, pts)
                / euclidean_grad_norm_abs(self.group, pts))


def fix_gamma_constant(group: CarnotGroup, resolution=None) -> float:
    """c_Q making the mean-value kernel integrate to one on ∂D(0,1)."""
    from .quadrature import Integrand, Resolution, sphere_integral

    resolution = resolution or Resolution()
    unit = GaugeGeometry(group, 1.0)
    est = sphere_integral(group, Integrand(unit.kernel, name="K[c=1]"), 1.0, resolution)
    if not (est.value > 0 and math.isfinite(est.value)):
        from .errors import QuadratureError
        raise QuadratureError(f"kernel normalisation integral is {est.value}")
    return 1.0 / est.value


@functools.lru_cache(maxsize=None)
def _cached_geometry(group: CarnotGroup, resolution) -> GaugeGeometry:
    from .quadrature import Integrand, sphere_integral

    unit = GaugeGeometry(group, 1.0)
    est = sphere_integral(group, Integrand(unit.kernel, name="K[c=1]"), 1.0, resolution)
    c = 1.0 / est.value
    meta = (("normalization", "∫_{∂D(0,1)} K dH^{N-1} = 1"),
            ("unit_kernel_integral", est.value),
            ("unit_kernel_integral_error", est.abs_error))
    return GaugeGeometry(group, c, meta)


def geometry_for(group: CarnotGroup, resolution=None) -> GaugeGeometry:
    """Normalised geometry (cached per group and resolution)."""
    from .quadrature import Resolution

    return _cached_geometry(group, resolution or Resolution())


def gamma(group: CarnotGroup, p, geometry: GaugeGeometry | None = None):
    geometry = geometry or geometry_for(group)
    out = geometry.gamma(p)
    return float(out) if np.ndim(out) == 0 else out


def kernel_K(group: CarnotGroup, p, geometry: GaugeGeometry | None = None):
    geometry = geometry or geometry_for(group)
    out = geometry.kernel(p)
    return float(out) if np.ndim(out) == 0 else out
