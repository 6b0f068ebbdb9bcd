"""Deterministic quadrature over gauge balls D(0,r) and gauge spheres ∂D(0,r).

Charts
------
ℍ¹ spheres are charted by ω(φ,θ) = (√sinφ cosθ, √sinφ sinθ, cosφ), which
satisfies N(ω) = 1, and ∂D(0,r) = δ_r ω.  ℝᴺ uses hyperspherical angles.
In the solid coordinates p = δ_s ω(angles) the volume element is
s^{Q-1} |det[Dω, ∂ω]| ds d(angles), where D = diag(d_i); for the ℍ¹
chart the angular density is identically 1.

Rules
-----
Gauss-Legendre on (0,r) radially and on (0,π) for polar angles, midpoint
(periodic trapezoid) on [0,2π) for the azimuth.  None of these touch an
endpoint, so no node sits on the pole N = 0 or on a chart singularity.
Every estimate is computed at resolution n and 2n; the 2n value is
reported with error |I_n - I_2n| plus a round-off floor.  Sums use
``math.fsum``, so the result does not depend on evaluation order.
"""

from __future__ import annotations

import functools
import math
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, NamedTuple

import numpy as np

from .errors import InvalidArgumentError, ParseError, UnsupportedGroupError
from .gauge import euclidean_grad_norm_abs, norm_values
from .groups import CarnotGroup

ROUNDOFF_FACTOR = 64.0
CONVERGENCE_RTOL = 1e-6


@dataclass(frozen=True)
class Resolution:
    """Node counts for deterministic rules plus Monte-Carlo settings.

    Deterministic estimates use these counts and their doubles.
    """

    radial_nodes: int = 16
    angular_nodes_phi: int = 32
    angular_nodes_theta: int = 32
    mc_samples: int = 1_000_000
    seed: int = 20240917

    def __post_init__(self):
        for name in ("radial_nodes", "angular_nodes_phi", "angular_nodes_theta"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 2:
                raise InvalidArgumentError(f"{name} must be an integer ≥ 2, got {v!r}")
        if self.angular_nodes_theta % 2:
            # even counts make the azimuthal rule invariant under θ → θ + π
            raise InvalidArgumentError("angular_nodes_theta must be even")
        if not isinstance(self.mc_samples, int) or self.mc_samples < 0:
            raise InvalidArgumentError("mc_samples must be a nonnegative integer")
        if not isinstance(self.seed, int):
            raise InvalidArgumentError("seed must be an integer")

    def doubled(self) -> "Resolution":
        return Resolution(2 * self.radial_nodes, 2 * self.angular_nodes_phi,
                          2 * self.angular_nodes_theta, self.mc_samples, self.seed)

    def halved(self) -> "Resolution":
        return Resolution(max(2, self.radial_nodes // 2), max(2, self.angular_nodes_phi // 2),
                          max(2, 2 * (self.angular_nodes_theta // 4)), self.mc_samples, self.seed)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data) -> "Resolution":
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise ParseError(f"unknown resolution keys {sorted(unknown)}")
        return cls(**data)


@dataclass(frozen=True)
class Integrand:
    """Vectorised evaluator on (M, N) point arrays.

    ``singular_exponent`` α promises that |f| N^{-α} stays bounded near 0.
    """

    func: Callable[[np.ndarray], np.ndarray]
    singular_exponent: float = 0.0
    name: str = ""

    def __call__(self, pts):
        return self.func(pts)


@dataclass(frozen=True)
class QuadEstimate:
    value: float
    abs_error: float
    evaluations: int
    scheme: str
    converged: bool = True
    meta: dict = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {"value": self.value, "abs_error": self.abs_error,
                "evaluations": self.evaluations, "scheme": self.scheme,
                "converged": self.converged, **({"meta": self.meta} if self.meta else {})}

    def scaled(self, c: float, scheme: str | None = None) -> "QuadEstimate":
        return QuadEstimate(self.value * c, self.abs_error * abs(c), self.evaluations,
                            scheme or self.scheme, self.converged, dict(self.meta))


def fsum(values: np.ndarray) -> float:
    return math.fsum(np.ravel(values).tolist())


# -- 1-D rules ------------------------------------------------------------


@functools.lru_cache(maxsize=None)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on (0, 1)."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


def periodic_midpoint(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Midpoint rule on [0, 2π); spectrally accurate for periodic integrands."""
    theta = (np.arange(n) + 0.5) * (2.0 * np.pi / n)
    return theta, np.full(n, 2.0 * np.pi / n)


# -- sphere charts ------------------------------------------------------------


class ChartNodes(NamedTuple):
    omega: np.ndarray      # (M, N) points on the unit gauge sphere
    partials: np.ndarray   # (M, N, N-1) ∂ω/∂angles
    weights: np.ndarray    # (M,) angular quadrature weights


def _require_chart(group: CarnotGroup):
    if group.kind not in ("euclidean", "heisenberg1"):
        raise UnsupportedGroupError(f"no gauge-sphere chart for {group.kind!r}")


def _angular_grid(group: CarnotGroup, n_phi: int, n_theta: int):
    """Tensor grid of angles (M, N-1) and product weights (M,)."""
    n_polar = group.N - 2 if group.kind == "euclidean" else 1
    u, wu = gauss_legendre(n_phi)
    phi, wphi = np.pi * u, np.pi * wu
    theta, wtheta = periodic_midpoint(n_theta)
    axes = [phi] * n_polar + [theta]
    waxes = [wphi] * n_polar + [wtheta]
    grids = np.meshgrid(*axes, indexing="ij")
    wgrids = np.meshgrid(*waxes, indexing="ij")
    angles = np.stack([g.ravel() for g in grids], axis=-1)
    weights = np.prod(np.stack([g.ravel() for g in wgrids], axis=-1), axis=-1)
    return angles, weights


def _heisenberg_chart(angles: np.ndarray):
    phi, theta = angles[:, 0], angles[:, 1]
    sphi, cphi = np.sin(phi), np.cos(phi)
    a = np.sqrt(sphi)
    ct, st = np.cos(theta), np.sin(theta)
    omega = np.stack([a * ct, a * st, cphi], axis=-1)
    da = cphi / (2.0 * a)
    d_phi = np.stack([da * ct, da * st, -sphi], axis=-1)
    d_theta = np.stack([-a * st, a * ct, np.zeros_like(phi)], axis=-1)
    return omega, np.stack([d_phi, d_theta], axis=-1)


def _hyperspherical_chart(angles: np.ndarray):
    """ω_k = (Π_{i<k} sin a_i) cos a_k for k < N, ω_N = Π_{i<N} sin a_i."""
    m, nang = angles.shape
    n = nang + 1
    s, c = np.sin(angles), np.cos(angles)
    omega = np.empty((m, n))
    partials = np.zeros((m, n, nang))
    for k in range(n):
        last = k == n - 1
        factors = [s[:, i] for i in range(k)] + ([] if last else [c[:, k]])
        omega[:, k] = np.prod(np.stack(factors, axis=-1), axis=-1) if factors else 1.0
        for j in range(min(k + 1, nang)):
            dfs = []
            for i in range(k):
                dfs.append(c[:, i] if i == j else s[:, i])
            if not last:
                dfs.append(-s[:, k] if j == k else c[:, k])
            partials[:, k, j] = np.prod(np.stack(dfs, axis=-1), axis=-1)
    return omega, partials


@functools.lru_cache(maxsize=64)
def unit_chart(group: CarnotGroup, n_phi: int, n_theta: int) -> ChartNodes:
    _require_chart(group)
    angles, weights = _angular_grid(group, n_phi, n_theta)
    if group.kind == "heisenberg1":
        omega, partials = _heisenberg_chart(angles)
    else:
        omega, partials = _hyperspherical_chart(angles)
    for arr in (omega, partials, weights):
        arr.setflags(write=False)
    return ChartNodes(omega, partials, weights)


def _surface_element(partials: np.ndarray) -> np.ndarray:
    if partials.shape[-1] == 2 and partials.shape[-2] == 3:
        return np.linalg.norm(np.cross(partials[..., 0], partials[..., 1]), axis=-1)
    gram = np.einsum("mki,mkj->mij", partials, partials)
    return np.sqrt(np.linalg.det(gram))


def sphere_nodes(group: CarnotGroup, r: float, n_phi: int, n_theta: int):
    """Points on ∂D(0,r) and weights for ∫ · dH^{N-1}."""
    chart = unit_chart(group, n_phi, n_theta)
    scale = np.array([float(r) ** d for d in group.dilation_weights])
    pts = chart.omega * scale
    partials = chart.partials * scale[None, :, None]
    return pts, chart.weights * _surface_element(partials)


@functools.lru_cache(maxsize=64)
def solid_angular_density(group: CarnotGroup, n_phi: int, n_theta: int) -> np.ndarray:
    """|det[Dω, ∂ω]|: the angular factor of dV = s^{Q-1} ds × density d(angles)."""
    chart = unit_chart(group, n_phi, n_theta)
    d = np.array(group.dilation_weights, dtype=float)
    radial = (chart.omega * d)[:, :, None]
    mat = np.concatenate([radial, chart.partials], axis=-1)
    out = np.abs(np.linalg.det(mat))
    out.setflags(write=False)
    return out


def chart_norm_defect(group: CarnotGroup, r: float, resolution: Resolution | None = None) -> float:
    """max |N(node) - r| over the sphere nodes."""
    resolution = resolution or Resolution()
    pts, _ = sphere_nodes(group, r, resolution.angular_nodes_phi, resolution.angular_nodes_theta)
    return float(np.max(np.abs(norm_values(group, pts) - r)))


# -- estimates --------------------------------------------------------------


def _weighted_sum(values: np.ndarray, weights: np.ndarray) -> tuple[float, float]:
    terms = values * weights
    if not np.all(np.isfinite(terms)):
        raise InvalidArgumentError("integrand produced non-finite values at quadrature nodes")
    return fsum(terms), fsum(np.abs(terms))


def _combine(coarse: float, fine: float, magnitude: float, evaluations: int,
             scheme: str, meta: dict | None = None) -> QuadEstimate:
    floor = ROUNDOFF_FACTOR * np.finfo(float).eps * magnitude
    err = abs(fine - coarse) + floor
    converged = abs(fine - coarse) <= CONVERGENCE_RTOL * max(magnitude, np.finfo(float).tiny) + floor
    return QuadEstimate(float(fine), float(err), evaluations, scheme, bool(converged),
                        dict(meta or {}))


def _radial_rule(n: int, r_in: float, r_out: float, Q: int, beta: float | None):
    """Radial nodes/weights for ∫_{r_in}^{r_out} s^{Q-1} F(s) ds.

    ``beta`` = Q + α.  For integer β the integrand s^{β-1}·(bounded) is smooth
    in s and plain Gauss-Legendre applies; otherwise s = r σ^{1/β} removes
    the algebraic endpoint behaviour.
    """
    u, w = gauss_legendre(n)
    if beta is None or float(beta).is_integer() or r_in > 0:
        s = r_in + (r_out - r_in) * u
        return s, (r_out - r_in) * w * s ** (Q - 1)
    s = r_out * u ** (1.0 / beta)
    return s, (r_out ** Q / beta) * w * u ** (Q / beta - 1.0)


def _solid_once(group: CarnotGroup, f: Integrand, r_in: float, r_out: float,
                n_s: int, n_phi: int, n_theta: int, beta):
    chart = unit_chart(group, n_phi, n_theta)
    dens = solid_angular_density(group, n_phi, n_theta)
    s, ws = _radial_rule(n_s, r_in, r_out, group.Q, beta)
    d = np.array(group.dilation_weights, dtype=float)
    scales = s[:, None] ** d[None, :]                       # (n_s, N)
    pts = (scales[:, None, :] * chart.omega[None, :, :]).reshape(-1, group.N)
    weights = (ws[:, None] * (chart.weights * dens)[None, :]).ravel()
    vals = np.asarray(f(pts), dtype=float)
    total, mag = _weighted_sum(vals, weights)
    return total, mag, pts.shape[0]


def _scheme(kind: str, res: Resolution) -> str:
    fine = res.doubled()
    if kind == "solid":
        return (f"solid:GL(s){res.radial_nodes}/{fine.radial_nodes}"
                f"xGL(phi){res.angular_nodes_phi}/{fine.angular_nodes_phi}"
                f"xmid(theta){res.angular_nodes_theta}/{fine.angular_nodes_theta}")
    return (f"sphere:GL(phi){res.angular_nodes_phi}/{fine.angular_nodes_phi}"
            f"xmid(theta){res.angular_nodes_theta}/{fine.angular_nodes_theta}")


def solid_integral(group: CarnotGroup, f: Integrand, r: float,
                   resolution: Resolution | None = None) -> QuadEstimate:
    """∫_{D(0,r)} f dV."""
    _require_chart(group)
    if not r > 0:
        raise InvalidArgumentError(f"radius must be positive, got {r!r}")
    beta = group.Q + f.singular_exponent
    if beta <= 0:
        raise InvalidArgumentError(
            f"singular exponent {f.singular_exponent} is not integrable in Q = {group.Q}")
    res = resolution or Resolution()
    fine = res.doubled()
    c, _, n1 = _solid_once(group, f, 0.0, r, res.radial_nodes, res.angular_nodes_phi,
                           res.angular_nodes_theta, beta)
    v, mag, n2 = _solid_once(group, f, 0.0, r, fine.radial_nodes, fine.angular_nodes_phi,
                             fine.angular_nodes_theta, beta)
    return _combine(c, v, mag, n1 + n2, _scheme("solid", res))


def shell_integral(group: CarnotGroup, f: Integrand, r_in: float, r_out: float,
                   resolution: Resolution | None = None) -> QuadEstimate:
    """∫_{r_in < N < r_out} f dV for 0 < r_in < r_out."""
    _require_chart(group)
    if not 0 < r_in < r_out:
        raise InvalidArgumentError(f"need 0 < r_in < r_out, got {r_in!r}, {r_out!r}")
    res = resolution or Resolution()
    fine = res.doubled()
    c, _, n1 = _solid_once(group, f, r_in, r_out, res.radial_nodes, res.angular_nodes_phi,
                           res.angular_nodes_theta, None)
    v, mag, n2 = _solid_once(group, f, r_in, r_out, fine.radial_nodes, fine.angular_nodes_phi,
                             fine.angular_nodes_theta, None)
    return _combine(c, v, mag, n1 + n2, _scheme("solid", res).replace("solid", "shell"))


def _sphere_once(group, w, r, n_phi, n_theta):
    pts, weights = sphere_nodes(group, r, n_phi, n_theta)
    vals = np.asarray(w(pts), dtype=float)
    total, mag = _weighted_sum(vals, weights)
    return total, mag, pts.shape[0]


def sphere_integral(group: CarnotGroup, w: Integrand | Callable, r: float,
                    resolution: Resolution | None = None) -> QuadEstimate:
    """∫_{∂D(0,r)} w dH^{N-1} with the Euclidean surface measure."""
    _require_chart(group)
    if not r > 0:
        raise InvalidArgumentError(f"radius must be positive, got {r!r}")
    res = resolution or Resolution()
    fine = res.doubled()
    c, _, n1 = _sphere_once(group, w, r, res.angular_nodes_phi, res.angular_nodes_theta)
    v, mag, n2 = _sphere_once(group, w, r, fine.angular_nodes_phi, fine.angular_nodes_theta)
    return _combine(c, v, mag, n1 + n2, _scheme("sphere", res))


def coarea_shell_average(group: CarnotGroup, w: Integrand | Callable, r: float, eps: float,
                         resolution: Resolution | None = None) -> QuadEstimate:
    """(1/2ε) ∫_{r-ε < N < r+ε} w |∇N| dV, the thin-shell stand-in for ∫_{∂D} w dσ."""

    def weighted(pts):
        return np.asarray(w(pts), dtype=float) * euclidean_grad_norm_abs(group, pts)

    est = shell_integral(group, Integrand(weighted, 0.0, "w|∇N|"), r - eps, r + eps, resolution)
    return est.scaled(1.0 / (2.0 * eps), est.scheme + f";coarea-shell(eps={eps:g})")


class CoareaCheck(NamedTuple):
    residual: float
    budget: float
    derivative: float
    sphere_value: float


def coarea_consistency(group: CarnotGroup, f: Integrand, r: float, dr: float,
                       resolution: Resolution | None = None) -> CoareaCheck:
    """Compare d/dr ∫_{D(0,r)} f with ∫_{∂D(0,r)} f/|∇N|.

    The derivative is the Richardson combination of centred differences with
    steps dr and 2dr.  The budget is the plain centred-difference error
    estimate |D_dr - D_2dr|/3 plus propagated quadrature errors.
    """
    if not 0 < 2 * dr < r:
        raise InvalidArgumentError("need 0 < 2 dr < r")
    s = {k: solid_integral(group, f, r + k * dr, resolution) for k in (-2, -1, 1, 2)}
    d1 = (s[1].value - s[-1].value) / (2 * dr)
    d2 = (s[2].value - s[-2].value) / (4 * dr)
    deriv = (4 * d1 - d2) / 3

    def over_grad(pts):
        return np.asarray(f(pts), dtype=float) / euclidean_grad_norm_abs(group, pts)

    sph = sphere_integral(group, Integrand(over_grad, f.singular_exponent, "f/|∇N|"), r, resolution)
    quad_err = (4 / 3 * (s[1].abs_error + s[-1].abs_error) / (2 * dr)
                + 1 / 3 * (s[2].abs_error + s[-2].abs_error) / (4 * dr)
                + sph.abs_error)
    budget = abs(d1 - d2) / 3 + quad_err
    return CoareaCheck(abs(deriv - sph.value), budget, deriv, sph.value)


def check_singular_exponent(group: CarnotGroup, f: Integrand, levels=(1e-2, 1e-3),
                            growth_limit: float = 10.0) -> bool:
    """Spot-check that |f| N^{-α} does not blow up as N → 0.

    Samples the chart at each level and requires the sup of |f| N^{-α} at the
    smallest level to be within ``growth_limit`` of the sup at the largest.
    """
    sups = []
    for lev in levels:
        pts, _ = sphere_nodes(group, lev, 8, 8)
        vals = np.abs(np.asarray(f(pts), dtype=float)) * lev ** (-f.singular_exponent)
        sups.append(float(np.max(vals)))
    return bool(np.all(np.isfinite(sups))) and sups[-1] <= growth_limit * max(sups[0], 1e-300)
