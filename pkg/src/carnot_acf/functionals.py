"""Intrinsic mean values, the ACF functional J and its single-factor form J̃.

Two independent integration routes are provided for J̃:

* solid:  J̃(r) = r^{-2} ∫_{D(x0,r)} |∇_G u|² Γ(x0, ξ) dξ
* surface: J̃(r) = (Q-2)^{-1} ∫_0^1 t M_{tr}(g)(0) dt,  g = |∇_G u(x0∘·)|² / |∇_G N|²

On the surface route g·K is evaluated as c_Q²(Q-2)² N^{2-2Q} |∇_G u|² / |∇Γ|,
which is algebraically equal but never divides by |∇_G N| (zero on the
t-axis of ℍ¹).  u^± enter through the mask 1{±u > 0} applied to |∇_G u|²;
nodes exactly on {u = 0} count as outside both parts.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .errors import InvalidArgumentError
from .gauge import GaugeGeometry, geometry_for
from .groups import CarnotGroup
from .operators import grad_norm_sq, scale_function, translate
from .polynomial import Polynomial, as_fraction
from .quadrature import (Integrand, QuadEstimate, Resolution, gauss_legendre, solid_integral,
                         sphere_integral)


class SignedPart(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"
    WHOLE = "whole"


def _mask(selector: SignedPart, values: np.ndarray) -> np.ndarray:
    if selector is SignedPart.PLUS:
        return (values > 0).astype(float)
    if selector is SignedPart.MINUS:
        return (values < 0).astype(float)
    return np.ones_like(values)


def _origin(group: CarnotGroup, x0):
    if x0 is None:
        return [Fraction(0)] * group.N
    if len(x0) != group.N:
        raise InvalidArgumentError(f"x0 has {len(x0)} coords, group has {group.N}")
    return [as_fraction(c) for c in x0]


def _positive_radius(r):
    if not r > 0:
        raise InvalidArgumentError(f"radius must be positive, got {r!r}")
    return float(r)


def _product(a: QuadEstimate, b: QuadEstimate, scheme: str) -> QuadEstimate:
    return QuadEstimate(a.value * b.value,
                        abs(a.value) * b.abs_error + abs(b.value) * a.abs_error,
                        a.evaluations + b.evaluations, scheme, a.converged and b.converged)


def _evaluator(u) -> Callable[[np.ndarray], np.ndarray]:
    if isinstance(u, Polynomial):
        return u
    if callable(u):
        return u
    raise InvalidArgumentError("u must be a Polynomial or a vectorised callable")


# -- mean value -----------------------------------------------------------------


def mean_value(group: CarnotGroup, u, x0=None, r: float = 1.0,
               resolution: Resolution | None = None,
               geometry: GaugeGeometry | None = None) -> QuadEstimate:
    """M_r(u)(x0) = ∫_{∂D(x0,r)} u(y) K(x0^{-1}∘y) dσ(y), computed at the origin."""
    r = _positive_radius(r)
    geometry = geometry or geometry_for(group)
    f = _evaluator(u)
    origin = np.array([float(c) for c in _origin(group, x0)])

    def integrand(pts):
        return np.asarray(f(group.compose(origin, pts)), dtype=float) * geometry.kernel(pts)

    est = sphere_integral(group, Integrand(integrand, 0.0, "u·K"), r, resolution)
    return QuadEstimate(est.value, est.abs_error, est.evaluations, "mean-value;" + est.scheme,
                        est.converged)


# -- solid route -----------------------------------------------------------------


def _prepared(group: CarnotGroup, u: Polynomial, x0):
    if not isinstance(u, Polynomial):
        raise InvalidArgumentError("the ACF functionals need an exact Polynomial")
    ut = translate(group, u, _origin(group, x0))
    return ut, grad_norm_sq(group, ut)


def acf_j_tilde(group: CarnotGroup, u: Polynomial, x0=None, r: float = 1.0,
                selector: SignedPart = SignedPart.WHOLE,
                resolution: Resolution | None = None,
                geometry: GaugeGeometry | None = None) -> QuadEstimate:
    """r^{-2} ∫_{D(x0,r)} |∇_G u|² 1{selector} Γ(x0, ξ) dξ."""
    r = _positive_radius(r)
    selector = SignedPart(selector)
    geometry = geometry or geometry_for(group)
    ut, gsq = _prepared(group, u, x0)

    def integrand(pts):
        vals = gsq(pts) * geometry.gamma(pts)
        if selector is not SignedPart.WHOLE:
            vals = vals * _mask(selector, ut(pts))
        return vals

    est = solid_integral(group, Integrand(integrand, 2 - group.Q, f"|∇u{selector.value}|²Γ"),
                         r, resolution)
    return est.scaled(1.0 / (r * r), f"j_tilde[{selector.value}];" + est.scheme)


def acf_j(group: CarnotGroup, u: Polynomial, x0=None, r: float = 1.0,
          resolution: Resolution | None = None,
          geometry: GaugeGeometry | None = None) -> QuadEstimate:
    """J(r) = r^{-4} ∫|∇_G u^+|²Γ · ∫|∇_G u^-|²Γ, with first-order error propagation."""
    plus = acf_j_tilde(group, u, x0, r, SignedPart.PLUS, resolution, geometry)
    minus = acf_j_tilde(group, u, x0, r, SignedPart.MINUS, resolution, geometry)
    return _product(plus, minus, "j;" + plus.scheme.split(";", 1)[1])


# -- surface (representation) route --------------------------------------------


def acf_j_tilde_representation(group: CarnotGroup, u: Polynomial, x0=None, r: float = 1.0,
                               t_nodes: int = 16,
                               selector: SignedPart = SignedPart.WHOLE,
                               resolution: Resolution | None = None,
                               geometry: GaugeGeometry | None = None) -> QuadEstimate:
    """(Q-2)^{-1} ∫_0^1 t M_{tr}(g_selector)(0) dt with Gauss-Legendre in t.

    The outer rule is evaluated with ``t_nodes`` and ``2*t_nodes`` points;
    the error adds the outer difference to the propagated sphere errors.
    """
    r = _positive_radius(r)
    if t_nodes < 2:
        raise InvalidArgumentError("t_nodes must be ≥ 2")
    selector = SignedPart(selector)
    geometry = geometry or geometry_for(group)
    ut, gsq = _prepared(group, u, x0)
    Q = group.Q
    c = geometry.gamma_constant

    def integrand(pts):
        n = geometry.norm(pts)
        vals = c * c * (Q - 2) ** 2 * n ** (2 - 2 * Q) * gsq(pts) / geometry.grad_gamma_abs(pts)
        if selector is not SignedPart.WHOLE:
            vals = vals * _mask(selector, ut(pts))
        return vals

    w = Integrand(integrand, 0.0, f"g{selector.value}·K")
    cache: dict[float, QuadEstimate] = {}

    def outer(n):
        tt, wt = gauss_legendre(n)
        terms, errs, evals = [], [], 0
        for t, wi in zip(tt.tolist(), wt.tolist()):
            if t not in cache:
                cache[t] = sphere_integral(group, w, t * r, resolution)
            est = cache[t]
            terms.append(wi * t * est.value)
            errs.append(wi * t * est.abs_error)
            evals += est.evaluations
        return math.fsum(terms) / (Q - 2), math.fsum(errs) / (Q - 2), evals, all(
            cache[t].converged for t in tt.tolist())

    coarse, _, e1, _ = outer(t_nodes)
    fine, sph_err, e2, conv = outer(2 * t_nodes)
    err = abs(fine - coarse) + sph_err
    scheme = f"j_tilde_repr[{selector.value}];GL(t){t_nodes}/{2 * t_nodes}"
    return QuadEstimate(fine, err, e1 + e2, scheme, conv)


def acf_j_representation(group: CarnotGroup, u: Polynomial, x0=None, r: float = 1.0,
                         t_nodes: int = 16, resolution: Resolution | None = None,
                         geometry: GaugeGeometry | None = None) -> QuadEstimate:
    """Product over ± of the surface-route factors; equals J(r)."""
    plus = acf_j_tilde_representation(group, u, x0, r, t_nodes, SignedPart.PLUS,
                                      resolution, geometry)
    minus = acf_j_tilde_representation(group, u, x0, r, t_nodes, SignedPart.MINUS,
                                       resolution, geometry)
    return _product(plus, minus, f"j_repr;GL(t){t_nodes}/{2 * t_nodes}")


# -- scans and monotonicity ----------------------------------------------------------


@dataclass
class RadialScan:
    radii: list[float]
    values: list[float]
    errors: list[float]
    scheme: str = ""

    def __post_init__(self):
        if not (len(self.radii) == len(self.values) == len(self.errors)):
            raise InvalidArgumentError("radii, values and errors differ in length")
        if any(r <= 0 for r in self.radii) or any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise InvalidArgumentError("radii must be positive and strictly increasing")
        if any(not e >= 0 for e in self.errors):
            raise InvalidArgumentError("errors must be nonnegative")

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["r", "value", "abs_error", "scheme"])
        for r, v, e in zip(self.radii, self.values, self.errors):
            writer.writerow([repr(float(r)), repr(float(v)), repr(float(e)), self.scheme])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "RadialScan":
        rows = list(csv.DictReader(io.StringIO(text)))
        return cls([float(r["r"]) for r in rows], [float(r["value"]) for r in rows],
                   [float(r["abs_error"]) for r in rows], rows[0]["scheme"] if rows else "")


def radial_scan(functional: Callable[[float], QuadEstimate], radii: Sequence[float]) -> RadialScan:
    ests = [functional(float(r)) for r in radii]
    return RadialScan([float(r) for r in radii], [e.value for e in ests],
                      [e.abs_error for e in ests], ests[0].scheme if ests else "")


class Trend(str, enum.Enum):
    INCREASING = "increasing"
    DECREASING = "decreasing"
    MIXED = "mixed"
    INCONCLUSIVE = "inconclusive"


@dataclass
class MonotonicityReport:
    classification: Trend
    first_violation: int | None
    confidence_margin: float
    differences: list[float] = field(default_factory=list)
    tolerances: list[float] = field(default_factory=list)

    @property
    def constant_within_error(self) -> bool:
        """Every consecutive difference sits inside its combined error bar."""
        return all(abs(d) <= t for d, t in zip(self.differences, self.tolerances))

    def to_dict(self) -> dict:
        return {"classification": self.classification.value,
                "first_violation": self.first_violation,
                "confidence_margin": self.confidence_margin,
                "constant_within_error": self.constant_within_error,
                "differences": self.differences, "tolerances": self.tolerances}


def scan_monotonicity(scan: RadialScan) -> MonotonicityReport:
    """Classify the trend of a scan, trusting only differences that clear error bars.

    ``first_violation`` is the index i of the first pair (i, i+1) that either
    sits inside its error bars or has the opposite sign to the first pair.
    """
    if len(scan.values) < 3:
        raise InvalidArgumentError("need at least three scan points")
    diffs = [b - a for a, b in zip(scan.values, scan.values[1:])]
    tols = [ea + eb for ea, eb in zip(scan.errors, scan.errors[1:])]
    margin = min(abs(d) - t for d, t in zip(diffs, tols))
    signs = [0 if abs(d) <= t else (1 if d > 0 else -1) for d, t in zip(diffs, tols)]
    first_sign = signs[0]
    violation = next((i for i, s in enumerate(signs) if s == 0 or s != first_sign), None)
    if 0 in signs:
        trend = Trend.INCONCLUSIVE
    elif all(s > 0 for s in signs):
        trend = Trend.INCREASING
    elif all(s < 0 for s in signs):
        trend = Trend.DECREASING
    else:
        trend = Trend.MIXED
    return MonotonicityReport(trend, violation, float(margin), diffs, tols)


# -- scaling identity --------------------------------------------------------------


@dataclass
class ScalingCheck:
    residual: float
    budget: float
    at_radius: QuadEstimate
    rescaled: QuadEstimate

    @property
    def passed(self) -> bool:
        return self.residual <= self.budget


def scaling_identity_check(group: CarnotGroup, u: Polynomial, r,
                           resolution: Resolution | None = None,
                           geometry: GaugeGeometry | None = None) -> ScalingCheck:
    """Compare J_u(r) with J_{u_r}(1), u_r = u(δ_r ·)/r, by two separate quadratures."""
    r = as_fraction(r)
    if r <= 0:
        raise InvalidArgumentError(f"scale must be positive, got {r}")
    left = acf_j(group, u, None, float(r), resolution, geometry)
    if r == 1:
        right = left
    else:
        right = acf_j(group, scale_function(group, u, r), None, 1.0, resolution, geometry)
    return ScalingCheck(abs(left.value - right.value), left.abs_error + right.abs_error, left, right)
