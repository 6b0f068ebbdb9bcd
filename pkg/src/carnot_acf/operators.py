"""Stratified differential operators acting on exact polynomials.

Everything here is exact rational algebra except :func:`fd_sub_laplacian`,
which is a numeric finite-difference companion working along the flows
of the horizontal fields.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

from .errors import InvalidArgumentError
from .groups import CarnotGroup, VectorFieldSpec
from .polynomial import Polynomial, as_fraction

HorizontalSection = tuple[Polynomial, ...]

INHOMOGENEOUS = "inhomogeneous"


def apply_field(field: VectorFieldSpec, u: Polynomial) -> Polynomial:
    """∂_j u + Σ_k p_{j,k} ∂_k u."""
    out = u.diff(field.index)
    for k, p in field.coefficients:
        if p.nvars != u.nvars:
            raise InvalidArgumentError("field and polynomial have different variable counts")
        out = out + p * u.diff(k)
    return out


def horizontal_gradient(group: CarnotGroup, u: Polynomial) -> HorizontalSection:
    return tuple(apply_field(f, u) for f in group.horizontal_fields)


def sub_laplacian(group: CarnotGroup, u: Polynomial) -> Polynomial:
    """Δ_G u = Σ_j X_j(X_j u)."""
    out = group.ring.zero()
    for f in group.horizontal_fields:
        out = out + apply_field(f, apply_field(f, u))
    return out


def is_harmonic(group: CarnotGroup, u: Polynomial) -> bool:
    return sub_laplacian(group, u).is_zero()


def grad_norm_sq(group: CarnotGroup, u: Polynomial) -> Polynomial:
    """|∇_G u|² = Σ_j (X_j u)²."""
    out = group.ring.zero()
    for g in horizontal_gradient(group, u):
        out = out + g * g
    return out


def dilate_polynomial(group: CarnotGroup, u: Polynomial, lam) -> Polynomial:
    """u ∘ δ_λ for rational λ > 0."""
    lam = as_fraction(lam)
    if lam <= 0:
        raise InvalidArgumentError(f"dilation factor must be positive, got {lam}")
    return u.scale_vars([lam ** d for d in group.dilation_weights])


def scale_function(group: CarnotGroup, u: Polynomial, r) -> Polynomial:
    """u_r(x) = u(δ_r x) / r."""
    r = as_fraction(r)
    if r <= 0:
        raise InvalidArgumentError(f"scale must be positive, got {r}")
    return dilate_polynomial(group, u, r) / r


def translate(group: CarnotGroup, u: Polynomial, p: Sequence) -> Polynomial:
    """u ∘ τ_p, i.e. z ↦ u(p ∘ z), composed exactly with the group law."""
    p = [as_fraction(c) for c in p]
    if len(p) != group.N:
        raise InvalidArgumentError(f"translation point has {len(p)} coords, group has {group.N}")
    if all(c == 0 for c in p):
        return u
    z = list(group.variables())
    return u.compose(group.compose(p, z))


def check_odd_symmetry(u: Polynomial) -> bool:
    """True iff u(-x, -y, t) = -u(x, y, t) in ℍ¹ coordinates.

    The involution flips every weight-1 coordinate, which for ℍ¹ is exactly
    (x, y, t) → (-x, -y, t).
    """
    flips = [-1 if w == 1 else 1 for w in u.ring.weights]
    return (u.scale_vars(flips) + u).is_zero()


def g_degree(u: Polynomial) -> int | str:
    """Common G-homogeneous degree of all monomials, or ``"inhomogeneous"``.

    The zero polynomial is reported as degree 0 by convention.
    """
    degrees = u.g_degrees()
    if not degrees:
        return 0
    if len(degrees) == 1:
        return degrees.pop()
    return INHOMOGENEOUS


def fd_sub_laplacian(group: CarnotGroup, f: Callable, p: Sequence, h) -> object:
    """Central second differences along the horizontal one-parameter subgroups.

    For a left-invariant X_j the curve s ↦ p ∘ (s e_j) is an integral curve,
    so (f(p∘he_j) - 2f(p) + f(p∘(-h)e_j)) / h² = X_j² f(p) + O(h²).
    ``f`` takes a coordinate list; scalar arithmetic of any type (float,
    Fraction, mpmath) flows through unchanged.
    """
    f0 = f(list(p))
    total = 0
    for j in range(group.m):
        e = [0] * group.N
        e[j] = h
        fwd = f(group.compose(list(p), e))
        e[j] = -h
        bwd = f(group.compose(list(p), e))
        total = total + (fwd - 2 * f0 + bwd)
    return total / (h * h)


def mp_coerce(mp) -> Callable[[Fraction], object]:
    """Fraction → mpmath number converter for :meth:`Polynomial.evaluate`."""
    return lambda c: mp.mpf(c.numerator) / c.denominator
