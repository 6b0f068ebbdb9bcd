"""Carnot group descriptors: dilations, group law and horizontal frames.

Only groups of step at most two are modelled.  In exponential coordinates
such a law reads

    (p ∘ q)_k = p_k + q_k + Σ_{i,j} B[k][i][j] p_i q_j

with B antisymmetric in (i, j), nonzero only for k in the second layer and
i, j in the first.  The left-invariant horizontal fields follow from the
law: X_j f(p) = d/dh f(p ∘ h e_j) at h = 0, which gives
X_j = ∂_j + Σ_{k,i} B[k][i][j] x_i ∂_k.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError, ParseError, UnsupportedGroupError
from .polynomial import Polynomial, PolyRing, as_fraction


@dataclass(frozen=True)
class VectorFieldSpec:
    """X_j = ∂_j + Σ_k p_{j,k} ∂_k, with ``coefficients`` mapping k → p_{j,k}."""

    index: int
    coefficients: tuple[tuple[int, Polynomial], ...] = ()

    def coefficient(self, k: int) -> Polynomial | None:
        for kk, p in self.coefficients:
            if kk == k:
                return p
        return None


@dataclass(frozen=True)
class CarnotGroup:
    kind: str
    topological_dimension: int
    step: int
    layer_dims: tuple[int, ...]
    dilation_weights: tuple[int, ...]
    homogeneous_dimension: int
    law: tuple  # nested tuple B[k][i][j] of Fractions
    ring: PolyRing = field(repr=False)
    horizontal_fields: tuple[VectorFieldSpec, ...] = field(repr=False)

    @property
    def N(self) -> int:
        return self.topological_dimension

    @property
    def Q(self) -> int:
        return self.homogeneous_dimension

    @property
    def m(self) -> int:
        return self.layer_dims[0]

    @property
    def is_abelian(self) -> bool:
        return self.step == 1

    def variables(self) -> tuple[Polynomial, ...]:
        return self.ring.gens()

    def parse(self, text: str) -> Polynomial:
        return self.ring.parse(text)

    # -- point maps --------------------------------------------------------

    def _check_point(self, p, name="point"):
        if isinstance(p, np.ndarray):
            if p.shape[-1] != self.N:
                raise InvalidArgumentError(f"{name} has {p.shape[-1]} coordinates, group has {self.N}")
            return p
        if len(p) != self.N:
            raise InvalidArgumentError(f"{name} has {len(p)} coordinates, group has {self.N}")
        return p

    def dilate(self, lam, p):
        """δ_λ p: coordinate i scaled by λ^{d_i}."""
        if not lam > 0:
            raise InvalidArgumentError(f"dilation factor must be positive, got {lam!r}")
        p = self._check_point(p)
        if isinstance(p, np.ndarray):
            return p * np.array([float(lam) ** d for d in self.dilation_weights])
        return [x * lam ** d for x, d in zip(p, self.dilation_weights)]

    def compose(self, p, q):
        """p ∘ q.  Arrays broadcast over leading axes; sequences are exact."""
        p = self._check_point(p, "left point")
        q = self._check_point(q, "right point")
        if isinstance(p, np.ndarray) or isinstance(q, np.ndarray):
            p = np.asarray(p, dtype=float)
            q = np.asarray(q, dtype=float)
            out = p + q
            for k, i, j, b in self._law_entries():
                out[..., k] = out[..., k] + float(b) * p[..., i] * q[..., j]
            return out
        out = [a + b for a, b in zip(p, q)]
        for k, i, j, b in self._law_entries():
            out[k] = out[k] + b * p[i] * q[j]
        return out

    def inverse(self, p):
        p = self._check_point(p)
        if isinstance(p, np.ndarray):
            return -p
        return [-x for x in p]

    def _law_entries(self):
        cached = self.__dict__.get("_entries")
        if cached is None:
            cached = tuple(
                (k, i, j, self.law[k][i][j])
                for k in range(self.N) for i in range(self.N) for j in range(self.N)
                if self.law[k][i][j] != 0)
            object.__setattr__(self, "_entries", cached)
        return cached

    # -- serialisation -------------------------------------------------------

    def to_json(self) -> dict:
        if self.kind == "euclidean":
            return {"kind": "euclidean", "dim": self.N}
        if self.kind == "heisenberg1":
            return {"kind": "heisenberg1"}
        entries = [[k, i, j, str(b)] for k, i, j, b in self._law_entries()]
        return {"kind": "step2", "layer_dims": list(self.layer_dims),
                "names": list(self.ring.names), "law": entries}


def _fields_from_law(ring: PolyRing, law) -> tuple[VectorFieldSpec, ...]:
    n = ring.nvars
    m = sum(1 for w in ring.weights if w == 1)
    fields = []
    for j in range(m):
        coeffs: dict[int, Polynomial] = {}
        for k in range(n):
            p = ring.zero()
            for i in range(n):
                if law[k][i][j] != 0:
                    p = p + ring.var(i) * law[k][i][j]
            if not p.is_zero():
                coeffs[k] = p
        fields.append(VectorFieldSpec(j, tuple(sorted(coeffs.items()))))
    return tuple(fields)


def _build(kind: str, layer_dims: Sequence[int], names: Sequence[str], law) -> CarnotGroup:
    layer_dims = tuple(int(m) for m in layer_dims)
    if not layer_dims or any(m <= 0 for m in layer_dims):
        raise InvalidArgumentError(f"bad layer dimensions {layer_dims}")
    if len(layer_dims) > 2:
        raise InvalidArgumentError("only step ≤ 2 groups are supported")
    n = sum(layer_dims)
    weights = tuple(i + 1 for i, m in enumerate(layer_dims) for _ in range(m))
    law = tuple(tuple(tuple(as_fraction(law[k][i][j]) for j in range(n))
                      for i in range(n)) for k in range(n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                b = law[k][i][j]
                if b != law[k][j][i] * -1:
                    raise InvalidArgumentError("group law bilinear part must be antisymmetric")
                if b and not (weights[k] == 2 and weights[i] == 1 and weights[j] == 1):
                    raise InvalidArgumentError(
                        f"law entry B[{k}][{i}][{j}] couples layers that cannot interact")
    ring = PolyRing(tuple(names), weights)
    q = sum((i + 1) * m for i, m in enumerate(layer_dims))
    return CarnotGroup(
        kind=kind,
        topological_dimension=n,
        step=len(layer_dims),
        layer_dims=layer_dims,
        dilation_weights=weights,
        homogeneous_dimension=q,
        law=law,
        ring=ring,
        horizontal_fields=_fields_from_law(ring, law),
    )


def euclidean(dim: int) -> CarnotGroup:
    """ℝ^N with the abelian law; N ≥ 3 so that Γ = c|x|^{2-N} exists."""
    if not isinstance(dim, int) or dim < 3:
        raise InvalidArgumentError(f"Euclidean groups need dim ≥ 3, got {dim!r}")
    names = ("x", "y", "z") if dim == 3 else tuple(f"x{i + 1}" for i in range(dim))
    zero = [[[0] * dim for _ in range(dim)] for _ in range(dim)]
    return _build("euclidean", (dim,), names, zero)


def heisenberg1() -> CarnotGroup:
    """ℍ¹ with law (x+x', y+y', t+t'+2(yx'-xy')), so X = ∂x+2y∂t, Y = ∂y-2x∂t."""
    law = [[[0] * 3 for _ in range(3)] for _ in range(3)]
    law[2][1][0] = 2
    law[2][0][1] = -2
    return _build("heisenberg1", (2, 1), ("x", "y", "t"), law)


def step2(layer_dims: Sequence[int], entries, names: Sequence[str] | None = None) -> CarnotGroup:
    """Generic step-2 group from sparse law entries ``[k, i, j, b]``.

    Entries are antisymmetrised: listing B[k][i][j] = b also sets
    B[k][j][i] = -b.
    """
    n = sum(layer_dims)
    if names is None:
        names = tuple(f"x{i + 1}" for i in range(n))
    law = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for entry in entries:
        if len(entry) != 4:
            raise ParseError(f"law entry {entry!r} must be [k, i, j, coeff]")
        k, i, j, b = entry
        if not all(isinstance(v, int) and 0 <= v < n for v in (k, i, j)):
            raise ParseError(f"law entry indices out of range: {entry!r}")
        b = as_fraction(b)
        law[k][i][j] = b
        law[k][j][i] = -b
    return _build("step2", layer_dims, names, law)


def group_from_json(descriptor) -> CarnotGroup:
    """Parse ``{"kind": "euclidean", "dim": N}``, ``{"kind": "heisenberg1"}``,
    or ``{"kind": "step2", "layer_dims": [...], "law": [[k,i,j,b], ...]}``.

    Strings are accepted too: JSON text, ``"heisenberg1"`` or ``"euclidean:N"``.
    """
    if isinstance(descriptor, str):
        text = descriptor.strip()
        if text == "heisenberg1":
            return heisenberg1()
        if text.startswith("euclidean:"):
            try:
                return euclidean(int(text.split(":", 1)[1]))
            except ValueError as exc:
                raise ParseError(f"bad group shorthand {text!r}") from exc
        try:
            descriptor = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad group descriptor {text!r}") from exc
    if not isinstance(descriptor, Mapping) or "kind" not in descriptor:
        raise ParseError("group descriptor needs a 'kind'")
    kind = descriptor["kind"]
    keys = set(descriptor)
    if kind == "euclidean":
        if keys != {"kind", "dim"}:
            raise ParseError(f"euclidean descriptor takes exactly 'dim', got {sorted(keys)}")
        return euclidean(descriptor["dim"])
    if kind == "heisenberg1":
        if keys != {"kind"}:
            raise ParseError(f"heisenberg1 descriptor takes no options, got {sorted(keys)}")
        return heisenberg1()
    if kind == "step2":
        if not keys <= {"kind", "layer_dims", "law", "names"} or "layer_dims" not in keys:
            raise ParseError(f"bad step2 descriptor keys {sorted(keys)}")
        return step2(descriptor["layer_dims"], descriptor.get("law", []), descriptor.get("names"))
    raise ParseError(f"unknown group kind {kind!r}")


def box_half_widths(group: CarnotGroup) -> tuple[float, ...]:
    """Half widths of a box containing the unit gauge ball D(0,1)."""
    if group.kind in ("euclidean", "heisenberg1"):
        # ℍ¹: x²+y² ≤ N² and |t| ≤ N²
        return (1.0,) * group.N
    raise UnsupportedGroupError(f"no gauge ball bound for {group.kind}")
