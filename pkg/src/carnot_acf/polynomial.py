"""Exact multivariate polynomials with rational coefficients.

A :class:`Polynomial` is an immutable sparse map from exponent tuples to
:class:`fractions.Fraction` coefficients.  Every polynomial belongs to a
:class:`PolyRing`, which fixes the variable names and the dilation weights
used to grade monomials.  Floating-point evaluation runs over the monomials
in canonical order with Neumaier-compensated accumulation, so results do not
depend on dict ordering.
"""

from __future__ import annotations

import ast
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import InvalidArgumentError, ParseError

Exponent = tuple[int, ...]


def as_fraction(value) -> Fraction:
    """Convert ints, Fractions, floats (exactly) and "p/q" strings."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise InvalidArgumentError(f"non-finite coefficient {value!r}")
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational literal {value!r}") from exc
    if isinstance(value, np.integer):
        return Fraction(int(value))
    if isinstance(value, np.floating):
        return as_fraction(float(value))
    raise InvalidArgumentError(f"cannot convert {type(value).__name__} to a rational")


@dataclass(frozen=True)
class PolyRing:
    """Variable names plus the dilation weight of each variable."""

    names: tuple[str, ...]
    weights: tuple[int, ...]

    def __post_init__(self):
        if len(self.names) != len(self.weights):
            raise InvalidArgumentError("names and weights differ in length")
        if len(set(self.names)) != len(self.names):
            raise InvalidArgumentError(f"duplicate variable names {self.names}")

    @property
    def nvars(self) -> int:
        return len(self.names)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.constant(1)

    def constant(self, c) -> "Polynomial":
        return Polynomial(self, {(0,) * self.nvars: c})

    def var(self, i: int | str) -> "Polynomial":
        if isinstance(i, str):
            i = self.index(i)
        exps = [0] * self.nvars
        exps[i] = 1
        return Polynomial(self, {tuple(exps): 1})

    def gens(self) -> tuple["Polynomial", ...]:
        return tuple(self.var(i) for i in range(self.nvars))

    def index(self, name: str) -> int:
        if name in self.names:
            return self.names.index(name)
        # x1..xN always address coordinates positionally
        if name.startswith("x") and name[1:].isdigit():
            k = int(name[1:]) - 1
            if 0 <= k < self.nvars:
                return k
        raise ParseError(f"unknown variable {name!r}; ring has {self.names}")

    def monomial_key(self, exps: Exponent):
        g = sum(w * e for w, e in zip(self.weights, exps))
        return (g, tuple(-e for e in exps))

    def parse(self, text: str) -> "Polynomial":
        return parse_polynomial(text, self)

    def from_json(self, terms) -> "Polynomial":
        """Build from ``[{"coeff": "p/q", "exps": [...]}, ...]``."""
        if not isinstance(terms, list):
            raise ParseError("polynomial JSON must be a list of terms")
        out: dict[Exponent, Fraction] = {}
        for item in terms:
            if not isinstance(item, Mapping) or set(item) != {"coeff", "exps"}:
                raise ParseError(f"bad term {item!r}; expected keys coeff, exps")
            exps = item["exps"]
            if (not isinstance(exps, list) or len(exps) != self.nvars
                    or not all(isinstance(e, int) and e >= 0 for e in exps)):
                raise ParseError(f"bad exponent list {exps!r} for {self.nvars} variables")
            key = tuple(exps)
            out[key] = out.get(key, Fraction(0)) + as_fraction(item["coeff"])
        return Polynomial(self, out)


class Polynomial:
    """Immutable sparse polynomial over ℚ."""

    __slots__ = ("ring", "_terms", "_hash")

    def __init__(self, ring: PolyRing, terms: Mapping[Exponent, object]):
        clean: dict[Exponent, Fraction] = {}
        for exps, c in terms.items():
            if len(exps) != ring.nvars:
                raise InvalidArgumentError(
                    f"exponent {exps} does not match {ring.nvars} variables")
            c = as_fraction(c)
            if c != 0:
                clean[tuple(int(e) for e in exps)] = c
        self.ring = ring
        self._terms = dict(sorted(clean.items(), key=lambda kv: ring.monomial_key(kv[0])))
        self._hash = None

    # -- basic protocol -------------------------------------------------

    @property
    def nvars(self) -> int:
        return self.ring.nvars

    def terms(self) -> list[tuple[Exponent, Fraction]]:
        """Monomials in canonical (G-degree, then lexicographic) order."""
        return list(self._terms.items())

    def coeff(self, exps: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def degree(self) -> int:
        return max((sum(e) for e in self._terms), default=-1)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.ring == other.ring and self._terms == other._terms
        try:
            other = as_fraction(other)
        except Exception:
            return NotImplemented
        return self._terms == self.ring.constant(other)._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, tuple(self._terms.items())))
        return self._hash

    def __repr__(self):
        return f"Polynomial({self!s})"

    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self._terms.items():
            mono = "*".join(
                name if e == 1 else f"{name}^{e}"
                for name, e in zip(self.ring.names, exps) if e)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        text = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def to_json(self) -> list[dict]:
        return [{"coeff": str(c), "exps": list(e)} for e, c in self._terms.items()]

    # -- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise InvalidArgumentError("polynomials live in different rings")
            return other
        return self.ring.constant(as_fraction(other))

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Polynomial(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_fraction(other)
        if c == 0:
            raise ZeroDivisionError("polynomial division by zero")
        return Polynomial(self.ring, {e: v / c for e, v in self._terms.items()})

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise InvalidArgumentError("only nonnegative integer powers are supported")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- calculus and substitution ----------------------------------------

    def diff(self, i: int) -> "Polynomial":
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = list(e)
                ne[i] -= 1
                out[tuple(ne)] = c * e[i]
        return Polynomial(self.ring, out)

    def compose(self, subs: Sequence["Polynomial"]) -> "Polynomial":
        """Substitute ``subs[i]`` for variable ``i`` (result in the ring of ``subs``)."""
        if len(subs) != self.nvars:
            raise InvalidArgumentError(f"need {self.nvars} substitutions, got {len(subs)}")
        ring = subs[0].ring if subs else self.ring
        cache: list[dict[int, Polynomial]] = [{0: ring.one()} for _ in subs]

        def power(i, k):
            table = cache[i]
            if k not in table:
                table[k] = power(i, k - 1) * subs[i]
            return table[k]

        out = ring.zero()
        for e, c in self._terms.items():
            term = ring.constant(c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            out = out + term
        return out

    def scale_vars(self, factors: Sequence) -> "Polynomial":
        """Return u(f_1 x_1, ..., f_N x_N) for rational factors f_i."""
        f = [as_fraction(v) for v in factors]
        out = {}
        for e, c in self._terms.items():
            m = c
            for fi, k in zip(f, e):
                if k:
                    m *= fi ** k
            out[e] = m
        return Polynomial(self.ring, out)

    def evaluate(self, point: Sequence, coerce=None):
        """Evaluate one point with scalar arithmetic.

        Rational points give an exact Fraction.  Otherwise coefficients are
        passed through ``coerce`` (``float`` by default; pass ``mpmath.mpf``
        for extended precision).
        """
        if len(point) != self.nvars:
            raise InvalidArgumentError(f"point has {len(point)} coords, ring has {self.nvars}")
        if coerce is None and not all(isinstance(x, (int, Rational)) for x in point):
            coerce = float
        total = 0
        for e, c in self._terms.items():
            m = c if coerce is None else coerce(c)
            for x, k in zip(point, e):
                if k:
                    m = m * x ** k
            total = total + m
        return total

    def __call__(self, points) -> np.ndarray:
        """Vectorised float evaluation on an array of shape (..., N)."""
        pts = np.asarray(points, dtype=float)
        if pts.shape[-1] != self.nvars:
            raise InvalidArgumentError(f"points have {pts.shape[-1]} coords, ring has {self.nvars}")
        shape = pts.shape[:-1]
        total = np.zeros(shape)
        comp = np.zeros(shape)
        if not self._terms:
            return total
        maxdeg = [max(e[i] for e in self._terms) for i in range(self.nvars)]
        powers = []
        for i in range(self.nvars):
            col = pts[..., i]
            table = [np.ones(shape)]
            for _ in range(maxdeg[i]):
                table.append(table[-1] * col)
            powers.append(table)
        for e, c in self._terms.items():
            term = np.full(shape, float(c))
            for i, k in enumerate(e):
                if k:
                    term = term * powers[i][k]
            # Neumaier compensated accumulation
            t = total + term
            big = np.abs(total) >= np.abs(term)
            comp += np.where(big, (total - t) + term, (term - t) + total)
            total = t
        return total + comp

    def g_degrees(self) -> set[int]:
        w = self.ring.weights
        return {sum(a * b for a, b in zip(w, e)) for e in self._terms}


def polynomial_sum(polys: Iterable[Polynomial], ring: PolyRing) -> Polynomial:
    out = ring.zero()
    for p in polys:
        out = out + p
    return out


_BINOPS = (ast.Add, ast.Sub, ast.Mult, ast.Pow, ast.Div)


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    """Parse expressions such as ``"x - 3*y*t - 2*x^3"``.

    ``^`` and ``**`` both denote powers; division is allowed only by
    nonzero constants; rational literals like ``3/4`` are exact.
    """
    if not isinstance(text, str) or not text.strip():
        raise ParseError("empty polynomial expression")
    try:
        tree = ast.parse(text.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from exc

    def walk(node) -> Polynomial:
        if isinstance(node, ast.Expression):
            return walk(node.body)
        if isinstance(node, ast.Constant):
            if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
                raise ParseError(f"unsupported literal {node.value!r}")
            if isinstance(node.value, float):
                # decimal literals are read exactly as written, not as binary floats
                return ring.constant(Fraction(ast.get_source_segment(text.replace("^", "**"), node)
                                              or repr(node.value)))
            return ring.constant(node.value)
        if isinstance(node, ast.Name):
            return ring.var(ring.index(node.id))
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            inner = walk(node.operand)
            return -inner if isinstance(node.op, ast.USub) else inner
        if isinstance(node, ast.BinOp) and isinstance(node.op, _BINOPS):
            left = walk(node.left)
            right = walk(node.right)
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                if not right.is_constant() or right.is_zero():
                    raise ParseError("division only by nonzero constants")
                return left / right.coeff((0,) * ring.nvars)
            # power
            if not right.is_constant():
                raise ParseError("exponent must be a constant")
            k = right.coeff((0,) * ring.nvars)
            if k.denominator != 1 or k < 0:
                raise ParseError(f"exponent must be a nonnegative integer, got {k}")
            return left ** int(k)
        raise ParseError(f"unsupported syntax in {text!r}: {type(node).__name__}")

    return walk(tree)
