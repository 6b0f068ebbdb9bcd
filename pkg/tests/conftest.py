import os
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from carnot_acf.groups import euclidean, heisenberg1

settings.register_profile("pkg", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "pkg"))


@pytest.fixture(scope="session")
def H():
    return heisenberg1()


@pytest.fixture(scope="session")
def E3():
    return euclidean(3)


def to_sympy(poly, symbols):
    """Independent sympy image of a Polynomial, used as a CAS oracle."""
    expr = sp.Integer(0)
    for exps, c in poly.terms():
        term = sp.Rational(c.numerator, c.denominator)
        for s, k in zip(symbols, exps):
            term *= s ** k
        expr += term
    return sp.expand(expr)


def from_sympy(expr, ring, symbols):
    terms = {}
    for monom, coeff in sp.Poly(sp.expand(expr), *symbols).terms():
        terms[tuple(monom)] = Fraction(int(coeff.p), int(coeff.q))
    from carnot_acf.polynomial import Polynomial
    return Polynomial(ring, terms)


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


@st.composite
def polynomials(draw, ring, max_terms=5, max_exp=3):
    n = ring.nvars
    terms = draw(st.dictionaries(
        st.tuples(*[st.integers(0, max_exp)] * n), rationals, max_size=max_terms))
    from carnot_acf.polynomial import Polynomial
    return Polynomial(ring, terms)
