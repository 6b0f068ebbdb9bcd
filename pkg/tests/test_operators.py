import random
from fractions import Fraction

import mpmath
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from carnot_acf.errors import InvalidArgumentError
from carnot_acf.groups import heisenberg1
from carnot_acf.operators import (INHOMOGENEOUS, apply_field, check_odd_symmetry,
                                  dilate_polynomial, fd_sub_laplacian, g_degree, grad_norm_sq,
                                  horizontal_gradient, is_harmonic, mp_coerce, scale_function,
                                  sub_laplacian, translate)

from conftest import polynomials, to_sympy

RING = heisenberg1().ring
x, y, t = SYMS = sp.symbols("x y t")


def sym_X(f):
    return sp.diff(f, x) + 2 * y * sp.diff(f, t)


def sym_Y(f):
    return sp.diff(f, y) - 2 * x * sp.diff(f, t)


@given(polynomials(RING))
def test_sub_laplacian_matches_sympy_oracle(u):
    H = heisenberg1()
    f = to_sympy(u, SYMS)
    expected = sym_X(sym_X(f)) + sym_Y(sym_Y(f))
    assert sp.expand(to_sympy(sub_laplacian(H, u), SYMS) - expected) == 0


@given(polynomials(RING))
def test_gradient_matches_sympy_oracle(u):
    H = heisenberg1()
    f = to_sympy(u, SYMS)
    gx, gy = horizontal_gradient(H, u)
    assert sp.expand(to_sympy(gx, SYMS) - sym_X(f)) == 0
    assert sp.expand(to_sympy(gy, SYMS) - sym_Y(f)) == 0


def test_counterexample_gradient(H):
    u = H.parse("x - 3*y*t - 2*x^3")
    gx, gy = horizontal_gradient(H, u)
    assert gx == H.parse("1 - 6*x^2 - 6*y^2")
    assert gy == H.parse("6*x*y - 3*t")
    assert is_harmonic(H, u)
    assert grad_norm_sq(H, u) == H.parse("(1 - 6*x^2 - 6*y^2)^2 + 9*(-t + 2*x*y)^2")


def test_negative_control(H):
    assert sub_laplacian(H, H.parse("x^3")) == H.parse("6*x")


def test_euclidean_laplacian(E3):
    assert sub_laplacian(E3, E3.parse("x^2 + y^2 + z^2")) == 6
    assert is_harmonic(E3, E3.parse("x*y*z"))


def test_left_invariance_on_ten_random_points(H):
    """X_j(u∘τ_p) = (X_j u)∘τ_p for left translations τ_p(z) = p∘z."""
    rnd = random.Random(11)
    u = H.parse("x^2*t - 3*y^3 + x*y*t + 2*t^2 - x")
    for _ in range(10):
        p = [Fraction(rnd.randint(-9, 9), rnd.randint(1, 5)) for _ in range(3)]
        for field in H.horizontal_fields:
            assert apply_field(field, translate(H, u, p)) == translate(H, apply_field(field, u), p)


@given(polynomials(RING), st.fractions(min_value=Fraction(1, 5), max_value=5))
def test_dilation_covariance(u, lam):
    """Δ(u∘δ_λ) = λ² (Δu)∘δ_λ since each X_j is homogeneous of degree 1."""
    H = heisenberg1()
    assert sub_laplacian(H, dilate_polynomial(H, u, lam)) == \
        dilate_polynomial(H, sub_laplacian(H, u), lam) * lam ** 2


def test_scale_function_example(H):
    u = H.parse("x - 3*y*t - 2*x^3")
    assert scale_function(H, u, 2) == H.parse("x - 8*x^3 - 12*y*t")
    with pytest.raises(InvalidArgumentError):
        scale_function(H, u, 0)
    with pytest.raises(InvalidArgumentError):
        dilate_polynomial(H, u, -1)


def test_translate_identity_and_dimension(H):
    u = H.parse("x*t")
    assert translate(H, u, [0, 0, 0]) is u
    assert translate(H, H.parse("t"), [1, 0, 0]) == H.parse("t - 2*y")
    with pytest.raises(InvalidArgumentError):
        translate(H, u, [1, 2])


def test_odd_symmetry(H):
    assert check_odd_symmetry(H.parse("x - 3*y*t - 2*x^3"))
    assert not check_odd_symmetry(H.parse("t"))
    assert check_odd_symmetry(H.ring.zero())


def test_g_degree(H):
    assert g_degree(H.parse("x*y + t")) == 2
    assert g_degree(H.parse("x - 2*x^3")) == INHOMOGENEOUS
    assert g_degree(H.ring.zero()) == 0


def test_fd_sub_laplacian_second_order(H):
    u = H.parse("x^3*t - y^2*t^2 + x*y")
    exact = float(sub_laplacian(H, u).evaluate([Fraction(1, 3), Fraction(-1, 2), Fraction(1, 4)]))
    mp = mpmath.mp.clone()
    mp.dps = 40
    f = lambda p: u.evaluate(p, coerce=mp_coerce(mp))
    p = [mp.mpf(1) / 3, -mp.mpf(1) / 2, mp.mpf(1) / 4]
    e1 = abs(float(fd_sub_laplacian(H, f, p, mp.mpf("1e-2"))) - exact)
    e2 = abs(float(fd_sub_laplacian(H, f, p, mp.mpf("5e-3"))) - exact)
    assert e1 < 1e-3 and 3.5 < e1 / e2 < 4.5
    # the central difference is exact on polynomials of G-degree ≤ 3 along each flow
    q = H.parse("x*y + t")
    assert fd_sub_laplacian(H, lambda z: q.evaluate(z), [Fraction(1), Fraction(2), Fraction(3)],
                            Fraction(1, 10)) == 0
