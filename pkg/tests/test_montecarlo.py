import numpy as np
import pytest

from carnot_acf.errors import InvalidArgumentError
from carnot_acf.gauge import geometry_for
from carnot_acf.montecarlo import mc_rejection_solid
from carnot_acf.quadrature import Integrand, solid_integral


def _cases(H):
    geom = geometry_for(H)
    return [Integrand(lambda p: np.ones(p.shape[:-1]), 0.0, "1"),
            Integrand(geom.gamma, -2.0, "gamma"),
            Integrand(lambda p: (p[..., 0] ** 2 + p[..., 1] ** 2) * geom.gamma(p), 0.0, "rho*gamma")]


@pytest.mark.parametrize("k", [0, 1, 2])
def test_mc_agrees_with_deterministic(H, k):
    f = _cases(H)[k]
    mc = mc_rejection_solid(H, f, 1.0, 200_000, 5)
    det = solid_integral(H, f, 1.0)
    assert abs(mc.value - det.value) <= 3 * mc.abs_error


def test_euclidean_ball_volume(E3):
    mc = mc_rejection_solid(E3, Integrand(lambda p: np.ones(p.shape[:-1])), 2.0, 100_000, 1)
    assert abs(mc.value - 4 / 3 * np.pi * 8) <= 3 * mc.abs_error


def test_seed_reproducible(H):
    f = _cases(H)[1]
    a = mc_rejection_solid(H, f, 1.0, 50_000, 9)
    b = mc_rejection_solid(H, f, 1.0, 50_000, 9)
    c = mc_rejection_solid(H, f, 1.0, 50_000, 10)
    assert a == b and a.value != c.value
    assert a.meta["tail_bound"] >= 0


def test_invalid_arguments(H):
    f = _cases(H)[0]
    with pytest.raises(InvalidArgumentError):
        mc_rejection_solid(H, f, 0.0, 100, 1)
    with pytest.raises(InvalidArgumentError):
        mc_rejection_solid(H, f, 1.0, 1, 1)
    with pytest.raises(InvalidArgumentError):
        mc_rejection_solid(H, Integrand(f.func, -5.0), 1.0, 100, 1)
