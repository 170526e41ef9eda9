#!/usr/bin/env python3

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import Automorphism, CayleyMap, ComposedMap, Dil, Sigma, T2k, Ts
from geometry.domain import Model, cayley, cayley_jacobian
from geometry.errors import OutsideDomain
from geometry.metric import (
    einstein_residual,
    inverse_metric,
    inverse_residual,
    isometry_det_identity,
    metric,
    metric_ball,
    metric_siegel,
    norm_sq_form,
    potential_hessian_residual,
    pullback_metric,
)
from utils.numerics import sample_ball, sample_siegel


def test_siegel_metric_at_base_point(n):
    w = np.zeros(n, dtype=complex)
    w[-1] = 1
    expected = np.full(n, n + 1.0)
    expected[-1] = (n + 1) / 4
    assert np.allclose(metric_siegel(w), np.diag(expected))


def test_ball_metric_at_origin(n):
    assert np.allclose(metric_ball(np.zeros(n)), (n + 1) * np.eye(n))


def test_metric_is_hermitian_positive_definite(rng, n):
    for w in sample_siegel(rng, n, 30):
        G = metric(w)
        assert G.hermitian_defect() <= 1e-12 * np.max(np.abs(G.entries))
        assert G.is_positive_definite()
        assert G.det() > 0


def test_closed_form_inverses(rng, n):
    for w in sample_siegel(rng, n, 30):
        assert inverse_residual(w) <= 1e-10
        H = inverse_metric(w).entries
        assert np.allclose(H, np.linalg.inv(metric(w).entries).T, rtol=1e-10, atol=1e-12)
    for z in sample_ball(rng, n, 30):
        assert inverse_residual(z, Model.BALL) <= 1e-10


def test_form_norm_at_base_point():
    w = np.array([0.0, 1.0], dtype=complex)
    # H = diag(1/3, 4/3) there
    assert norm_sq_form(np.array([0.0, 1.0]), w) == pytest.approx(4 / 3)
    assert norm_sq_form(np.array([3.0, 0.0]), w) == pytest.approx(3.0)


def test_cayley_is_an_isometry(rng, n):
    for z in sample_ball(rng, n, 20):
        pulled = pullback_metric(cayley_jacobian(z), metric_siegel(cayley(z)))
        assert np.allclose(pulled, metric_ball(z), rtol=1e-9)


def test_generators_are_isometries(rng):
    n = 3
    gens = [Ts(0.7), T2k(1, -0.4), T2k(2, 0.3), Dil(0.2), Sigma()]
    for w in sample_siegel(rng, n, 10):
        for gen in gens:
            pulled = pullback_metric(gen.jacobian(w), metric_siegel(gen.apply(w)))
            assert np.allclose(pulled, metric_siegel(w), rtol=1e-9)


def test_isometry_determinant_identity(rng):
    n = 2
    phi = Automorphism((Ts(0.3), Dil(-0.2), Sigma()))
    for z in sample_ball(rng, n, 20):
        assert isometry_det_identity(CayleyMap(), z) <= 1e-9
        assert isometry_det_identity(ComposedMap(CayleyMap(), phi), z) <= 1e-9


@pytest.mark.parametrize("model", [Model.SIEGEL, Model.BALL])
def test_einstein_and_potential_hessian(rng, model):
    n = 2
    if model == Model.SIEGEL:
        points = sample_siegel(rng, n, 5, rho_min=0.5, rho_max=2.0, tail_radius=0.5)
    else:
        points = sample_ball(rng, n, 5, radius=0.8)
    for p in points:
        assert einstein_residual(p, model) <= 1e-4
        assert potential_hessian_residual(p, model) <= 1e-4


def test_metric_outside_domain_raises():
    with pytest.raises(OutsideDomain):
        metric_siegel([1.0, 0.2])
    with pytest.raises(OutsideDomain):
        metric_ball([1.0, 0.0])


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
