#!/usr/bin/env python3

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.domain import (
    CPoint,
    Model,
    cayley,
    cayley_det_jacobian,
    cayley_inv,
    cayley_inv_jacobian,
    cayley_jacobian,
    in_ball,
    in_siegel,
    require_ball,
    require_siegel,
    rho0,
    sigma,
    sigma_jacobian,
)
from geometry.errors import OutsideDomain, PoleAtBoundary
from utils.numerics import holomorphic_jacobian, sample_ball, sample_siegel


def test_rho0_at_base_point(n):
    w = np.zeros(n, dtype=complex)
    w[-1] = 1.0
    assert rho0(w) == 1.0
    assert in_siegel(w)


def test_cayley_maps_ball_into_siegel(rng, n):
    for z in sample_ball(rng, n, 50):
        w = cayley(z)
        assert in_siegel(w)
        assert np.allclose(cayley_inv(w), z, atol=1e-12)


def test_cayley_inverse_maps_siegel_into_ball(rng, n):
    for w in sample_siegel(rng, n, 50):
        assert in_ball(cayley_inv(w))


def test_cayley_origin_goes_to_base_point(n):
    w = cayley(np.zeros(n))
    expected = np.zeros(n, dtype=complex)
    expected[-1] = 1
    assert np.allclose(w, expected)


def test_sigma_is_an_involution_of_siegel(rng, n):
    for w in sample_siegel(rng, n, 50):
        image = sigma(w)
        assert in_siegel(image)
        assert np.allclose(sigma(image), w, atol=1e-12)


def test_closed_form_jacobians_match_differences(rng):
    n = 3
    for z in sample_ball(rng, n, 5, radius=0.8):
        assert np.allclose(cayley_jacobian(z), holomorphic_jacobian(cayley, z, 1e-5), atol=1e-6)
        assert np.isclose(np.linalg.det(cayley_jacobian(z)), cayley_det_jacobian(z))
    for w in sample_siegel(rng, n, 5, rho_min=0.5):
        assert np.allclose(sigma_jacobian(w), holomorphic_jacobian(sigma, w, 1e-5), atol=1e-6)
        assert np.allclose(cayley_inv_jacobian(w), holomorphic_jacobian(cayley_inv, w, 1e-5), atol=1e-6)


def test_outside_points_are_rejected():
    with pytest.raises(OutsideDomain) as info:
        require_siegel([1.0, 0.5])
    assert info.value.details["rho"] == pytest.approx(-0.5)
    with pytest.raises(OutsideDomain):
        require_ball([0.8, 0.8])


def test_poles_raise():
    with pytest.raises(PoleAtBoundary):
        cayley([0.0, 1.0])
    with pytest.raises(PoleAtBoundary):
        sigma([0.0, 0.0])


def test_cpoint_knows_its_model():
    assert CPoint([0.1, 0.2], Model.BALL).inside()
    assert not CPoint([0.0, -1.0]).inside()
    assert CPoint([0.0, 1.0]).to_dict()["model"] == "siegel"
    assert require_ball(CPoint([0.1j, 0.0], Model.BALL)).shape == (2,)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
