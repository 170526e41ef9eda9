#!/usr/bin/env python3

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import (
    Automorphism,
    ComplexAffine,
    Dil,
    MobiusMap,
    Perm1k,
    ShearedCayley,
    Sigma,
    T2k,
    T3k,
    Ts,
    Unitary,
    automorphism_from_records,
    cayley_constraint_report,
    cayley_matrix,
    flow,
    rotated_cayley,
)
from geometry.domain import cayley, in_siegel
from geometry.errors import Degenerate, SingularJacobian, UnsupportedTag
from geometry.vectorfield import BasisTag, basis_field, basis_tags
from utils.numerics import holomorphic_jacobian, sample_ball, sample_siegel
from verification.generators import random_automorphism, random_unitary


def test_generator_formulas():
    w = np.array([0.2 + 0.1j, 1.5 - 0.3j])
    assert np.allclose(Ts(0.5).apply(w), [w[0], w[1] + 1j])
    assert np.allclose(T2k(1, 0.5).apply(w), [w[0] + 0.5, w[1] + w[0] + 0.25])
    assert np.allclose(T3k(1, 0.5).apply(w), [w[0] + 0.5j, w[1] - 1j * w[0] + 0.25])
    assert np.allclose(Dil(np.log(2)).apply(w), [2 * w[0], 4 * w[1]])
    assert np.allclose(Sigma().apply(w), [-w[0] / w[1], 1 / w[1]])


def test_permutation_swaps_first_and_kth():
    w = np.array([1, 2, 3, 4], dtype=complex)
    assert np.allclose(Perm1k(3).apply(w), [3, 2, 1, 4])


def test_generators_preserve_siegel_domain(rng):
    n = 4
    for w in sample_siegel(rng, n, 50):
        phi = random_automorphism(rng, n, length=5).then(Automorphism((Sigma(),)))
        assert in_siegel(phi.apply(w))


def test_composition_order_is_left_to_right():
    w = np.array([0.1, 2.0 + 0.2j])
    phi = Automorphism((Ts(0.3), Dil(0.5)))
    assert np.allclose(phi.apply(w), Dil(0.5).apply(Ts(0.3).apply(w)))
    other = Automorphism((Sigma(),))
    assert np.allclose(phi.then(other).apply(w), Sigma().apply(phi.apply(w)))


def test_inverse_and_jacobian(rng):
    n = 3
    for w in sample_siegel(rng, n, 10, rho_min=0.5):
        phi = random_automorphism(rng, n).then(Automorphism((Sigma(),)))
        assert np.allclose(phi.inverse().apply(phi.apply(w)), w, atol=1e-12)
        assert np.allclose(phi.jacobian(w), holomorphic_jacobian(phi.apply, w, 1e-5), atol=1e-6)
        assert phi.det_jacobian(w) == pytest.approx(np.linalg.det(phi.jacobian(w)))


def test_unitary_block_validation(rng):
    U = random_unitary(rng, 2)
    w = np.array([0.1, 0.2j, 1.0])
    assert np.allclose(Unitary(U).inverse().apply(Unitary(U).apply(w)), w)
    with pytest.raises(ValueError):
        Unitary(2 * np.eye(2))
    with pytest.raises(ValueError):
        Unitary(U).apply(np.array([0.1, 1.0]))


def test_complex_affine_is_not_domain_preserving():
    A = np.array([[2.0, 0.0], [0.0, 1.0]])
    assert not Automorphism((ComplexAffine(A, np.zeros(2)),)).preserves_domain
    with pytest.raises(SingularJacobian):
        ComplexAffine(np.zeros((2, 2)), np.zeros(2))


def test_records_round_trip(rng):
    n = 3
    phi = random_automorphism(rng, n, length=6).then(Automorphism((Sigma(),)))
    restored = automorphism_from_records(phi.to_records())
    w = np.array([0.1, -0.2j, 1.0 + 0.5j])
    assert np.allclose(restored.apply(w), phi.apply(w))
    with pytest.raises(ValueError):
        automorphism_from_records([{"type": "Nope"}])


def test_flows_integrate_basis_fields(rng):
    n = 3
    h = 1e-5
    for tag in basis_tags(n):
        if tag.is_tilde:
            continue
        field = basis_field(tag, n)
        for w in sample_siegel(rng, n, 3):
            derivative = (flow(tag, h, n).apply(w) - flow(tag, -h, n).apply(w)) / (2 * h)
            assert np.allclose(derivative, field.evaluate(w), atol=1e-6)


def test_flow_group_law():
    n = 3
    w = np.array([0.3j, 0.1, 2.0 + 1.0j])
    for tag in (BasisTag("T2", 2), BasisTag("V", 1, 2), BasisTag("D")):
        lhs = flow(tag, 0.2, n).then(flow(tag, 0.5, n)).apply(w)
        assert np.allclose(lhs, flow(tag, 0.7, n).apply(w), atol=1e-12)
    with pytest.raises(UnsupportedTag):
        flow(BasisTag("Tt"), 0.1, n)


def test_mobius_cayley_matrix(rng, n):
    C = MobiusMap(cayley_matrix(n))
    for z in sample_ball(rng, n, 20):
        assert np.allclose(C.apply(z), cayley(z), atol=1e-12)


def test_mobius_rejects_singular_matrix():
    with pytest.raises(Degenerate):
        MobiusMap(np.zeros((3, 3)))
    with pytest.raises(Degenerate):
        MobiusMap.from_entries([1, 0, 0])


def test_constraint_chain_accepts_rotated_cayley():
    n = 3
    report = cayley_constraint_report(rotated_cayley(n, 0.7))
    assert report.verdict == "CayleyUpToRotation"
    assert report.rotation == pytest.approx(0.7, abs=1e-10)
    assert all(c.passed for c in report.checks)


def test_constraint_chain_rejects_identity():
    report = cayley_constraint_report(MobiusMap(np.eye(3)))
    assert report.verdict == "Failed"
    assert report.first_failure == "G(0) = e_n"


def test_constraint_chain_rejects_sheared_map():
    n = 2
    report = cayley_constraint_report(ShearedCayley.with_polynomial(n, [0, 0, 1]), n=n)
    names = {c.name: c.passed for c in report.checks}
    assert names["det dG (1 - z_n)^(n+1) = 2"]
    assert report.first_failure == "Moebius linearity"
    assert report.to_dict()["verdict"] == "Failed"


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
