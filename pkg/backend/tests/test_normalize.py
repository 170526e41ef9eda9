#!/usr/bin/env python3

import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import Automorphism, Dil, Sigma, T2k, T3k, Ts
from geometry.errors import SingularSystem
from geometry.normalize import (
    CollapsedCoeffs,
    FieldCoeffs,
    build_shift_system,
    choose_s1,
    classify_potential,
    collapse_permutations,
    kill_residual,
    shift_automorphism,
    solve_shifts,
    step_two_shifts,
    summed_collapse,
)
from geometry.potential import HoloPoly, Potential
from geometry.vectorfield import decompose, pushforward


def _collapsed_n3(a=1.0, g=0.7):
    return CollapsedCoeffs(3, a=a, b=0.3, c=0.5, d=-0.2, e=np.array([0.4]), f=np.array([0.1]), g=g)


def _pushed(K, shifts):
    phi = shift_automorphism(shifts)
    return decompose(pushforward(phi, K.to_field()))


def test_shift_matrix_is_invertible():
    for a in (0.5, 1.0, -2.0):
        M, rhs = build_shift_system(_collapsed_n3(a=a))
        assert M.shape == (4, 4)
        assert np.linalg.det(M) > 0
        assert rhs[0] == pytest.approx(0.5)


def test_shifts_remove_translation_components():
    K = _collapsed_n3()
    shifts = solve_shifts(K)
    s1 = choose_s1(K, shifts)
    assert kill_residual(K, shift_automorphism(shifts, s1)) <= 1e-9


def test_shift_system_needs_dilation():
    with pytest.raises(SingularSystem):
        solve_shifts(_collapsed_n3(a=0.0))
    with pytest.raises(SingularSystem):
        choose_s1(_collapsed_n3(a=0.0), solve_shifts(_collapsed_n3()))


def test_permutations_collapse_onto_first_slot():
    C = FieldCoeffs(3, a=0.2, c=np.array([0.0, 0.5]), g=np.array([0.0, -0.3]))
    _, K = collapse_permutations(C)
    assert K.c == pytest.approx(0.5, abs=1e-10)
    assert K.g == pytest.approx(-0.3, abs=1e-10)
    assert K.off_collapse <= 1e-10


def test_summed_collapse_differs_from_pushforward():
    C = FieldCoeffs(3, c=np.array([0.2, 0.5]))
    _, K = collapse_permutations(C)
    assert K.c == pytest.approx(0.5, abs=1e-10)
    assert K.off_collapse == pytest.approx(0.2, abs=1e-10)
    assert summed_collapse(C).c == pytest.approx(0.7)


def test_step_two_uses_unitary_part():
    K = CollapsedCoeffs(3, b=1.0, c=0.5, d=0.2, e=np.array([0.4]), f=np.array([0.3]))
    pushed = _pushed(K, step_two_shifts(K))
    assert pushed.get("T2", 1) == pytest.approx(0.0, abs=1e-9)
    assert pushed.get("T3", 1) == pytest.approx(0.0, abs=1e-9)


def test_step_two_uses_rotation():
    K = CollapsedCoeffs(2, b=1.0, c=0.5, d=0.2, g=0.8)
    pushed = _pushed(K, step_two_shifts(K))
    assert pushed.get("T2", 1) == pytest.approx(0.0, abs=1e-9)
    assert pushed.get("T3", 1) == pytest.approx(0.0, abs=1e-9)


def test_step_two_removes_translation_without_rotation():
    K = CollapsedCoeffs(2, b=1.0, c=0.5, d=0.2)
    pushed = _pushed(K, step_two_shifts(K))
    assert pushed.get("T") == pytest.approx(0.0, abs=1e-9)


def test_psi0_is_canonical(n):
    verdict = classify_potential(Potential.canonical(n), samples=30)
    assert verdict.kind == "Canonical"
    assert verdict.r == pytest.approx(1.0, abs=1e-8)
    assert verdict.norm_constant == pytest.approx(n + 1, abs=1e-9)


def test_nonconstant_norm_is_detected():
    n = 2
    f = HoloPoly.from_terms(n, [((1, 0), 0.1)])
    verdict = classify_potential(Potential(n=n, correction=f), samples=30)
    assert verdict.kind == "NotConstantNorm"
    assert verdict.residuals["norm_spread"] > 1e-8


def test_inverted_potential_needs_isotropy():
    n = 2
    P = Potential.canonical(n).precomposed_with(Automorphism((Sigma(),)))
    assert classify_potential(P, samples=30).kind == "NeedsIsotropy"
    verdict = classify_potential(P, samples=30, isotropy=Automorphism((Sigma(),)))
    assert verdict.kind == "Canonical"
    assert verdict.r == pytest.approx(1.0, abs=1e-7)


def test_affine_round_trip_recovers_scale():
    n = 3
    r = 2.5
    phi = Automorphism((Ts(0.4), T2k(1, -0.3), T3k(2, 0.2), Dil(0.15)))
    P = Potential(n=n, log_scale=np.log(r)).precomposed_with(phi)
    verdict = classify_potential(P, samples=30)
    probe = np.zeros(n, dtype=complex)
    probe[-1] = 1
    expected = r * abs(phi.det_jacobian(probe)) ** -2
    assert verdict.kind == "Canonical"
    assert verdict.r == pytest.approx(expected, rel=1e-6)


def test_classification_needs_unit_kappa():
    with pytest.raises(ValueError):
        classify_potential(Potential(n=2, kappa=2.0))


def test_verdict_to_dict():
    data = classify_potential(Potential.canonical(2), samples=20).to_dict()
    assert data["kind"] == "Canonical"
    assert set(data) >= {"r", "automorphism", "residuals", "components", "notes"}


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
