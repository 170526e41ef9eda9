#!/usr/bin/env python3

import os
import sys
from fractions import Fraction

import numpy as np
import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from geometry.automorphism import Automorphism, Sigma, T2k, T3k, Ts
from geometry.errors import NotGraded, NotInAlgebra, NotPolynomial
from geometry.potential import Potential
from geometry.vectorfield import (
    BasisTag,
    PolyVF,
    ad_matrix,
    basis,
    basis_field,
    basis_tags,
    bracket,
    combine,
    decompose,
    fit_polyvf,
    grade,
    pushforward,
    re_apply,
)
from utils.numerics import sample_siegel, siegel_grid

T = BasisTag("T")
D = BasisTag("D")


def test_basis_has_dimension_n2_plus_2n(n):
    assert len(basis_tags(n)) == n * n + 2 * n
    assert len({str(t) for t in basis_tags(n)}) == n * n + 2 * n


def test_tag_parse_round_trip():
    for tag in basis_tags(4):
        assert BasisTag.parse(str(tag)) == tag
    with pytest.raises(ValueError):
        BasisTag.parse("Q(1)")


def test_field_evaluation_matches_formulas():
    n = 3
    w = np.array([0.3 + 0.1j, -0.2j, 2.0 + 0.5j])
    assert np.allclose(basis_field(T, n).evaluate(w), [0, 0, 2j])
    assert np.allclose(basis_field(D, n).evaluate(w), [w[0], w[1], 2 * w[2]])
    assert np.allclose(basis_field(BasisTag("T2", 2), n).evaluate(w), [0, 1, 2 * w[1]])
    assert np.allclose(basis_field(BasisTag("T3", 1), n).evaluate(w), [1j, 0, -2j * w[0]])
    assert np.allclose(basis_field(BasisTag("U", 1, 2), n).evaluate(w), [w[1], -w[0], 0])
    assert np.allclose(basis_field(BasisTag("Tt", None), n).evaluate(w), -2j * w[2] * w)
    tt2 = basis_field(BasisTag("Tt2", 1), n).evaluate(w)
    assert np.allclose(tt2, 2 * w[0] * w - w[2] * np.array([1, 0, 0]))


def test_bracket_with_dilation_scales_translation():
    n = 2
    XD, XT = basis_field(D, n), basis_field(T, n)
    assert bracket(XD, XT).is_close(-2 * XT)
    assert bracket(XT, XD).is_close(2 * XT)


def test_bracket_antisymmetry_and_jacobi(rng):
    n = 3
    fields = [f for _, f in basis(n)]
    picks = rng.choice(len(fields), size=(10, 3))
    for a, b, c in picks:
        X, Y, Z = fields[a], fields[b], fields[c]
        assert (bracket(X, Y) + bracket(Y, X)).max_abs() <= 1e-12
        jac = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
        assert jac.max_abs() <= 1e-12


def test_grades_of_basis_fields(n):
    for tag, field in basis(n):
        assert grade(field) == tag.grade
    assert BasisTag("Tt").grade == Fraction(1)


def test_mixed_field_is_not_graded():
    n = 2
    with pytest.raises(NotGraded):
        grade(basis_field(T, n) + basis_field(D, n))
    with pytest.raises(NotGraded):
        grade(PolyVF.zero(n))


def test_ad_d_spectrum():
    n = 3
    eig = np.sort(np.linalg.eigvals(ad_matrix(basis_field(D, n))).real)
    counts = {v: int(np.sum(np.isclose(eig, v))) for v in (-2, -1, 0, 1, 2)}
    assert counts == {-2: 1, -1: 4, 0: 5, 1: 4, 2: 1}


def test_decompose_recovers_combination(rng, n):
    coeffs = {tag: float(rng.uniform(-1, 1)) for tag in basis_tags(n)}
    dec = decompose(combine(coeffs, n))
    for tag, value in coeffs.items():
        assert dec.coeffs[tag] == pytest.approx(value, abs=1e-10)
    assert dec.field().is_close(combine(coeffs, n), 1e-10)


def test_decompose_rejects_fields_outside_the_algebra():
    n = 2
    with pytest.raises(NotInAlgebra):
        decompose(1j * basis_field(T, n))
    stray = PolyVF(np.array([1.0, 0.0]), np.zeros((2, 2)), np.zeros((2, 2, 2)))
    with pytest.raises(NotInAlgebra):
        decompose(stray)


def test_fit_rejects_non_polynomial_samples():
    n = 1
    pts = siegel_grid(n, 9)
    held = siegel_grid(n, 3, start=9)
    with pytest.raises(NotPolynomial):
        fit_polyvf(pts, np.exp(pts), held, np.exp(held))


def test_pushforward_by_translation():
    n = 2
    pushed = decompose(pushforward(Automorphism((Ts(0.4),)), basis_field(D, n)))
    assert pushed.get("D") == pytest.approx(1.0, abs=1e-10)
    assert pushed.get("T") == pytest.approx(-0.8, abs=1e-10)


def test_pushforward_by_shifts():
    n = 3
    s = 0.3
    pushed = decompose(pushforward(Automorphism((T2k(1, s),)), basis_field(BasisTag("T3", 1), n)))
    assert pushed.get("T3", 1) == pytest.approx(1.0, abs=1e-10)
    assert pushed.get("T") == pytest.approx(2 * s, abs=1e-10)
    pushed = decompose(pushforward(Automorphism((T3k(2, s),)), basis_field(BasisTag("W", 2), n)))
    assert pushed.get("W", 2) == pytest.approx(1.0, abs=1e-10)
    assert pushed.get("T2", 2) == pytest.approx(s, abs=1e-10)
    assert pushed.get("T") == pytest.approx(-s * s, abs=1e-10)


def test_sigma_pushes_translation_to_top_grade(n):
    pushed = pushforward(Automorphism((Sigma(),)), basis_field(T, n))
    assert pushed.is_close(basis_field(BasisTag("Tt"), n), 1e-10)


def test_directional_derivatives_of_log_psi0(rng):
    n = 3
    P = Potential.canonical(n)
    for w in sample_siegel(rng, n, 20):
        assert re_apply(basis_field(D, n), P, w) == pytest.approx(-(n + 1), abs=1e-10)
        for tag in (T, BasisTag("T2", 1), BasisTag("T3", 2), BasisTag("U", 1, 2), BasisTag("W", 1)):
            assert re_apply(basis_field(tag, n), P, w) == pytest.approx(0.0, abs=1e-10)
        expected = -2 * (n + 1) * w[-1].imag
        assert re_apply(basis_field(BasisTag("Tt"), n), P, w) == pytest.approx(expected, abs=1e-9)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
