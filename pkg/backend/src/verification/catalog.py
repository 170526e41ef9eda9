"""
Catalog of every check the verifier can run.

Each entry names the suite that owns it, its anchor and the default
tolerance.  An anchor reads "<subject>: <identity>", the closed-form relation
the check measures.  A check passes when its measured residual is at most
the tolerance; count-style checks measure the number of failing cases and use
a tolerance of zero.
"""

from dataclasses import dataclass
from typing import Dict, List, Tuple

SUITES: Tuple[str, ...] = ("metric", "potential", "tables", "grading", "normalize", "mobius")


@dataclass(frozen=True)
class CheckSpec:
    name: str
    suite: str
    anchor: str
    tolerance: float
    max_n: int = 8


_ENTRIES: List[CheckSpec] = [
    # metric
    CheckSpec("metric.hermitian", "metric", "Bergman metric on H^n and B^n: G^* = G", 1e-12),
    CheckSpec("metric.positive_definite", "metric", "Bergman metric on H^n and B^n: #(min eig G <= 0) = 0", 0.0),
    CheckSpec("metric.inverse", "metric", "inverse metric on H^n and B^n: H^T G = I", 1e-10),
    CheckSpec("metric.inverse_closed_form", "metric",
              "Siegel inverse metric: (rho0/(n+1)) [[I, 2 w'], [2 conj(w')^T, 4 Re w_n]] = inv(G)^T", 1e-10),
    CheckSpec("metric.ball_inverse", "metric", "ball inverse metric: g_B^-1 = ((1 - |z|^2)/(n+1)) (I - z z^*)", 1e-10),
    CheckSpec("metric.cayley_pullback", "metric", "Cayley pullback: dC^* g_H(C z) dC = g_B(z)", 1e-9),
    CheckSpec("metric.generator_isometry", "metric", "generator isometry: dPhi^* g_H(Phi w) dPhi = g_H(w)", 1e-9),
    CheckSpec("metric.isometry_det", "metric", "isometry determinant: det g_H(G z) |det dG|^2 = det g_B(z)", 1e-9),
    CheckSpec("metric.einstein_siegel", "metric", "Kahler-Einstein on H^n: -ddbar log det g_H = -g_H", 1e-4, max_n=3),
    CheckSpec("metric.einstein_ball", "metric", "Kahler-Einstein on B^n: -ddbar log det g_B = -g_B", 1e-4, max_n=3),
    CheckSpec("metric.potential_hessian", "metric", "Siegel potential: ddbar(-(n+1) log rho0) = g_H", 1e-4, max_n=3),
    # potential
    CheckSpec("potential.norm_constant", "potential", "canonical potential: |d log psi0|^2_g = n+1", 1e-9),
    CheckSpec("potential.scaled_norm", "potential",
              "scaled canonical potential: |d log psi0^(1/kappa)|^2_(kappa g) = (n+1)/kappa", 1e-9),
    CheckSpec("potential.ball_norm", "potential", "ball potential: |d log phi0|^2_(g_B) = n+1", 1e-9),
    CheckSpec("potential.precomposed_norm", "potential", "precomposed potential: |d log (psi0 o Phi)|^2_g = n+1", 1e-9),
    CheckSpec("potential.grad_holo", "potential", "holomorphic gradient: d log psi0 (exact) = d log psi0 (central differences)",
              1e-6, max_n=3),
    CheckSpec("potential.residual_crosscheck", "potential",
              "norm defect of psi0 e^(f + fbar): |d log psi|^2 - (n+1) = -4 rho0 Re f_n + |df|^2", 1e-10),
    CheckSpec("potential.gradient_field_psi0", "potential", "gradient field of psi0: V = -2 rho0 d/dw_n", 1e-12),
    CheckSpec("potential.gradient_field_norm", "potential", "gradient field norm: |V|^2_g = |d log psi|^2_g", 1e-9),
    CheckSpec("potential.bracket_identity", "potential", "gradient field bracket: [V, Vbar] = V - Vbar", 1e-4, max_n=3),
    CheckSpec("potential.kahler", "potential", "Kahler potential: ddbar log psi = g", 1e-4, max_n=3),
    CheckSpec("potential.w_field_psi0", "potential", "W field of psi0: W = -T", 1e-9),
    CheckSpec("potential.w_field_scaling", "potential", "W field of r psi0: W = -r^(1/(n+1)) T", 1e-9),
    CheckSpec("potential.directional_constants", "potential",
              "affine directional derivatives: (Re D) log psi0 = -(n+1), (Re X) log psi0 = 0 otherwise", 1e-10),
    CheckSpec("potential.affine_constancy", "potential",
              "affine directional derivatives: (Re X) log psi0 = const for X in g_(-2) + ... + g_0", 1e-10),
    CheckSpec("potential.tilde_nonconstant", "potential",
              "grade 1/2 and 1 directional derivatives: #(constant (Re X) log psi0) = 0", 0.0),
    CheckSpec("potential.tilde_values", "potential",
              "grade 1/2 and 1 directional derivatives with Re X = (X + Xbar)/2: "
              "(Re X) log psi0 = -2(n+1) (Im w_n, Re w_k, Im w_k)", 1e-10),
    CheckSpec("potential.sigma_involution", "potential", "inversion: sigma o sigma = id", 1e-12),
    CheckSpec("potential.hyperbolic_sign", "potential", "inverted potential: (Re D) log(psi0 o sigma) = n+1", 1e-9),
    CheckSpec("potential.unitary_directional", "potential",
              "unitary directional derivatives: (Re(D+U)) log psi0 = -(n+1), (Re(T+U)) log psi0 = 0", 1e-10),
    CheckSpec("potential.max_principle", "potential",
              "maximum principle: #(f != const with |d log(psi0 e^(f + fbar))|^2 = n+1) = 0", 0.0),
    # tables
    CheckSpec("tables.translation", "tables", "w_n translation table: (Ts)_* X = sum_Y c_XY(s) Y", 1e-10),
    CheckSpec("tables.shift2", "tables", "real w_k translation table: (T2k)_* X = sum_Y c_XY(s) Y", 1e-10),
    CheckSpec("tables.shift3", "tables", "imaginary w_k translation table: (T3k)_* X = sum_Y c_XY(s) Y", 1e-10),
    CheckSpec("tables.permutation", "tables", "w_1 <-> w_k permutation table: (P1k)_* X = sum_Y c_XY Y", 1e-10),
    CheckSpec("tables.composite", "tables", "composite translation: (Phi1 Phi2)_* X = (Phi1)_* (Phi2)_* X", 1e-9),
    CheckSpec("tables.flow_derivative", "tables", "flow generator: d/ds exp(s X)(w) at s = 0 = X(w)", 1e-6),
    CheckSpec("tables.group_law", "tables", "flow group law: exp(t X) o exp(s X) = exp((s + t) X)", 1e-10),
    CheckSpec("tables.jacobian", "tables", "chain rule: d(Phi2 o Phi1) = dPhi2 dPhi1 (central differences)", 1e-6),
    CheckSpec("tables.inverse", "tables", "generator inverse: Phi o Phi^-1 = id", 1e-12),
    CheckSpec("tables.domain", "tables", "domain preservation: #(rho0(Phi w) <= 0 for rho0(w) > 0) = 0", 0.0),
    # grading
    CheckSpec("grading.count", "grading", "algebra dimension: dim aut(H^n) = n^2 + 2n", 0.0),
    CheckSpec("grading.spectrum", "grading", "grading spectrum: spec ad_D = {-2, -1, 0, 1, 2}", 1e-10),
    CheckSpec("grading.multiplicity", "grading",
              "grading multiplicities: dim g_j = 1, 2(n-1), (n-1)^2 + 1, 2(n-1), 1", 0.0),
    CheckSpec("grading.grades", "grading", "basis grades: [D, X] = j X for X in g_j", 0.0),
    CheckSpec("grading.graded_brackets", "grading", "graded brackets: components of [g_a, g_b] outside g_(a+b) = 0", 1e-12),
    CheckSpec("grading.antisymmetry", "grading", "antisymmetry: [X, Y] = -[Y, X]", 1e-12, max_n=3),
    CheckSpec("grading.jacobi", "grading", "Jacobi identity: [X, [Y, Z]] + [Y, [Z, X]] + [Z, [X, Y]] = 0", 1e-12, max_n=3),
    CheckSpec("grading.sigma_pushforward", "grading", "inversion pushforward: sigma_* T = Tt", 1e-10),
    # normalize
    CheckSpec("normalize.shift_determinant", "normalize", "shift system: #(det M(a) = 0 for a != 0) = 0", 0.0),
    CheckSpec("normalize.kill", "normalize", "shift solution: T, T2, T3 coefficients after the shifts = 0", 1e-9),
    CheckSpec("normalize.collapse", "normalize", "permutation collapse: coefficients of slots 2..n-1 after P1k = 0", 1e-10),
    CheckSpec("normalize.step_two", "normalize", "zero dilation coefficient: T coefficients after the shifts = 0", 1e-9),
    CheckSpec("normalize.round_trip", "normalize", "classification of r psi0 o Phi: r_found = r |det dPhi|^-2", 1e-6),
    CheckSpec("normalize.norm_constant", "normalize", "canonical verdict: |d log psi|^2_g = n+1", 1e-8),
    CheckSpec("normalize.not_constant", "normalize",
              "non-constant norm: verdict(psi0 e^(f + fbar), f = 0.1 w_1) = NotConstantNorm", 0.0),
    CheckSpec("normalize.isotropy", "normalize",
              "isotropy: verdict(psi0 o sigma) = NeedsIsotropy, verdict(psi0 o sigma o sigma) = Canonical", 0.0),
    # mobius
    CheckSpec("mobius.cayley_matrix", "mobius", "Cayley matrix action: [A (z, 1)] = C(z)", 1e-12),
    CheckSpec("mobius.projective", "mobius", "projective invariance: [lambda A (z, 1)] = [A (z, 1)]", 1e-12),
    CheckSpec("mobius.cayley_det", "mobius", "Cayley determinant: det dC (1 - z_n)^(n+1) = 2", 1e-10),
    CheckSpec("mobius.cayley_report", "mobius", "Cayley constraints: #(failed constraints of C) = 0", 0.0),
    CheckSpec("mobius.rotation", "mobius", "rotated Cayley map: recovered theta = theta", 1e-10),
    CheckSpec("mobius.identity_rejected", "mobius", "identity matrix: first failed constraint = G(0) = e_n", 0.0),
    CheckSpec("mobius.sheared_det", "mobius", "sheared Cayley determinant: det dC~ = 2 (1 - z_n)^-(n+1)", 1e-10),
    CheckSpec("mobius.sheared_rejected", "mobius", "sheared Cayley map: first failed constraint = Moebius linearity", 0.0),
]

CHECKS: Dict[str, CheckSpec] = {spec.name: spec for spec in _ENTRIES}
