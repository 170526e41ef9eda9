"""
The six verification suites.

A suite runs for one dimension n with its own seeded generator and records
one CheckResult per check (one per entry for the pushforward tables) plus
any deviations between tabulated statements and computed values.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
import scipy.linalg

from geometry.automorphism import (
    Automorphism,
    MobiusMap,
    Perm1k,
    ShearedCayley,
    Sigma,
    T2k,
    T3k,
    Ts,
    CayleyMap,
    ComposedMap,
    cayley_constraint_report,
    cayley_matrix,
    flow,
    rotated_cayley,
)
from geometry.domain import Model, cayley, cayley_jacobian, in_siegel, rho0, sigma
from geometry.errors import GeometryError
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
from geometry.normalize import (
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
from geometry.potential import (
    Base,
    HoloPoly,
    Potential,
    constant_norm_residual,
    diff_norm_sq,
    gradient_bracket_check,
    gradient_field,
    kahler_residual,
    max_principle_probe,
    w_field,
)
from geometry.vectorfield import (
    BasisTag,
    ad_matrix,
    basis,
    basis_field,
    basis_tags,
    bracket,
    combine,
    decompose,
    grade,
    pushforward,
    re_apply,
)
from utils.numerics import holomorphic_jacobian, sample_ball, sample_siegel, wirtinger
from verification.catalog import CHECKS
from verification.generators import (
    random_automorphism,
    random_collapsed,
    random_field_coeffs,
    random_generator,
    random_holopoly,
)
from verification.report import CheckResult, Deviation
from verification.rules import Coeffs, generator_rule, push_through, stated_permutation_rule

logger = logging.getLogger(__name__)

FD_POINTS = 20
TABLE_DRAWS = 10


@dataclass
class SuiteContext:
    suite: str
    n: int
    samples: int
    rng: np.random.Generator
    tolerances: Dict[str, float]
    checks: List[CheckResult] = field(default_factory=list)
    deviations: List[Deviation] = field(default_factory=list)

    def wants(self, name: str) -> bool:
        return self.n <= CHECKS[name].max_n

    def record(self, name: str, residual: float, samples: Optional[int] = None, label: Optional[str] = None) -> None:
        spec = CHECKS[name]
        result = CheckResult.measure(name, spec.suite, spec.anchor, self.n,
                                     self.samples if samples is None else samples,
                                     residual, self.tolerances.get(name, spec.tolerance), label)
        if not result.passed:
            logger.debug(f"{name} n={self.n} {label or ''} residual {residual}")
        self.checks.append(result)

    def measure(self, name: str, compute: Callable[[], float], samples: Optional[int] = None,
                label: Optional[str] = None) -> None:
        """Run one check; a geometry or linear-algebra error counts as a failure."""
        if not self.wants(name):
            return
        try:
            residual = float(compute())
        except (GeometryError, scipy.linalg.LinAlgError) as e:
            logger.error(f"{name} n={self.n} raised {type(e).__name__}: {e}")
            residual = math.inf
        self.record(name, residual, samples, label)

    def deviate(self, name: str, stated: str, observed: str, residual: float) -> None:
        logger.warning(f"deviation {name} n={self.n}: stated {stated}, observed {observed}")
        self.deviations.append(Deviation(name=name, n=self.n, stated=stated, observed=observed,
                                         residual=float(residual)))


def _rel(a: np.ndarray, b: np.ndarray) -> float:
    a = np.asarray(a)
    b = np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def _coeff_error(observed: Dict[BasisTag, float], expected: Coeffs) -> float:
    tags = set(observed) | set(expected)
    return max((abs(observed.get(t, 0.0) - expected.get(t, 0.0)) for t in tags), default=0.0)


def _fd_siegel(ctx: SuiteContext) -> np.ndarray:
    return sample_siegel(ctx.rng, ctx.n, min(ctx.samples, FD_POINTS), rho_min=0.5, rho_max=2.0, tail_radius=0.5)


def _fd_ball(ctx: SuiteContext) -> np.ndarray:
    return sample_ball(ctx.rng, ctx.n, min(ctx.samples, FD_POINTS), radius=0.8)


# metric


def metric_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    pts = sample_siegel(ctx.rng, n, ctx.samples)
    zs = sample_ball(ctx.rng, n, ctx.samples)
    total = 2 * ctx.samples

    def hermitian() -> float:
        forms = [metric(w) for w in pts] + [metric(z, Model.BALL) for z in zs]
        return max(f.hermitian_defect() / float(np.max(np.abs(f.entries))) for f in forms)

    def positive_definite() -> float:
        forms = [metric(w) for w in pts] + [metric(z, Model.BALL) for z in zs]
        return float(sum(not f.is_positive_definite() for f in forms))

    def inverse() -> float:
        return max([inverse_residual(w) for w in pts] + [inverse_residual(z, Model.BALL) for z in zs])

    def closed_form(model: Model, points: np.ndarray) -> float:
        worst = 0.0
        for p in points:
            H = inverse_metric(p, model).entries
            expected = scipy.linalg.inv(metric(p, model).entries).T
            worst = max(worst, float(np.max(np.abs(H - expected)) / np.max(np.abs(expected))))
        return worst

    def cayley_pullback() -> float:
        worst = 0.0
        for z in zs:
            pulled = pullback_metric(cayley_jacobian(z), metric_siegel(cayley(z)))
            target = metric_ball(z)
            worst = max(worst, float(np.max(np.abs(pulled - target)) / np.max(np.abs(target))))
        return worst

    def generator_isometry() -> float:
        gens = [random_generator(ctx.rng, n) for _ in range(len(pts))]
        gens[:: 5] = [Sigma()] * len(gens[:: 5])
        worst = 0.0
        for gen, w in zip(gens, pts):
            pulled = pullback_metric(gen.jacobian(w), metric_siegel(gen.apply(w)))
            target = metric_siegel(w)
            worst = max(worst, float(np.max(np.abs(pulled - target)) / np.max(np.abs(target))))
        return worst

    def isometry_det() -> float:
        maps = [CayleyMap(), ComposedMap(CayleyMap(), random_automorphism(ctx.rng, n))]
        return max(isometry_det_identity(G, z) for G in maps for z in zs)

    ctx.measure("metric.hermitian", hermitian, total)
    ctx.measure("metric.positive_definite", positive_definite, total)
    ctx.measure("metric.inverse", inverse, total)
    ctx.measure("metric.inverse_closed_form", lambda: closed_form(Model.SIEGEL, pts))
    ctx.measure("metric.ball_inverse", lambda: closed_form(Model.BALL, zs))
    ctx.measure("metric.cayley_pullback", cayley_pullback)
    ctx.measure("metric.generator_isometry", generator_isometry)
    ctx.measure("metric.isometry_det", isometry_det, 2 * ctx.samples)

    if ctx.wants("metric.einstein_siegel"):
        fd_pts = _fd_siegel(ctx)
        fd_zs = _fd_ball(ctx)
        ctx.measure("metric.einstein_siegel", lambda: max(einstein_residual(w) for w in fd_pts), len(fd_pts))
        ctx.measure("metric.einstein_ball", lambda: max(einstein_residual(z, Model.BALL) for z in fd_zs), len(fd_zs))
        ctx.measure("metric.potential_hessian",
                    lambda: max([potential_hessian_residual(w) for w in fd_pts]
                                + [potential_hessian_residual(z, Model.BALL) for z in fd_zs]),
                    len(fd_pts) + len(fd_zs))


# potential


def _expected_affine_value(tag: BasisTag, n: int) -> float:
    return -(n + 1.0) if tag.kind == "D" else 0.0


def _tilde_value(tag: BasisTag, w: np.ndarray, n: int) -> float:
    """Directional derivative of log psi0 along Re of a grade 1/2 or 1 field."""
    if tag.kind == "Tt":
        return -2 * (n + 1) * w[-1].imag
    if tag.kind == "Tt2":
        return -2 * (n + 1) * w[tag.i - 1].real
    return -2 * (n + 1) * w[tag.i - 1].imag


_STATED_TILDE = {
    "Tt": ("(Re Tt) log psi0 = -4(n+1) Im w_n", lambda w, tag, n: -4 * (n + 1) * w[-1].imag),
    "Tt2": ("(Re Tt2(k)) log psi0 = -4(n+1) Re w_k", lambda w, tag, n: -4 * (n + 1) * w[tag.i - 1].real),
    "Tt3": ("(Re Tt3(k)) log psi0 = (n+1) Im w_k", lambda w, tag, n: (n + 1) * w[tag.i - 1].imag),
}

_OBSERVED_TILDE = {
    "Tt": "-2(n+1) Im w_n with Re V = (V + Vbar)/2",
    "Tt2": "-2(n+1) Re w_k with Re V = (V + Vbar)/2",
    "Tt3": "-2(n+1) Im w_k with Re V = (V + Vbar)/2 (-4(n+1) Im w_k without the 1/2)",
}


def potential_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    rng = ctx.rng
    P0 = Potential.canonical(n)
    pts = sample_siegel(rng, n, ctx.samples)
    zs = sample_ball(rng, n, ctx.samples)
    tags = basis_tags(n)
    affine = [t for t in tags if not t.is_tilde]
    tilde = [t for t in tags if t.is_tilde]

    ctx.measure("potential.norm_constant",
                lambda: max(abs(diff_norm_sq(P0, w) - (n + 1)) for w in pts))

    def scaled_norm() -> float:
        worst = 0.0
        for kappa in (0.5, 1.0, 2.0):
            P = Potential(n=n, kappa=kappa)
            worst = max(worst, max(abs(diff_norm_sq(P, w) - (n + 1) / kappa) for w in pts))
        return worst

    ctx.measure("potential.scaled_norm", scaled_norm, 3 * ctx.samples)
    P_ball = Potential.canonical(n, Base.PHI0)
    ctx.measure("potential.ball_norm", lambda: max(abs(diff_norm_sq(P_ball, z) - (n + 1)) for z in zs))

    def precomposed_norm() -> float:
        worst = 0.0
        for index, w in enumerate(pts):
            phi = random_automorphism(rng, n, length=3)
            if index % 2:
                phi = phi.then(Automorphism((Sigma(),)))
            worst = max(worst, abs(diff_norm_sq(P0.precomposed_with(phi), w) - (n + 1)))
        return worst

    ctx.measure("potential.precomposed_norm", precomposed_norm)

    fd_pts = _fd_siegel(ctx)
    generic = Potential(n=n, precompose=random_automorphism(rng, n, length=3),
                        correction=random_holopoly(rng, n, scale=0.1))
    # constant-norm potential for the bracket identity
    composed = Potential.canonical(n).precomposed_with(
        random_automorphism(rng, n, length=3).then(Automorphism((Sigma(),))))

    def grad_check() -> float:
        worst = 0.0
        for w in fd_pts:
            numeric, _ = wirtinger(generic.eval_log, w)
            worst = max(worst, _rel(numeric, generic.grad_holo(w)))
        return worst

    ctx.measure("potential.grad_holo", grad_check, len(fd_pts))

    def crosscheck() -> float:
        worst = 0.0
        count = min(ctx.samples, 10)
        for _ in range(count):
            f = random_holopoly(rng, n)
            P = Potential(n=n, correction=f)
            for w in pts[:count]:
                defect = diff_norm_sq(P, w) - (n + 1)
                worst = max(worst, abs(constant_norm_residual(f, w) - defect) / max(1.0, abs(defect)))
        return worst

    ctx.measure("potential.residual_crosscheck", crosscheck, min(ctx.samples, 10) ** 2)

    linear = HoloPoly.from_terms(n, [(tuple(1 if k == n - 1 else 0 for k in range(n)), 0.1)])
    P_linear = Potential(n=n, correction=linear)
    gap = 0.0
    for w in pts:
        df = linear.gradient(w)
        expanded = -4 * (n + 1) * df[-1].real + norm_sq_form(df, w)
        gap = max(gap, abs(expanded - (diff_norm_sq(P_linear, w) - (n + 1))))
    if gap > CHECKS["potential.residual_crosscheck"].tolerance:
        ctx.deviate("potential.residual_crosscheck[prefactor]", "-4 (n+1) Re f_n + |df|^2",
                    "-4 rho0 Re f_n + |df|^2", gap)

    def psi0_gradient() -> float:
        worst = 0.0
        for w in pts:
            expected = np.zeros(n, dtype=complex)
            expected[-1] = -2 * rho0(w)
            worst = max(worst, float(np.max(np.abs(gradient_field(P0, w) - expected))) / rho0(w))
        return worst

    ctx.measure("potential.gradient_field_psi0", psi0_gradient)

    def gradient_norm() -> float:
        worst = 0.0
        for w in pts:
            V = gradient_field(generic, w)
            expected = diff_norm_sq(generic, w)
            worst = max(worst, abs(metric(w).norm_sq(V) - expected) / max(1.0, expected))
        return worst

    ctx.measure("potential.gradient_field_norm", gradient_norm)
    ctx.measure("potential.bracket_identity",
                lambda: max(gradient_bracket_check(composed, w) for w in fd_pts), len(fd_pts))
    ctx.measure("potential.kahler", lambda: max(kahler_residual(generic, w) for w in fd_pts), len(fd_pts))

    def w_field_error(P: Potential, scale: float) -> float:
        dec = decompose(w_field(P))
        return _coeff_error(dec.coeffs, {BasisTag("T"): -scale})

    ctx.measure("potential.w_field_psi0", lambda: w_field_error(P0, 1.0))
    r = float(rng.uniform(0.5, 2.0))
    ctx.measure("potential.w_field_scaling",
                lambda: w_field_error(Potential(n=n, log_scale=math.log(r)), r ** (1.0 / (n + 1))),
                label=f"r={r:.6f}")

    def directional_constants() -> float:
        worst = 0.0
        for tag in affine:
            V = basis_field(tag, n)
            expected = _expected_affine_value(tag, n)
            worst = max(worst, max(abs(re_apply(V, P0, w) - expected) for w in pts))
        return worst

    ctx.measure("potential.directional_constants", directional_constants, len(affine) * ctx.samples)

    def affine_constancy() -> float:
        weights = {tag: float(rng.uniform(-1, 1)) for tag in affine}
        V = combine(weights, n)
        values = np.array([re_apply(V, P0, w) for w in pts])
        return float(np.max(values) - np.min(values))

    ctx.measure("potential.affine_constancy", affine_constancy)

    def tilde_nonconstant() -> float:
        flat = 0
        for tag in tilde:
            values = np.array([re_apply(basis_field(tag, n), P0, w) for w in pts])
            flat += int(np.max(values) - np.min(values) < 1e-3)
        return float(flat)

    ctx.measure("potential.tilde_nonconstant", tilde_nonconstant, len(tilde) * ctx.samples)

    def tilde_values() -> float:
        worst = 0.0
        for tag in tilde:
            V = basis_field(tag, n)
            for w in pts:
                expected = _tilde_value(tag, w, n)
                worst = max(worst, abs(re_apply(V, P0, w) - expected) / max(1.0, abs(expected)))
        return worst

    ctx.measure("potential.tilde_values", tilde_values, len(tilde) * ctx.samples)
    for kind in ("Tt", "Tt2", "Tt3"):
        members = [t for t in tilde if t.kind == kind]
        if not members:
            continue
        tag = members[0]
        text, stated = _STATED_TILDE[kind]
        gap = max(abs(stated(w, tag, n) - _tilde_value(tag, w, n)) for w in pts)
        if gap > CHECKS["potential.tilde_values"].tolerance:
            ctx.deviate(f"potential.tilde_values[{kind}]", text, _OBSERVED_TILDE[kind], gap)

    ctx.measure("potential.sigma_involution", lambda: max(_rel(sigma(sigma(w)), w) for w in pts))
    P_sigma = P0.precomposed_with(Automorphism((Sigma(),)))
    D = basis_field(BasisTag("D"), n)
    ctx.measure("potential.hyperbolic_sign", lambda: max(abs(re_apply(D, P_sigma, w) - (n + 1)) for w in pts))

    def unitary_directional() -> float:
        unitary_tags = [t for t in affine if t.kind in ("U", "V", "W")]
        U = combine({t: float(rng.uniform(-1, 1)) for t in unitary_tags}, n)
        T = basis_field(BasisTag("T"), n)
        worst = 0.0
        for w in pts:
            worst = max(worst, abs(re_apply(D + U, P0, w) + (n + 1)), abs(re_apply(T + U, P0, w)))
        return worst

    ctx.measure("potential.unitary_directional", unitary_directional)

    def max_principle() -> float:
        bad = 0
        for _ in range(3):
            probe = max_principle_probe(random_holopoly(rng, n), samples=min(ctx.samples, 200))
            bad += int(not probe.consistent)
        return float(bad)

    ctx.measure("potential.max_principle", max_principle, 3 * min(ctx.samples, 200))


# tables


def _table_error(gen, tag: BasisTag, n: int) -> float:
    pushed = decompose(pushforward(Automorphism((gen,)), basis_field(tag, n)))
    return _coeff_error(pushed.coeffs, generator_rule(gen, tag))


def _table_entries(ctx: SuiteContext, name: str, make, label: str, affine: List[BasisTag], draws: int) -> None:
    for tag in affine:
        def compute(tag=tag) -> float:
            return max(_table_error(make(float(ctx.rng.uniform(-1, 1))), tag, ctx.n) for _ in range(draws))

        ctx.measure(name, compute, draws, label=f"{label}_* {tag}")


def tables_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    rng = ctx.rng
    affine = [t for t in basis_tags(n) if not t.is_tilde]
    draws = min(ctx.samples, TABLE_DRAWS)

    _table_entries(ctx, "tables.translation", Ts, "Ts", affine, draws)
    for k in range(1, n):
        _table_entries(ctx, "tables.shift2", lambda s, k=k: T2k(k, s), f"T2k({k})", affine, draws)
    for k in range(1, n):
        _table_entries(ctx, "tables.shift3", lambda s, k=k: T3k(k, s), f"T3k({k})", affine, draws)
    for k in range(2, n):
        gen = Perm1k(k)
        for tag in affine:
            ctx.measure("tables.permutation", lambda gen=gen, tag=tag: _table_error(gen, tag, n), 1,
                        label=f"Perm1k({k})_* {tag}")
        for kind in ("T2", "T3", "W"):
            tag = BasisTag(kind, 1)
            stated = stated_permutation_rule(k, tag)
            observed = decompose(pushforward(Automorphism((gen,)), basis_field(tag, n))).coeffs
            gap = _coeff_error(observed, stated)
            if gap > CHECKS["tables.permutation"].tolerance:
                ctx.deviate(f"tables.permutation[{kind}(1)]",
                            f"(Perm1k({k}))_* {tag} = {tag} (indices other than k unchanged)",
                            f"(Perm1k({k}))_* {tag} = {kind}({k})", gap)

    composite_tags = [BasisTag("D"), BasisTag("T")]
    if n > 1:
        composite_tags += [BasisTag("T2", 1), BasisTag("T3", 1), BasisTag("W", 1)]
        composite_tags += [BasisTag("U", 1, j) for j in range(2, n)] + [BasisTag("V", 1, j) for j in range(2, n)]
    for tag in composite_tags:
        def composite(tag=tag) -> float:
            worst = 0.0
            for _ in range(3):
                gens = [Ts(float(rng.uniform(-1, 1)))]
                gens += [T2k(k, float(rng.uniform(-1, 1))) for k in range(1, n)]
                gens += [T3k(k, float(rng.uniform(-1, 1))) for k in range(1, n)]
                pushed = decompose(pushforward(Automorphism(tuple(gens)), basis_field(tag, n)))
                worst = max(worst, _coeff_error(pushed.coeffs, push_through(gens, {tag: 1.0})))
            return worst

        ctx.measure("tables.composite", composite, 3, label=f"composite_* {tag}")

    pts = sample_siegel(rng, n, min(ctx.samples, FD_POINTS), rho_min=0.3, rho_max=2.0)

    def flow_derivative() -> float:
        h = 1e-5
        worst = 0.0
        for tag in affine:
            V = basis_field(tag, n)
            forward, backward = flow(tag, h, n), flow(tag, -h, n)
            for w in pts:
                numeric = (forward.apply(w) - backward.apply(w)) / (2 * h)
                worst = max(worst, _rel(numeric, V.evaluate(w)))
        return worst

    ctx.measure("tables.flow_derivative", flow_derivative, len(affine) * len(pts))

    def group_law() -> float:
        worst = 0.0
        for tag in affine:
            s, t = rng.uniform(-1, 1, 2)
            lhs = flow(tag, float(s), n).then(flow(tag, float(t), n))
            rhs = flow(tag, float(s + t), n)
            worst = max(worst, max(_rel(lhs.apply(w), rhs.apply(w)) for w in pts))
        return worst

    ctx.measure("tables.group_law", group_law, len(affine) * len(pts))

    def jacobian() -> float:
        worst = 0.0
        for w in pts:
            phi = random_automorphism(rng, n).then(Automorphism((Sigma(),)))
            worst = max(worst, _rel(holomorphic_jacobian(phi.apply, w, 1e-5), phi.jacobian(w)))
        return worst

    ctx.measure("tables.jacobian", jacobian, len(pts))

    def inverse() -> float:
        worst = 0.0
        for w in pts:
            phi = random_automorphism(rng, n).then(Automorphism((Sigma(),)))
            worst = max(worst, _rel(phi.inverse().apply(phi.apply(w)), w))
        return worst

    ctx.measure("tables.inverse", inverse, len(pts))

    count = 10 * ctx.samples
    many = sample_siegel(rng, n, count)

    def domain() -> float:
        outside = 0
        for index, w in enumerate(many):
            gen = Sigma() if index % 7 == 0 else random_generator(rng, n)
            outside += int(not in_siegel(gen.apply(w)))
        return float(outside)

    ctx.measure("tables.domain", domain, count)


# grading


def grading_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    fields = basis(n)
    D = basis_field(BasisTag("D"), n)

    ctx.measure("grading.count", lambda: abs(len(fields) - (n * n + 2 * n)), len(fields))
    eigenvalues = scipy.linalg.eigvals(ad_matrix(D))

    def spectrum() -> float:
        nearest = np.clip(np.round(eigenvalues.real), -2, 2)
        return float(np.max(np.abs(eigenvalues - nearest)))

    def multiplicity() -> float:
        m = n - 1
        expected = {-2: 1, -1: 2 * m, 0: m * m + 1, 1: 2 * m, 2: 1}
        rounded = np.round(eigenvalues.real).astype(int)
        return float(sum(abs(int(np.sum(rounded == value)) - count) for value, count in expected.items())
                     + int(np.sum(np.abs(rounded) > 2)))

    ctx.measure("grading.spectrum", spectrum, len(fields))
    ctx.measure("grading.multiplicity", multiplicity, len(fields))
    ctx.measure("grading.grades", lambda: float(sum(grade(V) != tag.grade for tag, V in fields)), len(fields))

    def graded_brackets() -> float:
        worst = 0.0
        for (tx, X), (ty, Y) in itertools.product(fields, repeat=2):
            B = bracket(X, Y)
            if B.max_abs() == 0:
                continue
            target = tx.grade + ty.grade
            dec = decompose(B)
            off = [abs(c) for tag, c in dec.coeffs.items() if tag.grade != target]
            worst = max(worst, max(off, default=0.0))
        return worst

    ctx.measure("grading.graded_brackets", graded_brackets, len(fields) ** 2)
    ctx.measure("grading.antisymmetry",
                lambda: max((bracket(X, Y) + bracket(Y, X)).max_abs()
                            for (_, X), (_, Y) in itertools.product(fields, repeat=2)),
                len(fields) ** 2)

    def jacobi() -> float:
        worst = 0.0
        for (_, X), (_, Y), (_, Z) in itertools.combinations(fields, 3):
            total = bracket(X, bracket(Y, Z)) + bracket(Y, bracket(Z, X)) + bracket(Z, bracket(X, Y))
            worst = max(worst, total.max_abs())
        return worst

    triples = len(fields) * (len(fields) - 1) * (len(fields) - 2) // 6
    ctx.measure("grading.jacobi", jacobi, triples)

    def sigma_pushforward() -> float:
        pushed = pushforward(Automorphism((Sigma(),)), basis_field(BasisTag("T"), n))
        return (pushed - basis_field(BasisTag("Tt"), n)).max_abs()

    ctx.measure("grading.sigma_pushforward", sigma_pushforward, 1)


# normalize


def normalize_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    rng = ctx.rng
    trials = min(ctx.samples, 100)

    if n > 1:
        def determinant() -> float:
            bad = 0
            for _ in range(trials):
                M, _ = build_shift_system(random_collapsed(rng, n))
                bad += int(not scipy.linalg.det(M) > 0)
            return float(bad)

        ctx.measure("normalize.shift_determinant", determinant, trials)

    def kill() -> float:
        worst = 0.0
        for _ in range(min(trials, 20)):
            K = random_collapsed(rng, n)
            shifts = solve_shifts(K)
            worst = max(worst, kill_residual(K, shift_automorphism(shifts, choose_s1(K, shifts))))
        return worst

    ctx.measure("normalize.kill", kill, min(trials, 20))

    if n > 2:
        def collapse() -> float:
            worst = 0.0
            for _ in range(5):
                C = FieldCoeffs(n, a=float(rng.uniform(-1, 1)), b=float(rng.uniform(-1, 1)))
                C.c[-1], C.d[-1], C.g[-1] = rng.uniform(-1, 1, 3)
                _, K = collapse_permutations(C)
                worst = max(worst, abs(K.c - C.c[-1]), abs(K.d - C.d[-1]), abs(K.g - C.g[-1]), K.off_collapse)
            return worst

        ctx.measure("normalize.collapse", collapse, 5)

        C = random_field_coeffs(rng, n)
        _, actual = collapse_permutations(C)
        summed = summed_collapse(C)
        gap = max(abs(actual.c - summed.c), abs(actual.d - summed.d), abs(actual.g - summed.g),
                  float(np.max(np.abs(actual.e - summed.e), initial=0.0)),
                  float(np.max(np.abs(actual.f - summed.f), initial=0.0)), actual.off_collapse)
        if gap > 1e-8:
            ctx.deviate("normalize.collapse[summation]",
                        "c = sum c_k, d = sum d_k, e_j = -sum_i e_ij, f_j = sum_i f_ij, g = sum g_k",
                        f"pushforward through the swap chain differs (off-slot residue {actual.off_collapse:.3e})",
                        gap)

    if n > 1:
        def step_two() -> float:
            worst = 0.0
            for index in range(min(trials, 20)):
                K = random_collapsed(rng, n, a_min=0.0)
                if index % 2:
                    K.e[:] = 0.0
                    K.f[:] = 0.0
                    K.g = 0.0
                    kinds = ("T",)
                else:
                    kinds = ("T2", "T3")
                phi = shift_automorphism(step_two_shifts(K))
                field = K.to_field()
                pushed = pushforward(phi, field) if len(phi) else field
                dec = decompose(pushed)
                worst = max(worst, max(abs(dec.get(kind, 1 if kind != "T" else None)) for kind in kinds))
            return worst

        ctx.measure("normalize.step_two", step_two, min(trials, 20))

    rounds = min(20, max(3, ctx.samples // 5))
    verdicts = []

    def round_trip() -> float:
        worst = 0.0
        for _ in range(rounds):
            phi = random_automorphism(rng, n, length=3)
            r = float(rng.uniform(0.5, 2.0))
            P = Potential(n=n, precompose=phi, log_scale=math.log(r))
            verdict = classify_potential(P, samples=ctx.samples)
            verdicts.append(verdict)
            if verdict.kind != "Canonical":
                return math.inf
            probe = np.zeros(n, dtype=complex)
            probe[-1] = 1.0
            expected = r * abs(phi.det_jacobian(probe)) ** -2
            worst = max(worst, abs(verdict.r - expected) / expected)
        return worst

    ctx.measure("normalize.round_trip", round_trip, rounds)
    ctx.measure("normalize.norm_constant",
                lambda: max((abs(v.norm_constant - (n + 1)) for v in verdicts if v.kind == "Canonical"),
                            default=math.inf),
                len(verdicts))

    def not_constant() -> float:
        terms = [(tuple(1 if k == 0 else 0 for k in range(n)), 0.1)]
        P = Potential(n=n, correction=HoloPoly.from_terms(n, terms))
        return float(classify_potential(P, samples=ctx.samples).kind != "NotConstantNorm")

    ctx.measure("normalize.not_constant", not_constant, 1)

    def isotropy() -> float:
        s = Automorphism((Sigma(),))
        P = Potential.canonical(n).precomposed_with(s)
        first = classify_potential(P, samples=ctx.samples)
        second = classify_potential(P, samples=ctx.samples, isotropy=s)
        return float(first.kind == "NotConstantNorm") + float(second.kind != "Canonical")

    ctx.measure("normalize.isotropy", isotropy, 2)


# mobius


def _wrap(angle: float) -> float:
    return float(abs((angle + np.pi) % (2 * np.pi) - np.pi))


def constant_column_gap(M: MobiusMap, zs: Sequence[np.ndarray]) -> float:
    """How far dropping the column A[:, n] moves M on zs; 0 when no point reaches it."""
    A = M.A
    n = M.n
    worst = 0.0
    for z in zs:
        den = A[n, :n] @ z
        if abs(den) < 1e-3:
            continue
        worst = max(worst, _rel((A[:n, :n] @ z) / den, M.apply(z)))
    return worst


def mobius_suite(ctx: SuiteContext) -> None:
    n = ctx.n
    rng = ctx.rng
    zs = sample_ball(rng, n, ctx.samples, radius=0.9)
    C = MobiusMap(cayley_matrix(n))

    ctx.measure("mobius.cayley_matrix", lambda: max(_rel(C.apply(z), cayley(z)) for z in zs))

    def projective() -> float:
        M = rotated_cayley(n, float(rng.uniform(-np.pi, np.pi)))
        lam = complex(rng.uniform(0.5, 2.0) * np.exp(1j * rng.uniform(-np.pi, np.pi)))
        scaled = MobiusMap(lam * M.A)
        return max(_rel(scaled.apply(z), M.apply(z)) for z in zs)

    ctx.measure("mobius.projective", projective)

    def cayley_det() -> float:
        worst = 0.0
        for z in zs:
            for J in (cayley_jacobian(z), C.jacobian(z)):
                worst = max(worst, abs(scipy.linalg.det(J) * (1 - z[-1]) ** (n + 1) - 2) / 2)
        return worst

    ctx.measure("mobius.cayley_det", cayley_det)

    def cayley_report() -> float:
        report = cayley_constraint_report(C)
        return float(report.verdict != "CayleyUpToRotation" or _wrap(report.rotation) > 1e-10)

    ctx.measure("mobius.cayley_report", cayley_report, 50)

    def rotation() -> float:
        worst = 0.0
        for _ in range(3):
            theta = float(rng.uniform(-np.pi, np.pi))
            report = cayley_constraint_report(rotated_cayley(n, theta))
            if report.verdict != "CayleyUpToRotation":
                return math.inf
            worst = max(worst, _wrap(report.rotation - theta))
        return worst

    ctx.measure("mobius.rotation", rotation, 150)
    ctx.measure("mobius.identity_rejected",
                lambda: float(cayley_constraint_report(MobiusMap(np.eye(n + 1))).first_failure != "G(0) = e_n"),
                50)

    gap = constant_column_gap(C, zs[:10])
    if gap > CHECKS["mobius.cayley_matrix"].tolerance:
        ctx.deviate("mobius.apply[constant column]",
                    "z -> [sum_j A_ij z_j / sum_j A_(n+1)j z_j] over j <= n",
                    "the chart [z, 1] adds the constant column A_(i,n+1); the Cayley matrix needs it", gap)

    if n > 1:
        sheared = ShearedCayley.with_polynomial(n, [0.0, 0.0, 1.0])

        def sheared_det() -> float:
            worst = 0.0
            for z in zs:
                expected = 2 * (1 - z[-1]) ** (-(n + 1))
                worst = max(worst, abs(scipy.linalg.det(sheared.jacobian(z)) - expected) / abs(expected))
            return worst

        ctx.measure("mobius.sheared_det", sheared_det)
        z = zs[0]
        stated = (1 - z[-1]) ** (-(n + 1))
        observed = scipy.linalg.det(sheared.jacobian(z))
        ctx.deviate("mobius.sheared_det[factor]", "det dC~ = (1 - z_n)^-(n+1)", "det dC~ = 2 (1 - z_n)^-(n+1)",
                    abs(observed - stated) / abs(observed))

        def sheared_rejected() -> float:
            report = cayley_constraint_report(sheared, n=n)
            det_ok = any(c.name.startswith("det") and c.passed for c in report.checks)
            return float(not det_ok or report.first_failure != "Moebius linearity")

        ctx.measure("mobius.sheared_rejected", sheared_rejected, 50)


SUITE_FUNCTIONS: Dict[str, Callable[[SuiteContext], None]] = {
    "metric": metric_suite,
    "potential": potential_suite,
    "tables": tables_suite,
    "grading": grading_suite,
    "normalize": normalize_suite,
    "mobius": mobius_suite,
}
