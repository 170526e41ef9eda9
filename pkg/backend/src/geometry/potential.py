"""
Potentials on H^n and B^n.

A potential is stored through its logarithm

    log psi = (1/kappa) [log psi0(Phi(w)) + f(w) + conj(f(w)) + ln r]

with psi0 = rho0^{-(n+1)} on H^n (base PSI0) or
phi0 = |1 - z_n|^{2(n+1)} / (1 - |z|^2)^{n+1} on B^n (base PHI0, where a
precomposition is applied after the Cayley transform).
"""

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from geometry.automorphism import Automorphism
from geometry.domain import (
    Model,
    PointLike,
    as_coords,
    ball_defining,
    cayley,
    cayley_jacobian,
    require_ball,
    require_siegel,
    rho0,
)
from geometry.errors import NotConstantNorm, OutsideDomain
from geometry.metric import inverse_metric, metric, norm_sq_form
from geometry.vectorfield import PolyVF, fit_polyvf
from utils.numerics import DEFAULT_STEP, ball_grid, complex_hessian, siegel_grid, wirtinger
from utils.performance import timing_decorator

logger = logging.getLogger(__name__)

NORM_SAMPLES = 64
NORM_SPREAD_TOL = 1e-8
W_FIT_TOL = 1e-8


class Base(str, Enum):
    PSI0 = "psi0"
    PHI0 = "phi0"

    @property
    def model(self) -> Model:
        return Model.SIEGEL if self == Base.PSI0 else Model.BALL


@dataclass(frozen=True)
class HoloPoly:
    """Holomorphic polynomial sum_m c_m w^{e_m} with exact derivatives."""

    n: int
    exponents: np.ndarray = field(compare=False)
    coeffs: np.ndarray = field(compare=False)

    def __post_init__(self):
        exps = np.array(self.exponents, dtype=int).reshape(-1, self.n)
        coeffs = np.array(self.coeffs, dtype=complex).reshape(-1)
        if exps.shape[0] != coeffs.size:
            raise ValueError("one coefficient per exponent tuple is required")
        if np.any(exps < 0):
            raise ValueError("exponents must be non-negative")
        object.__setattr__(self, "exponents", exps)
        object.__setattr__(self, "coeffs", coeffs)

    @classmethod
    def zero(cls, n: int) -> "HoloPoly":
        return cls(n, np.zeros((0, n), dtype=int), np.zeros(0, dtype=complex))

    @classmethod
    def from_terms(cls, n: int, terms: Sequence[Tuple[Sequence[int], complex]]) -> "HoloPoly":
        if not terms:
            return cls.zero(n)
        exps, coeffs = zip(*terms)
        return cls(n, np.array(exps, dtype=int), np.array(coeffs, dtype=complex))

    @classmethod
    def from_records(cls, n: int, records: Sequence[Dict[str, Any]]) -> "HoloPoly":
        terms = []
        for record in records:
            exps = [int(e) for e in record["exponents"]]
            if len(exps) != n:
                raise ValueError(f"term has {len(exps)} exponents, expected {n}")
            terms.append((exps, complex(float(record.get("re", 0.0)), float(record.get("im", 0.0)))))
        return cls.from_terms(n, terms)

    def to_records(self) -> List[Dict[str, Any]]:
        return [{"exponents": [int(e) for e in exps], "re": float(c.real), "im": float(c.imag)}
                for exps, c in zip(self.exponents, self.coeffs)]

    @property
    def degree(self) -> int:
        if self.coeffs.size == 0:
            return 0
        return int(np.max(np.sum(self.exponents, axis=1)))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs != 0)

    def evaluate(self, w: PointLike) -> complex:
        w = as_coords(w)
        if self.coeffs.size == 0:
            return 0j
        monomials = np.prod(np.power(w[None, :], self.exponents), axis=1)
        return complex(monomials @ self.coeffs)

    def gradient(self, w: PointLike) -> np.ndarray:
        w = as_coords(w)
        grad = np.zeros(self.n, dtype=complex)
        for k in range(self.n):
            mask = self.exponents[:, k] > 0
            if not np.any(mask):
                continue
            reduced = self.exponents[mask].copy()
            factor = reduced[:, k].astype(complex)
            reduced[:, k] -= 1
            monomials = np.prod(np.power(w[None, :], reduced), axis=1)
            grad[k] = np.sum(self.coeffs[mask] * factor * monomials)
        return grad


def log_psi0(w: PointLike) -> float:
    w = require_siegel(w)
    return float(-(w.size + 1) * np.log(rho0(w)))


def grad_log_psi0(w: PointLike) -> np.ndarray:
    """(n+1) conj(w_k)/rho for k < n and -(n+1)/(2 rho) for the last slot."""
    w = require_siegel(w)
    n = w.size
    rho = rho0(w)
    grad = np.empty(n, dtype=complex)
    grad[:-1] = (n + 1) * w[:-1].conj() / rho
    grad[-1] = -(n + 1) / (2 * rho)
    return grad


def log_phi0(z: PointLike) -> float:
    z = require_ball(z)
    n = z.size
    return float((n + 1) * (2 * np.log(abs(1 - z[-1])) - np.log(ball_defining(z))))


def grad_log_phi0(z: PointLike) -> np.ndarray:
    z = require_ball(z)
    n = z.size
    grad = (n + 1) * z.conj() / ball_defining(z)
    grad[-1] -= (n + 1) / (1 - z[-1])
    return grad


@dataclass(frozen=True)
class Potential:
    """A positive potential on H^n (PSI0) or B^n (PHI0)."""

    n: int
    base: Base = Base.PSI0
    precompose: Optional[Automorphism] = None
    correction: Optional[HoloPoly] = None
    log_scale: float = 0.0
    kappa: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.correction is not None and self.correction.n != self.n:
            raise ValueError("correction lives in the wrong dimension")

    @classmethod
    def canonical(cls, n: int, base: Base = Base.PSI0) -> "Potential":
        return cls(n=n, base=base)

    @property
    def model(self) -> Model:
        return self.base.model

    @property
    def r(self) -> float:
        return float(np.exp(self.log_scale))

    def precomposed_with(self, phi: Automorphism) -> "Potential":
        """P o phi; only possible when the correction is constant."""
        if self.correction is not None and self.correction.degree > 0:
            raise ValueError("cannot precompose a potential with a non-constant correction")
        inner = phi if self.precompose is None else phi.then(self.precompose)
        return replace(self, precompose=inner)

    def _chart(self, w: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Image in H^n of the base evaluation and its Jacobian."""
        if self.base == Base.PHI0:
            point = cayley(w)
            jac = cayley_jacobian(w)
        else:
            point = w
            jac = np.eye(w.size, dtype=complex)
        if self.precompose is not None:
            jac = self.precompose.jacobian(point) @ jac
            point = self.precompose.apply(point)
        return point, jac

    def _require_interior(self, w: PointLike) -> np.ndarray:
        return require_ball(w) if self.base == Base.PHI0 else require_siegel(w)

    def _correction_value(self, w: np.ndarray) -> float:
        if self.correction is None:
            return 0.0
        return 2.0 * self.correction.evaluate(w).real

    def eval_log(self, w: PointLike) -> float:
        w = self._require_interior(w)
        if self.base == Base.PHI0 and self.precompose is None:
            base_value = log_phi0(w)
        else:
            image, _ = self._chart(w)
            if rho0(image) <= 0:
                raise OutsideDomain("precomposition leaves H^n", rho=rho0(image))
            base_value = log_psi0(image)
        return (base_value + self._correction_value(w) + self.log_scale) / self.kappa

    def grad_holo(self, w: PointLike) -> np.ndarray:
        """Exact holomorphic partials of eval_log."""
        w = self._require_interior(w)
        if self.base == Base.PHI0 and self.precompose is None:
            grad = grad_log_phi0(w)
        else:
            image, jac = self._chart(w)
            if rho0(image) <= 0:
                raise OutsideDomain("precomposition leaves H^n", rho=rho0(image))
            grad = jac.T @ grad_log_psi0(image)
        if self.correction is not None:
            grad = grad + self.correction.gradient(w)
        return grad / self.kappa

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "base": self.base.value,
            "generators": self.precompose.to_records() if self.precompose else [],
            "f": self.correction.to_records() if self.correction else [],
            "r": self.r,
            "kappa": self.kappa,
        }


def eval_log(P: Potential, w: PointLike) -> float:
    return P.eval_log(w)


def grad_holo(P: Potential, w: PointLike) -> np.ndarray:
    return P.grad_holo(w)


def diff_norm_sq(P: Potential, w: PointLike) -> float:
    """|d log psi|^2 measured in the scaled metric (1/kappa) g."""
    return P.kappa * norm_sq_form(P.grad_holo(w), w, P.model)


def gradient_field(P: Potential, w: PointLike) -> np.ndarray:
    """V^k = sum_j conj(Psi_j) g~^{k jbar} with g~ = g / kappa."""
    H = inverse_metric(w, P.model).entries
    return P.kappa * (H @ P.grad_holo(w).conj())


def constant_norm_residual(f: HoloPoly, w: PointLike) -> float:
    """-4 rho0 Re f_n + |df|^2; vanishes iff psi0 e^{f + conj f} has norm n+1 at w."""
    w = require_siegel(w)
    df = f.gradient(w)
    return float(-4 * rho0(w) * df[-1].real + norm_sq_form(df, w))


def sample_points(model: Model, n: int, count: int, start: int = 0) -> np.ndarray:
    if model == Model.BALL:
        return ball_grid(n, count, start=start)
    return siegel_grid(n, count, start=start)


def norm_samples(P: Potential, count: int = NORM_SAMPLES) -> np.ndarray:
    pts = sample_points(P.model, P.n, count, start=7919)
    return np.array([diff_norm_sq(P, w) for w in pts])


def _w_values(P: Potential, points: np.ndarray) -> np.ndarray:
    out = np.empty_like(points)
    for p, w in enumerate(points):
        root = np.exp(P.eval_log(w) / (P.n + 1))
        out[p] = 1j * root * gradient_field(P, w)
    return out


@timing_decorator
def w_field(P: Potential, samples: int = NORM_SAMPLES) -> PolyVF:
    """
    W = i psi^{1/(n+1)} grad log psi, fitted by a polynomial field.

    The constant-norm hypothesis is checked on ``samples`` grid points first.
    """
    if P.kappa != 1:
        raise ValueError("w_field needs kappa = 1")
    norms = norm_samples(P, samples)
    spread = float(np.max(norms) - np.min(norms))
    if spread > NORM_SPREAD_TOL:
        raise NotConstantNorm(f"differential norm varies by {spread:.3e}",
                              estimate=float(np.mean(norms)), spread=spread)
    dim = P.n * P.n + 2 * P.n
    fit_pts = sample_points(P.model, P.n, 3 * dim)
    held_pts = sample_points(P.model, P.n, dim, start=3 * dim)
    field, residual = fit_polyvf(fit_pts, _w_values(P, fit_pts), held_pts, _w_values(P, held_pts), W_FIT_TOL)
    logger.debug(f"W field fitted with held-out residual {residual:.3e}")
    return field


def gradient_bracket_check(P: Potential, w: PointLike, h: float = DEFAULT_STEP) -> float:
    """
    max_k |Vbar(V^k) + V^k| at w, which is the k-th component of
    [V, Vbar] - (V - Vbar) for the gradient field V = Psi^k d_k.

    Vbar(u) = sum_j conj(V^j) d u / d conj(w_j) is taken by finite differences.
    """
    if P.kappa != 1:
        raise ValueError("gradient_bracket_check needs kappa = 1")
    w = as_coords(w)
    V = gradient_field(P, w)
    _, dbar = wirtinger(lambda p: gradient_field(P, p), w, h)
    vbar_of_v = np.einsum("j,jk->k", V.conj(), dbar)
    return float(np.max(np.abs(vbar_of_v + V)))


def kahler_residual(P: Potential, w: PointLike, h: float = DEFAULT_STEP) -> float:
    """max |ddbar eval_log - g/kappa|; the correction is pluriharmonic so it drops out."""
    w = as_coords(w)
    hess = complex_hessian(P.eval_log, w, h)
    return float(np.max(np.abs(hess - metric(w, P.model).entries / P.kappa)))


@dataclass
class ProbeResult:
    """Samples of Re f_n and of the constant-norm residual over H^n."""

    min_re_fn: float
    max_re_fn: float
    max_abs_residual: float
    gradient_vanishes: bool

    @property
    def consistent(self) -> bool:
        """A vanishing residual everywhere should only happen for constant f."""
        return self.gradient_vanishes or self.max_abs_residual > 1e-8


def max_principle_probe(f: HoloPoly, samples: int = 200) -> ProbeResult:
    pts = siegel_grid(f.n, samples, start=104729)
    re_fn = np.array([f.gradient(w)[-1].real for w in pts])
    residuals = np.array([constant_norm_residual(f, w) for w in pts])
    grads = np.array([np.max(np.abs(f.gradient(w))) for w in pts])
    return ProbeResult(
        min_re_fn=float(np.min(re_fn)),
        max_re_fn=float(np.max(re_fn)),
        max_abs_residual=float(np.max(np.abs(residuals))),
        gradient_vanishes=bool(np.max(grads) <= 1e-12),
    )
