"""
Bergman metric of H^n and B^n.

Convention: ``G[i, j] = g_{i jbar}`` so that a (1,0)-vector X has
|X|^2 = X^T G conj(X).  The inverse returned by the ``inverse_metric_*``
helpers is ``H[k, j] = g^{k jbar}``, the transpose of ``inv(G)``; with it the
norm of a (1,0)-form a is Re(a^T H conj(a)).
"""

import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.linalg

from geometry.domain import (
    Model,
    PointLike,
    as_coords,
    ball_defining,
    require_ball,
    require_siegel,
    rho0,
)
from geometry.errors import SingularJacobian
from utils.numerics import DEFAULT_STEP, complex_hessian

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HermitianForm:
    """A Hermitian n x n matrix attached to a base point."""

    entries: np.ndarray
    base_point: np.ndarray
    kind: str = "metric"

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def hermitian_defect(self) -> float:
        return float(np.max(np.abs(self.entries - self.entries.conj().T)))

    def is_positive_definite(self) -> bool:
        try:
            scipy.linalg.cholesky(self.entries, lower=True)
        except scipy.linalg.LinAlgError:
            return False
        return True

    def det(self) -> float:
        """Determinant via LU with partial pivoting; real for Hermitian input."""
        return float(np.real(scipy.linalg.det(self.entries)))

    def norm_sq(self, vector: np.ndarray) -> float:
        v = np.asarray(vector, dtype=complex)
        return float(np.real(v @ self.entries @ v.conj()))


def _siegel_gradient(w: np.ndarray) -> np.ndarray:
    """d rho0 / d w_k"""
    grad = np.empty_like(w)
    grad[:-1] = -w[:-1].conj()
    grad[-1] = 0.5
    return grad


def metric_siegel(w: PointLike) -> np.ndarray:
    """g_{i jbar} = (n+1) [delta_ij 1_{i<n} / rho + d_i rho dbar_j rho / rho^2]"""
    w = require_siegel(w)
    n = w.size
    rho = rho0(w)
    d = _siegel_gradient(w)
    flat = np.eye(n, dtype=complex)
    flat[-1, -1] = 0
    return (n + 1) * (flat / rho + np.outer(d, d.conj()) / rho ** 2)


def inverse_metric_siegel(w: PointLike) -> np.ndarray:
    """Closed form (rho/(n+1)) [[I, 2w'], [2 conj(w')^T, 4 Re w_n]]."""
    w = require_siegel(w)
    n = w.size
    rho = rho0(w)
    H = np.zeros((n, n), dtype=complex)
    H[:-1, :-1] = np.eye(n - 1)
    H[:-1, -1] = 2 * w[:-1]
    H[-1, :-1] = 2 * w[:-1].conj()
    H[-1, -1] = 4 * w[-1].real
    return rho / (n + 1) * H


def metric_ball(z: PointLike) -> np.ndarray:
    """g_{i jbar} = (n+1) [delta_ij / s + conj(z_i) z_j / s^2], s = 1 - |z|^2"""
    z = require_ball(z)
    n = z.size
    s = ball_defining(z)
    return (n + 1) * (np.eye(n, dtype=complex) / s + np.outer(z.conj(), z) / s ** 2)


def inverse_metric_ball(z: PointLike) -> np.ndarray:
    """(s/(n+1)) (I - z conj(z)^T)"""
    z = require_ball(z)
    n = z.size
    s = ball_defining(z)
    return s / (n + 1) * (np.eye(n, dtype=complex) - np.outer(z, z.conj()))


def metric(w: PointLike, model: Model = Model.SIEGEL) -> HermitianForm:
    w = as_coords(w)
    entries = metric_ball(w) if model == Model.BALL else metric_siegel(w)
    return HermitianForm(entries=entries, base_point=w, kind="metric")


def inverse_metric(w: PointLike, model: Model = Model.SIEGEL) -> HermitianForm:
    w = as_coords(w)
    entries = inverse_metric_ball(w) if model == Model.BALL else inverse_metric_siegel(w)
    return HermitianForm(entries=entries, base_point=w, kind="inverse")


def inverse_residual(w: PointLike, model: Model = Model.SIEGEL) -> float:
    """max |H^T G - I|, i.e. how far the closed-form inverse is from inv(G)."""
    G = metric(w, model).entries
    H = inverse_metric(w, model).entries
    return float(np.max(np.abs(H.T @ G - np.eye(G.shape[0]))))


def norm_sq_form(a: np.ndarray, w: PointLike, model: Model = Model.SIEGEL) -> float:
    """Squared norm of the (1,0)-form sum a_k dw_k."""
    a = np.asarray(a, dtype=complex)
    H = inverse_metric(w, model).entries
    return float(np.real(a @ H @ a.conj()))


def log_det_metric(w: PointLike, model: Model = Model.SIEGEL) -> float:
    return float(np.log(metric(w, model).det()))


def einstein_residual(w: PointLike, model: Model = Model.SIEGEL, h: float = DEFAULT_STEP) -> float:
    """
    max |ddbar log det g - g| using a finite-difference complex Hessian.

    With G = (n+1) ddbar(-log rho), log det G = -(n+1) log rho + const,
    so the Ricci form equals minus the metric and the difference vanishes.
    """
    w = as_coords(w)
    G = metric(w, model).entries
    hess = complex_hessian(lambda p: log_det_metric(p, model), w, h)
    return float(np.max(np.abs(hess - G)))


def potential_hessian_residual(w: PointLike, model: Model = Model.SIEGEL, h: float = DEFAULT_STEP) -> float:
    """max |ddbar(-(n+1) log rho) - g| where rho is the model's defining function."""
    w = as_coords(w)
    n = w.size
    defining: Callable[[np.ndarray], float] = ball_defining if model == Model.BALL else rho0
    G = metric(w, model).entries
    hess = complex_hessian(lambda p: -(n + 1) * np.log(defining(p)), w, h)
    return float(np.max(np.abs(hess - G)))


def pullback_metric(jacobian: np.ndarray, target_metric: np.ndarray) -> np.ndarray:
    """J^T G(Phi(w)) conj(J)"""
    J = np.asarray(jacobian, dtype=complex)
    return J.T @ target_metric @ J.conj()


def isometry_det_identity(G_map, z: PointLike, target: Model = Model.SIEGEL) -> float:
    """
    Relative residual of det g_target(G(z)) |det dG(z)|^2 = det g_ball(z).

    ``G_map`` exposes ``apply(z)`` and ``jacobian(z)``.  Holds exactly for
    any biholomorphism of B^n onto the target model.
    """
    z = require_ball(z)
    jac = np.asarray(G_map.jacobian(z), dtype=complex)
    det_jac = scipy.linalg.det(jac)
    if abs(det_jac) < 1e-300:
        raise SingularJacobian("map has vanishing Jacobian determinant", point=z.tolist())
    lhs = metric(G_map.apply(z), target).det() * abs(det_jac) ** 2
    rhs = metric(z, Model.BALL).det()
    return float(abs(lhs - rhs) / abs(rhs))
