"""
Domain geometry for the two models of complex hyperbolic space.

The unit ball B^n and the Siegel upper half-space
H^n = {w : Re w_n > |w'|^2}, together with the Cayley transform between them
and the inversion sigma of H^n.

Coordinates are 0-based numpy arrays; ``w[-1]`` is the distinguished
coordinate w_n and ``w[:-1]`` is w'.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from geometry.errors import OutsideDomain, PoleAtBoundary

POLE_TOL = 1e-14


class Model(str, Enum):
    BALL = "ball"
    SIEGEL = "siegel"


@dataclass(frozen=True)
class CPoint:
    """A point of C^n tagged with the model it is meant to live in."""

    coords: np.ndarray
    model: Model = Model.SIEGEL
    n: int = field(init=False)

    def __post_init__(self):
        coords = np.array(self.coords, dtype=complex).reshape(-1)
        if coords.size == 0:
            raise ValueError("CPoint needs at least one coordinate")
        coords.setflags(write=False)
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "n", coords.size)

    def inside(self) -> bool:
        if self.model == Model.BALL:
            return in_ball(self.coords)
        return in_siegel(self.coords)

    def to_dict(self) -> dict:
        return {
            "model": self.model.value,
            "coords": [{"re": float(c.real), "im": float(c.imag)} for c in self.coords],
        }


PointLike = Union[CPoint, np.ndarray, Sequence[complex]]


def as_coords(p: PointLike) -> np.ndarray:
    if isinstance(p, CPoint):
        return p.coords
    return np.asarray(p, dtype=complex).reshape(-1)


def rho0(w: PointLike) -> float:
    """Defining function of H^n: Re w_n - |w'|^2."""
    w = as_coords(w)
    return float(w[-1].real - np.sum(np.abs(w[:-1]) ** 2))


def ball_defining(z: PointLike) -> float:
    """1 - |z|^2"""
    z = as_coords(z)
    return float(1.0 - np.sum(np.abs(z) ** 2))


def in_siegel(w: PointLike) -> bool:
    return rho0(w) > 0


def in_ball(z: PointLike) -> bool:
    return ball_defining(z) > 0


def require_siegel(w: PointLike) -> np.ndarray:
    w = as_coords(w)
    rho = rho0(w)
    if not rho > 0:
        raise OutsideDomain(f"point is outside H^{w.size} (rho0 = {rho:.3e})", rho=rho)
    return w


def require_ball(z: PointLike) -> np.ndarray:
    z = as_coords(z)
    s = ball_defining(z)
    if not s > 0:
        raise OutsideDomain(f"point is outside B^{z.size} (1 - |z|^2 = {s:.3e})", defining=s)
    return z


def cayley(z: PointLike) -> np.ndarray:
    """
    Cayley transform B^n -> H^n:
    w' = z'/(1 - z_n), w_n = (1 + z_n)/(1 - z_n).

    Defined off the hyperplane z_n = 1; no domain check is made.
    """
    z = as_coords(z)
    denom = 1 - z[-1]
    if abs(denom) < POLE_TOL:
        raise PoleAtBoundary("cayley transform has a pole at z_n = 1")
    w = np.empty_like(z)
    w[:-1] = z[:-1] / denom
    w[-1] = (1 + z[-1]) / denom
    return w


def cayley_inv(w: PointLike) -> np.ndarray:
    """Inverse Cayley transform H^n -> B^n."""
    w = as_coords(w)
    denom = 1 + w[-1]
    if abs(denom) < POLE_TOL:
        raise PoleAtBoundary("inverse cayley transform has a pole at w_n = -1")
    z = np.empty_like(w)
    z[:-1] = 2 * w[:-1] / denom
    z[-1] = (w[-1] - 1) / denom
    return z


def sigma(w: PointLike) -> np.ndarray:
    """Inversion of H^n: (w', w_n) -> (-w'/w_n, 1/w_n). An involution."""
    w = as_coords(w)
    if abs(w[-1]) < POLE_TOL:
        raise PoleAtBoundary("sigma has a pole at w_n = 0")
    out = np.empty_like(w)
    out[:-1] = -w[:-1] / w[-1]
    out[-1] = 1 / w[-1]
    return out


def cayley_jacobian(z: PointLike) -> np.ndarray:
    """Holomorphic Jacobian J[i, j] = d cayley_i / d z_j."""
    z = as_coords(z)
    n = z.size
    denom = 1 - z[-1]
    if abs(denom) < POLE_TOL:
        raise PoleAtBoundary("cayley transform has a pole at z_n = 1")
    J = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        J[k, k] = 1 / denom
        J[k, n - 1] = z[k] / denom ** 2
    J[n - 1, n - 1] = 2 / denom ** 2
    return J


def cayley_inv_jacobian(w: PointLike) -> np.ndarray:
    w = as_coords(w)
    n = w.size
    denom = 1 + w[-1]
    if abs(denom) < POLE_TOL:
        raise PoleAtBoundary("inverse cayley transform has a pole at w_n = -1")
    J = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        J[k, k] = 2 / denom
        J[k, n - 1] = -2 * w[k] / denom ** 2
    J[n - 1, n - 1] = 2 / denom ** 2
    return J


def sigma_jacobian(w: PointLike) -> np.ndarray:
    w = as_coords(w)
    n = w.size
    wn = w[-1]
    if abs(wn) < POLE_TOL:
        raise PoleAtBoundary("sigma has a pole at w_n = 0")
    J = np.zeros((n, n), dtype=complex)
    for k in range(n - 1):
        J[k, k] = -1 / wn
        J[k, n - 1] = w[k] / wn ** 2
    J[n - 1, n - 1] = -1 / wn ** 2
    return J


def cayley_det_jacobian(z: PointLike) -> complex:
    """det d(cayley) = 2 (1 - z_n)^{-(n+1)}"""
    z = as_coords(z)
    return complex(2 * (1 - z[-1]) ** (-(z.size + 1)))
