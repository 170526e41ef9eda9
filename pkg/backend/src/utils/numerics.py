"""
Numerical helpers shared by the geometry modules.

Finite differences (real and Wirtinger), deterministic sample grids and the
seeded samplers used by the verification suites.
"""

import zlib
from typing import Callable, Tuple

import numpy as np

# Irrational strides for the deterministic grids
_STRIDES = np.sqrt(np.array([2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0,
                             29.0, 31.0, 37.0, 41.0, 43.0, 47.0, 53.0, 59.0, 61.0]))

DEFAULT_STEP = 1e-4


def central_hessian(f: Callable[[np.ndarray], float], x0: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """
    Second order central difference Hessian of a real scalar function.

    Diagonal entries use the 3-point stencil, off-diagonal entries the
    4-point cross stencil; the result is symmetric by construction.
    """
    x0 = np.asarray(x0, dtype=float)
    dim = len(x0)
    f0 = f(x0)
    hess = np.zeros((dim, dim))
    E = h * np.eye(dim)
    for ii in range(dim):
        for jj in range(ii, dim):
            if ii == jj:
                hess[ii, ii] = (f(x0 + E[ii]) - 2 * f0 + f(x0 - E[ii])) / (h * h)
            else:
                pij = f(x0 + E[ii] + E[jj])
                pij -= f(x0 + E[ii] - E[jj])
                pij -= f(x0 - E[ii] + E[jj])
                pij += f(x0 - E[ii] - E[jj])
                hess[ii, jj] = pij / (4 * h * h)
                hess[jj, ii] = hess[ii, jj]
    return hess


def to_real(w: np.ndarray) -> np.ndarray:
    """(w_1..w_n) -> (x_1..x_n, y_1..y_n)"""
    w = np.asarray(w, dtype=complex)
    return np.concatenate([w.real, w.imag])


def to_complex(x: np.ndarray) -> np.ndarray:
    n = len(x) // 2
    return x[:n] + 1j * x[n:]


def complex_hessian(f: Callable[[np.ndarray], float], w: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """
    Matrix of d^2 f / dw_i dconj(w_j) for a real function of complex variables.

    Built from the real Hessian:
    H_ij = 1/4 [(f_xx + f_yy)_ij + i (f_{x_i y_j} - f_{y_i x_j})].
    """
    w = np.asarray(w, dtype=complex)
    n = len(w)
    real_hess = central_hessian(lambda x: f(to_complex(x)), to_real(w), h)
    fxx = real_hess[:n, :n]
    fyy = real_hess[n:, n:]
    fxy = real_hess[:n, n:]
    fyx = real_hess[n:, :n]
    return 0.25 * ((fxx + fyy) + 1j * (fxy - fyx))


def wirtinger(f: Callable[[np.ndarray], np.ndarray], w: np.ndarray, h: float = DEFAULT_STEP) -> Tuple[np.ndarray, np.ndarray]:
    """
    Wirtinger derivatives of a (vector valued) function of complex variables.

    Returns ``(d, dbar)`` with ``d[k] = df/dw_k`` and ``dbar[k] = df/dconj(w_k)``;
    each entry has the shape of ``f(w)``.
    """
    w = np.asarray(w, dtype=complex)
    n = len(w)
    d = []
    dbar = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = h
        fx = (np.asarray(f(w + e)) - np.asarray(f(w - e))) / (2 * h)
        fy = (np.asarray(f(w + 1j * e)) - np.asarray(f(w - 1j * e))) / (2 * h)
        d.append(0.5 * (fx - 1j * fy))
        dbar.append(0.5 * (fx + 1j * fy))
    return np.array(d), np.array(dbar)


def holomorphic_jacobian(F: Callable[[np.ndarray], np.ndarray], w: np.ndarray, h: float = DEFAULT_STEP) -> np.ndarray:
    """Jacobian dF_i/dw_j of a holomorphic map, by differencing along real directions."""
    w = np.asarray(w, dtype=complex)
    n = len(w)
    cols = []
    for k in range(n):
        e = np.zeros(n, dtype=complex)
        e[k] = h
        cols.append((np.asarray(F(w + e)) - np.asarray(F(w - e))) / (2 * h))
    return np.array(cols).T


def _fractional(index: np.ndarray, column: int, offset: float) -> np.ndarray:
    return np.mod(offset + (index + 1) * _STRIDES[column % len(_STRIDES)], 1.0)


def siegel_grid(n: int, count: int, start: int = 0, offset: float = 0.0) -> np.ndarray:
    """
    Deterministic points of H^n with irrational offsets.

    |w'| < 0.9, Re w_n - |w'|^2 in [0.3, 1.5], Im w_n in [-1, 1].
    Two grids with different ``start`` never share points.
    """
    idx = np.arange(start, start + count, dtype=float)
    pts = np.zeros((count, n), dtype=complex)
    for k in range(n - 1):
        re = 2 * _fractional(idx, 2 * k, offset) - 1
        im = 2 * _fractional(idx, 2 * k + 1, offset) - 1
        pts[:, k] = 0.45 * (re + 1j * im)
    tail = pts[:, : n - 1]
    height = 0.3 + 1.2 * _fractional(idx, 2 * n - 2, offset)
    im_n = 2 * _fractional(idx, 2 * n - 1, offset) - 1
    pts[:, n - 1] = np.sum(np.abs(tail) ** 2, axis=1) + height + 1j * im_n
    return pts


def ball_grid(n: int, count: int, start: int = 0, offset: float = 0.0) -> np.ndarray:
    """Deterministic points of the unit ball with |z| <= 0.7."""
    idx = np.arange(start, start + count, dtype=float)
    pts = np.zeros((count, n), dtype=complex)
    for k in range(n):
        re = 2 * _fractional(idx, 2 * k, offset) - 1
        im = 2 * _fractional(idx, 2 * k + 1, offset) - 1
        pts[:, k] = re + 1j * im
    norms = np.linalg.norm(pts, axis=1)
    scale = 0.7 * _fractional(idx, 2 * n, offset) ** (1.0 / (2 * n))
    return pts * (scale / np.maximum(norms, 1e-12))[:, None]


def derive_rng(seed: int, suite: str, n: int) -> np.random.Generator:
    """Independent stream per (seed, suite, n) so suites never share state."""
    seq = np.random.SeedSequence([int(seed) & 0xFFFFFFFFFFFFFFFF, zlib.crc32(suite.encode("utf-8")), int(n)])
    return np.random.default_rng(seq)


def _uniform_in_ball(rng: np.random.Generator, dim_complex: int, size: int, radius: float) -> np.ndarray:
    if dim_complex == 0:
        return np.zeros((size, 0), dtype=complex)
    g = rng.standard_normal((size, 2 * dim_complex))
    g /= np.linalg.norm(g, axis=1)[:, None]
    r = radius * rng.uniform(0.0, 1.0, size) ** (1.0 / (2 * dim_complex))
    g *= r[:, None]
    return g[:, :dim_complex] + 1j * g[:, dim_complex:]


def sample_siegel(rng: np.random.Generator, n: int, size: int,
                  rho_min: float = 0.1, rho_max: float = 3.0, tail_radius: float = 1.0) -> np.ndarray:
    """
    Random points of H^n with rho0 in [rho_min, rho_max] and |w'| <= tail_radius.

    Im w_n is uniform on [-2, 2].
    """
    pts = np.zeros((size, n), dtype=complex)
    pts[:, : n - 1] = _uniform_in_ball(rng, n - 1, size, tail_radius)
    rho = rng.uniform(rho_min, rho_max, size)
    im_n = rng.uniform(-2.0, 2.0, size)
    pts[:, n - 1] = np.sum(np.abs(pts[:, : n - 1]) ** 2, axis=1) + rho + 1j * im_n
    return pts


def sample_ball(rng: np.random.Generator, n: int, size: int, radius: float = 0.95) -> np.ndarray:
    """Random points of the ball with |z| <= radius."""
    return _uniform_in_ball(rng, n, size, radius)
