"""
Polynomial holomorphic vector fields of degree <= 2 and the Lie algebra
aut(H^n) they span.

A field V = sum_i V^i d/dw_i is stored as

    V^i(w) = const[i] + sum_j lin[i, j] w_j + sum_{j,k} quad[i, j, k] w_j w_k

with ``quad`` symmetric in its last two indices.  The basis of aut(H^n)
consists of n^2 + 2n fields tagged by ``BasisTag``; grades under ad_D are
-1, -1/2, 0, 1/2, 1.
"""

import functools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, ClassVar, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from geometry.errors import DegreeOverflow, NotGraded, NotInAlgebra, NotPolynomial
from utils.numerics import siegel_grid

logger = logging.getLogger(__name__)

CUBIC_TOL = 1e-14
GRADE_TOL = 1e-12
ALGEBRA_TOL = 1e-8
IMAG_TOL = 1e-10
FIT_TOL = 1e-10


def _symmetrize(quad: np.ndarray) -> np.ndarray:
    return 0.5 * (quad + quad.swapaxes(1, 2))


@dataclass(frozen=True)
class PolyVF:
    """Holomorphic polynomial vector field of degree <= 2 on C^n."""

    const: np.ndarray
    lin: np.ndarray
    quad: np.ndarray

    def __post_init__(self):
        const = np.array(self.const, dtype=complex)
        n = const.size
        lin = np.array(self.lin, dtype=complex).reshape(n, n)
        quad = _symmetrize(np.array(self.quad, dtype=complex).reshape(n, n, n))
        for arr in (const, lin, quad):
            arr.setflags(write=False)
        object.__setattr__(self, "const", const)
        object.__setattr__(self, "lin", lin)
        object.__setattr__(self, "quad", quad)

    @classmethod
    def zero(cls, n: int) -> "PolyVF":
        return cls(np.zeros(n), np.zeros((n, n)), np.zeros((n, n, n)))

    @property
    def n(self) -> int:
        return self.const.size

    def evaluate(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return self.const + self.lin @ w + np.einsum("ijk,j,k->i", self.quad, w, w)

    def evaluate_many(self, points: np.ndarray) -> np.ndarray:
        pts = np.asarray(points, dtype=complex)
        return (self.const[None, :] + pts @ self.lin.T
                + np.einsum("ijk,pj,pk->pi", self.quad, pts, pts))

    def jacobian(self, w: np.ndarray) -> np.ndarray:
        """J[i, j] = d V^i / d w_j"""
        w = np.asarray(w, dtype=complex)
        return self.lin + 2 * np.einsum("ijk,k->ij", self.quad, w)

    def degree(self, tol: float = 0.0) -> int:
        if np.max(np.abs(self.quad), initial=0.0) > tol:
            return 2
        if np.max(np.abs(self.lin), initial=0.0) > tol:
            return 1
        return 0

    def coefficients(self) -> np.ndarray:
        """Flat complex coefficient vector (const, lin, quad)."""
        return np.concatenate([self.const, self.lin.ravel(), self.quad.ravel()])

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.coefficients())))

    def is_close(self, other: "PolyVF", tol: float = 1e-10) -> bool:
        return float(np.max(np.abs(self.coefficients() - other.coefficients()))) <= tol

    def __add__(self, other: "PolyVF") -> "PolyVF":
        return PolyVF(self.const + other.const, self.lin + other.lin, self.quad + other.quad)

    def __sub__(self, other: "PolyVF") -> "PolyVF":
        return PolyVF(self.const - other.const, self.lin - other.lin, self.quad - other.quad)

    def __neg__(self) -> "PolyVF":
        return PolyVF(-self.const, -self.lin, -self.quad)

    def __mul__(self, scalar: complex) -> "PolyVF":
        return PolyVF(scalar * self.const, scalar * self.lin, scalar * self.quad)

    __rmul__ = __mul__

    def to_records(self, tol: float = 0.0) -> List[Dict[str, Any]]:
        """Monomial listing: component, exponent tuple, coefficient."""
        records = []
        n = self.n
        for i in range(n):
            terms = [((0,) * n, self.const[i])]
            for j in range(n):
                terms.append((tuple(int(k == j) for k in range(n)), self.lin[i, j]))
            for j in range(n):
                for k in range(j, n):
                    coeff = self.quad[i, j, k] * (1 if j == k else 2)
                    exps = [0] * n
                    exps[j] += 1
                    exps[k] += 1
                    terms.append((tuple(exps), coeff))
            for exps, coeff in terms:
                if abs(coeff) > tol:
                    records.append({"component": i + 1, "exponents": list(exps),
                                    "re": float(coeff.real), "im": float(coeff.imag)})
        return records


@dataclass(frozen=True)
class BasisTag:
    """
    Name of a basis field of aut(H^n).

    ``kind`` is one of T, T2, T3, D, U, V, W, Tt, Tt2, Tt3 (the trailing t
    marks the grade +1/2 and +1 fields); indices are 1-based and refer to the
    w' coordinates.
    """

    kind: str
    i: Optional[int] = None
    j: Optional[int] = None

    GRADES: ClassVar[Dict[str, Fraction]] = {
        "T": Fraction(-1), "T2": Fraction(-1, 2), "T3": Fraction(-1, 2),
        "D": Fraction(0), "U": Fraction(0), "V": Fraction(0), "W": Fraction(0),
        "Tt2": Fraction(1, 2), "Tt3": Fraction(1, 2), "Tt": Fraction(1),
    }

    @property
    def grade(self) -> Fraction:
        return self.GRADES[self.kind]

    @property
    def is_tilde(self) -> bool:
        return self.kind.startswith("Tt")

    def __str__(self) -> str:
        if self.i is None:
            return self.kind
        if self.j is None:
            return f"{self.kind}({self.i})"
        return f"{self.kind}({self.i},{self.j})"

    @classmethod
    def parse(cls, text: str) -> "BasisTag":
        text = text.strip()
        if "(" not in text:
            tag = cls(text)
        else:
            kind, rest = text.split("(", 1)
            idx = [int(p) for p in rest.rstrip(")").split(",")]
            tag = cls(kind, *idx)
        if tag.kind not in cls.GRADES:
            raise ValueError(f"unknown basis tag: {text}")
        return tag


class _Builder:
    """Accumulates monomials into (const, lin, quad)."""

    def __init__(self, n: int):
        self.n = n
        self.const = np.zeros(n, dtype=complex)
        self.lin = np.zeros((n, n), dtype=complex)
        self.quad = np.zeros((n, n, n), dtype=complex)

    def c(self, comp: int, coeff: complex) -> "_Builder":
        self.const[comp] += coeff
        return self

    def l(self, comp: int, var: int, coeff: complex) -> "_Builder":
        self.lin[comp, var] += coeff
        return self

    def q(self, comp: int, a: int, b: int, coeff: complex) -> "_Builder":
        if a == b:
            self.quad[comp, a, a] += coeff
        else:
            self.quad[comp, a, b] += coeff / 2
            self.quad[comp, b, a] += coeff / 2
        return self

    def euler_times(self, var: int, coeff: complex) -> "_Builder":
        """coeff * w_var * E with E = sum_k w_k d/dw_k"""
        for k in range(self.n):
            self.q(k, var, k, coeff)
        return self

    def build(self) -> PolyVF:
        return PolyVF(self.const, self.lin, self.quad)


def basis_field(tag: BasisTag, n: int) -> PolyVF:
    """Coefficient form of one basis field; indices of the tag are 1-based."""
    b = _Builder(n)
    last = n - 1
    kind = tag.kind
    i = tag.i - 1 if tag.i is not None else None
    j = tag.j - 1 if tag.j is not None else None
    for idx in (i, j):
        if idx is not None and not 0 <= idx < n - 1:
            raise ValueError(f"index out of range for n={n}: {tag}")
    if kind == "T":
        b.c(last, 2j)
    elif kind == "T2":
        b.c(i, 1).l(last, i, 2)
    elif kind == "T3":
        b.c(i, 1j).l(last, i, -2j)
    elif kind == "D":
        for k in range(n - 1):
            b.l(k, k, 1)
        b.l(last, last, 2)
    elif kind == "U":
        b.l(i, j, 1).l(j, i, -1)
    elif kind == "V":
        b.l(i, j, 1j).l(j, i, 1j)
    elif kind == "W":
        b.l(i, i, 1j)
    elif kind == "Tt":
        b.euler_times(last, -2j)
    elif kind == "Tt2":
        b.euler_times(i, 2).l(i, last, -1)
    elif kind == "Tt3":
        b.euler_times(i, -2j).l(i, last, -1j)
    else:
        raise ValueError(f"unknown basis tag: {tag}")
    return b.build()


def basis_tags(n: int) -> List[BasisTag]:
    """Tags in canonical order: T, T2, T3, D, U, V, W, Tt2, Tt3, Tt."""
    m = n - 1
    tags = [BasisTag("T")]
    tags += [BasisTag("T2", k) for k in range(1, m + 1)]
    tags += [BasisTag("T3", k) for k in range(1, m + 1)]
    tags.append(BasisTag("D"))
    pairs = [(a, c) for a in range(1, m + 1) for c in range(a + 1, m + 1)]
    tags += [BasisTag("U", a, c) for a, c in pairs]
    tags += [BasisTag("V", a, c) for a, c in pairs]
    tags += [BasisTag("W", k) for k in range(1, m + 1)]
    tags += [BasisTag("Tt2", k) for k in range(1, m + 1)]
    tags += [BasisTag("Tt3", k) for k in range(1, m + 1)]
    tags.append(BasisTag("Tt"))
    return tags


def basis(n: int) -> List[Tuple[BasisTag, PolyVF]]:
    if n < 1:
        raise ValueError("n must be >= 1")
    return [(tag, basis_field(tag, n)) for tag in basis_tags(n)]


def combine(coeffs: Dict[BasisTag, float], n: int) -> PolyVF:
    """sum_tag coeffs[tag] * field(tag)"""
    total = PolyVF.zero(n)
    for tag, value in coeffs.items():
        if value != 0:
            total = total + basis_field(tag, n) * value
    return total


def _apply(X: PolyVF, Y: PolyVF) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Coefficients of (X . grad) Y: const, lin, quad (unsymmetrized), cubic."""
    const = np.einsum("j,ij->i", X.const, Y.lin)
    lin = 2 * np.einsum("j,ijk->ik", X.const, Y.quad) + np.einsum("jk,ij->ik", X.lin, Y.lin)
    quad = 2 * np.einsum("jl,ijk->ilk", X.lin, Y.quad) + np.einsum("jlk,ij->ilk", X.quad, Y.lin)
    cubic = 2 * np.einsum("jlm,ijk->ilmk", X.quad, Y.quad)
    return const, lin, quad, cubic


def _symmetrize_cubic(cubic: np.ndarray) -> np.ndarray:
    perms = [(0, 1, 2, 3), (0, 1, 3, 2), (0, 2, 1, 3), (0, 2, 3, 1), (0, 3, 1, 2), (0, 3, 2, 1)]
    return sum(cubic.transpose(p) for p in perms) / 6


def bracket(X: PolyVF, Y: PolyVF, tol: float = CUBIC_TOL) -> PolyVF:
    """
    Lie bracket [X, Y]^i = X^j d_j Y^i - Y^j d_j X^i.

    Raises DegreeOverflow when the cubic part survives; the tolerance is
    scaled by the size of the quadratic coefficients involved.
    """
    if X.n != Y.n:
        raise ValueError("fields live in different dimensions")
    c1, l1, q1, k1 = _apply(X, Y)
    c2, l2, q2, k2 = _apply(Y, X)
    cubic = _symmetrize_cubic(k1 - k2)
    scale = max(1.0, float(np.max(np.abs(X.quad), initial=0.0) * np.max(np.abs(Y.quad), initial=0.0)))
    overflow = float(np.max(np.abs(cubic), initial=0.0))
    if overflow > tol * scale:
        raise DegreeOverflow(f"bracket has cubic terms of size {overflow:.3e}", overflow=overflow)
    return PolyVF(c1 - c2, l1 - l2, q1 - q2)


def grade(V: PolyVF, tol: float = GRADE_TOL) -> Fraction:
    """Eigenvalue of ad_D on V divided by 2."""
    size = V.max_abs()
    if size == 0:
        raise NotGraded("the zero field has no grade")
    D = basis_field(BasisTag("D"), V.n)
    image = bracket(D, V).coefficients()
    v = V.coefficients()
    lam = np.vdot(v, image) / np.vdot(v, v)
    defect = float(np.max(np.abs(image - lam * v)))
    if defect > tol * max(1.0, size) or abs(lam.imag) > tol:
        raise NotGraded(f"field is not an ad_D eigenvector (defect {defect:.3e})", defect=defect)
    rounded = round(lam.real)
    if abs(lam.real - rounded) > tol or not -2 <= rounded <= 2:
        raise NotGraded(f"ad_D eigenvalue {lam.real:.6f} is not a grading value")
    return Fraction(int(rounded), 2)


def _monomials(n: int) -> List[Tuple[int, ...]]:
    mons: List[Tuple[int, ...]] = [()]
    mons += [(j,) for j in range(n)]
    mons += [(j, k) for j in range(n) for k in range(j, n)]
    return mons


def _design(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=complex)
    cols = [np.ones(len(pts), dtype=complex)]
    n = pts.shape[1]
    cols += [pts[:, j] for j in range(n)]
    cols += [pts[:, j] * pts[:, k] for j in range(n) for k in range(j, n)]
    return np.stack(cols, axis=1)


def fit_polyvf(points: np.ndarray, values: np.ndarray,
               held_points: np.ndarray, held_values: np.ndarray,
               tol: float = FIT_TOL) -> Tuple[PolyVF, float]:
    """
    Least-squares fit of sampled field values by a degree <= 2 field.

    The fit is judged on the held-out points; the residual is relative to
    max(1, max |values|).  Raises NotPolynomial when it exceeds ``tol``.
    """
    points = np.asarray(points, dtype=complex)
    n = points.shape[1]
    coeffs, _, _, _ = scipy.linalg.lstsq(_design(points), np.asarray(values, dtype=complex))
    const = coeffs[0]
    lin = coeffs[1:1 + n].T
    quad = np.zeros((n, n, n), dtype=complex)
    for row, (j, k) in enumerate(_monomials(n)[1 + n:], start=1 + n):
        if j == k:
            quad[:, j, j] = coeffs[row]
        else:
            quad[:, j, k] = coeffs[row] / 2
            quad[:, k, j] = coeffs[row] / 2
    field = PolyVF(const, lin, quad)
    predicted = field.evaluate_many(held_points)
    scale = max(1.0, float(np.max(np.abs(held_values))))
    residual = float(np.max(np.abs(predicted - held_values))) / scale
    if residual > tol:
        raise NotPolynomial(f"sampled field is not polynomial of degree <= 2 (residual {residual:.3e})",
                            residual=residual)
    return field, residual


def fitting_points(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """3(n^2+2n) fitting points and n^2+2n held-out points of H^n."""
    dim = n * n + 2 * n
    return siegel_grid(n, 3 * dim), siegel_grid(n, dim, start=3 * dim)


def pushforward(phi, V: PolyVF, tol: float = FIT_TOL) -> PolyVF:
    """
    Phi_* V (w) = dPhi(Phi^{-1} w) V(Phi^{-1} w), recovered by fitting.

    ``phi`` exposes ``apply``, ``jacobian`` and ``inverse``.
    """
    inverse = phi.inverse()

    def sample(points: np.ndarray) -> np.ndarray:
        out = np.empty_like(points)
        for p, w in enumerate(points):
            u = inverse.apply(w)
            out[p] = phi.jacobian(u) @ V.evaluate(u)
        return out

    fit_pts, held_pts = fitting_points(V.n)
    field, _ = fit_polyvf(fit_pts, sample(fit_pts), held_pts, sample(held_pts), tol)
    return field


@functools.lru_cache(maxsize=16)
def _basis_matrix(n: int) -> np.ndarray:
    return np.stack([field.coefficients() for _, field in basis(n)], axis=1)


@dataclass(frozen=True)
class Decomposition:
    """Real coordinates of a field in the aut(H^n) basis."""

    n: int
    coeffs: Dict[BasisTag, float]
    residual: float
    imag_max: float

    def get(self, kind: str, i: Optional[int] = None, j: Optional[int] = None) -> float:
        return self.coeffs.get(BasisTag(kind, i, j), 0.0)

    def nonzero(self, tol: float = 1e-12) -> Dict[BasisTag, float]:
        return {tag: c for tag, c in self.coeffs.items() if abs(c) > tol}

    def field(self) -> PolyVF:
        return combine(self.coeffs, self.n)

    def to_dict(self, tol: float = 1e-12) -> Dict[str, float]:
        return {str(tag): c for tag, c in self.nonzero(tol).items()}


def decompose(V: PolyVF, tol: float = ALGEBRA_TOL, imag_tol: float = IMAG_TOL) -> Decomposition:
    """
    Coordinates of V in the basis of aut(H^n).

    The basis is also a complex basis of its complexification, so the complex
    least-squares solution is unique; membership in the real algebra means a
    small residual and negligible imaginary parts.
    """
    M = _basis_matrix(V.n)
    v = V.coefficients()
    x, _, _, _ = scipy.linalg.lstsq(M, v)
    residual = float(np.linalg.norm(M @ x - v))
    imag_max = float(np.max(np.abs(x.imag), initial=0.0))
    scale = max(1.0, float(np.max(np.abs(x), initial=0.0)))
    if residual > tol * scale or imag_max > imag_tol * scale:
        raise NotInAlgebra(
            f"field is not in aut(H^{V.n}) (residual {residual:.3e}, imaginary part {imag_max:.3e})",
            residual=residual, imag_max=imag_max,
        )
    coeffs = {tag: float(x[k].real) for k, tag in enumerate(basis_tags(V.n))}
    return Decomposition(n=V.n, coeffs=coeffs, residual=residual, imag_max=imag_max)


def re_apply(V: PolyVF, potential, w: np.ndarray) -> float:
    """
    (Re V)(log psi) at w with Re V = (V + conj V)/2.

    For holomorphic V this is Re(sum_k V^k d_k log psi).
    ``potential`` exposes ``grad_holo(w)``.
    """
    return float(np.real(V.evaluate(w) @ potential.grad_holo(w)))


def ad_matrix(X: PolyVF) -> np.ndarray:
    """Matrix of ad_X in the aut(H^n) basis (columns are images of basis fields)."""
    cols = []
    for _, field in basis(X.n):
        dec = decompose(bracket(X, field))
        cols.append([dec.coeffs[tag] for tag in basis_tags(X.n)])
    return np.array(cols).T
