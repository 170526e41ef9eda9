"""
Automorphisms of H^n and Moebius maps of projective space.

An ``Automorphism`` is an ordered tuple of generators applied left to right:
``Automorphism((a, b)).apply(w) == b.apply(a.apply(w))``.  Jacobians are the
exact chain-rule product of the generator Jacobians.
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from geometry.domain import (
    PointLike,
    as_coords,
    cayley,
    cayley_jacobian,
    sigma,
    sigma_jacobian,
)
from geometry.errors import Degenerate, PoleAtBoundary, SingularJacobian, UnsupportedTag
from geometry.vectorfield import BasisTag

logger = logging.getLogger(__name__)

UNITARY_TOL = 1e-12
POLE_TOL = 1e-14


def _complex_record(value: complex) -> Dict[str, float]:
    return {"re": float(np.real(value)), "im": float(np.imag(value))}


def _matrix_record(matrix: np.ndarray) -> List[List[Dict[str, float]]]:
    return [[_complex_record(v) for v in row] for row in np.asarray(matrix)]


class Generator(ABC):
    """One closed-form holomorphic map of C^n."""

    preserves_domain = True

    @abstractmethod
    def apply(self, w: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def jacobian(self, w: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def inverse(self) -> "Generator":
        ...

    @abstractmethod
    def to_record(self) -> Dict[str, Any]:
        ...


@dataclass(frozen=True)
class Ts(Generator):
    """w_n -> w_n + 2is"""

    s: float

    def apply(self, w):
        out = np.array(w, dtype=complex)
        out[-1] += 2j * self.s
        return out

    def jacobian(self, w):
        return np.eye(len(w), dtype=complex)

    def inverse(self):
        return Ts(-self.s)

    def to_record(self):
        return {"type": "Ts", "s": self.s}


@dataclass(frozen=True)
class T2k(Generator):
    """w_k -> w_k + s, w_n -> w_n + 2 s w_k + s^2 (k is 1-based)"""

    k: int
    s: float

    def apply(self, w):
        out = np.array(w, dtype=complex)
        wk = out[self.k - 1]
        out[self.k - 1] = wk + self.s
        out[-1] += 2 * self.s * wk + self.s ** 2
        return out

    def jacobian(self, w):
        J = np.eye(len(w), dtype=complex)
        J[-1, self.k - 1] = 2 * self.s
        return J

    def inverse(self):
        return T2k(self.k, -self.s)

    def to_record(self):
        return {"type": "T2k", "k": self.k, "s": self.s}


@dataclass(frozen=True)
class T3k(Generator):
    """w_k -> w_k + is, w_n -> w_n - 2is w_k + s^2"""

    k: int
    s: float

    def apply(self, w):
        out = np.array(w, dtype=complex)
        wk = out[self.k - 1]
        out[self.k - 1] = wk + 1j * self.s
        out[-1] += -2j * self.s * wk + self.s ** 2
        return out

    def jacobian(self, w):
        J = np.eye(len(w), dtype=complex)
        J[-1, self.k - 1] = -2j * self.s
        return J

    def inverse(self):
        return T3k(self.k, -self.s)

    def to_record(self):
        return {"type": "T3k", "k": self.k, "s": self.s}


@dataclass(frozen=True)
class Dil(Generator):
    """(w', w_n) -> (e^s w', e^{2s} w_n)"""

    s: float

    def _scales(self, n: int) -> np.ndarray:
        scales = np.full(n, np.exp(self.s), dtype=complex)
        scales[-1] = np.exp(2 * self.s)
        return scales

    def apply(self, w):
        return self._scales(len(w)) * np.asarray(w, dtype=complex)

    def jacobian(self, w):
        return np.diag(self._scales(len(w)))

    def inverse(self):
        return Dil(-self.s)

    def to_record(self):
        return {"type": "Dil", "s": self.s}


@dataclass(frozen=True)
class Perm1k(Generator):
    """Swap w_1 and w_k."""

    k: int

    def apply(self, w):
        out = np.array(w, dtype=complex)
        out[[0, self.k - 1]] = out[[self.k - 1, 0]]
        return out

    def jacobian(self, w):
        J = np.eye(len(w), dtype=complex)
        J[[0, self.k - 1]] = J[[self.k - 1, 0]]
        return J

    def inverse(self):
        return self

    def to_record(self):
        return {"type": "Perm1k", "k": self.k}


@dataclass(frozen=True)
class Unitary(Generator):
    """w' -> U w' for a unitary (n-1) x (n-1) block."""

    U: np.ndarray = field(compare=False)

    def __post_init__(self):
        U = np.array(self.U, dtype=complex)
        if U.ndim != 2 or U.shape[0] != U.shape[1]:
            raise ValueError("unitary block must be square")
        defect = float(np.max(np.abs(U @ U.conj().T - np.eye(U.shape[0])), initial=0.0))
        if defect > UNITARY_TOL:
            raise ValueError(f"matrix is not unitary (|UU* - I| = {defect:.3e})")
        U.setflags(write=False)
        object.__setattr__(self, "U", U)

    def _full(self, n: int) -> np.ndarray:
        if self.U.shape[0] != n - 1:
            raise ValueError(f"unitary block of size {self.U.shape[0]} used in dimension {n}")
        J = np.eye(n, dtype=complex)
        J[:-1, :-1] = self.U
        return J

    def apply(self, w):
        w = np.asarray(w, dtype=complex)
        return self._full(len(w)) @ w

    def jacobian(self, w):
        return self._full(len(w))

    def inverse(self):
        return Unitary(self.U.conj().T)

    def to_record(self):
        return {"type": "Unitary", "U": _matrix_record(self.U)}


@dataclass(frozen=True)
class Sigma(Generator):
    """(w', w_n) -> (-w'/w_n, 1/w_n)"""

    def apply(self, w):
        return sigma(w)

    def jacobian(self, w):
        return sigma_jacobian(w)

    def inverse(self):
        return self

    def to_record(self):
        return {"type": "Sigma"}


@dataclass(frozen=True)
class ComplexAffine(Generator):
    """w -> A w + b; not assumed to preserve H^n."""

    A: np.ndarray = field(compare=False)
    b: np.ndarray = field(compare=False)
    preserves_domain = False

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        b = np.array(self.b, dtype=complex).reshape(-1)
        if A.shape != (b.size, b.size):
            raise ValueError("affine map needs an n x n matrix and an n-vector")
        if abs(scipy.linalg.det(A)) < 1e-14:
            raise SingularJacobian("affine map is not invertible")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "b", b)

    def apply(self, w):
        return self.A @ np.asarray(w, dtype=complex) + self.b

    def jacobian(self, w):
        return self.A.copy()

    def inverse(self):
        A_inv = scipy.linalg.inv(self.A)
        return ComplexAffine(A_inv, -A_inv @ self.b)

    def to_record(self):
        return {"type": "ComplexAffine", "A": _matrix_record(self.A),
                "b": [_complex_record(v) for v in self.b]}


@dataclass(frozen=True)
class Automorphism:
    """Left-to-right composition of generators."""

    generators: Tuple[Generator, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))

    @classmethod
    def identity(cls) -> "Automorphism":
        return cls(())

    def __len__(self) -> int:
        return len(self.generators)

    @property
    def preserves_domain(self) -> bool:
        return all(g.preserves_domain for g in self.generators)

    def apply(self, w: PointLike) -> np.ndarray:
        out = np.array(as_coords(w), dtype=complex)
        for g in self.generators:
            out = g.apply(out)
        return out

    def jacobian(self, w: PointLike) -> np.ndarray:
        point = np.array(as_coords(w), dtype=complex)
        J = np.eye(point.size, dtype=complex)
        for g in self.generators:
            J = g.jacobian(point) @ J
            point = g.apply(point)
        return J

    def det_jacobian(self, w: PointLike) -> complex:
        return complex(scipy.linalg.det(self.jacobian(w)))

    def inverse(self) -> "Automorphism":
        return Automorphism(tuple(g.inverse() for g in reversed(self.generators)))

    def then(self, other: "Automorphism") -> "Automorphism":
        """Apply self first, then other."""
        return Automorphism(self.generators + other.generators)

    def to_records(self) -> List[Dict[str, Any]]:
        return [g.to_record() for g in self.generators]


def _parse_complex(value: Any) -> complex:
    if isinstance(value, dict):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def parse_complex_matrix(rows: Sequence[Sequence[Any]]) -> np.ndarray:
    return np.array([[_parse_complex(v) for v in row] for row in rows], dtype=complex)


def generator_from_record(record: Dict[str, Any]) -> Generator:
    kind = record.get("type")
    if kind == "Ts":
        return Ts(float(record["s"]))
    if kind == "T2k":
        return T2k(int(record["k"]), float(record["s"]))
    if kind == "T3k":
        return T3k(int(record["k"]), float(record["s"]))
    if kind == "Dil":
        return Dil(float(record["s"]))
    if kind == "Perm1k":
        return Perm1k(int(record["k"]))
    if kind == "Unitary":
        return Unitary(parse_complex_matrix(record["U"]))
    if kind == "Sigma":
        return Sigma()
    if kind == "ComplexAffine":
        return ComplexAffine(parse_complex_matrix(record["A"]),
                             np.array([_parse_complex(v) for v in record["b"]]))
    raise ValueError(f"unknown generator type: {kind!r}")


def automorphism_from_records(records: Sequence[Dict[str, Any]]) -> Automorphism:
    return Automorphism(tuple(generator_from_record(r) for r in records))


def unitary_generator(tag: BasisTag, n: int) -> np.ndarray:
    """Skew-Hermitian matrix u of a U/V/W field on w' (the field is u w')."""
    m = n - 1
    u = np.zeros((m, m), dtype=complex)
    i = tag.i - 1
    if tag.kind == "U":
        j = tag.j - 1
        u[i, j] += 1
        u[j, i] -= 1
    elif tag.kind == "V":
        j = tag.j - 1
        u[i, j] += 1j
        u[j, i] += 1j
    elif tag.kind == "W":
        u[i, i] += 1j
    else:
        raise UnsupportedTag(f"{tag} is not a unitary field")
    return u


def flow(tag: BasisTag, s: float, n: int) -> Automorphism:
    """Time-s flow of an affine basis field of aut(H^n)."""
    if tag.kind == "T":
        return Automorphism((Ts(s),))
    if tag.kind == "T2":
        return Automorphism((T2k(tag.i, s),))
    if tag.kind == "T3":
        return Automorphism((T3k(tag.i, s),))
    if tag.kind == "D":
        return Automorphism((Dil(s),))
    if tag.kind in ("U", "V", "W"):
        return Automorphism((Unitary(scipy.linalg.expm(s * unitary_generator(tag, n))),))
    raise UnsupportedTag(f"no closed-form flow for {tag}")


@dataclass(frozen=True)
class MobiusMap:
    """Projective action of an (n+1) x (n+1) matrix on the chart [z, 1]."""

    A: np.ndarray = field(compare=False)

    def __post_init__(self):
        A = np.array(self.A, dtype=complex)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 2:
            raise Degenerate("Moebius matrix must be square of size n+1 >= 2")
        if abs(scipy.linalg.det(A)) < 1e-14 * max(1.0, float(np.max(np.abs(A)))) ** A.shape[0]:
            raise Degenerate("Moebius matrix is singular")
        A.setflags(write=False)
        object.__setattr__(self, "A", A)

    @property
    def n(self) -> int:
        return self.A.shape[0] - 1

    @classmethod
    def from_entries(cls, entries: Sequence[Any]) -> "MobiusMap":
        values = [_parse_complex(v) for v in entries]
        size = int(round(np.sqrt(len(values))))
        if size * size != len(values):
            raise Degenerate(f"{len(values)} entries do not form a square matrix")
        return cls(np.array(values, dtype=complex).reshape(size, size))

    def normalized(self) -> "MobiusMap":
        """Scale so that A[n, n] = 1 when that entry is nonzero."""
        corner = self.A[-1, -1]
        if abs(corner) < POLE_TOL:
            return self
        return MobiusMap(self.A / corner)

    def _lift(self, z: np.ndarray) -> np.ndarray:
        v = self.A @ np.append(z, 1.0)
        if abs(v[-1]) < POLE_TOL:
            raise PoleAtBoundary("Moebius denominator vanishes")
        return v

    def apply(self, z: PointLike) -> np.ndarray:
        v = self._lift(as_coords(z))
        return v[:-1] / v[-1]

    def jacobian(self, z: PointLike) -> np.ndarray:
        z = as_coords(z)
        n = z.size
        v = self._lift(z)
        A = self.A
        return (A[:n, :n] * v[-1] - np.outer(v[:n], A[n, :n])) / v[-1] ** 2

    def to_records(self) -> List[Dict[str, float]]:
        return [_complex_record(v) for v in self.A.ravel()]


def cayley_matrix(n: int) -> np.ndarray:
    A = np.zeros((n + 1, n + 1), dtype=complex)
    for k in range(n - 1):
        A[k, k] = 1
    A[n - 1, n - 1] = 1
    A[n - 1, n] = 1
    A[n, n - 1] = -1
    A[n, n] = 1
    return A


def rotation_matrix(n: int, theta: float) -> np.ndarray:
    """Projective matrix of z_n -> e^{i theta} z_n."""
    R = np.eye(n + 1, dtype=complex)
    R[n - 1, n - 1] = np.exp(1j * theta)
    return R


def rotated_cayley(n: int, theta: float) -> MobiusMap:
    """Cayley transform precomposed with the last-coordinate rotation."""
    return MobiusMap(cayley_matrix(n) @ rotation_matrix(n, theta))


class CayleyMap:
    """The Cayley transform B^n -> H^n as a map object."""

    def apply(self, z: PointLike) -> np.ndarray:
        return cayley(z)

    def jacobian(self, z: PointLike) -> np.ndarray:
        return cayley_jacobian(z)


@dataclass(frozen=True)
class ComposedMap:
    """``first`` then ``second``; both expose apply and jacobian."""

    first: Any
    second: Any

    def apply(self, z: PointLike) -> np.ndarray:
        return self.second.apply(self.first.apply(z))

    def jacobian(self, z: PointLike) -> np.ndarray:
        return self.second.jacobian(self.first.apply(z)) @ self.first.jacobian(z)


@dataclass(frozen=True)
class ShearedCayley:
    """
    w_j = (z_j + g_j(z_n)) / (1 - z_n) for j < n, w_n = (1 + z_n)/(1 - z_n).

    ``g`` holds one coefficient array per w' coordinate, lowest degree first.
    The Jacobian is triangular so det = 2 (1 - z_n)^{-(n+1)} for every g.
    """

    g: Tuple[Tuple[complex, ...], ...]

    @classmethod
    def with_polynomial(cls, n: int, coeffs: Sequence[complex]) -> "ShearedCayley":
        return cls(tuple(tuple(complex(c) for c in coeffs) for _ in range(n - 1)))

    def apply(self, z: PointLike) -> np.ndarray:
        z = as_coords(z)
        denom = 1 - z[-1]
        if abs(denom) < POLE_TOL:
            raise PoleAtBoundary("sheared Cayley map has a pole at z_n = 1")
        w = np.empty_like(z)
        for j, coeffs in enumerate(self.g):
            w[j] = (z[j] + np.polynomial.polynomial.polyval(z[-1], coeffs)) / denom
        w[-1] = (1 + z[-1]) / denom
        return w

    def jacobian(self, z: PointLike) -> np.ndarray:
        z = as_coords(z)
        n = z.size
        zn = z[-1]
        denom = 1 - zn
        J = np.zeros((n, n), dtype=complex)
        for j, coeffs in enumerate(self.g):
            g_val = np.polynomial.polynomial.polyval(zn, coeffs)
            g_der = np.polynomial.polynomial.polyval(zn, np.polynomial.polynomial.polyder(coeffs)) if len(coeffs) > 1 else 0
            J[j, j] = 1 / denom
            J[j, -1] = g_der / denom + (z[j] + g_val) / denom ** 2
        J[-1, -1] = 2 / denom ** 2
        return J


@dataclass
class ConstraintCheck:
    name: str
    passed: bool
    residual: float


@dataclass
class MobiusReport:
    """Outcome of the Cayley constraint chain for a candidate map."""

    checks: List[ConstraintCheck]
    verdict: str
    rotation: Optional[float] = None
    first_failure: Optional[str] = None
    matrix: Optional[np.ndarray] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "verdict": self.verdict,
            "rotation": self.rotation,
            "first_failure": self.first_failure,
            "checks": [{"name": c.name, "passed": c.passed, "residual": c.residual} for c in self.checks],
        }


def _recover_matrix(G, n: int, points: np.ndarray) -> Tuple[np.ndarray, float]:
    """
    Find A with A_i . [z,1] - G_i(z) A_{n+1} . [z,1] = 0 for all samples.

    Returns the smallest right singular vector reshaped to (n+1) x (n+1)
    and the relative size of its singular value.
    """
    rows = []
    size = (n + 1) ** 2
    for z in points:
        lifted = np.append(z, 1.0)
        image = G.apply(z)
        for i in range(n):
            row = np.zeros(size, dtype=complex)
            row[i * (n + 1):(i + 1) * (n + 1)] = lifted
            row[n * (n + 1):] = -image[i] * lifted
            rows.append(row)
    M = np.array(rows)
    _, svals, vh = scipy.linalg.svd(M)
    residual = float(svals[-1] / svals[0])
    return vh[-1].conj().reshape(n + 1, n + 1), residual


def cayley_constraint_report(G, n: Optional[int] = None, samples: int = 50, tol: float = 1e-10) -> MobiusReport:
    """
    Run the constraint chain that forces a ball-to-Siegel Moebius map to be
    the Cayley transform up to a rotation of z_n.

    ``G`` is a ``MobiusMap`` or any map with ``apply``/``jacobian``.  Checks
    run in order and the verdict names the first one that fails.
    """
    if isinstance(G, MobiusMap):
        G = G.normalized()
        n = G.n
        if abs(G.A[-1, -1]) < 1e-12:
            raise Degenerate("cannot normalize: A[n+1, n+1] vanishes")
    if n is None:
        raise ValueError("dimension is required for a generic map")

    rng = np.random.default_rng(n)
    pts = rng.standard_normal((samples, n)) + 1j * rng.standard_normal((samples, n))
    pts *= (0.6 * rng.uniform(0, 1, samples) / np.linalg.norm(pts, axis=1))[:, None]
    origin = np.zeros(n, dtype=complex)
    checks: List[ConstraintCheck] = []

    def record(name: str, residual: float) -> bool:
        passed = bool(residual <= tol)
        checks.append(ConstraintCheck(name, passed, float(residual)))
        return passed

    def fail(name: str) -> MobiusReport:
        logger.info(f"Cayley constraint chain stopped at {name}")
        return MobiusReport(checks=checks, verdict="Failed", first_failure=name)

    target = np.zeros(n, dtype=complex)
    target[-1] = 1
    if not record("G(0) = e_n", float(np.max(np.abs(G.apply(origin) - target)))):
        return fail("G(0) = e_n")

    dG0 = G.jacobian(origin)
    theta = float(np.angle(dG0[-1, -1] / 2))
    rotation = MobiusMap(rotation_matrix(n, -theta))
    base = ComposedMap(rotation, G)
    expected = np.eye(n, dtype=complex)
    expected[-1, -1] = 2
    if not record("dG(0) = diag(1,...,1,2)", float(np.max(np.abs(base.jacobian(origin) - expected)))):
        return fail("dG(0) = diag(1,...,1,2)")

    det_defect = 0.0
    for z in pts:
        value = scipy.linalg.det(base.jacobian(z)) * (1 - z[-1]) ** (n + 1)
        det_defect = max(det_defect, abs(value - 2) / 2)
    if not record("det dG (1 - z_n)^(n+1) = 2", det_defect):
        return fail("det dG (1 - z_n)^(n+1) = 2")

    A, linear_residual = _recover_matrix(base, n, pts)
    if not record("Moebius linearity", linear_residual):
        return fail("Moebius linearity")
    if abs(A[-1, -1]) < 1e-12:
        raise Degenerate("recovered matrix has A[n+1, n+1] = 0")
    A = A / A[-1, -1]

    coefficient_checks = [
        ("a_{j,n+1} = 0 for j < n", np.max(np.abs(A[: n - 1, n]), initial=0.0)),
        ("a_{n,n+1} = 1", abs(A[n - 1, n] - 1)),
        ("a_{kj} = delta_kj", np.max(np.abs(A[: n - 1, : n - 1] - np.eye(n - 1)), initial=0.0)),
        ("a_{n+1,j} = 0 for j < n", np.max(np.abs(A[n, : n - 1]), initial=0.0)),
        ("a_{n+1,n+1} = -a_{n+1,n}", abs(A[n, n] + A[n, n - 1])),
    ]
    for name, residual in coefficient_checks:
        if not record(name, float(residual)):
            return fail(name)

    return MobiusReport(checks=checks, verdict="CayleyUpToRotation", rotation=theta, matrix=A)
