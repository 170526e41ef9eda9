"""
Normalization of constant-norm potentials on H^n.

Given a potential whose differential norm is constant, its W field lies in
aut(H^n).  Permutations collapse the translation part onto the first w'
slot, translations solve a linear system that removes the T^{2,k}, T^{3,k}
components, and a final check decides whether the normalized potential is
r * psi0.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
import scipy.linalg

from geometry.automorphism import Automorphism, Perm1k, T2k, T3k, Ts
from geometry.errors import SingularSystem
from geometry.potential import Base, Potential, diff_norm_sq, log_psi0, w_field
from geometry.vectorfield import BasisTag, Decomposition, PolyVF, combine, decompose, pushforward
from utils.numerics import siegel_grid
from utils.performance import timing_decorator

logger = logging.getLogger(__name__)

ZERO_TOL = 1e-8
KILL_TOL = 1e-9
CONSTANCY_TOL = 1e-7


@dataclass
class FieldCoeffs:
    """
    W = aD + bT + sum c_k T^{2,k} + sum d_k T^{3,k} + sum e_ij U^{ij}
        + sum f_ij V^{ij} + sum g_k W^k

    Index k is stored at position k-1; e and f are (n-1) x (n-1) arrays
    using the upper triangle.  Grade 1/2 and 1 components are kept aside.
    """

    n: int
    a: float = 0.0
    b: float = 0.0
    c: Optional[np.ndarray] = None
    d: Optional[np.ndarray] = None
    e: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    tilde: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        m = self.n - 1
        self.c = np.zeros(m) if self.c is None else np.asarray(self.c, dtype=float)
        self.d = np.zeros(m) if self.d is None else np.asarray(self.d, dtype=float)
        self.e = np.zeros((m, m)) if self.e is None else np.asarray(self.e, dtype=float)
        self.f = np.zeros((m, m)) if self.f is None else np.asarray(self.f, dtype=float)
        self.g = np.zeros(m) if self.g is None else np.asarray(self.g, dtype=float)

    @classmethod
    def from_decomposition(cls, dec: Decomposition) -> "FieldCoeffs":
        C = cls(dec.n)
        for tag, value in dec.coeffs.items():
            kind = tag.kind
            if kind == "D":
                C.a = value
            elif kind == "T":
                C.b = value
            elif kind == "T2":
                C.c[tag.i - 1] = value
            elif kind == "T3":
                C.d[tag.i - 1] = value
            elif kind == "U":
                C.e[tag.i - 1, tag.j - 1] = value
            elif kind == "V":
                C.f[tag.i - 1, tag.j - 1] = value
            elif kind == "W":
                C.g[tag.i - 1] = value
            else:
                C.tilde[str(tag)] = value
        return C

    def coeffs(self) -> Dict[BasisTag, float]:
        m = self.n - 1
        out: Dict[BasisTag, float] = {BasisTag("D"): self.a, BasisTag("T"): self.b}
        for k in range(m):
            out[BasisTag("T2", k + 1)] = float(self.c[k])
            out[BasisTag("T3", k + 1)] = float(self.d[k])
            out[BasisTag("W", k + 1)] = float(self.g[k])
            for j in range(k + 1, m):
                out[BasisTag("U", k + 1, j + 1)] = float(self.e[k, j])
                out[BasisTag("V", k + 1, j + 1)] = float(self.f[k, j])
        for name, value in self.tilde.items():
            out[BasisTag.parse(name)] = value
        return out

    def to_field(self) -> PolyVF:
        return combine(self.coeffs(), self.n)

    def tilde_max(self) -> float:
        return max((abs(v) for v in self.tilde.values()), default=0.0)


@dataclass
class CollapsedCoeffs:
    """
    aD + bT + c T^{2,1} + d T^{3,1} + sum_j e_j U^{1j} + sum_j f_j V^{1j} + g W^1

    e and f hold j = 2..n-1 at positions j-2.  ``off_collapse`` is the size
    of whatever the permutations left outside these slots.
    """

    n: int
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0
    e: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    g: float = 0.0
    off_collapse: float = 0.0

    def __post_init__(self):
        m = max(self.n - 2, 0)
        self.e = np.zeros(m) if self.e is None else np.asarray(self.e, dtype=float)
        self.f = np.zeros(m) if self.f is None else np.asarray(self.f, dtype=float)

    def to_field_coeffs(self) -> FieldCoeffs:
        C = FieldCoeffs(self.n, a=self.a, b=self.b)
        if self.n > 1:
            C.c[0] = self.c
            C.d[0] = self.d
            C.g[0] = self.g
            for j in range(2, self.n):
                C.e[0, j - 1] = self.e[j - 2]
                C.f[0, j - 1] = self.f[j - 2]
        return C

    def to_field(self) -> PolyVF:
        return self.to_field_coeffs().to_field()

    def scaled(self, factor: float) -> "CollapsedCoeffs":
        return CollapsedCoeffs(self.n, factor * self.a, factor * self.b, factor * self.c, factor * self.d,
                               factor * self.e, factor * self.f, factor * self.g, self.off_collapse)

    def to_dict(self) -> Dict[str, Any]:
        return {"a": self.a, "b": self.b, "c": self.c, "d": self.d,
                "e": [float(v) for v in self.e], "f": [float(v) for v in self.f],
                "g": self.g, "off_collapse": self.off_collapse}


@dataclass
class ShiftParams:
    s2: np.ndarray
    s3: np.ndarray


def permutation_chain(n: int) -> Automorphism:
    """S^{1,2} first, then S^{1,3}, ..., S^{1,n-1}."""
    return Automorphism(tuple(Perm1k(k) for k in range(2, n)))


def collapse_from_field_coeffs(C: FieldCoeffs) -> CollapsedCoeffs:
    """Read the collapsed slots of an already permuted field."""
    K = CollapsedCoeffs(C.n, a=C.a, b=C.b)
    if C.n == 1:
        return K
    K.c, K.d, K.g = float(C.c[0]), float(C.d[0]), float(C.g[0])
    K.e = np.array([C.e[0, j - 1] for j in range(2, C.n)])
    K.f = np.array([C.f[0, j - 1] for j in range(2, C.n)])
    leftovers = [np.abs(C.c[1:]), np.abs(C.d[1:]), np.abs(C.g[1:]),
                 np.abs(np.triu(C.e[1:, 1:], 1)), np.abs(np.triu(C.f[1:, 1:], 1))]
    K.off_collapse = float(max((np.max(x, initial=0.0) for x in leftovers), default=0.0))
    return K


def collapse_permutations(C: FieldCoeffs) -> Tuple[Automorphism, CollapsedCoeffs]:
    """
    Push the field through the permutation chain and read off the collapsed
    coefficients.  The result is exact; for n >= 4 the chain does not in
    general move every index onto the first slot, which shows up as a
    nonzero ``off_collapse``.
    """
    perms = permutation_chain(C.n)
    if len(perms) == 0:
        return perms, collapse_from_field_coeffs(C)
    pushed = decompose(pushforward(perms, C.to_field()))
    return perms, collapse_from_field_coeffs(FieldCoeffs.from_decomposition(pushed))


def summed_collapse(C: FieldCoeffs) -> CollapsedCoeffs:
    """The summation rule c = sum c_k, d = sum d_k, e_j = -sum_i e_ij, f_j = sum_i f_ij, g = sum g_k."""
    K = CollapsedCoeffs(C.n, a=C.a, b=C.b)
    if C.n == 1:
        return K
    K.c, K.d, K.g = float(np.sum(C.c)), float(np.sum(C.d)), float(np.sum(C.g))
    K.e = np.array([-np.sum(C.e[: j - 1, j - 1]) for j in range(2, C.n)])
    K.f = np.array([np.sum(C.f[: j - 1, j - 1]) for j in range(2, C.n)])
    return K


def build_shift_system(K: CollapsedCoeffs) -> Tuple[np.ndarray, np.ndarray]:
    """Matrix acting on (s_{2,1}, s_{3,1}, s_{2,2}, s_{3,2}, ...) and the right-hand side (c, d, 0, ...)."""
    m = K.n - 1
    size = 2 * m
    M = np.zeros((size, size))
    rhs = np.zeros(size)
    if m == 0:
        return M, rhs
    M[0, 0], M[0, 1] = K.a, -K.g
    M[1, 0], M[1, 1] = K.g, K.a
    for j in range(2, K.n):
        ej, fj = K.e[j - 2], K.f[j - 2]
        p = 2 * (j - 1)
        M[0, p], M[0, p + 1] = ej, -fj
        M[1, p], M[1, p + 1] = fj, ej
        M[p, 0], M[p, 1], M[p, p] = -ej, -fj, K.a
        M[p + 1, 0], M[p + 1, 1], M[p + 1, p + 1] = fj, -ej, K.a
    rhs[0], rhs[1] = K.c, K.d
    return M, rhs


def solve_shifts(K: CollapsedCoeffs, tol: float = ZERO_TOL) -> ShiftParams:
    if abs(K.a) <= tol:
        raise SingularSystem("shift system is singular when a = 0", a=K.a)
    M, rhs = build_shift_system(K)
    if M.size == 0:
        return ShiftParams(np.zeros(0), np.zeros(0))
    x = scipy.linalg.solve(M, rhs)
    return ShiftParams(s2=x[0::2].copy(), s3=x[1::2].copy())


def shift_automorphism(shifts: ShiftParams, s1: float = 0.0) -> Automorphism:
    """T_{s1} first, then T^{2,1}..T^{2,n-1}, then T^{3,1}..T^{3,n-1}; zero shifts are skipped."""
    gens: List = []
    if s1 != 0:
        gens.append(Ts(s1))
    gens += [T2k(k + 1, float(s)) for k, s in enumerate(shifts.s2) if s != 0]
    gens += [T3k(k + 1, float(s)) for k, s in enumerate(shifts.s3) if s != 0]
    return Automorphism(tuple(gens))


def choose_s1(K: CollapsedCoeffs, shifts: ShiftParams, tol: float = ZERO_TOL) -> float:
    """s1 = beta / (2a) where beta is the T coefficient after the w' shifts."""
    if abs(K.a) <= tol:
        raise SingularSystem("cannot remove the T component when a = 0", a=K.a)
    phi = shift_automorphism(shifts)
    field = K.to_field()
    pushed = pushforward(phi, field) if len(phi) else field
    beta = decompose(pushed).get("T")
    return beta / (2 * K.a)


def kill_residual(K: CollapsedCoeffs, phi: Automorphism) -> float:
    """Largest T, T^{2,k}, T^{3,k} coefficient of phi_* W."""
    field = K.to_field()
    pushed = decompose(pushforward(phi, field) if len(phi) else field)
    return max((abs(v) for tag, v in pushed.coeffs.items() if tag.kind in ("T", "T2", "T3")), default=0.0)


def step_two_shifts(K: CollapsedCoeffs, tol: float = ZERO_TOL) -> ShiftParams:
    """Shifts for the a = 0 case, following the branch on e_j, f_j and g."""
    m = K.n - 1
    s2 = np.zeros(m)
    s3 = np.zeros(m)
    if m == 0 or (abs(K.c) <= tol and abs(K.d) <= tol):
        return ShiftParams(s2, s3)
    weights = K.e ** 2 + K.f ** 2
    if weights.size and np.max(weights) > tol ** 2:
        j = int(np.argmax(weights > tol ** 2))
        ej, fj, w = K.e[j], K.f[j], weights[j]
        s2[j + 1] = (ej * K.c + fj * K.d) / w
        s3[j + 1] = (-fj * K.c + ej * K.d) / w
    elif abs(K.g) > tol:
        s3[0] = -K.c / K.g
        s2[0] = K.d / K.g
    else:
        # minimal-norm solution of b - 2c s31 + 2d s21 = 0
        direction = np.array([2 * K.d, -2 * K.c])
        s2[0], s3[0] = -K.b * direction / float(direction @ direction)
    return ShiftParams(s2, s3)


@dataclass
class Verdict:
    """Outcome of classify_potential."""

    kind: str
    n: int
    r: Optional[float] = None
    automorphism: Optional[Automorphism] = None
    norm_constant: Optional[float] = None
    residuals: Dict[str, float] = field(default_factory=dict)
    components: Dict[str, float] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "n": self.n,
            "r": self.r,
            "automorphism": self.automorphism.to_records() if self.automorphism is not None else None,
            "norm_constant": self.norm_constant,
            "residuals": dict(sorted(self.residuals.items())),
            "components": dict(sorted(self.components.items())),
            "notes": list(self.notes),
        }


def _as_siegel(P: Potential) -> Potential:
    if P.base == Base.PSI0:
        return P
    if P.correction is not None and P.correction.degree > 0:
        raise ValueError("ball potentials with a non-constant correction cannot be moved to H^n")
    return Potential(n=P.n, base=Base.PSI0, precompose=P.precompose, correction=P.correction,
                     log_scale=P.log_scale, kappa=P.kappa)


@timing_decorator
def classify_potential(P: Potential, samples: int = 100, isotropy: Optional[Automorphism] = None) -> Verdict:
    """
    Decide whether P is r * psi0 o Phi for an automorphism Phi of H^n.

    Ball potentials are moved to H^n through the Cayley transform.  When
    ``isotropy`` is given, P o isotropy is classified instead.
    """
    if P.kappa != 1:
        raise ValueError("classification needs kappa = 1")
    P = _as_siegel(P)
    if isotropy is not None:
        P = P.precomposed_with(isotropy)
    n = P.n
    pts = siegel_grid(n, samples, start=5003)
    norms = np.array([diff_norm_sq(P, w) for w in pts])
    spread = float(np.max(norms) - np.min(norms))
    estimate = float(np.mean(norms))
    residuals = {"norm_spread": spread}
    if spread > ZERO_TOL:
        logger.info(f"potential has non-constant norm (spread {spread:.3e})")
        return Verdict("NotConstantNorm", n, norm_constant=estimate, residuals=residuals)

    W = w_field(P)
    dec = decompose(W)
    residuals["decomposition"] = dec.residual
    C = FieldCoeffs.from_decomposition(dec)
    components = dec.to_dict(tol=ZERO_TOL)
    if C.tilde_max() > ZERO_TOL:
        return Verdict("NeedsIsotropy", n, norm_constant=estimate, residuals=residuals,
                       components={k: v for k, v in components.items() if k.startswith("Tt")})

    perms, K = collapse_permutations(C)
    residuals["off_collapse"] = K.off_collapse
    notes: List[str] = []
    if abs(K.a) > ZERO_TOL:
        shifts = solve_shifts(K)
        s1 = choose_s1(K, shifts)
        residuals["kill"] = kill_residual(K, shift_automorphism(shifts, s1))
        notes.append(f"dilation component a = {K.a:.6g} survives; (Re D) log psi cannot vanish")
        return Verdict("Inconsistent", n, norm_constant=estimate, residuals=residuals,
                       components=components, notes=notes)

    if K.b < 0:
        K = K.scaled(-1.0)
        notes.append("W multiplied by -1 so that b >= 0")
    phi = perms.then(shift_automorphism(step_two_shifts(K)))
    inverse = phi.inverse()
    offsets = np.array([P.eval_log(inverse.apply(w)) - log_psi0(w) for w in pts])
    constancy = float(np.max(offsets) - np.min(offsets))
    residuals["final_constancy"] = constancy
    if constancy > CONSTANCY_TOL:
        notes.append("normalized potential is not a multiple of psi0")
        return Verdict("Inconsistent", n, norm_constant=estimate, residuals=residuals,
                       components=components, notes=notes)
    r = float(np.exp(np.mean(offsets)))
    logger.info(f"potential classified as canonical with r = {r:.6g}")
    return Verdict("Canonical", n, r=r, automorphism=phi, norm_constant=estimate,
                   residuals=residuals, components=components, notes=notes)
