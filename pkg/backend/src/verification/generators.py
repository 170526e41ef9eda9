"""
Random inputs for the suites, all drawn from a caller-supplied generator.
"""

from typing import List, Tuple

import numpy as np
import scipy.linalg

from geometry.automorphism import Automorphism, Dil, Generator, Perm1k, T2k, T3k, Ts, Unitary
from geometry.normalize import CollapsedCoeffs, FieldCoeffs
from geometry.potential import HoloPoly


def random_unitary(rng: np.random.Generator, m: int) -> np.ndarray:
    """exp of a random skew-Hermitian m x m matrix."""
    X = rng.standard_normal((m, m)) + 1j * rng.standard_normal((m, m))
    return scipy.linalg.expm(0.5 * (X - X.conj().T))


def random_generator(rng: np.random.Generator, n: int, with_dilation: bool = True) -> Generator:
    kinds = ["Ts"]
    if n > 1:
        kinds += ["T2k", "T3k", "Unitary"]
    if n > 2:
        kinds.append("Perm1k")
    if with_dilation:
        kinds.append("Dil")
    kind = kinds[int(rng.integers(len(kinds)))]
    s = float(rng.uniform(-1.0, 1.0))
    if kind == "Ts":
        return Ts(s)
    if kind == "T2k":
        return T2k(int(rng.integers(1, n)), s)
    if kind == "T3k":
        return T3k(int(rng.integers(1, n)), s)
    if kind == "Perm1k":
        return Perm1k(int(rng.integers(2, n)))
    if kind == "Unitary":
        return Unitary(random_unitary(rng, n - 1))
    return Dil(0.5 * s)


def random_automorphism(rng: np.random.Generator, n: int, length: int = 4,
                        with_dilation: bool = True) -> Automorphism:
    return Automorphism(tuple(random_generator(rng, n, with_dilation) for _ in range(length)))


def random_holopoly(rng: np.random.Generator, n: int, max_degree: int = 2, scale: float = 0.3) -> HoloPoly:
    """Random polynomial with every monomial of degree 1..max_degree."""
    terms: List[Tuple[Tuple[int, ...], complex]] = []
    for exps in np.ndindex(*(max_degree + 1,) * n):
        if 0 < sum(exps) <= max_degree:
            coeff = scale * complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            terms.append((tuple(int(e) for e in exps), coeff))
    return HoloPoly.from_terms(n, terms)


def random_field_coeffs(rng: np.random.Generator, n: int, a_min: float = 0.2) -> FieldCoeffs:
    """Random grade <= 0 field with |a| >= a_min (a_min = 0 allows any a)."""
    m = n - 1
    a = float(rng.uniform(a_min, 1.0) * rng.choice([-1.0, 1.0])) if a_min > 0 else float(rng.uniform(-1, 1))
    return FieldCoeffs(
        n,
        a=a,
        b=float(rng.uniform(-1, 1)),
        c=rng.uniform(-1, 1, m),
        d=rng.uniform(-1, 1, m),
        e=np.triu(rng.uniform(-1, 1, (m, m)), 1),
        f=np.triu(rng.uniform(-1, 1, (m, m)), 1),
        g=rng.uniform(-1, 1, m),
    )


def random_collapsed(rng: np.random.Generator, n: int, a_min: float = 0.2) -> CollapsedCoeffs:
    m = max(n - 2, 0)
    a = float(rng.uniform(a_min, 1.0) * rng.choice([-1.0, 1.0])) if a_min > 0 else 0.0
    return CollapsedCoeffs(
        n,
        a=a,
        b=float(rng.uniform(-1, 1)),
        c=float(rng.uniform(-1, 1)),
        d=float(rng.uniform(-1, 1)),
        e=rng.uniform(-1, 1, m),
        f=rng.uniform(-1, 1, m),
        g=float(rng.uniform(-1, 1)),
    )
