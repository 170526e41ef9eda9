"""
Closed-form pushforward rules for the affine generators.

Each rule maps a basis tag of grade <= 0 to the coefficients of its
pushforward.  The suites compare these against the fitting oracle and
compose them to predict pushforwards by generator strings.
"""

from typing import Dict, Iterable, Tuple

from geometry.automorphism import Generator, Perm1k, T2k, T3k, Ts
from geometry.vectorfield import BasisTag

Coeffs = Dict[BasisTag, float]

T = BasisTag("T")


def _add(out: Coeffs, tag: BasisTag, value: float) -> None:
    out[tag] = out.get(tag, 0.0) + value


def _unitary_tag(kind: str, i: int, j: int) -> Tuple[BasisTag, float]:
    """U(i,j) and V(i,j) with i > j reordered; U is antisymmetric in its indices."""
    if i < j:
        return BasisTag(kind, i, j), 1.0
    return BasisTag(kind, j, i), (-1.0 if kind == "U" else 1.0)


def translation_rule(s: float, tag: BasisTag) -> Coeffs:
    """(T_s)_* only moves D."""
    if tag.kind == "D":
        return {tag: 1.0, T: -2 * s}
    return {tag: 1.0}


def shift2_rule(k: int, s: float, tag: BasisTag) -> Coeffs:
    out: Coeffs = {tag: 1.0}
    kind = tag.kind
    if kind == "D":
        _add(out, BasisTag("T2", k), -s)
    elif kind == "T3" and tag.i == k:
        _add(out, T, 2 * s)
    elif kind == "U" and k in (tag.i, tag.j):
        if tag.i == k:
            _add(out, BasisTag("T2", tag.j), s)
        else:
            _add(out, BasisTag("T2", tag.i), -s)
    elif kind == "V" and k in (tag.i, tag.j):
        other = tag.j if tag.i == k else tag.i
        _add(out, BasisTag("T3", other), -s)
    elif kind == "W" and tag.i == k:
        _add(out, BasisTag("T3", k), -s)
        _add(out, T, -s * s)
    return out


def shift3_rule(k: int, s: float, tag: BasisTag) -> Coeffs:
    out: Coeffs = {tag: 1.0}
    kind = tag.kind
    if kind == "D":
        _add(out, BasisTag("T3", k), -s)
    elif kind == "T2" and tag.i == k:
        _add(out, T, -2 * s)
    elif kind == "U" and k in (tag.i, tag.j):
        if tag.i == k:
            _add(out, BasisTag("T3", tag.j), s)
        else:
            _add(out, BasisTag("T3", tag.i), -s)
    elif kind == "V" and k in (tag.i, tag.j):
        other = tag.j if tag.i == k else tag.i
        _add(out, BasisTag("T2", other), s)
    elif kind == "W" and tag.i == k:
        _add(out, BasisTag("T2", k), s)
        _add(out, T, -s * s)
    return out


def permutation_rule(k: int, tag: BasisTag) -> Coeffs:
    """Relabel indices 1 <-> k."""
    swap = {1: k, k: 1}
    if tag.kind in ("T2", "T3", "W"):
        return {BasisTag(tag.kind, swap.get(tag.i, tag.i)): 1.0}
    if tag.kind in ("U", "V"):
        new, sign = _unitary_tag(tag.kind, swap.get(tag.i, tag.i), swap.get(tag.j, tag.j))
        return {new: sign}
    return {tag: 1.0}


def stated_permutation_rule(k: int, tag: BasisTag) -> Coeffs:
    """
    The swap rule as usually tabulated: index-k fields move to index 1 and
    every other T2, T3, W field is left alone.  Wrong for index 1.
    """
    if tag.kind in ("T2", "T3", "W"):
        return {BasisTag(tag.kind, 1 if tag.i == k else tag.i): 1.0}
    return permutation_rule(k, tag)


def generator_rule(gen: Generator, tag: BasisTag) -> Coeffs:
    if isinstance(gen, Ts):
        return translation_rule(gen.s, tag)
    if isinstance(gen, T2k):
        return shift2_rule(gen.k, gen.s, tag)
    if isinstance(gen, T3k):
        return shift3_rule(gen.k, gen.s, tag)
    if isinstance(gen, Perm1k):
        return permutation_rule(gen.k, tag)
    raise ValueError(f"no pushforward rule for {type(gen).__name__}")


def push_coeffs(gen: Generator, coeffs: Coeffs) -> Coeffs:
    """Linear extension of generator_rule to a combination of basis fields."""
    out: Coeffs = {}
    for tag, value in coeffs.items():
        if value == 0:
            continue
        for image, weight in generator_rule(gen, tag).items():
            _add(out, image, value * weight)
    return out


def push_through(generators: Iterable[Generator], coeffs: Coeffs) -> Coeffs:
    """Pushforward by a generator string applied left to right."""
    for gen in generators:
        coeffs = push_coeffs(gen, coeffs)
    return coeffs
