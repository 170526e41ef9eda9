"""
Parsing of potential descriptions and Moebius matrices.

Every failure is raised as InvalidConfig with a JSON path (or the line and
column of a syntax error) as its position.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from geometry.automorphism import (
    Automorphism,
    Generator,
    MobiusMap,
    Perm1k,
    T2k,
    T3k,
    Unitary,
    generator_from_record,
)
from geometry.errors import GeometryError
from geometry.potential import Base, HoloPoly, Potential
from verification.config import InvalidConfig


@dataclass
class PotentialInput:
    """A parsed description: the potential, an optional isotropy and an optional Moebius matrix."""

    potential: Potential
    isotropy: Optional[Automorphism] = None
    mobius: Optional[MobiusMap] = None


def load_document(source: Union[str, Path, Dict[str, Any]]) -> Dict[str, Any]:
    if isinstance(source, dict):
        return source
    path = Path(source)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise InvalidConfig(f"cannot read input file: {e.strerror}", position=str(path)) from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise InvalidConfig(e.msg, position=f"line {e.lineno} column {e.colno}") from e
    if not isinstance(document, dict):
        raise InvalidConfig("top level must be an object", position="$")
    return document


def _number(document: Dict[str, Any], key: str, default: float) -> float:
    raw = document.get(key, default)
    try:
        value = float(raw)
    except (TypeError, ValueError) as e:
        raise InvalidConfig(f"expected a number, got {raw!r}", position=key) from e
    if not math.isfinite(value):
        raise InvalidConfig("value must be finite", position=key)
    return value


def _infer_n(document: Dict[str, Any]) -> int:
    if "n" in document:
        try:
            n = int(document["n"])
        except (TypeError, ValueError) as e:
            raise InvalidConfig(f"expected an integer, got {document['n']!r}", position="n") from e
    elif document.get("f"):
        first = document["f"][0]
        if not isinstance(first, dict) or "exponents" not in first:
            raise InvalidConfig("term record needs 'exponents'", position="f[0]")
        n = len(first["exponents"])
    elif document.get("mobius"):
        n = int(round(math.sqrt(len(document["mobius"])))) - 1
    else:
        raise InvalidConfig("cannot infer the dimension; add an 'n' field", position="n")
    if n < 1:
        raise InvalidConfig(f"dimension must be at least 1, got {n}", position="n")
    return n


def _check_indices(gen: Generator, n: int, position: str) -> None:
    if isinstance(gen, (T2k, T3k)) and not 1 <= gen.k <= n - 1:
        raise InvalidConfig(f"k = {gen.k} outside 1..{n - 1}", position=f"{position}.k")
    if isinstance(gen, Perm1k) and not 2 <= gen.k <= n - 1:
        raise InvalidConfig(f"k = {gen.k} outside 2..{n - 1}", position=f"{position}.k")
    if isinstance(gen, Unitary) and gen.U.shape[0] != n - 1:
        raise InvalidConfig(f"unitary block must be {n - 1} x {n - 1}", position=f"{position}.U")


def parse_generators(records: Any, n: int, key: str = "generators") -> Automorphism:
    if not isinstance(records, list):
        raise InvalidConfig("expected a list of generator records", position=key)
    gens: List[Generator] = []
    for index, record in enumerate(records):
        position = f"{key}[{index}]"
        if not isinstance(record, dict):
            raise InvalidConfig("generator record must be an object", position=position)
        try:
            gen = generator_from_record(record)
        except KeyError as e:
            raise InvalidConfig(f"missing field {e.args[0]!r}", position=position) from e
        except (TypeError, ValueError) as e:
            raise InvalidConfig(str(e), position=position) from e
        _check_indices(gen, n, position)
        gens.append(gen)
    return Automorphism(tuple(gens))


def parse_polynomial(records: Any, n: int) -> Optional[HoloPoly]:
    if not records:
        return None
    if not isinstance(records, list):
        raise InvalidConfig("expected a list of term records", position="f")
    for index, record in enumerate(records):
        if not isinstance(record, dict) or "exponents" not in record:
            raise InvalidConfig("term record needs 'exponents'", position=f"f[{index}]")
        if len(record["exponents"]) != n:
            raise InvalidConfig(f"expected {n} exponents", position=f"f[{index}].exponents")
    try:
        return HoloPoly.from_records(n, records)
    except (TypeError, ValueError) as e:
        raise InvalidConfig(str(e), position="f") from e


def parse_mobius(entries: Any, key: str = "mobius") -> MobiusMap:
    """(n+1)^2 complex entries, row-major, as {re, im} objects or [re, im] pairs."""
    if not isinstance(entries, Sequence) or isinstance(entries, (str, bytes)):
        raise InvalidConfig("expected a list of matrix entries", position=key)
    size = int(round(math.sqrt(len(entries))))
    if size * size != len(entries) or size < 2:
        raise InvalidConfig(f"{len(entries)} entries do not form an (n+1) x (n+1) matrix", position=key)
    for index, value in enumerate(entries):
        if isinstance(value, dict) and not set(value) <= {"re", "im"}:
            raise InvalidConfig("entry must have only 're' and 'im'", position=f"{key}[{index}]")
        if isinstance(value, (str, bool)) or value is None:
            raise InvalidConfig(f"not a complex number: {value!r}", position=f"{key}[{index}]")
    try:
        return MobiusMap.from_entries(entries)
    except GeometryError as e:
        raise InvalidConfig(str(e), position=key) from e
    except (TypeError, ValueError) as e:
        raise InvalidConfig(str(e), position=key) from e


def parse_potential(source: Union[str, Path, Dict[str, Any]]) -> PotentialInput:
    """
    Fields: base ("psi0" | "phi0"), generators, f, r, kappa, optional n,
    optional isotropy (generator records) and optional mobius.
    """
    document = load_document(source)
    n = _infer_n(document)
    try:
        base = Base(document.get("base", "psi0"))
    except ValueError as e:
        raise InvalidConfig(f"base must be 'psi0' or 'phi0', got {document.get('base')!r}", position="base") from e
    generators = parse_generators(document.get("generators", []), n)
    correction = parse_polynomial(document.get("f", []), n)
    r = _number(document, "r", 1.0)
    kappa = _number(document, "kappa", 1.0)
    if r <= 0:
        raise InvalidConfig("r must be positive", position="r")
    if kappa <= 0:
        raise InvalidConfig("kappa must be positive", position="kappa")
    isotropy = None
    if document.get("isotropy"):
        isotropy = parse_generators(document["isotropy"], n, key="isotropy")
    mobius = parse_mobius(document["mobius"]) if document.get("mobius") else None
    potential = Potential(
        n=n,
        base=base,
        precompose=generators if len(generators) else None,
        correction=correction,
        log_scale=math.log(r),
        kappa=kappa,
    )
    return PotentialInput(potential=potential, isotropy=isotropy, mobius=mobius)
