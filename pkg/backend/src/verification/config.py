"""
Run configuration for the verifier.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator

from utils.settings import Settings
from verification.catalog import CHECKS, SUITES

MAX_N = 8


class InvalidConfig(ValueError):
    """Bad configuration or input file; ``position`` points at the offending field."""

    def __init__(self, message: str, position: Optional[str] = None):
        super().__init__(message if position is None else f"{position}: {message}")
        self.position = position


class SuiteConfig(BaseModel):
    n_list: List[int] = Field(default_factory=lambda: [1, 2, 3, 4, 5])
    samples: int = Field(default=100, ge=1)
    seed: int = Field(default=20240601, ge=0, le=2 ** 64 - 1)
    tol: Dict[str, float] = Field(default_factory=dict)
    suites: List[str] = Field(default_factory=lambda: list(SUITES))
    format: str = "text"
    workers: int = Field(default=1, ge=1)

    @field_validator("n_list")
    @classmethod
    def _check_n_list(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one dimension is required")
        for n in value:
            if not 1 <= n <= MAX_N:
                raise ValueError(f"dimension {n} outside 1..{MAX_N}")
        return sorted(set(value))

    @field_validator("tol")
    @classmethod
    def _check_tol(cls, value: Dict[str, float]) -> Dict[str, float]:
        for name, tol in value.items():
            if name not in CHECKS:
                raise ValueError(f"unknown check name {name!r}")
            if not tol > 0:
                raise ValueError(f"tolerance for {name} must be positive")
        return dict(sorted(value.items()))

    @field_validator("suites")
    @classmethod
    def _check_suites(cls, value: List[str]) -> List[str]:
        unknown = [s for s in value if s not in SUITES]
        if unknown:
            raise ValueError(f"unknown suite(s): {', '.join(unknown)}")
        if not value:
            raise ValueError("at least one suite is required")
        return [s for s in SUITES if s in value]

    @field_validator("format")
    @classmethod
    def _check_format(cls, value: str) -> str:
        if value not in ("text", "structured"):
            raise ValueError("format must be 'text' or 'structured'")
        return value

    @classmethod
    def build(cls, **values) -> "SuiteConfig":
        """Construct and re-raise validation failures as InvalidConfig."""
        try:
            return cls(**values)
        except ValidationError as e:
            first = e.errors()[0]
            position = ".".join(str(p) for p in first["loc"]) or None
            raise InvalidConfig(first["msg"], position=position) from e

    @classmethod
    def from_settings(cls, settings: Settings, **overrides) -> "SuiteConfig":
        values = {
            "n_list": settings.n_list,
            "samples": settings.samples,
            "seed": settings.seed,
            "workers": settings.workers,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.build(**values)

    def tolerance(self, name: str) -> float:
        return self.tol.get(name, CHECKS[name].tolerance)

    def echo(self) -> Dict:
        """Fields that determine the results; ``format`` and ``workers`` do not."""
        return self.model_dump(exclude={"format", "workers"})


def parse_tol_overrides(items: List[str]) -> Dict[str, float]:
    """NAME=VALUE strings from the command line."""
    out: Dict[str, float] = {}
    for position, item in enumerate(items):
        name, sep, raw = item.partition("=")
        if not sep:
            raise InvalidConfig(f"expected NAME=VALUE, got {item!r}", position=f"tol[{position}]")
        try:
            out[name.strip()] = float(raw)
        except ValueError as e:
            raise InvalidConfig(f"not a number: {raw!r}", position=f"tol[{position}]") from e
    return out
