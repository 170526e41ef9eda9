"""
Report models and renderers.

Reports hold no timestamps or timings so that identical configurations
produce byte-identical structured output.
"""

import math
from typing import Any, Dict, List, Optional

import pandas as pd
from pydantic import BaseModel, Field

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INVALID = 2


class CheckResult(BaseModel):
    name: str
    suite: str
    anchor: str
    n: int
    samples: int
    residual: Optional[float]
    tolerance: float
    passed: bool
    label: Optional[str] = None

    @classmethod
    def measure(cls, name: str, suite: str, anchor: str, n: int, samples: int,
                residual: float, tolerance: float, label: Optional[str] = None) -> "CheckResult":
        finite = residual is not None and math.isfinite(residual)
        return cls(
            name=name,
            suite=suite,
            anchor=anchor,
            n=n,
            samples=samples,
            residual=float(residual) if finite else None,
            tolerance=tolerance,
            passed=bool(finite and residual <= tolerance),
            label=label,
        )


class Deviation(BaseModel):
    """A tabulated statement that disagrees with the computed value."""

    name: str
    n: int
    stated: str
    observed: str
    residual: float
    status: str = "WARN"


class Summary(BaseModel):
    total: int = 0
    passed: int = 0
    failed: int = 0
    warnings: int = 0


class Report(BaseModel):
    kind: str = "run"
    config: Dict[str, Any] = Field(default_factory=dict)
    checks: List[CheckResult] = Field(default_factory=list)
    deviations: List[Deviation] = Field(default_factory=list)
    verdict: Optional[Dict[str, Any]] = None
    summary: Summary = Field(default_factory=Summary)

    def finalize(self) -> "Report":
        passed = sum(1 for c in self.checks if c.passed)
        self.summary = Summary(
            total=len(self.checks),
            passed=passed,
            failed=len(self.checks) - passed,
            warnings=len(self.deviations),
        )
        return self

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def exit_code(self) -> int:
        return EXIT_OK if self.all_passed else EXIT_FAILED

    def failures(self) -> List[CheckResult]:
        return [c for c in self.checks if not c.passed]


def render_structured(report: Report) -> str:
    return report.model_dump_json(indent=2)


def _format_residual(value: Optional[float]) -> str:
    return "nan" if value is None else f"{value:.3e}"


def render_text(report: Report) -> str:
    """Aligned tables: checks, deviations, verdict and the summary line."""
    parts: List[str] = []
    if report.checks:
        frame = pd.DataFrame([
            {
                "check": c.name if c.label is None else f"{c.name} [{c.label}]",
                "n": c.n,
                "samples": c.samples,
                "residual": _format_residual(c.residual),
                "tol": f"{c.tolerance:.0e}",
                "status": "PASS" if c.passed else "FAIL",
                "anchor": c.anchor,
            }
            for c in report.checks
        ])
        parts.append(frame.to_string(index=False))
    if report.deviations:
        frame = pd.DataFrame([d.model_dump() for d in report.deviations])
        frame["residual"] = frame["residual"].map(lambda v: f"{v:.3e}")
        parts.append("Deviations\n" + frame[["status", "name", "n", "stated", "observed", "residual"]].to_string(index=False))
    if report.verdict is not None:
        lines = [f"verdict: {report.verdict.get('kind')}"]
        for key in ("r", "norm_constant"):
            if report.verdict.get(key) is not None:
                lines.append(f"{key}: {report.verdict[key]:.10g}")
        for key, value in sorted(report.verdict.get("residuals", {}).items()):
            lines.append(f"residual {key}: {value:.3e}")
        for note in report.verdict.get("notes", []):
            lines.append(f"note: {note}")
        mobius = report.verdict.get("mobius")
        if mobius:
            lines.append(f"mobius: {mobius['verdict']}")
            for check in mobius["checks"]:
                lines.append(f"  {'PASS' if check['passed'] else 'FAIL'} {check['name']} ({check['residual']:.3e})")
        parts.append("\n".join(lines))
    s = report.summary
    parts.append(f"{s.passed}/{s.total} checks passed, {s.failed} failed, {s.warnings} warnings")
    return "\n\n".join(parts) + "\n"


def render(report: Report, fmt: str) -> str:
    return render_structured(report) if fmt == "structured" else render_text(report)
