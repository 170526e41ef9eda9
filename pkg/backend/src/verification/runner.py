"""
Suite runner and classifier front end.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from geometry.automorphism import MobiusMap, cayley_constraint_report
from geometry.normalize import classify_potential
from utils.numerics import derive_rng
from utils.performance import timing_decorator
from verification.config import SuiteConfig
from verification.inputs import parse_mobius, parse_potential
from verification.report import Report
from verification.suites import SUITE_FUNCTIONS, SuiteContext

logger = logging.getLogger(__name__)


def _run_job(config: SuiteConfig, suite: str, n: int) -> SuiteContext:
    ctx = SuiteContext(
        suite=suite,
        n=n,
        samples=config.samples,
        rng=derive_rng(config.seed, suite, n),
        tolerances=config.tol,
    )
    logger.info(f"running {suite} suite for n={n} with {config.samples} samples")
    SUITE_FUNCTIONS[suite](ctx)
    return ctx


@timing_decorator
def run(config: SuiteConfig) -> Report:
    """
    Execute the selected suites over every n in the config.

    Jobs are (suite, n) pairs with their own generators, so running them on
    several workers leaves the report unchanged; results are collected in
    the fixed job order.
    """
    jobs: List[Tuple[str, int]] = [(suite, n) for suite in config.suites for n in config.n_list]
    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as executor:
            contexts = list(executor.map(lambda job: _run_job(config, *job), jobs))
    else:
        contexts = [_run_job(config, suite, n) for suite, n in jobs]

    report = Report(kind="run", config=config.echo())
    for ctx in contexts:
        report.checks.extend(ctx.checks)
        report.deviations.extend(ctx.deviations)
    report.finalize()
    for failure in report.failures():
        logger.error(f"FAIL {failure.name} n={failure.n} {failure.label or ''} "
                     f"residual={failure.residual} tol={failure.tolerance}")
    logger.info(f"{report.summary.passed}/{report.summary.total} checks passed, "
                f"{report.summary.warnings} deviations")
    return report


def mobius_report(source: Union[MobiusMap, List[Any]]) -> Dict[str, Any]:
    G = source if isinstance(source, MobiusMap) else parse_mobius(source)
    return cayley_constraint_report(G).to_dict()


def classify(source: Union[str, Path, Dict[str, Any]]) -> Report:
    """Classify a potential description; a Moebius matrix in the same document gets its own report."""
    parsed = parse_potential(source)
    verdict = classify_potential(parsed.potential, isotropy=parsed.isotropy)
    logger.info(f"classifier verdict: {verdict.kind}")
    result = verdict.to_dict()
    if parsed.mobius is not None:
        result["mobius"] = mobius_report(parsed.mobius)
    config: Dict[str, Any] = {"input": parsed.potential.to_dict()}
    if parsed.isotropy is not None:
        config["isotropy"] = parsed.isotropy.to_records()
    return Report(kind="classify", config=config, verdict=result).finalize()
