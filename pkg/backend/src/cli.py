#!/usr/bin/env python3
"""
Command-line verifier.

    python src/cli.py run --n 1 2 3 --samples 100 --suite tables --format structured
    python src/cli.py classify --input examples/psi0.json

Exit codes: 0 when every check passes, 1 when a check fails, 2 for invalid
configuration or input.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

sys.path.append(os.path.dirname(__file__))

from geometry.errors import GeometryError
from utils.settings import get_settings
from verification.catalog import SUITES
from verification.config import InvalidConfig, SuiteConfig, parse_tol_overrides
from verification.report import EXIT_INVALID, render
from verification.runner import classify, run

logger = logging.getLogger("bergman_verifier")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bergman-verifier",
                                description="Numerical verifier for Bergman metrics on the ball and the Siegel domain.")
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="Run the identity suites.")
    r.add_argument("--n", type=int, nargs="+", action="extend", dest="n_list",
                   help="Dimensions to check (default from VERIFY_N_LIST).")
    r.add_argument("--samples", type=int, help="Random points per check (default from VERIFY_SAMPLES).")
    r.add_argument("--seed", type=int, help="Seed of the sampler (default from VERIFY_SEED).")
    r.add_argument("--tol", action="append", default=[], metavar="NAME=VALUE",
                   help="Override the tolerance of one check; repeatable.")
    r.add_argument("--suite", action="append", dest="suites", choices=SUITES,
                   help="Suite to run; repeatable (default: all).")
    r.add_argument("--format", choices=["text", "structured"], default="text")
    r.add_argument("--output", type=Path, help="Write the report here instead of stdout; relative to REPORT_DIR.")
    r.add_argument("--workers", type=int, help="Parallel suite jobs (default from VERIFY_WORKERS).")

    c = sub.add_parser("classify", help="Classify a potential description.")
    c.add_argument("--input", type=Path, required=True, help="JSON potential description.")
    c.add_argument("--format", choices=["text", "structured"], default="text")
    c.add_argument("--output", type=Path, help="Write the report here instead of stdout; relative to REPORT_DIR.")
    return p


def _emit(text: str, output: Optional[Path]) -> None:
    if output is None:
        sys.stdout.write(text)
        return
    output.parent.mkdir(parents=True, exist_ok=True)
    output.write_text(text, encoding="utf-8")
    logger.info(f"report written to {output}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=logging.DEBUG if settings.debug else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )

    try:
        if args.command == "run":
            config = SuiteConfig.from_settings(
                settings,
                n_list=args.n_list,
                samples=args.samples,
                seed=args.seed,
                tol=parse_tol_overrides(args.tol),
                suites=args.suites,
                format=args.format,
                workers=args.workers,
            )
            report = run(config)
        else:
            report = classify(args.input)
    except InvalidConfig as e:
        logger.error(f"invalid input: {e}")
        return EXIT_INVALID
    except (GeometryError, ValueError) as e:
        logger.error(f"cannot process input: {e}")
        return EXIT_INVALID

    output = args.output
    if output is not None and not output.is_absolute():
        output = Path(settings.report_dir) / output
    _emit(render(report, args.format), output)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
