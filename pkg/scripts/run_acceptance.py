"""Run every canned recipe and check its acceptance criterion."""

import asyncio
import math
import sys
from pathlib import Path
from typing import Dict, List

# Add app directory to Python path
sys.path.append(str(Path(__file__).parent.parent))

import structlog

from app.experiment import run_experiment_async
from app.logging_config import configure_logging
from app.recipes import get_recipe

configure_logging()
logger = structlog.get_logger(__name__)


def _paircorr(tolerance: float):
    def check(report) -> bool:
        return all(
            abs(r.normalized - r.target) <= tolerance
            for rec in report.records if rec.kind == "paircorr"
            for r in rec.results
        )
    return check


def _certificate(report) -> bool:
    return all(
        0.5 <= c.functional * 8.0 * c.t <= 2.0 and c.verdict is not None and c.verdict.value == "WITHIN_BOUND"
        for rec in report.records for c in rec.results
    )


def _kronecker(report) -> bool:
    pair, scan = report.records
    return pair.results[0].count == 0 and scan.result.max_magnitude >= 0.5 and abs(scan.result.argmax[0]) == 4181


def _smoothed(report) -> bool:
    return all(abs(r.value - 1.0) <= 0.1 for rec in report.records for r in rec.results)


def _discrepancy(report) -> bool:
    exact = [r for rec in report.records for r in rec.results if r.exact]
    return bool(exact) and all(r.upper <= 5.0 / math.sqrt(r.n) for r in exact)


def exact_discrepancy_by_seed(report) -> Dict[int, float]:
    return {rec.seed: r.upper for rec in report.records for r in rec.results if r.exact}


def discrepancy_ratios(small, large) -> List[float]:
    """D*(small N) / D*(large N) per seed shared by both reports."""
    lo, hi = exact_discrepancy_by_seed(small), exact_discrepancy_by_seed(large)
    return [lo[seed] / hi[seed] for seed in sorted(lo) if seed in hi]


def _weak(report) -> bool:
    return all(
        abs(r.normalized - 2.0) <= 0.15
        for rec in report.records if rec.kind == "paircorr"
        for r in rec.results
    )


def _parseval(report) -> bool:
    return all(rec.result.consistent for rec in report.records)


CHECKS = {
    "random-ppc-1d": _paircorr(0.1),
    "random-ppc-2d": _paircorr(0.15),
    "certificate-1d": _certificate,
    "kronecker-control": _kronecker,
    "smoothed-limit": _smoothed,
    "discrepancy-scale-1k": _discrepancy,
    "discrepancy-scale-10k": _discrepancy,
    "weak-correlation": _weak,
    "parseval-oracle": _parseval,
}


async def main():
    """Run all recipes; exit non-zero if any criterion fails."""
    failed = []
    reports = {}
    try:
        for name, check in CHECKS.items():
            logger.info("recipe_start", recipe=name)
            report = await run_experiment_async(get_recipe(name), parallel=True)
            reports[name] = report
            ok = check(report)
            seconds = sum(rec.wall_clock_seconds for rec in report.records)
            logger.info("recipe_done", recipe=name, passed=ok, seconds=round(seconds, 3))
            if not ok:
                failed.append(name)
    except Exception as e:
        logger.error("acceptance_run_failed", error=str(e))
        import traceback
        logger.error(traceback.format_exc())
        sys.exit(1)

    ratios = discrepancy_ratios(reports["discrepancy-scale-1k"], reports["discrepancy-scale-10k"])
    ratios_ok = len(ratios) == 3 and all(1.5 <= r <= 8.0 for r in ratios)
    logger.info("discrepancy_ratio", ratios=[round(r, 3) for r in ratios], passed=ratios_ok)
    if not ratios_ok:
        failed.append("discrepancy-ratio")

    if failed:
        logger.error("acceptance_failed", recipes=failed)
        sys.exit(1)
    logger.info("acceptance_passed", recipes=len(CHECKS))


if __name__ == "__main__":
    asyncio.run(main())
