"""
Experiment orchestration: config loading, generator + analyses per seed,
report serialization and curve tables.

Analyses run in the configured order. With `parallel=True` the analyses of
one seed run concurrently in worker threads; records are still reported in
configured order.
"""
import asyncio
import sys
import time

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

import numpy as np
import orjson
import structlog
from pydantic import ValidationError

from app.config import settings
from app.correlation import ppc_statistic, s_grid_gap_ratio, smoothed_pair_statistic, weak_ppc_statistic
from app.discrepancy import star_discrepancy_1d, star_discrepancy_box
from app.errors import ExperimentError, InputError, PPCError
from app.generators import generate
from app.kernels import parseval_check
from app.metrics import analyses_total, analysis_duration
from app.models import Family, KernelParams, PointSet
from app.schemas import (
    CertifyAnalysis,
    CertifyRecord,
    DiscrepancyAnalysis,
    DiscrepancyRecord,
    ExperimentConfig,
    PairCorrAnalysis,
    PairCorrRecord,
    ParsevalAnalysis,
    ParsevalRecord,
    Report,
    SmoothedAnalysis,
    SmoothedRecord,
    SpectrumAnalysis,
    SpectrumRecord,
)
from app.spectrum import ppc_functional, weak_functional, weyl_criterion_scan

logger = structlog.get_logger(__name__)

PathLike = Union[str, Path]

_SEEDED = {Family.RANDOM, Family.CLUSTERED}


def _paircorr(ps: PointSet, spec: PairCorrAnalysis) -> dict:
    if spec.alpha == 1.0:
        results = [ppc_statistic(ps, s, spec.norm, spec.algorithm) for s in spec.s]
    else:
        results = [weak_ppc_statistic(ps, s, spec.alpha, spec.algorithm) for s in spec.s]
    ordered = sorted(set(spec.s))
    gap = s_grid_gap_ratio(ordered) if len(ordered) >= 2 else None
    return {"results": results, "s_gap_ratio": gap}


def _certify(ps: PointSet, spec: CertifyAnalysis) -> dict:
    if spec.alpha == 1.0:
        return {"results": [ppc_functional(ps, t) for t in spec.t]}
    return {"results": [weak_functional(ps, t, spec.alpha, spec.c_alpha) for t in spec.t]}


def _spectrum(ps: PointSet, spec: SpectrumAnalysis) -> dict:
    return {"result": weyl_criterion_scan(ps, spec.lmax, spec.t).summary()}


def _parseval(ps: PointSet, spec: ParsevalAnalysis) -> dict:
    tol = spec.tol if spec.tol is not None else 0.01 * float(ps.n) ** 2
    return {"result": parseval_check(ps, KernelParams(dim=ps.dim, delta=spec.delta), tol)}


def _discrepancy(ps: PointSet, spec: DiscrepancyAnalysis) -> dict:
    results = [star_discrepancy_box(ps, spec.resolution)]
    if ps.dim == 1:
        results.append(star_discrepancy_1d(ps))
    return {"results": results}


def _smoothed(ps: PointSet, spec: SmoothedAnalysis) -> dict:
    scale = float(ps.n) ** (-1.0 / ps.dim) if spec.scaled else 1.0
    return {"results": [smoothed_pair_statistic(ps, d * scale) for d in spec.delta]}


_RUNNERS: Dict[str, tuple] = {
    "paircorr": (_paircorr, PairCorrRecord),
    "certify": (_certify, CertifyRecord),
    "spectrum": (_spectrum, SpectrumRecord),
    "parseval": (_parseval, ParsevalRecord),
    "discrepancy": (_discrepancy, DiscrepancyRecord),
    "smoothed": (_smoothed, SmoothedRecord),
}


def run_analysis(ps: PointSet, index: int, spec, seed: Optional[int] = None):
    """Run one analysis and wrap its output in the matching report record."""
    runner, record_cls = _RUNNERS[spec.kind]
    params = spec.model_dump(mode="json")
    start = time.perf_counter()
    try:
        payload = runner(ps, spec)
    except (PPCError, ValidationError, ValueError) as e:
        analyses_total.labels(kind=spec.kind, status="error").inc()
        error = ExperimentError("analysis", str(e), index=index, kind=spec.kind, params=params, seed=seed)
        logger.error("analysis_failed", **error.to_dict())
        raise error from e
    elapsed = time.perf_counter() - start
    analyses_total.labels(kind=spec.kind, status="ok").inc()
    analysis_duration.labels(kind=spec.kind).observe(elapsed)
    logger.info("analysis_done", index=index, kind=spec.kind, seed=seed, seconds=round(elapsed, 6))
    return record_cls(index=index, seed=seed, params=params, wall_clock_seconds=elapsed, **payload)


def _seed_list(cfg: ExperimentConfig) -> List[Optional[int]]:
    if cfg.generator.family not in _SEEDED:
        if cfg.seeds:
            logger.warning("seeds_ignored", family=cfg.generator.family.value)
        return [None]
    return list(cfg.seeds) or [cfg.generator.seed]


def _generate(cfg: ExperimentConfig, seed: Optional[int]) -> PointSet:
    spec = cfg.generator if seed is None else cfg.generator.model_copy(update={"seed": seed})
    try:
        return generate(spec)
    except (PPCError, ValueError) as e:
        error = ExperimentError("generator", str(e), params=spec.model_dump(mode="json"), seed=seed)
        logger.error("generator_failed", **error.to_dict())
        raise error from e


async def run_experiment_async(cfg: ExperimentConfig, parallel: bool = False) -> Report:
    """Generator then every analysis, per seed; see run_experiment."""
    records = []
    limiter = asyncio.Semaphore(settings.PPC_THREADS)

    async def bounded(ps: PointSet, index: int, spec, seed):
        async with limiter:
            return await asyncio.to_thread(run_analysis, ps, index, spec, seed)

    for seed in _seed_list(cfg):
        ps = _generate(cfg, seed)
        if parallel:
            records.extend(
                await asyncio.gather(*(bounded(ps, i, spec, seed) for i, spec in enumerate(cfg.analyses)))
            )
        else:
            for i, spec in enumerate(cfg.analyses):
                records.append(run_analysis(ps, i, spec, seed))

    return Report(
        tool_name=settings.TOOL_NAME,
        tool_version=settings.TOOL_VERSION,
        config=cfg,
        records=records,
    )


def run_experiment(cfg: ExperimentConfig, parallel: bool = False) -> Report:
    """
    Execute `cfg` and return its Report.

    The run is deterministic given the config; the first failing stage aborts
    with an ExperimentError naming the stage, analysis index and parameters.
    """
    return asyncio.run(run_experiment_async(cfg, parallel=parallel))


def load_config(path: PathLike) -> ExperimentConfig:
    """Parse a TOML or JSON experiment document."""
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e.strerror or e}") from e
    try:
        if path.suffix == ".toml":
            data = tomllib.loads(raw.decode("utf-8"))
        elif path.suffix == ".json":
            data = orjson.loads(raw)
        else:
            raise InputError(f"unsupported config format {path.suffix!r} (use .toml or .json)")
    except (tomllib.TOMLDecodeError, orjson.JSONDecodeError, UnicodeDecodeError) as e:
        raise InputError(f"cannot parse config {path}: {e}") from e
    return parse_config(data, source=str(path))


def parse_config(data: dict, source: str = "<config>") -> ExperimentConfig:
    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise InputError(f"invalid experiment config {source}: {e}") from e


def dump_json(model) -> bytes:
    """UTF-8 JSON with sorted snake_case keys and two-space indent."""
    return orjson.dumps(model.model_dump(mode="json"), option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)


def dump_report(report: Report) -> bytes:
    return dump_json(report)


def parse_report(data: Union[bytes, str]) -> Report:
    return Report.model_validate(orjson.loads(data))


def write_report(report: Report, path: PathLike) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(dump_report(report))
    logger.info("report_written", path=str(path), records=len(report.records))


def _curve(report: Report, kind: str, row: Callable) -> np.ndarray:
    rows = [row(rec.seed, res) for rec in report.records if rec.kind == kind for res in rec.results]
    # object rows keep 64-bit seeds exact
    return np.array(rows, dtype=object).reshape(-1, 4)


def emit_curves(report: Report, directory: PathLike) -> List[Path]:
    """
    Write paircorr_curve.csv (seed, s, normalized, target) and
    certify_curve.csv (seed, t, functional, bound). Seed -1 marks an unseeded family.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    seed_of = lambda seed: -1 if seed is None else seed  # noqa: E731
    tables = {
        "paircorr_curve.csv": (
            "seed,s,normalized,target",
            _curve(report, "paircorr", lambda seed, r: (seed_of(seed), r.s, r.normalized, r.target)),
        ),
        "certify_curve.csv": (
            "seed,t,functional,bound",
            _curve(report, "certify", lambda seed, r: (seed_of(seed), r.t, r.functional, r.bound)),
        ),
    }
    written = []
    for name, (header, table) in tables.items():
        path = directory / name
        np.savetxt(path, table, fmt=["%d", "%.17g", "%.17g", "%.17g"], delimiter=",", header=header, comments="")
        written.append(path)
    logger.info("curves_written", directory=str(directory), files=[p.name for p in written])
    return written
