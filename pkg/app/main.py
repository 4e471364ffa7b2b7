"""
Command-line interface.

Every subcommand prints JSON to stdout (or writes it to --json) and returns
exit code 0 on success, 1 when an input or numerical error stops it.
"""
import argparse
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

import orjson
import structlog
from pydantic import ValidationError

from app.config import settings
from app.correlation import ppc_statistic, s_grid_gap_ratio, smoothed_pair_statistic, weak_ppc_statistic
from app.discrepancy import star_discrepancy_1d, star_discrepancy_box
from app.errors import InputError, PPCError
from app.experiment import dump_report, emit_curves, load_config, run_experiment, write_report
from app.generators import generate
from app.kernels import (
    box_fourier_coeff_quadrature,
    kernel_table,
    parseval_check,
    triangle_fourier_coeff_quadrature,
)
from app.logging_config import configure_logging
from app.metrics import write_metrics
from app.models import Algorithm, Family, GeneratorSpec, KernelParams, NormKind
from app.points_io import read_points, write_points
from app.recipes import get_recipe, recipe_names
from app.spectrum import ppc_functional, weak_functional, weyl_criterion_scan

logger = structlog.get_logger(__name__)


def _floats(text: str) -> List[float]:
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of numbers: {text!r}") from e


def _ints(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected a comma separated list of integers: {text!r}") from e


def _emit(payload: Any, path: Optional[str]) -> None:
    data = orjson.dumps(payload, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS)
    if path:
        Path(path).write_bytes(data)
        logger.info("json_written", path=path)
    else:
        sys.stdout.write(data.decode("utf-8") + "\n")


def _dump_all(models) -> list:
    return [m.model_dump(mode="json") for m in models]


def cmd_generate(args: argparse.Namespace) -> int:
    fields = {"family": args.family, "dim": args.dim, "count": args.n}
    for name in ("seed", "alpha", "bases", "clusters"):
        value = getattr(args, name)
        if value is not None:
            fields[name] = value
    ps = generate(GeneratorSpec(**fields))
    write_points(ps, args.out)
    return 0


def cmd_paircorr(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    norm, algorithm = NormKind(args.norm), Algorithm(args.algorithm)
    if args.alpha == 1.0:
        results = [ppc_statistic(ps, s, norm, algorithm) for s in args.s]
    else:
        results = [weak_ppc_statistic(ps, s, args.alpha, algorithm) for s in args.s]
    if args.gap_ratio:
        logger.info("s_grid_gap_ratio", value=s_grid_gap_ratio(sorted(set(args.s))))
    _emit(_dump_all(results), args.json)
    return 0


def cmd_spectrum(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    scan = weyl_criterion_scan(ps, args.lmax, args.t)
    payload = scan.summary().model_dump(mode="json")
    if args.full:
        payload["entries"] = [
            {"ell": list(ell), "magnitude": value} for ell, value in scan.as_dict().items()
        ]
    _emit(payload, args.json)
    return 0


def cmd_certify(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    if args.alpha == 1.0:
        certs = [ppc_functional(ps, t) for t in args.t]
    else:
        certs = [weak_functional(ps, t, args.alpha, args.c_alpha) for t in args.t]
    _emit(_dump_all(certs), args.json)
    return 0


def cmd_parseval(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    tol = args.tol if args.tol is not None else 0.01 * float(ps.n) ** 2
    report = parseval_check(ps, KernelParams(dim=ps.dim, delta=args.delta), tol)
    _emit(report.model_dump(mode="json"), args.json)
    return 0 if report.consistent else 1


def cmd_discrepancy(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    results = [star_discrepancy_box(ps, args.resolution)]
    if ps.dim == 1:
        results.append(star_discrepancy_1d(ps))
    _emit(_dump_all(results), args.json)
    return 0


def cmd_smoothed(args: argparse.Namespace) -> int:
    ps = read_points(args.input)
    _emit(_dump_all(smoothed_pair_statistic(ps, d) for d in args.delta), args.json)
    return 0


def cmd_kernel(args: argparse.Namespace) -> int:
    kp = KernelParams(dim=args.dim, delta=args.delta)
    ell = args.ell if args.ell else [1] * args.dim
    if len(ell) != args.dim:
        raise InputError(f"--ell needs {args.dim} components, got {len(ell)}")
    table = kernel_table(kp, ell)
    if args.check:
        table["g_hat_quadrature"] = box_fourier_coeff_quadrature(kp, ell)
        table["f_hat_quadrature"] = triangle_fourier_coeff_quadrature(kp, ell)
    _emit(table, None)
    return 0


def cmd_run(args: argparse.Namespace) -> int:
    cfg = get_recipe(args.recipe) if args.recipe else load_config(args.config)
    report = run_experiment(cfg, parallel=args.parallel)
    output = args.out or cfg.output
    if output:
        write_report(report, output)
    else:
        sys.stdout.write(dump_report(report).decode("utf-8") + "\n")
    if args.emit_curves:
        emit_curves(report, args.emit_curves)
    if args.metrics_file:
        write_metrics(args.metrics_file)
    return 0


def cmd_version(args: argparse.Namespace) -> int:
    sys.stdout.write(settings.tool_banner + "\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppc", description="Pair correlation and Weyl-sum diagnostics on the torus")
    parser.add_argument("--log-level", default=None, help="override LOG_LEVEL")
    parser.add_argument("--log-format", choices=["console", "json"], default=None, help="override LOG_FORMAT")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a generated point set")
    p.add_argument("--family", required=True, choices=[f.value for f in Family])
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--alpha", type=_floats)
    p.add_argument("--bases", type=_ints)
    p.add_argument("--clusters", type=int)
    p.add_argument("--out", required=True)
    p.set_defaults(handler=cmd_generate)

    p = sub.add_parser("paircorr", help="pair correlation statistic over an s grid")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--s", type=_floats, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--norm", choices=[k.value for k in NormKind], default=NormKind.EUCLIDEAN.value)
    p.add_argument("--algorithm", choices=[a.value for a in Algorithm], default=Algorithm.CELLS.value)
    p.add_argument("--gap-ratio", action="store_true", help="log the s-grid gap ratio")
    p.add_argument("--json")
    p.set_defaults(handler=cmd_paircorr)

    p = sub.add_parser("spectrum", help="Weyl criterion scan over a lattice ball")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--lmax", type=float, required=True)
    p.add_argument("--t", type=float)
    p.add_argument("--full", action="store_true", help="include every |S_N(l)|/N")
    p.add_argument("--json")
    p.set_defaults(handler=cmd_spectrum)

    p = sub.add_parser("certify", help="exponential-sum bound certificates")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--t", type=_floats, required=True)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--c-alpha", type=float)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("parseval", help="kernel Parseval oracle")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--tol", type=float)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_parseval)

    p = sub.add_parser("discrepancy", help="star discrepancy")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--resolution", type=int, default=64)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_discrepancy)

    p = sub.add_parser("smoothed", help="smoothed kernel pair statistic")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--delta", type=_floats, required=True)
    p.add_argument("--json")
    p.set_defaults(handler=cmd_smoothed)

    p = sub.add_parser("kernel", help="print kernel values for inspection")
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--ell", type=_ints)
    p.add_argument("--check", action="store_true", help="add quadrature cross-checks")
    p.set_defaults(handler=cmd_kernel)

    p = sub.add_parser("run", help="run an experiment config or recipe")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--config")
    source.add_argument("--recipe", choices=recipe_names())
    p.add_argument("--out")
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--emit-curves", metavar="DIR")
    p.add_argument("--metrics-file")
    p.set_defaults(handler=cmd_run)

    p = sub.add_parser("version", help="print tool version")
    p.set_defaults(handler=cmd_version)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.log_level, args.log_format)
    try:
        return args.handler(args)
    except (PPCError, ValidationError) as e:
        logger.error("command_failed", command=args.command, error=str(e))
        return 1


if __name__ == "__main__":
    sys.exit(main())
