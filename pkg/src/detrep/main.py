"""Command-line interface for detrep."""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import Any

from detrep_core.constructions import list_available_constructions, waring_terms
from detrep_core.normal_form import normalize_regular
from detrep_core.oracles import TARGETS
from detrep_core.pencil import encode_number, export_pencil

from .bench import STRATEGIES, BenchOptions, parse_m_range, run_bench
from .config_manager import ConfigManager
from .rendering import render_pencil, render_report_table, render_waring
from .verification import EQUIVARIANCE_LEVELS, MODES, VerifyOptions, build_pencil, run_verification

# Set up module logger
logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
BUILD_CHOICES = [*list_available_constructions(), "waring"]

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2


def setup_logging(log_level=None, config_manager=None):
    """Configure logging for the application.

    Args:
        log_level: Log level string (DEBUG, INFO, WARNING, ERROR, CRITICAL)
                   If None, uses DETREP_LOG_LEVEL, then the config file, defaults to WARNING
        config_manager: ConfigManager instance (optional, for loading from config file)
    """
    log_file = None
    log_format = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
    if config_manager is not None:
        config = config_manager.load_config()
        log_file = config.logging.file
        log_format = config.logging.format

    # Determine log level: CLI arg > env var > config file > default
    if log_level is None:
        log_level = os.environ.get("DETREP_LOG_LEVEL")
        if log_level is None and config_manager is not None:
            log_level = config_manager.load_config().logging.level
        if log_level is None:
            log_level = "WARNING"

    numeric_level = getattr(logging, log_level.upper(), logging.WARNING)

    # stdout carries reports only
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_file:
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=numeric_level,
        format=log_format,
        datefmt="%Y-%m-%d %H:%M:%S",
        handlers=handlers,
    )

    logger.info(f"Logging configured with level: {log_level}")

    return log_level


def _emit(text: str, output: str | None) -> None:
    if output:
        path = Path(output)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n")
        logger.info(f"Wrote {path}")
    else:
        print(text)


def _load_config(args):
    return ConfigManager(getattr(args, "config", None)).load_config()


def waring_to_dict(n: int, symmetric: bool) -> dict[str, Any]:
    decomposition = waring_terms(n, symmetric)
    return {
        "construction": "waring",
        "n": decomposition.n,
        "symmetric": decomposition.symmetric,
        "rank": decomposition.rank,
        "terms": [
            {"coefficient": encode_number(coefficient), "signs": list(signs)}
            for coefficient, signs in decomposition.terms
        ],
    }


def cmd_build(args) -> int:
    """Build a construction and print it as JSON or as an aligned matrix."""
    config = _load_config(args)
    if args.construction == "waring":
        if args.pretty:
            text = render_waring(waring_terms(args.size, args.symmetric))
        else:
            text = json.dumps(
                waring_to_dict(args.size, args.symmetric), indent=config.output.json_indent
            )
        _emit(text, args.output)
        return EXIT_OK

    pencil = build_pencil(args.construction, args.size, exact_sign=not args.no_exact_sign)
    if args.normal_form:
        pencil = normalize_regular(pencil)
    if args.pretty:
        text = render_pencil(pencil, config.output.pretty_width)
    else:
        text = json.dumps(export_pencil(pencil), indent=config.output.json_indent)
    _emit(text, args.output)
    return EXIT_OK


def _parse_primes(text: str | None) -> tuple[int, ...]:
    if not text:
        return ()
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as e:
        raise ValueError(f"Invalid prime list {text!r}: {e}") from e


def _pick(value, default):
    return default if value is None else value


def cmd_verify(args) -> int:
    """Run the verification suite; exit 0 iff every check passes."""
    config = _load_config(args)
    verify = config.verify
    options = VerifyOptions(
        construction=args.construction,
        size=args.size,
        mode=args.mode,
        trials=_pick(args.trials, verify.trials),
        seed=_pick(args.seed, verify.seed),
        primes=_parse_primes(args.primes) or tuple(verify.primes),
        equivariance=args.equivariance,
        samples=_pick(args.samples, verify.samples),
        jobs=_pick(args.jobs, verify.jobs),
        symbolic_bound=_pick(args.symbolic_bound, verify.symbolic_bound),
        sign_check_bound=verify.path_sign_check_bound,
        float_check=args.float_check,
        exact_sign=not args.no_exact_sign,
        symmetric=args.symmetric,
        progress=args.progress,
    )
    report = run_verification(options)
    data = report.to_dict()
    if args.json:
        text = json.dumps(data, indent=config.output.json_indent)
    else:
        text = render_report_table(data)
    _emit(text, args.output)
    if not report.passed:
        failed = [check.check for check in report.checks if check.verdict == "fail"]
        print(f"Verification failed: {', '.join(failed)}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_bench(args) -> int:
    """Benchmark the permanent strategies; exit 1 on any cross-check mismatch."""
    config = _load_config(args)
    bench = config.bench
    strategies = args.strategies.split(",") if args.strategies else list(bench.strategies)
    options = BenchOptions(
        m_values=parse_m_range(_pick(args.m_range, bench.m_range)),
        strategies=[s.strip() for s in strategies if s.strip()],
        trials=_pick(args.trials, bench.trials),
        seed=_pick(args.seed, bench.seed),
        entry_bound=bench.entry_bound,
        naive_max_m=bench.naive_max_m,
        dense_max_n=bench.dense_max_n,
        omit_timing=args.omit_timing,
        progress=args.progress,
    )
    result = run_bench(options)
    if args.format == "json":
        text = result.to_json(config.output.json_indent)
    else:
        text = result.to_csv().rstrip("\n")
    _emit(text, args.output)
    if not result.passed:
        print(f"Cross-check failed for {len(result.mismatches)} strategy/size pairs", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_list(args) -> int:
    """List constructions, targets and benchmark strategies."""
    print("Constructions:")
    for name in BUILD_CHOICES:
        print(f"  {name}")
    print("Targets:")
    for name in TARGETS:
        print(f"  {name}")
    print("Benchmark strategies:")
    for name in STRATEGIES:
        print(f"  {name}")
    return EXIT_OK


def _add_size_argument(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "-m",
        "--m",
        "--n",
        "--s",
        "--M",
        dest="size",
        type=int,
        required=True,
        metavar="SIZE",
        help="Size parameter: m for perm/det constructions, s or M for quadrics, n for waring",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="detrep",
        description="Exact determinantal representations - build, verify and benchmark pencils",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
 Examples:
  # Print Grenet's 7x7 representation of the 3x3 permanent
  detrep build grenet --m 3 --pretty

  # Verify an equivariant representation by random evaluation
  detrep verify equivariant-det --m 3 --mode pit --trials 20 --seed 7 --equivariance full

  # Benchmark permanent evaluation strategies
  detrep bench --m-range 2-7 --format json --omit-timing
        """,
    )
    parser.add_argument(
        "--log-level",
        type=str,
        default=None,
        choices=LOG_LEVELS,
        help="Set logging level (default: WARNING, can also be set via DETREP_LOG_LEVEL env var)",
    )
    parser.add_argument(
        "--config", type=str, default=None, help="Path to a YAML configuration file"
    )

    subparsers = parser.add_subparsers(dest="command", help="Available commands")

    # Build command
    build_parser_ = subparsers.add_parser("build", help="Build a construction and export it")
    build_parser_.add_argument("construction", choices=BUILD_CHOICES, help="Construction name")
    _add_size_argument(build_parser_)
    build_parser_.add_argument(
        "--pretty", action="store_true", help="Print an aligned matrix instead of JSON"
    )
    build_parser_.add_argument(
        "--symmetric",
        action="store_true",
        help="Use the symmetric 2^n-term waring decomposition",
    )
    build_parser_.add_argument(
        "--no-exact-sign",
        action="store_true",
        help="Build grenet with determinant (-1)^(m+1) * perm instead of exactly perm",
    )
    build_parser_.add_argument(
        "--normal-form",
        action="store_true",
        help="Transform the pencil so its constant part is diag(0, 1, ..., 1)",
    )
    build_parser_.add_argument("--output", "-o", type=str, default=None, help="Write to file")

    # Verify command
    verify_parser = subparsers.add_parser("verify", help="Verify identity, regularity and symmetry")
    verify_parser.add_argument("construction", choices=BUILD_CHOICES, help="Construction name")
    _add_size_argument(verify_parser)
    verify_parser.add_argument(
        "--mode", choices=MODES, default="all", help="Identity check mode (default: all)"
    )
    verify_parser.add_argument(
        "--trials", type=int, default=None, help="PIT trials (default: from config or 20)"
    )
    verify_parser.add_argument(
        "--seed", type=int, default=None, help="Random seed (default: from config or 0)"
    )
    verify_parser.add_argument(
        "--primes", type=str, default=None, help="Comma-separated primes for PIT"
    )
    verify_parser.add_argument(
        "--equivariance",
        choices=EQUIVARIANCE_LEVELS,
        default="none",
        help="Equivariance checks to run (default: none)",
    )
    verify_parser.add_argument(
        "--samples",
        type=int,
        default=None,
        help="Group elements per equivariance suite (default: from config or 20)",
    )
    verify_parser.add_argument(
        "--jobs", type=int, default=None, help="Parallel PIT workers (default: from config or 1)"
    )
    verify_parser.add_argument(
        "--symbolic-bound",
        type=int,
        default=None,
        help="Largest n for the symbolic expansion (default: from config or 24)",
    )
    verify_parser.add_argument(
        "--float-check", action="store_true", help="Add the floating-point rescaling check"
    )
    verify_parser.add_argument(
        "--no-exact-sign", action="store_true", help="Verify grenet without the sign fix"
    )
    verify_parser.add_argument(
        "--symmetric", action="store_true", help="Verify the symmetric waring decomposition"
    )
    verify_parser.add_argument("--json", action="store_true", help="Print the report as JSON")
    verify_parser.add_argument("--progress", action="store_true", help="Show progress bars")
    verify_parser.add_argument("--output", "-o", type=str, default=None, help="Write to file")

    # Bench command
    bench_parser = subparsers.add_parser("bench", help="Benchmark permanent evaluation")
    bench_parser.add_argument(
        "--m-range", type=str, default=None, help="Sizes, e.g. 2-7, 5 or 2,4,6 (default: 2-7)"
    )
    bench_parser.add_argument(
        "--strategies",
        type=str,
        default=None,
        help=f"Comma-separated strategies from {', '.join(STRATEGIES)} (default: all)",
    )
    bench_parser.add_argument(
        "--trials", type=int, default=None, help="Seeded matrices per size (default: 10)"
    )
    bench_parser.add_argument("--seed", type=int, default=None, help="Random seed (default: 0)")
    bench_parser.add_argument(
        "--format", choices=["csv", "json"], default="csv", help="Output format (default: csv)"
    )
    bench_parser.add_argument(
        "--omit-timing",
        action="store_true",
        help="Drop wall-clock fields so output is identical across runs",
    )
    bench_parser.add_argument("--progress", action="store_true", help="Show a progress bar")
    bench_parser.add_argument("--output", "-o", type=str, default=None, help="Write to file")

    subparsers.add_parser("list", help="List constructions, targets and strategies")

    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse ``argv`` and dispatch; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)

    # Setup logging based on args, environment, or config file
    log_level = getattr(args, "log_level", None)
    config_manager = ConfigManager(args.config)
    try:
        setup_logging(log_level, config_manager)
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE

    try:
        if args.command == "build":
            return cmd_build(args)
        elif args.command == "verify":
            return cmd_verify(args)
        elif args.command == "bench":
            return cmd_bench(args)
        elif args.command == "list":
            return cmd_list(args)
        else:
            parser.print_help()
            return EXIT_USAGE
    except ValueError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except RuntimeError as e:
        logger.error(f"Internal consistency check failed: {e}")
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
