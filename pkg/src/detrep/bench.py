"""Benchmark permanent evaluation: classical oracles against Grenet pencils."""

import csv
import hashlib
import io
import json
import logging
import math
import statistics
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np
from tqdm import tqdm

from detrep_core.constructions import SizeGuardError, grenet
from detrep_core.determinants import PathEvaluator, PathStats
from detrep_core.linalg import det_exact
from detrep_core.oracles import RyserStats, perm_naive, perm_ryser
from detrep_core.pencil import PencilMatrix, pencil_eval

logger = logging.getLogger(__name__)

STRATEGIES = ("ryser", "naive", "pencil-dense", "pencil-path")
PENCIL_STRATEGIES = frozenset({"pencil-dense", "pencil-path"})
CSV_COLUMNS = ("construction", "m", "n", "strategy", "trials", "median_ns", "checksum", "ops")


def parse_m_range(text: str) -> list[int]:
    """Parse ``"2-7"``, ``"5"`` or ``"2,4,6"`` (and mixtures) into sorted sizes."""
    values: set[int] = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                low, high = (int(x) for x in part.split("-", 1))
                if low > high:
                    raise ValueError(f"Empty range {part}")
                values.update(range(low, high + 1))
            else:
                values.add(int(part))
        except ValueError as e:
            raise ValueError(f"Invalid m range {text!r}: {e}") from e
    if not values:
        raise ValueError(f"Invalid m range {text!r}: no sizes given")
    if min(values) < 1:
        raise ValueError(f"Invalid m range {text!r}: sizes must be positive")
    return sorted(values)


def parse_strategies(names: Sequence[str]) -> list[str]:
    """Validate strategy names, keeping the canonical order."""
    unknown = [name for name in names if name not in STRATEGIES]
    if unknown:
        raise ValueError(
            f"Unknown strategy: {unknown[0]}. Available strategies: {', '.join(STRATEGIES)}"
        )
    return [name for name in STRATEGIES if name in names]


def dense_operations(n: int) -> int:
    """Multiplications of single-step Bareiss elimination on an ``n × n`` matrix."""
    return sum(2 * (n - k - 1) ** 2 for k in range(n - 1))


def naive_operations(m: int) -> int:
    return math.factorial(m) * (m - 1)


def checksum(values: Sequence[int]) -> str:
    return hashlib.sha256(",".join(str(v) for v in values).encode()).hexdigest()[:16]


def random_matrices(m: int, trials: int, seed: int, entry_bound: int) -> list[list[list[int]]]:
    """Seeded integer matrices with entries in ``[-entry_bound, entry_bound]``."""
    rng = np.random.default_rng((seed, m))
    return [
        rng.integers(-entry_bound, entry_bound + 1, size=(m, m)).tolist() for _ in range(trials)
    ]


@dataclass
class BenchOptions:
    m_values: list[int]
    strategies: list[str] = field(default_factory=lambda: list(STRATEGIES))
    trials: int = 10
    seed: int = 0
    entry_bound: int = 9
    naive_max_m: int = 10
    dense_max_n: int = 255
    omit_timing: bool = False
    progress: bool = False


@dataclass
class BenchRow:
    construction: str
    m: int
    n: int
    strategy: str
    trials: int
    median_ns: int | None
    checksum: str
    ops: int


@dataclass
class BenchResult:
    options: BenchOptions
    rows: list[BenchRow] = field(default_factory=list)
    build_ns: dict[int, int] = field(default_factory=dict)
    refused: list[dict[str, Any]] = field(default_factory=list)
    mismatches: list[dict[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.mismatches

    def to_dict(self) -> dict[str, Any]:
        rows = [asdict(row) for row in self.rows]
        data: dict[str, Any] = {
            "seed": self.options.seed,
            "trials": self.options.trials,
            "entry_bound": self.options.entry_bound,
            "verdict": "pass" if self.passed else "fail",
            "results": rows,
            "refused": self.refused,
            "mismatches": self.mismatches,
        }
        if self.options.omit_timing:
            for row in rows:
                del row["median_ns"]
        else:
            data["build_ns"] = {str(m): ns for m, ns in sorted(self.build_ns.items())}
        return data

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in self.rows:
            data = asdict(row)
            if self.options.omit_timing:
                data["median_ns"] = ""
            writer.writerow(data)
        return buffer.getvalue()


def _timed(evaluate: Callable[[Any], int], matrices: list[list[list[int]]]) -> tuple[list[int], int]:
    values = []
    durations = []
    for matrix in matrices:
        start = time.perf_counter_ns()
        values.append(evaluate(matrix))
        durations.append(time.perf_counter_ns() - start)
    return values, int(statistics.median(durations))


def _refuse(result: BenchResult, m: int, strategy: str, reason: str) -> None:
    logger.warning(f"Refusing {strategy} at m={m}: {reason}")
    result.refused.append({"m": m, "strategy": strategy, "reason": reason})


def _build_pencil(m: int, result: BenchResult) -> PencilMatrix | str:
    start = time.perf_counter_ns()
    try:
        pencil = grenet(m)
    except SizeGuardError as e:
        return str(e)
    result.build_ns[m] = time.perf_counter_ns() - start
    return pencil


def _bench_size(m: int, options: BenchOptions, result: BenchResult) -> None:
    matrices = random_matrices(m, options.trials, options.seed, options.entry_bound)
    pencil: PencilMatrix | str | None = None
    if PENCIL_STRATEGIES & set(options.strategies):
        pencil = _build_pencil(m, result)
    values_by_strategy: dict[str, list[int]] = {}

    for strategy in options.strategies:
        construction, n = "oracle", m
        if strategy == "ryser":
            stats = RyserStats()
            perm_ryser(matrices[0], stats)
            ops = stats.multiplications
            values, median_ns = _timed(perm_ryser, matrices)
        elif strategy == "naive":
            if m > options.naive_max_m:
                _refuse(result, m, strategy, f"m exceeds the naive limit {options.naive_max_m}")
                continue
            ops = naive_operations(m)
            values, median_ns = _timed(
                lambda x: perm_naive(x, limit=options.naive_max_m), matrices
            )
        else:
            if not isinstance(pencil, PencilMatrix):
                _refuse(result, m, strategy, str(pencil))
                continue
            construction, n = pencil.meta.construction, pencil.n
            if strategy == "pencil-dense":
                if n > options.dense_max_n:
                    _refuse(result, m, strategy, f"n={n} exceeds the dense limit {options.dense_max_n}")
                    continue
                ops = dense_operations(n)
                values, median_ns = _timed(lambda x: det_exact(pencil_eval(pencil, x)), matrices)
            else:
                evaluator = PathEvaluator(pencil)
                path_stats = PathStats()
                evaluator(matrices[0], path_stats)
                ops = path_stats.multiplications
                values, median_ns = _timed(evaluator, matrices)
        values_by_strategy[strategy] = values
        result.rows.append(
            BenchRow(construction, m, n, strategy, options.trials, median_ns, checksum(values), ops)
        )

    reference = next(iter(values_by_strategy.items()), None)
    if reference is None:
        return
    reference_name, reference_values = reference
    for strategy, values in values_by_strategy.items():
        for index, (expected, actual) in enumerate(zip(reference_values, values, strict=True)):
            if expected != actual:
                logger.error(f"{strategy} disagrees with {reference_name} at m={m}, matrix {index}")
                result.mismatches.append(
                    {
                        "m": m,
                        "strategy": strategy,
                        "reference": reference_name,
                        "matrix": matrices[index],
                        "value": actual,
                        "expected": expected,
                    }
                )
                break


def run_bench(options: BenchOptions) -> BenchResult:
    """Time every strategy on the same seeded matrices and cross-check the values."""
    if options.trials < 1:
        raise ValueError(f"Trial count must be positive, got {options.trials}")
    strategies = parse_strategies(options.strategies)
    options.strategies = strategies
    result = BenchResult(options)
    for m in tqdm(options.m_values, desc="bench", disable=not options.progress):
        logger.info(f"Benchmarking m={m} with {', '.join(strategies)}")
        _bench_size(m, options, result)
    return result
