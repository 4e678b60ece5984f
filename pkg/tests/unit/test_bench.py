"""
Unit tests for the permanent benchmark.
"""

import csv
import io
import json
import unittest
from unittest.mock import patch

from detrep.bench import (
    CSV_COLUMNS,
    BenchOptions,
    checksum,
    dense_operations,
    naive_operations,
    parse_m_range,
    parse_strategies,
    random_matrices,
    run_bench,
)


class TestParsing(unittest.TestCase):
    """Test size ranges and strategy lists."""

    def test_parse_m_range(self):
        self.assertEqual(parse_m_range("2-7"), [2, 3, 4, 5, 6, 7])
        self.assertEqual(parse_m_range("5"), [5])
        self.assertEqual(parse_m_range("6,2,4"), [2, 4, 6])
        self.assertEqual(parse_m_range("2-3, 3-4, 8"), [2, 3, 4, 8])

    def test_parse_m_range_errors(self):
        for text in ("", ",", "a", "4-2", "0-3", "2-x"):
            with self.subTest(text=text):
                with self.assertRaises(ValueError):
                    parse_m_range(text)

    def test_parse_strategies(self):
        self.assertEqual(parse_strategies(["pencil-path", "ryser"]), ["ryser", "pencil-path"])
        with self.assertRaises(ValueError) as context:
            parse_strategies(["ryser", "gauss"])
        self.assertIn("Unknown strategy: gauss", str(context.exception))


class TestHelpers(unittest.TestCase):
    """Test operation counts and seeded inputs."""

    def test_operation_counts(self):
        self.assertEqual(dense_operations(1), 0)
        self.assertEqual(dense_operations(2), 2)
        self.assertEqual(dense_operations(3), 10)
        self.assertEqual(naive_operations(1), 0)
        self.assertEqual(naive_operations(3), 12)

    def test_checksum(self):
        self.assertEqual(checksum([1, 2, 3]), checksum([1, 2, 3]))
        self.assertNotEqual(checksum([1, 2, 3]), checksum([3, 2, 1]))
        self.assertEqual(len(checksum([])), 16)

    def test_random_matrices(self):
        first = random_matrices(3, 4, seed=1, entry_bound=2)
        self.assertEqual(first, random_matrices(3, 4, seed=1, entry_bound=2))
        self.assertNotEqual(first, random_matrices(3, 4, seed=2, entry_bound=2))
        self.assertEqual(len(first), 4)
        self.assertTrue(all(-2 <= x <= 2 for matrix in first for row in matrix for x in row))


class TestRunBench(unittest.TestCase):
    """Test benchmark runs and their reports."""

    def _options(self, **overrides):
        options = {"m_values": [2, 3, 4], "trials": 3, "seed": 5, "omit_timing": True}
        options.update(overrides)
        return BenchOptions(**options)

    def test_all_strategies_agree(self):
        result = run_bench(self._options())
        self.assertTrue(result.passed)
        self.assertEqual(len(result.rows), 12)
        for m in (2, 3, 4):
            rows = [row for row in result.rows if row.m == m]
            self.assertEqual(len({row.checksum for row in rows}), 1)

    def test_row_fields(self):
        result = run_bench(self._options(omit_timing=False))
        path_rows = [row for row in result.rows if row.strategy == "pencil-path"]
        for row in path_rows:
            self.assertEqual(row.construction, "grenet")
            self.assertEqual(row.n, 2**row.m - 1)
            self.assertEqual(row.ops, row.m * 2 ** (row.m - 1))
            self.assertIsNotNone(row.median_ns)
        naive_rows = [row for row in result.rows if row.strategy == "naive"]
        self.assertEqual([(row.construction, row.n) for row in naive_rows], [("oracle", m) for m in (2, 3, 4)])
        self.assertEqual(sorted(result.build_ns), [2, 3, 4])

    def test_deterministic_without_timing(self):
        first = run_bench(self._options()).to_json()
        second = run_bench(self._options()).to_json()
        self.assertEqual(first, second)
        data = json.loads(first)
        self.assertNotIn("build_ns", data)
        self.assertTrue(all("median_ns" not in row for row in data["results"]))
        self.assertEqual(data["verdict"], "pass")

    def test_csv(self):
        result = run_bench(self._options(m_values=[3], strategies=["ryser", "pencil-dense"]))
        rows = list(csv.DictReader(io.StringIO(result.to_csv())))
        self.assertEqual(tuple(rows[0]), CSV_COLUMNS)
        self.assertEqual([row["strategy"] for row in rows], ["ryser", "pencil-dense"])
        self.assertEqual(rows[1]["n"], "7")
        self.assertEqual(rows[1]["ops"], str(dense_operations(7)))
        self.assertEqual(rows[0]["median_ns"], "")

    def test_refusals(self):
        result = run_bench(self._options(m_values=[4], naive_max_m=3, dense_max_n=7))
        self.assertTrue(result.passed)
        refused = {(entry["m"], entry["strategy"]) for entry in result.refused}
        self.assertEqual(refused, {(4, "naive"), (4, "pencil-dense")})
        self.assertEqual([row.strategy for row in result.rows], ["ryser", "pencil-path"])

    def test_naive_refused_at_m12(self):
        result = run_bench(self._options(m_values=[12], strategies=["ryser", "naive"], trials=1))
        self.assertTrue(result.passed)
        self.assertEqual([row.strategy for row in result.rows], ["ryser"])
        self.assertEqual(result.refused[0]["strategy"], "naive")

    def test_pencils_refused_below_m2(self):
        result = run_bench(self._options(m_values=[1, 2], strategies=["ryser", "pencil-path"]))
        self.assertTrue(result.passed)
        self.assertEqual(
            [(row.m, row.strategy) for row in result.rows],
            [(1, "ryser"), (2, "ryser"), (2, "pencil-path")],
        )
        self.assertEqual(len(result.refused), 1)
        self.assertEqual(result.refused[0]["m"], 1)
        self.assertIn("sizes 2..", result.refused[0]["reason"])

    def test_mismatch_is_reported(self):
        with patch("detrep.bench.perm_naive", side_effect=lambda matrix, limit=10: 0):
            result = run_bench(self._options(m_values=[3], strategies=["ryser", "naive"]))
        self.assertFalse(result.passed)
        mismatch = result.mismatches[0]
        self.assertEqual(mismatch["strategy"], "naive")
        self.assertEqual(mismatch["reference"], "ryser")
        self.assertEqual(mismatch["value"], 0)
        self.assertEqual(result.to_dict()["verdict"], "fail")

    def test_invalid_trials(self):
        with self.assertRaises(ValueError):
            run_bench(self._options(trials=0))


if __name__ == "__main__":
    unittest.main()
