"""
Unit tests for the verification suites.
"""

import unittest

from detrep.verification import (
    VerifyOptions,
    build_pencil,
    equivariance_suite,
    run_verification,
)
from detrep_core.determinants import SymbolicBoundError


def _checks(report):
    return [(check.check, check.mode, check.verdict) for check in report.checks]


class TestRunVerification(unittest.TestCase):
    """Test the assembled verification suite."""

    def test_symbolic_mode(self):
        report = run_verification(VerifyOptions("grenet", 3, mode="symbolic"))
        self.assertTrue(report.passed)
        self.assertEqual(report.n, 7)
        self.assertEqual(
            _checks(report),
            [("identity", "symbolic", "pass"), ("regularity", "exact", "pass")],
        )

    def test_all_mode(self):
        report = run_verification(VerifyOptions("regular-det", 3, trials=4, seed=7))
        self.assertTrue(report.passed)
        self.assertEqual(
            [check.mode for check in report.checks], ["symbolic", "pit", "exact"]
        )
        pit = report.checks[1]
        self.assertEqual(pit.trials, 4)
        self.assertEqual(pit.seed, 7)

    def test_structured_fallback_above_bound(self):
        report = run_verification(VerifyOptions("grenet", 5, mode="symbolic", symbolic_bound=10))
        self.assertTrue(report.passed)
        self.assertEqual(report.checks[0].mode, "structured")

    def test_structured_mode(self):
        report = run_verification(VerifyOptions("equivariant-perm", 3, mode="structured"))
        self.assertTrue(report.passed)
        self.assertEqual(report.checks[0].mode, "structured")

    def test_non_cyclic_pencil_above_bound(self):
        with self.assertRaises(SymbolicBoundError):
            run_verification(VerifyOptions("trivial-det", 3, mode="symbolic", symbolic_bound=2))

    def test_trivial_det_skips_regularity(self):
        report = run_verification(VerifyOptions("trivial-det", 3, trials=3))
        self.assertTrue(report.passed)
        regularity = report.checks[-1]
        self.assertEqual(regularity.check, "regularity")
        self.assertEqual(regularity.verdict, "skip")
        self.assertIsNone(regularity.witness)

    def test_grenet_without_sign_fix(self):
        even = run_verification(VerifyOptions("grenet", 2, mode="symbolic", exact_sign=False))
        self.assertTrue(even.passed)
        self.assertEqual(build_pencil("grenet", 2, exact_sign=False).meta.sign, -1)

    def test_float_check(self):
        report = run_verification(
            VerifyOptions("equivariant-det", 2, mode="pit", trials=3, float_check=True)
        )
        self.assertTrue(report.passed)
        self.assertIn(("float", "float", "pass"), _checks(report))

    def test_invalid_options(self):
        with self.assertRaises(ValueError):
            run_verification(VerifyOptions("grenet", 3, mode="fast"))
        with self.assertRaises(ValueError):
            run_verification(VerifyOptions("grenet", 3, equivariance="both"))
        with self.assertRaises(ValueError):
            run_verification(VerifyOptions("ryser", 3))

    def test_to_dict(self):
        data = run_verification(VerifyOptions("quadric-half", 3, trials=2)).to_dict()
        self.assertEqual(set(data), {"construction", "size", "n", "seed", "verdict", "checks"})
        self.assertEqual(data["verdict"], "pass")
        self.assertEqual(data["n"], 4)


class TestEquivarianceSuites(unittest.TestCase):
    """Test the seeded equivariance suites."""

    def test_grenet_left_passes_right_fails(self):
        report = run_verification(
            VerifyOptions("grenet", 3, mode="pit", trials=2, equivariance="full", samples=5)
        )
        self.assertFalse(report.passed)
        by_check = {check.check: check for check in report.checks}
        self.assertTrue(by_check["equivariance-left"].passed)
        right = by_check["equivariance-right"]
        self.assertFalse(right.passed)
        self.assertIn("element", right.witness)
        self.assertNotIn("equivariance-transpose", by_check)

    def test_regular_det_left_gl(self):
        report = run_verification(
            VerifyOptions("regular-det", 3, mode="pit", trials=2, equivariance="left", samples=4)
        )
        self.assertTrue(report.passed)
        self.assertEqual(report.checks[-1].detail, "4/4 elements pass")

    def test_pair_constructions_full(self):
        for construction in ("equivariant-perm", "equivariant-det"):
            report = run_verification(
                VerifyOptions(construction, 2, mode="pit", trials=2, equivariance="full", samples=3)
            )
            self.assertTrue(report.passed, construction)
            checks = [check.check for check in report.checks]
            self.assertEqual(
                checks[-3:], ["equivariance-left", "equivariance-right", "equivariance-transpose"]
            )

    def test_suite_is_seeded(self):
        pencil = build_pencil("grenet", 3)
        first = equivariance_suite(pencil, "right", samples=3, seed=4)
        second = equivariance_suite(pencil, "right", samples=3, seed=4)
        self.assertEqual(first.to_dict(), second.to_dict())


class TestWaringVerification(unittest.TestCase):
    """Test verification of power-sum decompositions."""

    def test_asymmetric(self):
        report = run_verification(VerifyOptions("waring", 5))
        self.assertTrue(report.passed)
        self.assertIsNone(report.n)
        self.assertEqual(report.checks[0].detail, "16 terms expand to x_1*...*x_5")

    def test_symmetric(self):
        report = run_verification(VerifyOptions("waring", 4, symmetric=True))
        self.assertTrue(report.passed)
        self.assertTrue(report.checks[0].detail.startswith("16 terms"))


if __name__ == "__main__":
    unittest.main()
