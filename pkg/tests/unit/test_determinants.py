"""
Unit tests for symbolic and structured pencil determinants.
"""

import math
import unittest
from unittest.mock import patch

import numpy as np

from detrep_core.constructions import (
    equivariant_det,
    equivariant_perm,
    grenet,
    quadric_full,
    quadric_half,
    regular_det,
    trivial_det,
)
from detrep_core.determinants import (
    CyclicStructure,
    LayoutError,
    PathEvaluator,
    PathStats,
    SymbolicBoundError,
    cyclic_structure,
    path_det,
    path_sign,
    pencil_symbolic_det,
    pencil_symbolic_path_det,
    scaled_float_det,
)
from detrep_core.linalg import det_exact
from detrep_core.oracles import get_target, perm_naive, perm_polynomial, perm_ryser
from detrep_core.pencil import Variable, pencil_eval
from detrep_core.polynomial import Monomial, Polynomial


def _expected(pencil):
    meta = pencil.meta
    return get_target(meta.target).polynomial(pencil.arg_shape).scale(
        meta.sign * meta.expected_factor
    )


def _all_ones(m):
    return [[1] * m for _ in range(m)]


class TestSymbolicDeterminant(unittest.TestCase):
    """Test the column-subset expansion."""

    def test_quadric_half(self):
        x1, x2 = Variable(1, 1), Variable(1, 2)
        y1, y2 = Variable(2, 1), Variable(2, 2)
        expected = Polynomial(
            {
                Monomial.from_mapping({x1: 1, y1: 1}): 1,
                Monomial.from_mapping({x2: 1, y2: 1}): 1,
            }
        )
        self.assertEqual(pencil_symbolic_det(quadric_half(2)), expected)

    def test_grenet2_without_sign_fix(self):
        self.assertEqual(pencil_symbolic_det(grenet(2, exact_sign=False)), -perm_polynomial(2))

    def test_grenet3_with_sign_fix(self):
        result = pencil_symbolic_det(grenet(3))
        self.assertEqual(result, perm_polynomial(3))
        self.assertEqual(len(result), 6)
        self.assertTrue(all(coefficient == 1 for _, coefficient in result.terms()))

    def test_small_constructions_match_targets(self):
        pencils = [grenet(m) for m in (2, 3, 4)]
        pencils += [regular_det(m) for m in (2, 3, 4)]
        pencils += [equivariant_perm(2), equivariant_det(2)]
        pencils += [quadric_half(s) for s in range(1, 6)]
        pencils += [quadric_full(size) for size in range(1, 6)]
        pencils += [trivial_det(3)]
        for pencil in pencils:
            with self.subTest(construction=pencil.meta.construction, n=pencil.n):
                self.assertEqual(pencil_symbolic_det(pencil), _expected(pencil))

    def test_bound(self):
        with self.assertRaises(SymbolicBoundError):
            pencil_symbolic_det(grenet(5))
        self.assertEqual(pencil_symbolic_det(grenet(5), bound=31).degree, 5)


class TestCyclicStructure(unittest.TestCase):
    """Test layout analysis for the path formula."""

    def test_grenet_structure(self):
        structure = cyclic_structure(grenet(4))
        self.assertEqual(structure.dims, (1, 4, 6, 4))
        self.assertEqual(structure.diagonals, (0, -1, 1, 1))
        self.assertEqual(structure.link_entries, 4 * 2**3)

    def test_trivial_det_is_not_cyclic(self):
        with self.assertRaises(LayoutError):
            cyclic_structure(trivial_det(3))

    def test_closed_form_sign(self):
        self.assertEqual(cyclic_structure(grenet(2)).closed_form_sign(), 1)
        self.assertEqual(cyclic_structure(grenet(2, exact_sign=False)).closed_form_sign(), -1)
        self.assertEqual(cyclic_structure(quadric_half(3)).closed_form_sign(), -1)


class TestPathDeterminant(unittest.TestCase):
    """Test the structured evaluation path."""

    def test_grenet3_all_ones(self):
        self.assertEqual(path_det(grenet(3), _all_ones(3)), 6)

    def test_equivariant_perm3_all_ones(self):
        pencil = equivariant_perm(3)
        value = path_det(pencil, _all_ones(3))
        self.assertEqual(value, 36)
        self.assertEqual(value, det_exact(pencil_eval(pencil, _all_ones(3))))

    def test_agrees_with_dense_determinant(self):
        rng = np.random.default_rng(4)
        pencils = [grenet(m) for m in range(2, 5)]
        pencils += [grenet(m, exact_sign=False) for m in range(2, 5)]
        pencils += [regular_det(m) for m in range(2, 5)]
        pencils += [equivariant_perm(m) for m in (2, 3)]
        pencils += [equivariant_det(m) for m in (2, 3)]
        pencils += [quadric_half(3), quadric_full(4)]
        for pencil in pencils:
            evaluator = PathEvaluator(pencil)
            for _ in range(50):
                point = rng.integers(-9, 10, size=pencil.arg_shape).tolist()
                self.assertEqual(evaluator(point), det_exact(pencil_eval(pencil, point)))

    def test_equivariant_m4_agrees_with_dense_determinant(self):
        rng = np.random.default_rng(9)
        for pencil in (equivariant_perm(4), equivariant_det(4)):
            evaluator = PathEvaluator(pencil)
            for _ in range(3):
                point = rng.integers(-5, 6, size=(4, 4)).tolist()
                self.assertEqual(evaluator(point), det_exact(pencil_eval(pencil, point)))

    def test_operation_count(self):
        for m in range(2, 9):
            stats = PathStats()
            evaluator = PathEvaluator(grenet(m))
            evaluator(_all_ones(m), stats)
            self.assertEqual(stats.multiplications, m * 2 ** (m - 1))
            self.assertEqual(evaluator.operations, m * 2 ** (m - 1))

    def test_large_grenet_matches_ryser_oracle(self):
        rng = np.random.default_rng(1)
        point = rng.integers(-3, 4, size=(8, 8)).tolist()
        self.assertEqual(path_det(grenet(8), point), perm_ryser(point))

    def test_sign_is_cached(self):
        pencil = regular_det(3)
        self.assertEqual(path_sign(pencil), path_sign(pencil))

    def test_sign_confirmed_modulo_prime_above_dense_bound(self):
        with patch.dict("detrep_core.determinants._SIGN_CACHE", clear=True):
            for pencil in (grenet(7), regular_det(7), equivariant_perm(4)):
                expected = cyclic_structure(pencil).closed_form_sign()
                self.assertEqual(path_sign(pencil), expected)
            self.assertEqual(path_sign(grenet(5), check_bound=8), 1)

    def test_wrong_closed_form_is_rejected(self):
        closed_form = CyclicStructure.closed_form_sign
        for pencil in (grenet(4), grenet(7), equivariant_perm(4)):
            flipped = patch.object(
                CyclicStructure, "closed_form_sign", lambda self: -closed_form(self)
            )
            with self.subTest(construction=pencil.meta.construction, n=pencil.n):
                with patch.dict("detrep_core.determinants._SIGN_CACHE", clear=True), flipped:
                    with self.assertRaises(RuntimeError):
                        path_sign(pencil)


class TestStructuredSymbolic(unittest.TestCase):
    """Test the symbolic chain expansion."""

    def test_equivariant_m3(self):
        self.assertEqual(
            pencil_symbolic_path_det(equivariant_perm(3)), perm_polynomial(3).scale(6)
        )
        pencil = equivariant_det(3)
        self.assertEqual(pencil_symbolic_path_det(pencil), _expected(pencil))

    def test_matches_column_expansion(self):
        for pencil in (grenet(3), regular_det(4), quadric_full(3)):
            self.assertEqual(pencil_symbolic_path_det(pencil), pencil_symbolic_det(pencil))


class TestScaledFloatDeterminant(unittest.TestCase):
    """Test the floating-point rescaling demonstration."""

    def test_factor_is_removed(self):
        rng = np.random.default_rng(3)
        for pencil in (equivariant_perm(2), equivariant_perm(3), equivariant_det(3)):
            point = rng.integers(-3, 4, size=(pencil.m, pencil.m)).tolist()
            target = get_target(pencil.meta.target).evaluate(point)
            value = scaled_float_det(pencil, point)
            self.assertTrue(
                math.isclose(value, pencil.meta.sign * target, rel_tol=1e-9, abs_tol=1e-9)
            )

    def test_unscaled_pencils_are_unchanged(self):
        point = [[1, 2, 0], [3, -1, 2], [0, 1, 1]]
        self.assertAlmostEqual(scaled_float_det(grenet(3), point), perm_naive(point))


if __name__ == "__main__":
    unittest.main()
