"""
Unit tests for sparse polynomial arithmetic.
"""

import random
import unittest

from detrep_core.oracles import perm_naive, perm_polynomial
from detrep_core.pencil import Variable
from detrep_core.polynomial import (
    Monomial,
    Polynomial,
    UnassignedVariableError,
    poly_arith,
    poly_eval,
)


def _x(name):
    return Polynomial.variable(name)


def _random_polynomial(rng, names=("a", "b", "c"), terms=4):
    total = Polynomial.zero()
    for _ in range(terms):
        exponents = {name: rng.randint(0, 2) for name in names}
        total = total + Polynomial({Monomial.from_mapping(exponents): rng.randint(-5, 5)})
    return total


class TestMonomial(unittest.TestCase):
    """Test monomial invariants."""

    def test_zero_exponents_are_dropped(self):
        """Test that from_mapping never stores a zero exponent."""
        monomial = Monomial.from_mapping({"x": 0, "y": 2})
        self.assertEqual(monomial.exponents, (("y", 2),))
        self.assertEqual(monomial.degree, 2)

    def test_rejects_unsorted_exponents(self):
        with self.assertRaises(ValueError):
            Monomial((("y", 1), ("x", 1)))

    def test_multiplication_merges_exponents(self):
        product = Monomial.of("x") * Monomial.from_mapping({"x": 2, "y": 1})
        self.assertEqual(product, Monomial.from_mapping({"x": 3, "y": 1}))


class TestPolynomialArithmetic(unittest.TestCase):
    """Test ring operations and canonical form."""

    def test_additive_inverse_is_zero(self):
        """Test add(x, -x) gives the zero polynomial with no terms."""
        result = poly_arith("add", _x("x"), -_x("x"))
        self.assertTrue(result.is_zero())
        self.assertEqual(len(result), 0)
        self.assertEqual(result, 0)

    def test_difference_of_squares(self):
        x, y = _x("x"), _x("y")
        result = poly_arith("mul", x + y, x - y)
        self.assertEqual(result, x**2 - y**2)
        self.assertEqual(len(result), 2)

    def test_perm2_built_termwise_matches_oracle(self):
        """Test y11*y22 + y12*y21 equals the symbolic 2x2 permanent."""
        y = {(i, j): Polynomial.variable(Variable(i, j)) for i in (1, 2) for j in (1, 2)}
        built = poly_arith("add", y[1, 1] * y[2, 2], y[1, 2] * y[2, 1])
        self.assertEqual(built, perm_polynomial(2))

    def test_ring_laws_on_random_polynomials(self):
        """Test associativity, commutativity and distributivity on seeded inputs."""
        rng = random.Random(7)
        for _ in range(25):
            p, q, r = (_random_polynomial(rng) for _ in range(3))
            self.assertEqual(p + q, q + p)
            self.assertEqual(p * q, q * p)
            self.assertEqual((p + q) + r, p + (q + r))
            self.assertEqual((p * q) * r, p * (q * r))
            self.assertEqual(p * (q + r), p * q + p * r)

    def test_integer_coercion(self):
        x = _x("x")
        self.assertEqual(x + 1 - 1, x)
        self.assertEqual(3 * x, x.scale(3))
        self.assertEqual(2 - x, Polynomial.constant(2) - x)

    def test_power_and_degree(self):
        x = _x("x")
        self.assertEqual((x + 1) ** 3, x**3 + 3 * x**2 + 3 * x + 1)
        self.assertEqual(((x + 1) ** 3).degree, 3)
        self.assertEqual(Polynomial.zero().degree, -1)

    def test_exact_divide(self):
        p = 6 * _x("x") + 4
        self.assertEqual(p.exact_divide(2), 3 * _x("x") + 2)
        with self.assertRaises(ValueError):
            p.exact_divide(4)

    def test_rejects_non_integer_coefficients(self):
        with self.assertRaises(TypeError):
            Polynomial({Monomial.of("x"): 1.5})

    def test_unknown_operation(self):
        with self.assertRaises(ValueError):
            poly_arith("sub", _x("x"), _x("y"))

    def test_equal_polynomials_hash_equal(self):
        p = _x("x") + _x("y")
        q = _x("y") + _x("x")
        self.assertEqual(hash(p), hash(q))
        self.assertEqual(len({p, q}), 1)


class TestPolynomialEvaluation(unittest.TestCase):
    """Test exact and modular evaluation."""

    def _grid_point(self, matrix):
        return {
            Variable(i + 1, j + 1): value
            for i, row in enumerate(matrix)
            for j, value in enumerate(row)
        }

    def test_perm2_all_ones(self):
        self.assertEqual(poly_eval(perm_polynomial(2), self._grid_point([[1, 1], [1, 1]])), 2)

    def test_perm3_all_ones(self):
        ones = [[1] * 3 for _ in range(3)]
        self.assertEqual(poly_eval(perm_polynomial(3), self._grid_point(ones)), 6)

    def test_perm3_agrees_with_naive_sum(self):
        matrix = [[2, -1, 3], [0, 4, 1], [5, -2, 7]]
        self.assertEqual(
            poly_eval(perm_polynomial(3), self._grid_point(matrix)), perm_naive(matrix)
        )

    def test_unassigned_variable_is_named(self):
        p = _x("x") * _x("y")
        with self.assertRaises(UnassignedVariableError) as ctx:
            poly_eval(p, {"x": 2})
        self.assertEqual(ctx.exception.variable, "y")
        self.assertIn("y", str(ctx.exception))

    def test_evaluate_mod_matches_exact(self):
        p = (_x("x") - 3 * _x("y")) ** 4
        point = {"x": 123456789, "y": -987654321}
        prime = 1_000_000_007
        self.assertEqual(p.evaluate_mod(point, prime), p.evaluate(point) % prime)

    def test_format(self):
        p = _x("x") ** 2 - 2 * _x("y") + 1
        self.assertEqual(p.format(), "1 - 2*y + x**2")
        self.assertEqual(Polynomial.zero().format(), "0")


if __name__ == "__main__":
    unittest.main()
