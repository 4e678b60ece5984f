"""
Unit tests for the pencil data model, evaluation and JSON export.
"""

import json
import pickle
import unittest
from fractions import Fraction

from detrep_core.constructions import equivariant_det, grenet, quadric_half, regular_det
from detrep_core.linalg import DimensionError, IntMatrix
from detrep_core.normal_form import transform_pencil
from detrep_core.pencil import (
    AffineForm,
    BasisKind,
    Block,
    BlockLayout,
    PencilBuilder,
    PencilMeta,
    Variable,
    decode_number,
    encode_number,
    export_pencil,
    import_pencil,
    pencil_eval,
    pencil_eval_mod,
    pencil_from_json,
    pencil_to_json,
)


def _zeros(m):
    return [[0] * m for _ in range(m)]


class TestAffineForm(unittest.TestCase):
    """Test affine forms."""

    def test_build_merges_and_drops_zero_terms(self):
        form = AffineForm.build(
            0, [(Variable(1, 2), 3), (Variable(1, 1), 1), (Variable(1, 2), -3)]
        )
        self.assertEqual(form.linear, ((Variable(1, 1), 1),))
        self.assertTrue(form.is_linear())

    def test_rejects_zero_coefficient(self):
        with self.assertRaises(ValueError):
            AffineForm(0, ((Variable(1, 1), 0),))

    def test_evaluate(self):
        form = AffineForm.build(2, [(Variable(1, 1), 3), (Variable(2, 1), -1)])
        self.assertEqual(form.evaluate([[5, 0], [7, 0]]), 2 + 15 - 7)
        self.assertEqual(form.evaluate_mod([[5, 0], [7, 0]], 7), (2 + 15 - 7) % 7)

    def test_str(self):
        self.assertEqual(str(AffineForm.var(Variable(2, 3), -1)), "-y2_3")
        self.assertEqual(str(AffineForm.build(1, [(Variable(1, 1), 2)])), "1 + 2*y1_1")
        self.assertEqual(str(AffineForm()), "0")

    def test_addition_and_scaling(self):
        a = AffineForm.build(1, [(Variable(1, 1), 1)])
        b = AffineForm.build(-1, [(Variable(1, 1), -1)])
        self.assertTrue((a + b).is_zero())
        self.assertEqual(a.scaled(Fraction(1, 2)).constant, Fraction(1, 2))
        self.assertFalse(a.scaled(Fraction(1, 2)).is_integral())


class TestLayout(unittest.TestCase):
    """Test block layouts."""

    def test_offsets_and_locate(self):
        layout = grenet(3).layout
        self.assertEqual([block.dim for block in layout.blocks], [1, 3, 3])
        self.assertEqual(layout.offsets, (0, 1, 4))
        self.assertEqual(layout.locate(5), (2, 1))

    def test_duplicate_labels_rejected(self):
        block = Block("a", 1, BasisKind.SCALAR)
        with self.assertRaises(ValueError):
            BlockLayout((block, block))

    def test_layout_must_cover_pencil(self):
        builder = PencilBuilder(3)
        layout = BlockLayout((Block("a", 2, BasisKind.DENSE),))
        with self.assertRaises(DimensionError):
            builder.build(1, (1, 1), layout, PencilMeta("test", "det"))

    def test_variable_outside_argument_rejected(self):
        builder = PencilBuilder(1)
        builder.add_linear(0, 0, Variable(2, 1))
        layout = BlockLayout((Block("a", 1, BasisKind.DENSE),))
        with self.assertRaises(DimensionError):
            builder.build(1, (1, 1), layout, PencilMeta("test", "det"))


class TestPencilEvaluation(unittest.TestCase):
    """Test substitution of argument points."""

    def test_zero_point_gives_constant_part(self):
        pencil = regular_det(3)
        self.assertEqual(pencil_eval(pencil, _zeros(3)), pencil.constant_matrix())

    def test_grenet3_first_column(self):
        ones = [[1] * 3 for _ in range(3)]
        evaluated = pencil_eval(grenet(3), ones)
        self.assertEqual([evaluated[r, 0] for r in range(7)], [0, 1, 1, 1, 0, 0, 0])

    def test_quadric_half_display(self):
        evaluated = pencil_eval(quadric_half(2), [[1, 1], [1, 1]])
        self.assertEqual(evaluated, IntMatrix([[0, -1, -1], [1, 1, 0], [1, 0, 1]]))

    def test_wrong_point_shape(self):
        with self.assertRaises(DimensionError):
            pencil_eval(grenet(3), _zeros(2))

    def test_modular_evaluation(self):
        pencil = regular_det(3)
        point = [[10, -4, 3], [2, 8, -6], [1, 0, 5]]
        exact = pencil_eval(pencil, point)
        residues = pencil_eval_mod(pencil, point, 11)
        for r in range(pencil.n):
            for c in range(pencil.n):
                self.assertEqual(residues[r, c], exact[r, c] % 11)

    def test_coefficient_parts(self):
        parts = grenet(2).coefficient_parts()
        self.assertEqual(len(parts), 4)
        self.assertEqual(parts[Variable(1, 1)], {(1, 0): 1})


class TestPencilImmutability(unittest.TestCase):
    """Test that built pencils cannot change afterwards."""

    def test_forms_are_read_only(self):
        pencil = grenet(3)
        with self.assertRaises(TypeError):
            pencil.forms[(0, 0)] = AffineForm(constant=1)
        with self.assertRaises(TypeError):
            pencil.meta.params["m"] = 4

    def test_builder_input_is_copied(self):
        pencil = grenet(2)
        forms = dict(pencil.forms)
        copy = pencil.with_forms(forms)
        forms.clear()
        self.assertEqual(copy, pencil)
        self.assertEqual(len(copy.forms), len(pencil.forms))

    def test_hashable_and_equal(self):
        self.assertEqual(hash(grenet(3)), hash(grenet(3)))
        self.assertEqual(grenet(3), grenet(3))
        self.assertNotEqual(grenet(3), regular_det(3))
        self.assertEqual(len({grenet(3), grenet(3), regular_det(3)}), 2)

    def test_pickle_round_trip(self):
        pencil = equivariant_det(2)
        restored = pickle.loads(pickle.dumps(pencil))
        self.assertEqual(restored, pencil)
        self.assertEqual(restored.meta.params, {"m": 2})


class TestPencilJson(unittest.TestCase):
    """Test export and import."""

    def test_round_trip(self):
        for pencil in (grenet(3), regular_det(3), equivariant_det(2), quadric_half(3)):
            restored = pencil_from_json(pencil_to_json(pencil))
            self.assertEqual(restored, pencil)

    def test_round_trip_with_fractions(self):
        half = IntMatrix([[1, 0, 0], [0, Fraction(1, 2), 0], [0, 0, 1]])
        pencil = transform_pencil(regular_det(2), half, IntMatrix.identity(3), "scaled")
        self.assertEqual(pencil.meta.expected_factor, Fraction(1, 2))
        self.assertFalse(pencil.is_integral())
        restored = import_pencil(json.loads(json.dumps(export_pencil(pencil))))
        self.assertEqual(restored, pencil)

    def test_schema_keys(self):
        data = export_pencil(grenet(3))
        for key in (
            "construction",
            "m",
            "n",
            "sign",
            "scaling_exponent",
            "expected_factor",
            "layout",
            "constant",
            "linear",
        ):
            self.assertIn(key, data)
        self.assertEqual(data["n"], 7)
        self.assertEqual(data["layout"][1], {
            "label": "S^1E_reg",
            "dim": 3,
            "basis": "subsets",
            "degree": 1,
            "exterior": False,
        })
        first = data["linear"][0]
        self.assertEqual(first, {"row": 0, "col": 4, "var": [3, 3], "coeff": 1})

    def test_export_is_deterministic(self):
        self.assertEqual(pencil_to_json(equivariant_det(2)), pencil_to_json(equivariant_det(2)))

    def test_malformed_input(self):
        with self.assertRaises(ValueError):
            import_pencil({"construction": "grenet"})

    def test_number_encoding(self):
        self.assertEqual(encode_number(5), 5)
        self.assertEqual(encode_number(2**60), str(2**60))
        self.assertEqual(encode_number(Fraction(-3, 4)), "-3/4")
        self.assertEqual(decode_number("-3/4"), Fraction(-3, 4))
        self.assertEqual(decode_number(str(2**60)), 2**60)
        with self.assertRaises(ValueError):
            decode_number(True)


if __name__ == "__main__":
    unittest.main()
