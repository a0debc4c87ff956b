from __future__ import annotations

import tempfile
import unittest
from pathlib import Path

from pf_audit.algebra.rational import parameter_field
from pf_audit.exceptions import ParseError, SingularFamilyError, ValidationError
from pf_audit.family_file import (
    compare_operators,
    family_from_text,
    load_family,
    load_operator_file,
    operator_from_text,
)
from pf_audit.operators.diffop import DiffOperator
from support import FAMILIES_DIR

T = parameter_field("t")
t = T.gen

LEGENDRE_TEXT = """\
# Legendre cubic
name: legendre
ambient_dim: 2
variables: x0, x1, x2
parameter: t

polynomial: x1^2*x2 - x0*(x0 - x2)*(x0 - t*x2)
"""


def legendre_operator() -> DiffOperator:
    return DiffOperator(T, (-1, 4 - 8 * t, 4 * t - 4 * t**2))


class FamilyFileTests(unittest.TestCase):
    def test_parses_with_comments_and_blank_lines(self) -> None:
        family = family_from_text(LEGENDRE_TEXT)
        self.assertEqual(family.name, "legendre")
        self.assertEqual(family.variables, ("x0", "x1", "x2"))
        self.assertEqual(family.degree, 3)
        self.assertFalse(family.constant)

    def test_shipped_families_load(self) -> None:
        for name in ("legendre", "dwork_cubic", "fermat_cubic"):
            with self.subTest(family=name):
                self.assertEqual(load_family(FAMILIES_DIR / f"{name}.fam").name, name)
        self.assertTrue(load_family(FAMILIES_DIR / "fermat_cubic.fam").constant)

    def test_unknown_key_reports_line_and_column(self) -> None:
        text = "name: bad\nvariables: x0, x1\n  colour: red\n"
        with self.assertRaises(ParseError) as ctx:
            family_from_text(text)
        self.assertEqual(ctx.exception.line, 3)
        self.assertEqual(ctx.exception.column, 3)
        self.assertIn("colour", str(ctx.exception))

    def test_duplicate_key(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            family_from_text(LEGENDRE_TEXT + "name: again\n")
        self.assertEqual(ctx.exception.line, 8)

    def test_line_without_key(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            family_from_text("name: bad\njust words\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_missing_required_field(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            family_from_text("name: bad\nvariables: x0, x1\nparameter: t\n")
        self.assertNotIsInstance(ctx.exception, ParseError)
        self.assertIn("polynomial", str(ctx.exception))

    def test_polynomial_error_is_anchored_in_the_file(self) -> None:
        text = "name: bad\nvariables: x0, x1\nparameter: t\npolynomial: x0^2 + y*x1\n"
        with self.assertRaises(ParseError) as ctx:
            family_from_text(text)
        self.assertEqual(ctx.exception.line, 4)
        self.assertEqual(ctx.exception.column, 20)

    def test_non_homogeneous_polynomial(self) -> None:
        text = "name: bad\nvariables: x0, x1\nparameter: t\npolynomial: x0^3 + t*x1^2\n"
        with self.assertRaises(ParseError):
            family_from_text(text)

    def test_ambient_dimension_must_match_variables(self) -> None:
        text = LEGENDRE_TEXT.replace("ambient_dim: 2", "ambient_dim: 3")
        with self.assertRaises(ValidationError):
            family_from_text(text)

    def test_singular_family(self) -> None:
        text = (
            "name: cone\nvariables: x0, x1, x2\nparameter: t\n"
            "polynomial: x0^3 + x1^3 + t*x0^2*x1\n"
        )
        with self.assertRaises(SingularFamilyError) as ctx:
            family_from_text(text)
        self.assertEqual(ctx.exception.exit_code, 3)
        self.assertEqual(family_from_text(text, check_smooth=False).name, "cone")

    def test_constant_flag(self) -> None:
        text = "name: fermat\nvariables: x0 x1 x2\nparameter: t\npolynomial: x0^3 + x1^3 + x2^3\n"
        self.assertTrue(family_from_text(text + "constant: yes\n").constant)
        with self.assertRaises(ValidationError):
            family_from_text(text + "constant: maybe\n")

    def test_missing_file(self) -> None:
        with self.assertRaises(ValidationError):
            load_family(FAMILIES_DIR / "no_such_family.fam")


class OperatorFileTests(unittest.TestCase):
    def test_d_basis_operator(self) -> None:
        op = operator_from_text("basis: d\noperator: (4*t - 4*t^2)*D^2 + (4 - 8*t)*D - 1\n")
        self.assertEqual(op.basis, "d")
        self.assertEqual(op.coefficients, legendre_operator().coefficients)

    def test_theta_is_the_default_basis(self) -> None:
        op = operator_from_text("operator: T^2 - t*(T + 1/2)^2\n")
        self.assertEqual(op.basis, "theta")
        self.assertTrue(op.is_proportional_to(legendre_operator()))

    def test_reference_quartic_file(self) -> None:
        op = load_operator_file(FAMILIES_DIR / "mirror_quartic_printed.op")
        self.assertEqual(op.order, 3)
        self.assertEqual(op.leading_coefficient, t**4 - 256)

    def test_zero_operator_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            operator_from_text("operator: 0\n")

    def test_unknown_basis(self) -> None:
        with self.assertRaises(ValidationError):
            operator_from_text("basis: nabla\noperator: T\n")

    def test_syntax_error_is_anchored(self) -> None:
        with self.assertRaises(ParseError) as ctx:
            operator_from_text("basis: theta\noperator: T^2 + * T\n")
        self.assertEqual(ctx.exception.line, 2)

    def test_reads_from_disk(self) -> None:
        with tempfile.TemporaryDirectory() as tmp:
            path = Path(tmp) / "legendre.op"
            path.write_text("basis: d\noperator: 4*t*(1 - t)*D^2 + 4*(1 - 2*t)*D - 1\n")
            loaded = load_operator_file(path)
        self.assertEqual(loaded.coefficients, legendre_operator().coefficients)


class ComparisonTests(unittest.TestCase):
    def test_equal(self) -> None:
        comparison = compare_operators(legendre_operator(), legendre_operator().in_basis("theta"))
        self.assertEqual(comparison.verdict, "equal")
        self.assertEqual(comparison.to_dict()["paper_operator_match"], "equal")
        self.assertEqual(comparison.to_dict()["differences"], [])

    def test_proportional(self) -> None:
        scaled = legendre_operator().scaled(T.convert(3) / t)
        comparison = compare_operators(legendre_operator(), scaled)
        self.assertEqual(comparison.verdict, "proportional")
        self.assertEqual(comparison.differences(), [])

    def test_mismatch_lists_differences(self) -> None:
        other = legendre_operator() + DiffOperator.multiplication(T, t)
        comparison = compare_operators(legendre_operator(), other)
        self.assertEqual(comparison.verdict, "mismatch")
        rows = comparison.to_dict()["differences"]
        self.assertTrue(rows)
        self.assertEqual(set(rows[0]), {"theta_power", "computed", "reference", "difference"})

    def test_parameter_names_must_agree(self) -> None:
        other = DiffOperator(parameter_field("z"), (1, 1))
        with self.assertRaises(ValidationError):
            compare_operators(legendre_operator(), other)


if __name__ == "__main__":
    unittest.main()
