"""Unit tests for input parsing and validation helpers."""

from __future__ import annotations

import unittest
from fractions import Fraction

from pf_audit.exceptions import ValidationError
from pf_audit.validation import (
    parse_bool,
    parse_fraction,
    parse_grid,
    parse_positive_int,
    require_field,
)


class RequireFieldTests(unittest.TestCase):
    """Tests for require_field()."""

    def test_returns_value_when_present_and_correct_type(self) -> None:
        self.assertEqual(require_field({"a": "compute"}, "a", str), "compute")

    def test_raises_when_key_missing(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            require_field({}, "command", str)
        self.assertIn("command", str(ctx.exception))

    def test_raises_when_value_is_none(self) -> None:
        with self.assertRaises(ValidationError):
            require_field({"a": None}, "a", str)

    def test_raises_on_type_mismatch(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            require_field({"a": 42}, "a", str)
        self.assertIn("str", str(ctx.exception))
        self.assertIn("int", str(ctx.exception))

    def test_accepts_tuple_of_types(self) -> None:
        self.assertEqual(require_field({"a": 3}, "a", (int, str)), 3)

    def test_bool_rejected_where_numeric_expected(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            require_field({"a": True}, "a", int)
        self.assertIn("bool", str(ctx.exception))

    def test_bool_accepted_where_bool_expected(self) -> None:
        self.assertIs(require_field({"a": True}, "a", bool), True)


class ParsePositiveIntTests(unittest.TestCase):
    def test_int_and_string(self) -> None:
        self.assertEqual(parse_positive_int(7, "terms"), 7)
        self.assertEqual(parse_positive_int(" 12 ", "terms"), 12)

    def test_zero_and_negative_rejected(self) -> None:
        for value in (0, -3, "0"):
            with self.subTest(value=value):
                with self.assertRaises(ValidationError) as ctx:
                    parse_positive_int(value, "terms")
                self.assertIn("positive", str(ctx.exception))

    def test_garbage_rejected(self) -> None:
        for value in ("seven", None, "2.5"):
            with self.subTest(value=value):
                with self.assertRaises(ValidationError):
                    parse_positive_int(value, "terms")

    def test_bool_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            parse_positive_int(True, "terms")


class ParseBoolTests(unittest.TestCase):
    def test_spellings(self) -> None:
        for value, expected in (("yes", True), ("True", True), ("0", False), (False, False)):
            with self.subTest(value=value):
                self.assertIs(parse_bool(value, "constant"), expected)

    def test_other_words_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            parse_bool("sometimes", "constant")


class ParseFractionTests(unittest.TestCase):
    def test_exact_forms(self) -> None:
        self.assertEqual(parse_fraction("3/10", "t"), Fraction(3, 10))
        self.assertEqual(parse_fraction("0.3", "t"), Fraction(3, 10))
        self.assertEqual(parse_fraction(2, "t"), Fraction(2))

    def test_float_rejected(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            parse_fraction(0.3, "t")
        self.assertIn("3/10", str(ctx.exception))

    def test_zero_denominator_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            parse_fraction("1/0", "t")


class ParseGridTests(unittest.TestCase):
    def test_valid_grid(self) -> None:
        self.assertEqual(parse_grid("1/10:9/10:5"), (Fraction(1, 10), Fraction(9, 10), 5))

    def test_single_point_may_have_any_stop(self) -> None:
        self.assertEqual(parse_grid("1/2:1/2:1"), (Fraction(1, 2), Fraction(1, 2), 1))

    def test_wrong_shape(self) -> None:
        for text in ("1/10:9/10", "a:b:c:d", ""):
            with self.subTest(text=text):
                with self.assertRaises(ValidationError):
                    parse_grid(text)

    def test_decreasing_grid_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            parse_grid("9/10:1/10:4")

    def test_non_string_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            parse_grid(5)  # type: ignore[arg-type]


if __name__ == "__main__":
    unittest.main()
