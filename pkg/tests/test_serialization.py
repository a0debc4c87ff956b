"""Serialization contract tests: the to_dict() schemas stay stable."""

from __future__ import annotations

import json
import unittest
from fractions import Fraction

from pf_audit import __version__
from pf_audit.exceptions import ValidationError
from pf_audit.models import GridSpec, RunConfig, RunDocument
from support import legendre, legendre_operator

REQUIRED_TOP_KEYS = {"document", "run_metadata"}
REQUIRED_METADATA_KEYS = {"run_id", "command", "generated_at_utc", "engine_version"}
REQUIRED_CONFIG_KEYS = {
    "command",
    "family_path",
    "max_order",
    "terms",
    "chart",
    "digits",
    "grid",
    "output_path",
    "compare_operator_path",
    "chains",
}


class RunDocumentSerializationTests(unittest.TestCase):
    def _make_document(self) -> RunDocument:
        return RunDocument(command="compute", document={"family": {"name": "legendre"}})

    def test_top_level_keys(self) -> None:
        self.assertEqual(set(self._make_document().to_dict()), REQUIRED_TOP_KEYS)

    def test_metadata_keys(self) -> None:
        metadata = self._make_document().to_dict()["run_metadata"]
        self.assertEqual(set(metadata), REQUIRED_METADATA_KEYS)
        self.assertEqual(metadata["engine_version"], __version__)
        self.assertEqual(metadata["command"], "compute")

    def test_run_ids_are_fresh(self) -> None:
        self.assertNotEqual(self._make_document().run_id, self._make_document().run_id)

    def test_document_is_json_serializable(self) -> None:
        json.dumps(self._make_document().to_dict())


class RunConfigSerializationTests(unittest.TestCase):
    def test_defaults_are_spelled_out(self) -> None:
        config = RunConfig(command="compute", family_path="families/legendre.fam")
        d = config.to_dict()
        self.assertEqual(set(d), REQUIRED_CONFIG_KEYS)
        self.assertEqual(d["max_order"], "auto")
        self.assertEqual(d["chart"], "n")
        self.assertIsNone(d["grid"])
        self.assertEqual(d["chains"], [])

    def test_from_dict(self) -> None:
        config = RunConfig.from_dict(
            {
                "command": "numeric",
                "family_path": "families/legendre.fam",
                "grid": "2/5:1/2:2",
                "chains": ["empty"],
                "digits": 40,
            }
        )
        self.assertEqual(config.grid, GridSpec(Fraction(2, 5), Fraction(1, 2), 2))
        self.assertEqual(config.chains, ("empty",))
        self.assertEqual(config.to_dict()["grid"], {"start": "2/5", "stop": "1/2", "count": 2})

    def test_missing_command(self) -> None:
        with self.assertRaises(ValidationError):
            RunConfig.from_dict({"family_path": "families/legendre.fam"})

    def test_unknown_command(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            RunConfig(command="solve")
        self.assertIn("compute", str(ctx.exception))

    def test_bad_numbers(self) -> None:
        for kwargs in ({"terms": 0}, {"digits": -1}, {"max_order": 0}, {"chart": -1}):
            with self.subTest(**kwargs):
                with self.assertRaises(ValidationError):
                    RunConfig(command="compute", **kwargs)  # type: ignore[arg-type]


class GridSpecTests(unittest.TestCase):
    def test_points_are_exact(self) -> None:
        grid = GridSpec.parse("1/10:17/20:4")
        self.assertEqual(
            grid.points(),
            (Fraction(1, 10), Fraction(7, 20), Fraction(3, 5), Fraction(17, 20)),
        )

    def test_single_point(self) -> None:
        self.assertEqual(GridSpec.parse("1/2:1/2:1").points(), (Fraction(1, 2),))


class MathSerializationTests(unittest.TestCase):
    def test_family_keys(self) -> None:
        d = legendre().to_dict()
        self.assertEqual(d["name"], "legendre")
        self.assertEqual(d["variables"], ["x0", "x1", "x2"])
        self.assertEqual(d["degree"], 3)

    def test_operator_keys(self) -> None:
        d = legendre_operator().to_dict()
        self.assertEqual(set(d), {"basis", "parameter", "order", "coefficients", "display"})
        self.assertEqual(d["order"], 2)
        self.assertTrue(all(isinstance(c, str) for c in d["coefficients"]))


if __name__ == "__main__":
    unittest.main()
