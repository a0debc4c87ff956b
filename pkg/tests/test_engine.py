from __future__ import annotations

import unittest
from typing import Any

from pf_audit.commands.base import CommandContext
from pf_audit.engine import AuditEngine
from pf_audit.exceptions import ValidationError, VerificationError
from pf_audit.forms.family import FamilySpec
from pf_audit.interfaces import PeriodOracle
from pf_audit.numeric.legendre import CHAIN_CATALOGUE
from pf_audit.operators.diffop import DiffOperator
from pf_audit.oracles import SeriesVerdict
from pf_audit.periods import DworkSpec, annihilation_check, dwork_period_series
from support import FAMILIES_DIR


def family_path(name: str) -> str:
    return str(FAMILIES_DIR / f"{name}.fam")


class WrongSeriesOracle:
    """Claims every family and hands it the Hesse constant-term series at t = 0."""

    name = "wrong-series"

    def matches(self, family: FamilySpec) -> bool:
        return True

    def check(self, op: DiffOperator, family: FamilySpec, terms: int) -> SeriesVerdict:
        series = dwork_period_series(DworkSpec(2, 3, terms))
        return SeriesVerdict(self.name, "unshifted Hesse series", annihilation_check(op, series))


class AuditEngineTests(unittest.TestCase):
    def setUp(self) -> None:
        self.engine = AuditEngine()

    def run_dict(self, **payload: Any) -> dict[str, Any]:
        return self.engine.run_from_dict(payload).to_dict()["document"]

    def test_compute_legendre(self) -> None:
        doc = self.run_dict(command="compute", family_path=family_path("legendre"))
        self.assertEqual(doc["family"]["name"], "legendre")
        self.assertEqual(doc["operator"]["theta_form"]["order"], 2)
        self.assertIs(doc["checks"]["certificate_verified"], True)
        self.assertIsNone(doc["checks"]["certificate_residual"])
        self.assertEqual(doc["checks"]["certificate_chart"], 2)
        self.assertEqual(doc["checks"]["series_annihilation"]["status"], "zero")
        self.assertEqual(doc["singular_locus"]["infinity"], True)
        self.assertIsNone(doc["comparison"])
        self.assertEqual(doc["config"]["max_order"], "auto")

    def test_compute_family_without_oracle(self) -> None:
        doc = self.run_dict(command="compute", family_path=family_path("fermat_cubic"))
        self.assertEqual(doc["checks"]["series_annihilation"], {"status": "no-oracle"})
        self.assertEqual(doc["operator"]["d_form"]["order"], 1)

    def test_compute_with_reference_operator(self) -> None:
        doc = self.run_dict(
            command="compute",
            family_path=family_path("legendre"),
            compare_operator_path=str(FAMILIES_DIR / "mirror_quartic_printed.op"),
        )
        self.assertEqual(doc["comparison"]["paper_operator_match"], "mismatch")
        self.assertTrue(doc["comparison"]["differences"])

    def test_verify_checks_every_chart(self) -> None:
        doc = self.run_dict(command="verify", family_path=family_path("dwork_cubic"))
        self.assertEqual([c["chart"] for c in doc["charts"]], [0, 1, 2])
        self.assertTrue(doc["certificate_verified"])
        self.assertIsNone(doc["reference_operator"])

    def test_verify_single_chart(self) -> None:
        doc = self.run_dict(command="verify", family_path=family_path("legendre"), chart=1)
        self.assertEqual([c["chart"] for c in doc["charts"]], [1])

    def test_indicial_legendre(self) -> None:
        doc = self.run_dict(command="indicial", family_path=family_path("legendre"), terms=6)
        locations = [p["location"] for p in doc["points"]]
        self.assertEqual(len(locations), 3)
        self.assertEqual(locations[-1], "infinity")
        for point in doc["points"]:
            self.assertEqual(point["frobenius"]["status"], "ok")
            self.assertEqual(point["frobenius"]["solution_count"], 2)

    def test_series_hesse_pencil(self) -> None:
        doc = self.run_dict(command="series", family_path=family_path("dwork_cubic"), terms=12)
        self.assertEqual(doc["series_annihilation"]["oracle"], "dwork-constant-term")
        self.assertEqual(doc["series_annihilation"]["shift"], -1)

    def test_series_without_oracle_raises(self) -> None:
        with self.assertRaises(ValidationError) as ctx:
            self.run_dict(command="series", family_path=family_path("fermat_cubic"))
        self.assertIn("legendre-2f1", str(ctx.exception))

    def test_numeric_small_grid(self) -> None:
        doc = self.run_dict(
            command="numeric",
            family_path=family_path("legendre"),
            grid="2/5:1/2:2",
            chains=["moving-torsion", "empty"],
        )
        self.assertTrue(doc["periods"]["passed"])
        self.assertTrue(doc["control_fit"]["rejected"])
        self.assertEqual([c["kind"] for c in doc["chains"]], ["torsion", "torsion"])
        self.assertTrue(doc["all_passed"])

    def test_numeric_needs_legendre(self) -> None:
        with self.assertRaises(ValidationError):
            self.run_dict(command="numeric", family_path=family_path("dwork_cubic"))

    def test_unknown_chain_raises(self) -> None:
        with self.assertRaises(ValidationError):
            self.run_dict(
                command="numeric", family_path=family_path("legendre"), chains=["cycle-z"]
            )

    def test_missing_family_path(self) -> None:
        with self.assertRaises(ValidationError):
            self.run_dict(command="compute")

    def test_unknown_command_raises(self) -> None:
        with self.assertRaises(ValidationError):
            self.run_dict(command="integrate", family_path=family_path("legendre"))


class InjectedOracleTests(unittest.TestCase):
    def test_wrong_series_fails_compute(self) -> None:
        engine = AuditEngine(CommandContext(oracles=(WrongSeriesOracle(),), chains=CHAIN_CATALOGUE))
        with self.assertRaises(VerificationError) as ctx:
            engine.run_from_dict({"command": "compute", "family_path": family_path("legendre")})
        self.assertEqual(ctx.exception.exit_code, 5)

    def test_injected_oracle_satisfies_protocol(self) -> None:
        self.assertIsInstance(WrongSeriesOracle(), PeriodOracle)


if __name__ == "__main__":
    unittest.main()
