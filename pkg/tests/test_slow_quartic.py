"""End-to-end exact runs on the Dwork pencil of quartic K3 surfaces."""

from __future__ import annotations

import unittest

import pytest
from sympy.polys.domains import QQ

from pf_audit.family_file import compare_operators, load_operator_file
from pf_audit.forms.certificate import verify_certificate
from pf_audit.forms.jacobian import cohomology_dimension, jacobian_ideal_data
from pf_audit.operators.local import singular_points
from pf_audit.oracles import DworkOracle
from support import FAMILIES_DIR, family, operator_and_certificate


@pytest.mark.slow
class MirrorQuarticTests(unittest.TestCase):
    def test_primitive_cohomology_dimension(self) -> None:
        data = jacobian_ideal_data(family("mirror_quartic"))
        self.assertEqual(cohomology_dimension(data), 21)

    def test_operator_has_order_three(self) -> None:
        op, certificate = operator_and_certificate("mirror_quartic")
        self.assertEqual(op.order, 3)
        self.assertTrue(verify_certificate(op, family("mirror_quartic"), certificate).verified)

    def test_conifold_points(self) -> None:
        op, _ = operator_and_certificate("mirror_quartic")
        locus = singular_points(op)
        self.assertTrue({QQ(4), QQ(-4)} <= set(locus.rational_points))
        self.assertTrue(locus.infinity)

    def test_leading_coefficient_carries_the_conifold_quartic(self) -> None:
        op, _ = operator_and_certificate("mirror_quartic")
        lead = op.in_basis("d").leading_coefficient.numer
        s = op.scalars.poly_gen
        self.assertFalse(lead.rem(s**4 - 256))

    def test_dwork_series_is_annihilated(self) -> None:
        op, _ = operator_and_certificate("mirror_quartic")
        verdict = DworkOracle().check(op, family("mirror_quartic"), 30)
        self.assertTrue(verdict.report.annihilated)
        self.assertEqual(verdict.to_dict()["substitution_exponent"], -4)

    def test_printed_operator_comparison(self) -> None:
        op, _ = operator_and_certificate("mirror_quartic")
        reference = load_operator_file(FAMILIES_DIR / "mirror_quartic_printed.op")
        comparison = compare_operators(op, reference)
        self.assertIn(comparison.verdict, {"equal", "proportional", "mismatch"})
        if comparison.verdict == "mismatch":
            self.assertTrue(comparison.differences())


if __name__ == "__main__":
    unittest.main()
