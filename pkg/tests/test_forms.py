"""Jacobian ideal, pole-order reduction, Picard-Fuchs search and certificates."""

from __future__ import annotations

import unittest

from pf_audit.algebra.linalg import FractionFreeEchelon, solve_exact
from pf_audit.algebra.multipoly import MultiPoly
from pf_audit.algebra.rational import parameter_field
from pf_audit.exceptions import (
    OrderBoundExceededError,
    ReductionError,
    SingularFamilyError,
    ValidationError,
)
from pf_audit.forms.certificate import (
    certificate_to_affine,
    verify_certificate,
    verify_exactness,
)
from pf_audit.forms.family import FamilySpec
from pf_audit.forms.jacobian import (
    JacobianData,
    check_generic_smooth,
    cohomology_dimension,
    jacobian_ideal_data,
    smoothness_degree,
)
from pf_audit.forms.picard_fuchs import picard_fuchs
from pf_audit.forms.reduction import (
    Certificate,
    PoleForm,
    gm_derivative,
    reduce_full,
    reduce_once,
)
from pf_audit.operators.diffop import DiffOperator
from support import family, legendre, operator_and_certificate

T = parameter_field("t")
t = T.gen


def _legendre_expected() -> DiffOperator:
    return DiffOperator(T, (-1, 4 - 8 * t, 4 * t - 4 * t**2))


class FamilyTests(unittest.TestCase):
    def test_legendre_shape(self) -> None:
        spec = legendre()
        self.assertEqual(spec.n, 2)
        self.assertEqual(spec.degree, 3)
        self.assertEqual(spec.numerator_degree(1), 0)
        self.assertEqual(spec.numerator_degree(2), 3)

    def test_independent_of_parameter_needs_constant_flag(self) -> None:
        with self.assertRaises(ValidationError):
            FamilySpec.from_text("flat", ["x0", "x1", "x2"], "t", "x0^3 + x1^3 + x2^3")

    def test_constant_flag_rejects_parameter_dependence(self) -> None:
        with self.assertRaises(ValidationError):
            FamilySpec.from_text(
                "bad", ["x0", "x1", "x2"], "t", "x0^3 + x1^3 + t*x2^3", constant=True
            )

    def test_variable_count_must_match_dimension(self) -> None:
        poly = legendre().polynomial
        with self.assertRaises(ValidationError):
            FamilySpec("legendre", 3, legendre().variables, "t", poly)


class JacobianTests(unittest.TestCase):
    def test_smooth_families(self) -> None:
        for name in ("legendre", "dwork_cubic", "fermat_cubic"):
            with self.subTest(family=name):
                self.assertTrue(check_generic_smooth(family(name)))

    def test_cone_is_singular(self) -> None:
        cone = FamilySpec.from_text("cone", ["x0", "x1", "x2"], "t", "x0^3 + x1^3 + t*x0^2*x1")
        self.assertFalse(check_generic_smooth(cone))
        with self.assertRaises(SingularFamilyError):
            picard_fuchs(cone)

    def test_smoothness_degree(self) -> None:
        self.assertEqual(smoothness_degree(legendre()), 4)

    def test_cohomology_dimension_of_cubic_curves(self) -> None:
        for name in ("legendre", "dwork_cubic"):
            with self.subTest(family=name):
                self.assertEqual(cohomology_dimension(jacobian_ideal_data(family(name))), 2)

    def test_complement_sizes_follow_jacobian_ring(self) -> None:
        data = jacobian_ideal_data(legendre())
        self.assertEqual([len(data.basis(d)) for d in range(5)], [1, 3, 3, 1, 0])

    def test_split_reconstructs_polynomial(self) -> None:
        spec = legendre()
        data = jacobian_ideal_data(spec)
        x0, x1, x2 = spec.space.ring.gens
        poly = x0**3 + spec.space.ring.ground_new(t) * x1 * x2**2 - 5 * x0 * x1 * x2
        remainder, witnesses = data.piece(3).split(poly)
        rebuilt = remainder
        for a, partial in zip(witnesses, data.partials):
            rebuilt += a * partial
        self.assertEqual(rebuilt, poly)
        basis = set(data.basis(3))
        self.assertTrue(all(monom in basis for monom in remainder.keys()))

    def test_multiplication_matrix_agrees_with_piece(self) -> None:
        spec = legendre()
        scalars = spec.scalars
        data = jacobian_ideal_data(spec)
        piece = data.piece(3)
        matrix = data.multiplication_matrix(3)
        width = len(piece.generator_monomials)
        self.assertEqual((matrix.rows, matrix.cols), (len(piece.monomials), spec.nvars * width))
        echelon = FractionFreeEchelon(scalars)
        for j in range(matrix.cols):
            echelon.insert(matrix.column(j), tag=j)
        self.assertEqual(echelon.rank, piece.rank)

        ring = spec.space.ring
        x0, x1, x2 = ring.gens
        poly = x0**3 + ring.ground_new(t) * x1 * x2**2 - 5 * x0 * x1 * x2
        remainder, witnesses = piece.split(poly)
        vector = piece.vector(poly - remainder)
        target = [vector.get(i, scalars.zero) for i in range(matrix.rows)]
        stacked = [a.get(mu, scalars.zero) for a in witnesses for mu in piece.generator_monomials]
        self.assertEqual(matrix.apply(stacked), target)
        solution = solve_exact(matrix, target)
        assert solution is not None
        self.assertEqual(matrix.apply(solution), target)



class ReductionTests(unittest.TestCase):
    def test_gm_derivative_raises_pole_order(self) -> None:
        spec = legendre()
        form = gm_derivative(PoleForm.holomorphic(spec), spec)
        self.assertEqual(form.order, 2)
        self.assertEqual(form.numerator.degree, spec.numerator_degree(2))

    def test_reduce_once_is_exact(self) -> None:
        spec = legendre()
        data = jacobian_ideal_data(spec)
        form = gm_derivative(gm_derivative(PoleForm.holomorphic(spec), spec), spec)
        step = reduce_once(form, data)
        self.assertEqual(step.reduced.order, 2)
        pieces = [
            form,
            PoleForm(-step.remainder, form.order),
            PoleForm(-step.reduced.numerator, step.reduced.order),
        ]
        check = verify_exactness(pieces, spec, Certificate((step.term,)))
        self.assertTrue(check.verified)

    def test_reduce_full_leaves_an_exact_difference(self) -> None:
        spec = legendre()
        data = jacobian_ideal_data(spec)
        form = gm_derivative(gm_derivative(PoleForm.holomorphic(spec), spec), spec)
        reduced, certificate = reduce_full(form, data)
        self.assertEqual(set(reduced.levels), {1, 2, 3})
        pieces = [form]
        for k, coords in reduced.levels.items():
            degree = spec.numerator_degree(k)
            basis = data.basis(degree)
            poly = spec.space.ring.from_dict(dict(zip(basis, coords)))
            pieces.append(PoleForm(MultiPoly(spec.space, -poly, degree), k))
        for chart in (0, 2):
            with self.subTest(chart=chart):
                self.assertTrue(verify_exactness(pieces, spec, certificate, chart).verified)

    def test_reduce_full_is_linear(self) -> None:
        spec = legendre()
        data = jacobian_ideal_data(spec)
        first = gm_derivative(gm_derivative(PoleForm.holomorphic(spec), spec), spec)
        ring = spec.space.ring
        x0, x1, x2 = ring.gens
        poly = x0**6 - ring.ground_new(t) * x1**3 * x2**3 + 2 * x0 * x1**2 * x2**3
        second = PoleForm(MultiPoly(spec.space, poly, 6), 3)
        a, b = T.convert(3) / (t + 1), t**2 - 5
        combined, _ = reduce_full(first.scaled(a) + second.scaled(b), data)
        left, _ = reduce_full(first, data)
        right, _ = reduce_full(second, data)
        orders = [1, 2, 3]
        expected = left.combine(right, a, b, data)
        self.assertEqual(combined.vector(orders, data), expected.vector(orders, data))

    def test_certificate_as_affine_form(self) -> None:
        _, certificate = operator_and_certificate("legendre")
        beta = certificate_to_affine(certificate, legendre(), 0)
        self.assertEqual(beta.chart, 0)
        self.assertEqual(beta.degree, 1)
        self.assertFalse(beta.is_zero)
        empty = certificate_to_affine(Certificate(()), legendre())
        self.assertTrue(empty.is_zero)
        with self.assertRaises(ValidationError):
            certificate_to_affine(certificate, legendre(), 3)

    def test_order_one_cannot_be_reduced(self) -> None:
        spec = legendre()
        with self.assertRaises(ReductionError):
            reduce_once(PoleForm.holomorphic(spec), jacobian_ideal_data(spec))

    def test_wrong_numerator_degree_rejected(self) -> None:
        spec = legendre()
        numerator = MultiPoly(spec.space, spec.space.ring.gens[0], 1)
        with self.assertRaises(ValidationError):
            reduce_once(PoleForm(numerator, 2), jacobian_ideal_data(spec))


class PicardFuchsTests(unittest.TestCase):
    def test_legendre_operator(self) -> None:
        op, _ = operator_and_certificate("legendre")
        self.assertEqual(op.order, 2)
        self.assertTrue(op.is_proportional_to(_legendre_expected()))
        self.assertEqual(op.coefficients, _legendre_expected().normalized().coefficients)

    def test_legendre_certificate_in_every_chart(self) -> None:
        op, certificate = operator_and_certificate("legendre")
        spec = legendre()
        for chart in range(spec.n + 1):
            with self.subTest(chart=chart):
                check = verify_certificate(op, spec, certificate, chart)
                self.assertTrue(check.verified)
                self.assertIsNone(check.to_dict(spec.space)["residual"])

    def test_tampered_certificate_fails(self) -> None:
        op, certificate = operator_and_certificate("legendre")
        self.assertFalse(certificate.is_empty)
        first = certificate.terms[0]
        tampered = certificate.replace(0, first.with_scalar(first.scalar * 2))
        check = verify_certificate(op, legendre(), tampered)
        self.assertFalse(check.verified)
        self.assertIsNotNone(check.to_dict(legendre().space)["residual"])

    def test_perturbed_operator_fails(self) -> None:
        op, certificate = operator_and_certificate("legendre")
        shifted = op + DiffOperator.multiplication(T, 1)
        self.assertFalse(verify_certificate(shifted, legendre(), certificate).verified)

    def test_constant_family_gives_derivation(self) -> None:
        op, certificate = operator_and_certificate("fermat_cubic")
        self.assertEqual(op.coefficients, (T.zero, T.one))
        self.assertTrue(verify_certificate(op, family("fermat_cubic"), certificate).verified)

    def test_hesse_pencil_has_order_two(self) -> None:
        op, certificate = operator_and_certificate("dwork_cubic")
        self.assertEqual(op.order, 2)
        self.assertTrue(verify_certificate(op, family("dwork_cubic"), certificate).verified)

    def test_search_builds_only_the_pieces_it_reduces_through(self) -> None:
        spec = legendre()
        data = JacobianData(spec)
        op, _ = picard_fuchs(spec, max_order=6, data=data)
        self.assertEqual(op.order, 2)
        self.assertEqual(data.built_degrees, (0, 3, 4, 6))

    def test_order_bound_exceeded(self) -> None:
        with self.assertRaises(OrderBoundExceededError) as ctx:
            picard_fuchs(legendre(), max_order=1)
        self.assertEqual(ctx.exception.exit_code, 4)

    def test_nonpositive_bound_rejected(self) -> None:
        with self.assertRaises(ValidationError):
            picard_fuchs(legendre(), max_order=0)


if __name__ == "__main__":
    unittest.main()
