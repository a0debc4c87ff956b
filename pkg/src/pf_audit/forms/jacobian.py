"""Graded pieces of the Jacobian ideal and their complement bases."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from sympy.polys.rings import PolyElement

from pf_audit.algebra.linalg import ExactMatrix, FractionFreeEchelon, SparseVector
from pf_audit.algebra.multipoly import Monomial, add_monomials, monomials_of_degree
from pf_audit.algebra.rational import ParamRat
from pf_audit.exceptions import AlgebraError
from pf_audit.forms.family import FamilySpec

logger = logging.getLogger(__name__)


@dataclass
class GradedPiece:
    """Degree-D slice: the span of x^mu * df/dx_i and a complement of monomials.

    Generator ``g = i * len(generator_monomials) + j`` stands for
    ``x^generator_monomials[j] * df/dx_i``.
    """

    degree: int
    nvars: int
    monomials: tuple[Monomial, ...]
    generator_monomials: tuple[Monomial, ...]
    basis: tuple[Monomial, ...]
    echelon: FractionFreeEchelon
    index: dict[Monomial, int] = field(repr=False)

    @property
    def rank(self) -> int:
        return self.echelon.rank

    def vector(self, poly: PolyElement) -> SparseVector:
        vec: SparseVector = {}
        for monom, coeff in poly.items():
            try:
                vec[self.index[monom]] = coeff
            except KeyError:
                raise AlgebraError(
                    f"Monomial of degree {sum(monom)} in the degree-{self.degree} piece."
                ) from None
        return vec

    def split(self, poly: PolyElement) -> tuple[PolyElement, tuple[PolyElement, ...]]:
        """poly = remainder + sum_i witness_i * df/dx_i, remainder on the complement basis."""
        ring = poly.ring
        remainder, coefficients = self.echelon.reduce(self.vector(poly))
        rem_poly = ring.from_dict({self.monomials[c]: v for c, v in remainder.items()})
        width = len(self.generator_monomials)
        witness_terms: list[dict[Monomial, ParamRat]] = [{} for _ in range(self.nvars)]
        for tag, coeff in coefficients.items():
            i, j = divmod(tag, width)
            witness_terms[i][self.generator_monomials[j]] = coeff
        witnesses = tuple(ring.from_dict(terms) if terms else ring.zero for terms in witness_terms)
        return rem_poly, witnesses

    def coordinates(self, poly: PolyElement, zero: ParamRat) -> tuple[ParamRat, ...]:
        """Coefficients of ``poly`` on the complement basis; poly must be supported there."""
        return tuple(poly.get(monom, zero) for monom in self.basis)


class JacobianData:
    """Lazily built graded pieces of the Jacobian ideal of a family."""

    def __init__(self, family: FamilySpec) -> None:
        self.family = family
        self.partials: tuple[PolyElement, ...] = tuple(
            family.f.diff(i) for i in range(family.nvars)
        )
        self._pieces: dict[int, GradedPiece] = {}

    def piece(self, degree: int) -> GradedPiece:
        cached = self._pieces.get(degree)
        if cached is None:
            cached = self._build(degree)
            self._pieces[degree] = cached
        return cached

    def basis(self, degree: int) -> tuple[Monomial, ...]:
        return self.piece(degree).basis

    @property
    def built_degrees(self) -> tuple[int, ...]:
        return tuple(sorted(self._pieces))

    def multiplication_matrix(self, degree: int) -> ExactMatrix:
        """Columns are the generators x^mu * df/dx_i written on the degree-``degree`` monomials."""
        piece = self.piece(degree)
        columns = []
        for partial in self.partials:
            for mu in piece.generator_monomials:
                column = [self.family.scalars.zero] * len(piece.monomials)
                for monom, coeff in partial.items():
                    column[piece.index[add_monomials(monom, mu)]] = coeff
                columns.append(column)
        return ExactMatrix.from_columns(self.family.scalars, columns, len(piece.monomials))

    def _build(self, degree: int) -> GradedPiece:
        family = self.family
        nvars = family.nvars
        monomials = tuple(monomials_of_degree(nvars, degree))
        index = {m: i for i, m in enumerate(monomials)}
        generator_monomials = tuple(monomials_of_degree(nvars, degree - family.degree + 1))
        echelon = FractionFreeEchelon(family.scalars)

        generators: list[tuple[int, int, SparseVector]] = []
        width = len(generator_monomials)
        for i, partial in enumerate(self.partials):
            for j, mu in enumerate(generator_monomials):
                vec = {index[add_monomials(monom, mu)]: c for monom, c in partial.items()}
                weight = max((family.scalars.degree(c) for c in vec.values()), default=0)
                generators.append((weight, i * width + j, vec))
        # Low t-degree rows first keeps intermediate entries small.
        generators.sort(key=lambda item: item[0])
        for _, tag, vec in generators:
            echelon.insert(vec, tag)

        pivots = set(echelon.pivots)
        basis = tuple(m for i, m in enumerate(monomials) if i not in pivots)
        logger.debug(
            "jacobian_piece family=%s degree=%d monomials=%d generators=%d rank=%d",
            family.name,
            degree,
            len(monomials),
            len(generators),
            echelon.rank,
        )
        return GradedPiece(
            degree=degree,
            nvars=nvars,
            monomials=monomials,
            generator_monomials=generator_monomials,
            basis=basis,
            echelon=echelon,
            index=index,
        )


@lru_cache(maxsize=8)
def jacobian_ideal_data(family: FamilySpec) -> JacobianData:
    return JacobianData(family)


def smoothness_degree(family: FamilySpec) -> int:
    """Degree beyond which the Jacobian ring of a smooth hypersurface vanishes."""
    return family.nvars * (family.degree - 2) + 1


def check_generic_smooth(family: FamilySpec, data: JacobianData | None = None) -> bool:
    """True iff the partials span every monomial of degree (n+1)(m-2)+1 over QQ(t)."""
    data = data or jacobian_ideal_data(family)
    piece = data.piece(smoothness_degree(family))
    smooth = not piece.basis
    logger.info(
        "smoothness_check family=%s degree=%d rank=%d monomials=%d smooth=%s",
        family.name,
        piece.degree,
        piece.rank,
        len(piece.monomials),
        smooth,
    )
    return smooth


def cohomology_dimension(data: JacobianData) -> int:
    """Total size of the complement bases at pole orders 1..n."""
    family = data.family
    return sum(
        len(data.basis(family.numerator_degree(k))) for k in range(1, family.ambient_dim + 1)
    )
