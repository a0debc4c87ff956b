"""Exact scalars and rational functions of the deformation parameter.

Scalars are elements of sympy's ``QQ``; polynomials in the parameter are
``PolyElement`` values of ``QQ[t]``; rational functions are ``FracElement``
values of ``QQ(t)``. :class:`ParameterField` bundles the rings for one
parameter name and owns every conversion between them.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from fractions import Fraction
from functools import lru_cache
from typing import Any

from sympy import Symbol
from sympy.polys.domains import QQ, ZZ
from sympy.polys.rings import PolyElement, PolyRing

from pf_audit.exceptions import AlgebraError

# Element of QQ (python, gmpy or flint ground type).
BigRational = Any
# Univariate PolyElement over QQ in the parameter.
ParamPoly = PolyElement
# FracElement of QQ(t).
ParamRat = Any


def mk_rational(num: int, den: int = 1) -> BigRational:
    """Reduced rational num/den with positive denominator."""
    if den == 0:
        raise AlgebraError("Zero denominator in rational literal.")
    return QQ(num, den)


def fraction_to_rational(value: Fraction | int) -> BigRational:
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def format_rational(value: BigRational) -> str:
    numer, denom = int(QQ.numer(value)), int(QQ.denom(value))
    return str(numer) if denom == 1 else f"{numer}/{denom}"


def low_degree(poly: PolyElement) -> int:
    """Smallest exponent present in a nonzero univariate polynomial."""
    return min(monom[0] for monom in poly.keys())


def canonical_poly(poly: PolyElement) -> PolyElement:
    """Primitive integer multiple with positive leading coefficient."""
    if not poly:
        return poly
    _, poly = poly.clear_denoms()
    _, poly = poly.primitive()
    if poly.LC < 0:
        poly = -poly
    return poly


def parampoly_gcd(a: ParamPoly, b: ParamPoly) -> ParamPoly:
    """Canonical gcd: primitive, positive leading coefficient, and gcd(0, 0) = 0."""
    return canonical_poly(a.gcd(b))


def format_univariate(poly: PolyElement, name: str) -> str:
    if not poly:
        return "0"
    pieces: list[tuple[bool, str]] = []
    for (exp,), coeff in sorted(poly.items(), key=lambda item: -item[0][0]):
        magnitude = abs(coeff)
        if exp == 0:
            mono = ""
        elif exp == 1:
            mono = name
        else:
            mono = f"{name}^{exp}"
        if not mono:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_rational(magnitude)}*{mono}"
        pieces.append((coeff < 0, body))
    return join_signed(pieces)


def join_signed(pieces: Sequence[tuple[bool, str]]) -> str:
    text = ""
    for index, (negative, body) in enumerate(pieces):
        if index == 0:
            text = f"-{body}" if negative else body
        else:
            text += f" - {body}" if negative else f" + {body}"
    return text


class ParameterField:
    """The field QQ(t) for one parameter name, plus QQ[t] and ZZ[t]."""

    def __init__(self, name: str) -> None:
        self.name = name
        self.domain = QQ.frac_field(Symbol(name))
        self.field = self.domain.field
        self.poly_ring: PolyRing = self.field.ring
        self.int_ring: PolyRing = PolyRing((Symbol(name),), ZZ)
        self.gen = self.field.gens[0]
        self.poly_gen = self.poly_ring.gens[0]
        self.zero = self.field.zero
        self.one = self.field.one

    def __repr__(self) -> str:
        return f"ParameterField({self.name!r})"

    # ── construction ──

    def convert(self, value: Any) -> ParamRat:
        if isinstance(value, PolyElement):
            return self.field.new(value.set_ring(self.poly_ring))
        if isinstance(value, Fraction):
            value = fraction_to_rational(value)
        return self.domain.convert(value)

    def from_coefficients(self, coefficients: Iterable[BigRational]) -> PolyElement:
        """Polynomial from ascending coefficients."""
        terms = {(exp,): QQ.convert(c) for exp, c in enumerate(coefficients) if c}
        return self.poly_ring.from_dict(terms) if terms else self.poly_ring.zero

    def ratio(self, numer: PolyElement, denom: PolyElement) -> ParamRat:
        if not denom:
            raise AlgebraError("Zero denominator in rational function.")
        return self.field.new(numer.set_ring(self.poly_ring), denom.set_ring(self.poly_ring))

    # ── views ──

    def degree(self, value: ParamRat) -> int:
        """Height of a rational function: the larger of numerator and denominator degrees."""
        if not value:
            return 0
        return int(max(value.numer.degree(), value.denom.degree()))

    def int_parts(self, value: ParamRat) -> tuple[PolyElement, PolyElement]:
        """Numerator and denominator over ZZ[t] with value = numer / denom."""
        num_scale, numer = value.numer.clear_denoms()
        den_scale, denom = value.denom.clear_denoms()
        numer = (numer * den_scale).set_ring(self.int_ring)
        denom = (denom * num_scale).set_ring(self.int_ring)
        return numer, denom

    def canonical_parts(self, value: ParamRat) -> tuple[PolyElement, PolyElement]:
        """(numerator in QQ[t], primitive denominator in ZZ[t] with positive leading term)."""
        numer, denom = self.int_parts(value)
        content, denom = denom.primitive()
        if denom.LC < 0:
            denom, content = -denom, -content
        numer_q = numer.set_ring(self.poly_ring) * QQ(1, int(content))
        return numer_q, denom

    def format(self, value: ParamRat) -> str:
        numer, denom = self.canonical_parts(value)
        text = format_univariate(numer, self.name)
        if denom == 1:
            return text
        return f"({text})/({format_univariate(denom, self.name)})"

    def constant_value(self, value: ParamRat) -> BigRational | None:
        """The rational number a constant function equals, or None."""
        if not value:
            return QQ.zero
        if value.numer.degree() > 0 or value.denom.degree() > 0:
            return None
        return QQ.convert(value.numer.LC) / QQ.convert(value.denom.LC)

    # ── calculus and substitutions ──

    def derivative(self, value: ParamRat) -> ParamRat:
        numer, denom = value.numer, value.denom
        return self.field.new(numer.diff(0) * denom - numer * denom.diff(0), denom**2)

    def shift(self, value: ParamRat, center: BigRational) -> ParamRat:
        """Substitute t -> t + center."""
        if not center:
            return value
        image = self.poly_gen + center
        numer = value.numer.compose(self.poly_gen, image)
        denom = value.denom.compose(self.poly_gen, image)
        return self.field.new(numer, denom)

    def invert_parameter(self, value: ParamRat) -> ParamRat:
        """Substitute t -> 1/t."""
        if not value:
            return value
        numer, denom = value.numer, value.denom
        dn, dd = numer.degree(), denom.degree()
        rev_n = self._reverse(numer, dn)
        rev_d = self._reverse(denom, dd)
        if dn >= dd:
            return self.field.new(rev_n, rev_d * self.poly_gen ** (dn - dd))
        return self.field.new(rev_n * self.poly_gen ** (dd - dn), rev_d)

    def _reverse(self, poly: PolyElement, degree: int) -> PolyElement:
        return self.poly_ring.from_dict({(degree - exp,): c for (exp,), c in poly.items()})

    def valuation(self, value: ParamRat) -> int:
        if not value:
            raise AlgebraError("The zero function has no valuation.")
        return low_degree(value.numer) - low_degree(value.denom)

    def laurent(self, value: ParamRat, count: int) -> tuple[int, list[BigRational]]:
        """Valuation v and the first ``count`` coefficients of the expansion at t = 0."""
        numer, denom = value.numer, value.denom
        if not numer:
            raise AlgebraError("The zero function has no Laurent expansion.")
        vn, vd = low_degree(numer), low_degree(denom)
        a = [numer.get((vn + i,), QQ.zero) for i in range(count)]
        b = [denom.get((vd + i,), QQ.zero) for i in range(denom.degree() - vd + 1)]
        out: list[BigRational] = []
        for k in range(count):
            acc = a[k]
            for j in range(1, min(k, len(b) - 1) + 1):
                acc -= b[j] * out[k - j]
            out.append(acc / b[0])
        return vn - vd, out


@lru_cache(maxsize=None)
def parameter_field(name: str) -> ParameterField:
    return ParameterField(name)


def poly_lcm(polys: Iterable[PolyElement], ring: PolyRing) -> PolyElement:
    result = ring.one
    for poly in polys:
        result = result.lcm(poly)
    return result


def to_rational(value: Any) -> BigRational:
    """Coerce ints, Fractions, decimal strings and sympy rationals into QQ."""
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, str):
        return fraction_to_rational(Fraction(value.strip()))
    return QQ.convert(value)
