"""Local analysis of operators: singular points, indicial equations, Frobenius bases.

Everything here works in theta-form of a local coordinate s (s = t - t0 or
s = 1/t). Clearing denominators and dividing by the lowest power of s turns
the operator into sum_l s^l * P_l(theta); P_0 is the indicial polynomial and
the P_l drive the coefficient recurrences.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Any

from sympy import Matrix
from sympy.polys.densetools import dup_shift
from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement, ring

from pf_audit.algebra.rational import (
    BigRational,
    canonical_poly,
    format_rational,
    format_univariate,
    low_degree,
    poly_lcm,
)
from pf_audit.exceptions import LocalAnalysisError
from pf_audit.operators.diffop import DiffOperator, to_theta_form
from pf_audit.operators.series import LocalCoordinate, PeriodSeries

logger = logging.getLogger(__name__)

_RHO_RING, _RHO = ring("rho", QQ)

LinearForm = dict[int, Any]


def localize(op: DiffOperator, coordinate: LocalCoordinate) -> DiffOperator:
    """The operator in theta-form of the local coordinate, written in the same symbol."""
    scalars = op.scalars
    if coordinate.at_infinity:
        theta = op.in_basis("theta")
        coeffs = [
            scalars.invert_parameter(c) * (-1) ** i for i, c in enumerate(theta.coefficients)
        ]
        return DiffOperator(scalars, tuple(coeffs), "theta")
    d_form = op.in_basis("d")
    coeffs = [scalars.shift(c, coordinate.center) for c in d_form.coefficients]
    return to_theta_form(DiffOperator(scalars, tuple(coeffs), "d"))


@dataclass(frozen=True)
class LocalRecurrence:
    """sum_l s^l P_l(theta) with P_l stored as ascending coefficient lists."""

    order: int
    polys: tuple[tuple[BigRational, ...], ...]

    @property
    def indicial(self) -> tuple[BigRational, ...]:
        return self.polys[0]

    @property
    def indicial_degree(self) -> int:
        return max(i for i, c in enumerate(self.indicial) if c)


def local_recurrence(op: DiffOperator, coordinate: LocalCoordinate) -> LocalRecurrence:
    if op.is_zero:
        raise LocalAnalysisError("The zero operator has no local exponents.")
    local = localize(op, coordinate)
    ring_t = op.scalars.poly_ring
    coeffs = local.coefficients
    common = poly_lcm((c.denom for c in coeffs if c), ring_t)
    polys = [c.numer * common.exquo(c.denom) if c else ring_t.zero for c in coeffs]
    shift = min(low_degree(p) for p in polys if p)
    depth = max(p.degree() - shift for p in polys if p)
    table = tuple(
        tuple(p.get((shift + level,), QQ.zero) for p in polys) for level in range(depth + 1)
    )
    return LocalRecurrence(order=local.order, polys=table)


def _rho_poly(ascending: Sequence[BigRational]) -> PolyElement:
    terms = {(i,): c for i, c in enumerate(ascending) if c}
    return _RHO_RING.from_dict(terms) if terms else _RHO_RING.zero


def _rational_roots(poly: PolyElement) -> list[tuple[BigRational, int]]:
    _, factors = poly.factor_list()
    roots = []
    for factor, multiplicity in factors:
        if factor.degree() == 1:
            a = factor.get((1,), QQ.zero)
            b = factor.get((0,), QQ.zero)
            roots.append((-b / a, multiplicity))
    return sorted(roots)


@dataclass(frozen=True)
class IndicialData:
    coordinate: LocalCoordinate
    polynomial: tuple[BigRational, ...]
    factors: tuple[tuple[str, int], ...]
    exponents: tuple[tuple[BigRational, int], ...]
    order: int

    @property
    def regular(self) -> bool:
        return len(self.polynomial) - 1 == self.order

    def to_dict(self, parameter: str = "t") -> dict[str, Any]:
        return {
            "location": self.coordinate.location(),
            "coordinate": self.coordinate.describe(parameter),
            "indicial_polynomial": format_univariate(_rho_poly(self.polynomial), "rho"),
            "factors": [{"factor": f, "multiplicity": m} for f, m in self.factors],
            "exponents": [
                {"exponent": format_rational(e), "multiplicity": m} for e, m in self.exponents
            ],
            "regular_singular": self.regular,
        }


def indicial_polynomial(op: DiffOperator, coordinate: LocalCoordinate) -> IndicialData:
    """Monic indicial polynomial with its factorization and rational exponents."""
    rec = local_recurrence(op, coordinate)
    degree = rec.indicial_degree
    lead = rec.indicial[degree]
    monic = tuple(c / lead for c in rec.indicial[: degree + 1])
    poly = _rho_poly(monic)
    _, factors = poly.factor_list()
    factor_list = tuple(
        sorted(
            ((format_univariate(f, "rho"), m) for f, m in factors),
            key=lambda item: item[0],
        )
    )
    return IndicialData(
        coordinate=coordinate,
        polynomial=monic,
        factors=factor_list,
        exponents=tuple(_rational_roots(poly)),
        order=rec.order,
    )


def is_singular_point(op: DiffOperator, coordinate: LocalCoordinate) -> bool:
    """False iff every coefficient ratio a_j / a_r is analytic at s = 0."""
    local = localize(op, coordinate).in_basis("d")
    if local.order < 1:
        return False
    scalars = op.scalars
    lead = scalars.valuation(local.leading_coefficient)
    return any(scalars.valuation(c) < lead for c in local.coefficients[:-1] if c)


@dataclass(frozen=True)
class SingularLocus:
    parameter: str
    factors: tuple[tuple[PolyElement, int], ...]
    rational_points: tuple[BigRational, ...]
    infinity: bool

    def factor_strings(self) -> list[str]:
        return [format_univariate(f, self.parameter) for f, _ in self.factors]

    def to_dict(self) -> dict[str, Any]:
        return {
            "factors": [
                {"factor": format_univariate(f, self.parameter), "multiplicity": m}
                for f, m in self.factors
            ],
            "rational_points": [format_rational(r) for r in self.rational_points],
            "infinity": self.infinity,
        }


def singular_points(op: DiffOperator) -> SingularLocus:
    """Squarefree factors of the leading coefficient and the flag at infinity.

    Powers of t are split off the factor list and reported as the rational point 0.
    """
    scalars = op.scalars
    normalized = op.in_basis("d").normalized()
    if normalized.order < 1:
        return SingularLocus(scalars.name, (), (), False)
    lead = normalized.leading_coefficient.numer
    _, sqf = lead.sqf_list()
    collected: dict[PolyElement, int] = {}
    t = scalars.poly_gen
    for factor, multiplicity in sqf:
        v = low_degree(factor)
        if v:
            collected[t] = collected.get(t, 0) + multiplicity
            factor = factor.exquo(t**v)
        if factor.degree() > 0:
            key = canonical_poly(factor)
            collected[key] = collected.get(key, 0) + multiplicity
    factors = tuple(sorted(collected.items(), key=lambda item: (item[0].degree(), str(item[0]))))
    points: set[BigRational] = set()
    for factor, _ in factors:
        for root, _m in _rational_roots(_RHO_RING.from_dict(dict(factor))):
            points.add(root)
    infinity = is_singular_point(op, LocalCoordinate.infinity())
    return SingularLocus(scalars.name, factors, tuple(sorted(points)), infinity)


def apply_to_series_raw(
    op: DiffOperator, series: PeriodSeries
) -> tuple[BigRational, tuple[BigRational, ...]]:
    """D applied to the series: (exponent of the first slot, exact coefficients)."""
    size = series.truncation + 1
    local = localize(op, series.coordinate)
    if local.is_zero:
        return series.exponent, (QQ.zero,) * size
    scalars = op.scalars
    expansions = {
        i: scalars.laurent(c, size) for i, c in enumerate(local.coefficients) if c
    }
    base = min(v for v, _ in expansions.values())
    out = [QQ.zero] * size
    exponents = [series.exponent + k for k in range(size)]
    for i, (valuation, laurent) in expansions.items():
        offset = valuation - base
        for k, ck in enumerate(series.coefficients):
            if not ck:
                continue
            term = exponents[k] ** i * ck
            if not term:
                continue
            for m in range(size - offset - k):
                if laurent[m]:
                    out[offset + k + m] += laurent[m] * term
    return series.exponent + base, tuple(out)


def apply_to_series(op: DiffOperator, series: PeriodSeries) -> PeriodSeries:
    exponent, coefficients = apply_to_series_raw(op, series)
    return PeriodSeries(series.coordinate, exponent, coefficients).normalized()


# ── Frobenius solutions ──


@dataclass(frozen=True)
class FrobeniusSolution:
    """y = sum_i log(s)^i / i! * log_series[i]."""

    exponent: BigRational
    log_series: tuple[PeriodSeries, ...]

    @property
    def log_depth(self) -> int:
        return len(self.log_series) - 1

    @property
    def series(self) -> PeriodSeries:
        """The coefficient of log(s)^0."""
        return self.log_series[0]

    def to_dict(self, preview: int = 6) -> dict[str, Any]:
        return {
            "exponent": format_rational(self.exponent),
            "log_depth": self.log_depth,
            "log_series": [s.to_dict(preview) for s in self.log_series],
        }


def _taylor(ascending: Sequence[BigRational], point: BigRational) -> list[BigRational]:
    dense = list(reversed(ascending))
    while dense and not dense[0]:
        dense.pop(0)
    if not dense:
        return []
    return list(reversed(dup_shift(dense, point, QQ)))


def _axpy(target: LinearForm, scale: Any, source: LinearForm) -> None:
    for key, value in source.items():
        updated = target.get(key, QQ.zero) + scale * value
        if updated:
            target[key] = updated
        else:
            target.pop(key, None)


def _group_roots(roots: list[tuple[BigRational, int]]) -> list[tuple[BigRational, dict[int, int]]]:
    """Partition roots into classes modulo the integers: (base root, {shift: multiplicity})."""
    classes: dict[BigRational, list[tuple[BigRational, int]]] = {}
    for root, mult in roots:
        numer, denom = int(QQ.numer(root)), int(QQ.denom(root))
        fractional = root - (numer // denom)
        classes.setdefault(fractional, []).append((root, mult))
    groups = []
    for members in classes.values():
        base = min(r for r, _ in members)
        shifts = {int(QQ.numer(r - base)): m for r, m in members}
        groups.append((base, shifts))
    return sorted(groups, key=lambda item: item[0])


def _solve_group(
    rec: LocalRecurrence,
    base: BigRational,
    shifts: dict[int, int],
    terms: int,
    coordinate: LocalCoordinate,
) -> list[FrobeniusSolution]:
    size = sum(shifts.values())
    last = max(shifts) + terms
    vectors: list[list[LinearForm]] = []
    constraints: list[LinearForm] = []
    nparams = 0
    for k in range(last + 1):
        rhs: list[LinearForm] = [{} for _ in range(size)]
        for level in range(1, min(k, len(rec.polys) - 1) + 1):
            tau = _taylor(rec.polys[level], base + k - level)
            previous = vectors[k - level]
            for i in range(size):
                for q, tq in enumerate(tau):
                    if i + q >= size:
                        break
                    if tq:
                        _axpy(rhs[i], -tq, previous[i + q])
        tau0 = _taylor(rec.indicial, base + k)
        mu = 0
        while mu < len(tau0) and not tau0[mu]:
            mu += 1
        current: list[LinearForm] = [{} for _ in range(size)]
        for i in range(min(mu, size)):
            current[i] = {nparams: QQ.one}
            nparams += 1
        for j in range(size - 1, mu - 1, -1):
            acc = dict(rhs[j - mu])
            for q in range(mu + 1, len(tau0)):
                index = j - mu + q
                if index >= size:
                    break
                if tau0[q]:
                    _axpy(acc, -tau0[q], current[index])
            current[j] = {key: value / tau0[mu] for key, value in acc.items()}
        for i in range(max(size - mu, 0), size):
            if rhs[i]:
                constraints.append(rhs[i])
        vectors.append(current)

    if constraints:
        matrix = Matrix(
            [[QQ.to_sympy(c.get(p, QQ.zero)) for p in range(nparams)] for c in constraints]
        )
        basis = [[QQ.from_sympy(v) for v in vec] for vec in matrix.nullspace()]
    else:
        basis = [[QQ.one if p == q else QQ.zero for p in range(nparams)] for q in range(nparams)]

    solutions = []
    for params in basis:
        components = [
            [
                sum((value * params[p] for p, value in vectors[k][i].items()), QQ.zero)
                for k in range(last + 1)
            ]
            for i in range(size)
        ]
        starts = [next((k for k, c in enumerate(comp) if c), None) for comp in components]
        present = [s for s in starts if s is not None]
        if not present:
            continue
        first = min(present)
        depth = max(i for i, s in enumerate(starts) if s is not None)
        exponent = base + first
        log_series = tuple(
            PeriodSeries(coordinate, exponent, tuple(components[i][first : first + terms + 1]))
            for i in range(depth + 1)
        )
        solutions.append(FrobeniusSolution(exponent, log_series))
    return solutions


def frobenius_solutions(
    op: DiffOperator, coordinate: LocalCoordinate, terms: int = 30
) -> list[FrobeniusSolution]:
    """A basis of local solutions with log terms, one per unit of operator order."""
    rec = local_recurrence(op, coordinate)
    if rec.indicial_degree != rec.order:
        raise LocalAnalysisError(
            f"Irregular singular point at {coordinate.location()}: indicial degree "
            f"{rec.indicial_degree} below order {rec.order}."
        )
    lead = rec.indicial[rec.indicial_degree]
    roots = _rational_roots(_rho_poly([c / lead for c in rec.indicial]))
    if sum(m for _, m in roots) != rec.order:
        raise LocalAnalysisError(
            f"Local exponents at {coordinate.location()} are not all rational."
        )
    solutions: list[FrobeniusSolution] = []
    for base, shifts in _group_roots(roots):
        solutions.extend(_solve_group(rec, base, shifts, terms, coordinate))
    if len(solutions) != rec.order:
        raise LocalAnalysisError(
            f"Found {len(solutions)} local solutions at {coordinate.location()}, "
            f"expected {rec.order}."
        )
    logger.debug(
        "frobenius_basis location=%s order=%d log_depth=%d",
        coordinate.location(),
        rec.order,
        max(s.log_depth for s in solutions),
    )
    return solutions
