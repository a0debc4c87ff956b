"""Sampled normal functions, finite-difference operator application and mu-equation checks."""

from __future__ import annotations

import logging
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from typing import Any

from mpmath import mp
from sympy import finite_diff_weights
from sympy.polys.domains import QQ

from pf_audit.exceptions import ValidationError
from pf_audit.numeric.fitting import RationalFitResult, rational_fit
from pf_audit.numeric.legendre import (
    DEFAULT_CLEARANCE,
    ChainSpec,
    LegendreFiber,
    format_complex,
    integrate_chain,
    to_mp,
)
from pf_audit.operators.diffop import DiffOperator

logger = logging.getLogger(__name__)

DEFAULT_DIGITS = 30
DEFAULT_STEP = Fraction(1, 100)
DEFAULT_TOLERANCE = 1e-6
SECTION_FIT_DEGREES = (0, 3)


@dataclass(frozen=True)
class NormalFunctionSamples:
    """Values nu(t_i) on an exact, strictly increasing grid."""

    label: str
    grid: tuple[Fraction, ...]
    values: tuple[Any, ...]
    digits: int = DEFAULT_DIGITS

    def __post_init__(self) -> None:
        if len(self.grid) != len(self.values):
            raise ValidationError(
                f"Grid of {len(self.grid)} points carries {len(self.values)} values."
            )
        if any(b <= a for a, b in zip(self.grid, self.grid[1:])):
            raise ValidationError("Sampling grid must be strictly increasing.")
        if any(not mp.isfinite(v) for v in self.values):
            raise ValidationError(f"Non-finite sample in '{self.label}'.")

    @classmethod
    def from_function(
        cls,
        label: str,
        grid: Sequence[Fraction],
        fn: Callable[[Any], Any],
        digits: int = DEFAULT_DIGITS,
    ) -> NormalFunctionSamples:
        grid = tuple(Fraction(g) for g in grid)
        with mp.workdps(digits):
            values = tuple(mp.mpc(fn(to_mp(g))) for g in grid)
        return cls(label, grid, values, digits)

    def value_at(self, t: Fraction) -> Any:
        try:
            return self.values[self.grid.index(t)]
        except ValueError:
            raise ValidationError(
                f"Samples '{self.label}' do not cover t={t}; the stencil needs it."
            ) from None

    def to_dict(self) -> dict[str, Any]:
        return {
            "label": self.label,
            "digits": self.digits,
            "grid": [str(g) for g in self.grid],
            "values": [format_complex(v, 15) for v in self.values],
        }


def stencil_half_width(order: int) -> int:
    return order // 2 + 1


def stencil_grid(center: Any, step: Any, order: int) -> tuple[Fraction, ...]:
    """Points center + k * step, |k| <= 2J, covering the stencils at step and 2 * step."""
    center, step = Fraction(center), Fraction(step)
    if step <= 0:
        raise ValidationError(f"Stencil step must be positive, received {step}.")
    width = 2 * stencil_half_width(order)
    return tuple(center + k * step for k in range(-width, width + 1))


def sample_normal_function(
    chain: ChainSpec,
    grid: Sequence[Fraction],
    digits: int = DEFAULT_DIGITS,
    clearance: float = DEFAULT_CLEARANCE,
) -> NormalFunctionSamples:
    """nu(t) = integral of dx/y over the chain, one quadrature per grid point."""
    grid = tuple(Fraction(g) for g in grid)
    with mp.workdps(digits):
        values = tuple(
            integrate_chain(chain, LegendreFiber(to_mp(t), clearance)).value for t in grid
        )
    return NormalFunctionSamples(chain.name, grid, values, digits)


def _evaluate(value: Any, t: Any) -> Any:
    def poly_at(poly: Any) -> Any:
        total = mp.mpf(0)
        for (exp,), c in poly.items():
            total += mp.mpf(int(QQ.numer(c))) / int(QQ.denom(c)) * t**exp
        return total

    return poly_at(value.numer) / poly_at(value.denom)


@dataclass(frozen=True)
class NumericApplication:
    value: Any
    error_estimate: Any
    step: Fraction
    order: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "value": format_complex(self.value, 15),
            "error_estimate": mp.nstr(self.error_estimate, 5),
            "step": str(self.step),
        }


def apply_operator_numeric(
    op: DiffOperator,
    samples: NormalFunctionSamples,
    t0: Any,
    step: Any = DEFAULT_STEP,
    richardson: bool = True,
) -> NumericApplication:
    """Central differences at step and 2 * step, Richardson-extrapolated per derivative order.

    A central stencil of 2J + 1 points has error O(h^p) with p = 2(J - ceil(k/2) + 1)
    for the k-th derivative.
    """
    t0, step = Fraction(t0), Fraction(step)
    op = op.in_basis("d")
    if op.is_zero:
        return NumericApplication(mp.mpc(0), mp.mpf(0), step, -1)
    order = op.order
    half = stencil_half_width(order)
    offsets = list(range(-half, half + 1))
    table = finite_diff_weights(order, offsets, 0)

    with mp.workdps(samples.digits):
        t_mp = to_mp(t0)
        total = mp.mpc(0)
        error = mp.mpf(0)
        for k, coeff in enumerate(op.coefficients):
            if not coeff:
                continue
            a_k = _evaluate(coeff, t_mp)
            if k == 0:
                total += a_k * samples.value_at(t0)
                continue
            weights = [mp.mpf(int(w.p)) / int(w.q) for w in table[k][-1]]

            def derivative(h: Fraction, k: int = k, weights: list[Any] = weights) -> Any:
                acc = mp.mpc(0)
                for o, w in zip(offsets, weights):
                    if w:
                        acc += w * samples.value_at(t0 + o * h)
                return acc / to_mp(h) ** k

            fine, coarse = derivative(step), derivative(2 * step)
            p = 2 * (half - (k + 1) // 2 + 1)
            correction = (fine - coarse) / (2**p - 1)
            estimate = fine + correction if richardson else fine
            total += a_k * estimate
            error += abs(a_k) * abs(correction)
    return NumericApplication(total, error, step, order)


@dataclass(frozen=True)
class MuEquationReport:
    chain: ChainSpec
    kind: str
    grid: tuple[Fraction, ...]
    applications: tuple[NumericApplication, ...]
    tolerance: float
    fit: RationalFitResult | None

    @property
    def max_abs(self) -> Any:
        return max((abs(a.value) for a in self.applications), default=mp.mpf(0))

    @property
    def passed(self) -> bool:
        if self.fit is None:
            return bool(self.max_abs < self.tolerance)
        return bool(
            self.fit.residual < self.tolerance
            and self.fit.rational_coefficients(self.tolerance)
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "chain": self.chain.to_dict(),
            "kind": self.kind,
            "coordinate": "s" if self.kind == "section" else "t",
            "grid": [str(g) for g in self.grid],
            "values": [a.to_dict() for a in self.applications],
            "max_abs_residual": mp.nstr(self.max_abs, 5),
            "tolerance": self.tolerance,
            "passed": self.passed,
            "rational_fit": None if self.fit is None else self.fit.to_dict(),
        }


def mu_equation_check(
    op: DiffOperator,
    chain: ChainSpec,
    grid: Sequence[Fraction],
    step: Any = DEFAULT_STEP,
    digits: int = DEFAULT_DIGITS,
    clearance: float = DEFAULT_CLEARANCE,
    tolerance: float = DEFAULT_TOLERANCE,
    degrees: tuple[int, int] = SECTION_FIT_DEGREES,
) -> MuEquationReport:
    """D nu on the grid: zero for torsion chains, a rational function of s for section chains.

    Section grids are given in the cover coordinate s.
    """
    cover = chain.cover
    grid = tuple(Fraction(g) for g in grid)
    applications = []
    with mp.workdps(digits):
        for node in grid:
            t0 = cover.parameter(node) if cover is not None else node
            stencil = stencil_grid(t0, step, op.order)
            samples = sample_normal_function(chain, stencil, digits, clearance)
            applications.append(apply_operator_numeric(op, samples, t0, step))
        fit = None
        if cover is not None:
            fit = rational_fit(grid, [a.value for a in applications], *degrees)
        report = MuEquationReport(
            chain=chain,
            kind="torsion" if cover is None else "section",
            grid=grid,
            applications=tuple(applications),
            tolerance=tolerance,
            fit=fit,
        )
        logger.info(
            "mu_equation_check chain=%s kind=%s points=%d passed=%s",
            chain.name,
            report.kind,
            len(grid),
            report.passed,
        )
    return report
