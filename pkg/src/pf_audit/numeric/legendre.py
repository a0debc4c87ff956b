"""Periods and chain integrals on the Legendre fibers y^2 = x(x-1)(x-t).

Chains are x-plane polylines. Along a segment a -> b, y is written as a
product of one factor per branch point e:

* e = a:      sqrt(b - a) * sqrt(u)
* e = b:      sqrt(a - b) * sqrt(1 - u)
* otherwise:  sqrt(a - e) * sqrt(1 + (b - a) u / (a - e))

with x = a + (b - a) u. Each factor is continuous on [0, 1] because the
segment subtends an angle below pi at every branch point it avoids, so the
product is a continuous branch of y up to one global sign. The sign is
fixed by matching the value carried over from the previous segment, and
u = sin(phi)^2 removes the inverse square roots at branch endpoints.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Union

from mpmath import mp

from pf_audit.exceptions import AdmissibilityError, ValidationError

logger = logging.getLogger(__name__)

DEFAULT_CLEARANCE = 0.1
DEFAULT_BOUND = 1e3
TORSION_LABELS = ("0", "1", "t", "infinity")


def to_mp(value: Any) -> Any:
    """Exact-ish conversion of ints, Fractions, floats and complex numbers to mpmath."""
    if isinstance(value, Fraction):
        return mp.mpf(value.numerator) / value.denominator
    if isinstance(value, complex):
        return mp.mpc(value.real, value.imag)
    return mp.mpmathify(value)


def format_complex(value: Any, digits: int = 20) -> list[str]:
    """[re, im] as decimal strings for JSON documents."""
    value = mp.mpc(value)
    return [mp.nstr(value.real, digits), mp.nstr(value.imag, digits)]


@dataclass(frozen=True)
class LegendreFiber:
    """The fiber E_t, kept at least ``clearance`` away from the degenerate fibers."""

    t: Any
    clearance: float = DEFAULT_CLEARANCE
    bound: float = DEFAULT_BOUND

    def __post_init__(self) -> None:
        if self.clearance <= 0:
            raise ValidationError(f"Clearance must be positive, received {self.clearance}.")
        t = mp.mpc(to_mp(self.t))
        object.__setattr__(self, "t", t)
        if abs(t) < self.margin or abs(t - 1) < self.margin:
            raise AdmissibilityError(
                f"Parameter t={mp.nstr(t, 8)} is within {self.clearance} of the degenerate "
                "fibers t=0, t=1."
            )
        if abs(t) > self.bound:
            raise AdmissibilityError(
                f"Parameter t={mp.nstr(t, 8)} exceeds the bound |t| <= {self.bound}."
            )

    @property
    def margin(self) -> Any:
        """The clearance read as the exact decimal it was written as."""
        return to_mp(Fraction(str(self.clearance)))

    @property
    def branch_points(self) -> tuple[Any, Any, Any]:
        return (mp.mpc(0), mp.mpc(1), self.t)

    def y_squared(self, x: Any) -> Any:
        return x * (x - 1) * (x - self.t)


# ── chain descriptors ──


@dataclass(frozen=True)
class Torsion:
    """A 2-torsion point: (0,0), (1,0), (t,0) or the point at infinity."""

    label: str

    def __post_init__(self) -> None:
        if self.label not in TORSION_LABELS:
            available = ", ".join(TORSION_LABELS)
            raise ValidationError(f"Unknown torsion point '{self.label}'. Available: {available}.")

    @property
    def at_infinity(self) -> bool:
        return self.label == "infinity"

    def x(self, fiber: LegendreFiber) -> Any:
        return {"0": mp.mpc(0), "1": mp.mpc(1), "t": fiber.t}[self.label]

    def describe(self) -> str:
        return "infinity" if self.at_infinity else f"({self.label},0)"


@dataclass(frozen=True)
class SectionCover:
    """The point (x_c, kappa * s) on the cover t = x_c - kappa^2 s^2 / (x_c (x_c - 1))."""

    x_c: Fraction
    kappa: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_c", Fraction(self.x_c))
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        if self.x_c in (0, 1):
            raise ValidationError("Section abscissa must differ from the branch points 0 and 1.")
        if self.kappa == 0:
            raise ValidationError("Section cover scale kappa must be nonzero.")

    def parameter(self, s: Fraction) -> Fraction:
        """t as an exact function of the cover coordinate."""
        return self.x_c - self.kappa**2 * Fraction(s) ** 2 / (self.x_c * (self.x_c - 1))

    def cover_coordinate(self, t: Any) -> Any:
        x_c = to_mp(self.x_c)
        return mp.sqrt(x_c * (x_c - 1) * (x_c - to_mp(t))) / to_mp(self.kappa)

    def y(self, t: Any) -> Any:
        return to_mp(self.kappa) * self.cover_coordinate(t)

    def describe(self) -> str:
        cover = f"t = {self.x_c} - {self.kappa}^2 s^2/({self.x_c}*{self.x_c - 1})"
        return f"({self.x_c},{self.kappa}*s) on {cover}"


Endpoint = Union[Torsion, SectionCover]


@dataclass(frozen=True)
class Waypoint:
    offset: complex
    relative_to_t: bool = False

    def x(self, fiber: LegendreFiber) -> Any:
        base = fiber.t if self.relative_to_t else mp.mpc(0)
        return base + to_mp(complex(self.offset))


@dataclass(frozen=True)
class ChainSpec:
    """An x-plane polyline from ``start`` to ``end``, counted ``weight`` times."""

    name: str
    start: Endpoint
    end: Endpoint
    waypoints: tuple[Waypoint, ...] = ()
    ray_direction: complex = 1j
    weight: int = 1

    def __post_init__(self) -> None:
        if isinstance(self.start, Torsion) and self.start.at_infinity:
            raise ValidationError("A chain may end at infinity but not start there.")
        covers = [p for p in (self.start, self.end) if isinstance(p, SectionCover)]
        if len(covers) == 2 and covers[0] != covers[1]:
            raise ValidationError("A chain can carry at most one section cover.")

    @property
    def cover(self) -> SectionCover | None:
        for point in (self.end, self.start):
            if isinstance(point, SectionCover):
                return point
        return None

    @property
    def is_torsion(self) -> bool:
        return self.cover is None

    @property
    def is_empty(self) -> bool:
        return self.start == self.end and not self.waypoints

    def reversed(self) -> ChainSpec:
        if isinstance(self.end, Torsion) and self.end.at_infinity:
            raise ValidationError("Chains ending at infinity cannot be reversed.")
        return ChainSpec(
            f"{self.name}-reversed",
            self.end,
            self.start,
            tuple(reversed(self.waypoints)),
            self.ray_direction,
            self.weight,
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "start": self.start.describe(),
            "end": self.end.describe(),
            "waypoints": [
                {"offset": [w.offset.real, w.offset.imag], "relative_to_t": w.relative_to_t}
                for w in self.waypoints
            ],
            "weight": self.weight,
        }


CHAIN_CATALOGUE: dict[str, ChainSpec] = {
    "cycle-a": ChainSpec("cycle-a", Torsion("0"), Torsion("t"), weight=2),
    "half-period": ChainSpec(
        "half-period",
        Torsion("0"),
        Torsion("1"),
        (Waypoint(-0.25 + 0.5j), Waypoint(1.25 + 0.5j)),
    ),
    "moving-torsion": ChainSpec("moving-torsion", Torsion("0"), Torsion("t")),
    "section-x2": ChainSpec(
        "section-x2",
        Torsion("0"),
        SectionCover(Fraction(2), Fraction(2)),
        (Waypoint(1 + 0.5j),),
    ),
    "empty": ChainSpec("empty", Torsion("0"), Torsion("0")),
}


def get_chain(name: str) -> ChainSpec:
    chain = CHAIN_CATALOGUE.get(name)
    if chain is None:
        available = ", ".join(sorted(CHAIN_CATALOGUE))
        raise ValidationError(f"Unknown chain '{name}'. Available: {available}.")
    return chain


# ── quadrature ──


@dataclass(frozen=True)
class PathIntegral:
    value: Any
    error: Any
    end_y: Any


def _same(a: Any, b: Any) -> bool:
    return bool(abs(a - b) < mp.mpf(10) ** (-(mp.dps // 2)))


def _distance_to_segment(point: Any, a: Any, b: Any) -> Any:
    direction = b - a
    length2 = abs(direction) ** 2
    if not length2:
        return abs(point - a)
    u = mp.re((point - a) * mp.conj(direction)) / length2
    u = min(max(u, 0), 1)
    return abs(point - (a + direction * u))


def _distance_to_ray(point: Any, a: Any, direction: Any) -> Any:
    u = mp.re((point - a) * mp.conj(direction)) / abs(direction) ** 2
    if u < 0:
        return abs(point - a)
    return abs(point - (a + direction * u))


def _check_clearance(fiber: LegendreFiber, distance: Any, e: Any, where: str) -> None:
    if distance < fiber.margin:
        raise AdmissibilityError(
            f"Path {where} passes within {mp.nstr(distance, 6)} of the branch point "
            f"{mp.nstr(e, 8)}; clearance is {fiber.clearance}."
        )


def _segment(fiber: LegendreFiber, a: Any, b: Any) -> tuple[Any, Any, Any, Any]:
    """(integral of dx/Y, error, Y at a, Y at b) for the continuous branch Y."""
    constant = mp.mpc(1)
    starts = ends = 0
    regular: list[Any] = []
    for e in fiber.branch_points:
        if _same(e, a):
            starts += 1
            constant *= mp.sqrt(b - a)
        elif _same(e, b):
            ends += 1
            constant *= mp.sqrt(a - b)
        else:
            _check_clearance(fiber, _distance_to_segment(e, a, b), e, "segment")
            constant *= mp.sqrt(a - e)
            regular.append((b - a) / (a - e))

    def integrand(phi: Any) -> Any:
        s, c = mp.sin(phi), mp.cos(phi)
        u = s * s
        weight = 2 * (1 if starts else s) * (1 if ends else c)
        denom = constant
        for w in regular:
            denom *= mp.sqrt(1 + w * u)
        return (b - a) * weight / denom

    value, error = mp.quad(integrand, [0, mp.pi / 2], error=True)
    y_start = mp.mpc(0) if starts else constant
    y_end = mp.mpc(0)
    if not ends:
        y_end = constant
        for w in regular:
            y_end *= mp.sqrt(1 + w)
    return value, error, y_start, y_end


def _ray(fiber: LegendreFiber, a: Any, direction: Any) -> tuple[Any, Any, Any]:
    """(integral of dx/Y from a to infinity along a + direction * tau, error, Y at a)."""
    d = direction / abs(direction)
    constant = mp.mpc(1)
    branch_start = False
    regular: list[Any] = []
    for e in fiber.branch_points:
        if _same(e, a):
            branch_start = True
            constant *= mp.sqrt(d)
        else:
            _check_clearance(fiber, _distance_to_ray(e, a, d), e, "ray")
            constant *= mp.sqrt(a - e)
            regular.append(d / (a - e))

    # tau = (1 - sigma^2) / sigma^2; sigma = cos(phi) when the ray leaves a branch point.
    def integrand(var: Any) -> Any:
        if branch_start:
            sigma2 = mp.cos(var) ** 2
        else:
            sigma2 = var * var
        denom = constant
        for w in regular:
            denom *= mp.sqrt(sigma2 + w * (1 - sigma2))
        return 2 * d / denom

    interval = [0, mp.pi / 2] if branch_start else [0, 1]
    value, error = mp.quad(integrand, interval, error=True)
    return value, error, mp.mpc(0) if branch_start else constant


def _match_sign(carried: Any, local: Any) -> int:
    return 1 if mp.re(carried / local) > 0 else -1


def _start_point(chain: ChainSpec, fiber: LegendreFiber) -> tuple[Any, Any]:
    if isinstance(chain.start, Torsion):
        return chain.start.x(fiber), mp.mpc(0)
    return to_mp(chain.start.x_c), chain.start.y(fiber.t)


def integrate_chain(chain: ChainSpec, fiber: LegendreFiber) -> PathIntegral:
    """Integral of dx/y along the chain, continuing y from the declared start."""
    if chain.is_empty:
        return PathIntegral(mp.mpc(0), mp.mpf(0), mp.mpc(0))
    x0, y0 = _start_point(chain, fiber)
    vertices = [x0] + [w.x(fiber) for w in chain.waypoints]
    to_infinity = isinstance(chain.end, Torsion) and chain.end.at_infinity
    if not to_infinity:
        end = chain.end
        vertices.append(end.x(fiber) if isinstance(end, Torsion) else to_mp(end.x_c))

    total, error = mp.mpc(0), mp.mpf(0)
    carried = None if not y0 else y0
    for a, b in zip(vertices, vertices[1:]):
        value, err, y_start, y_end = _segment(fiber, a, b)
        sign = 1 if carried is None else _match_sign(carried, y_start)
        total += sign * value
        error += err
        carried = sign * y_end
    if to_infinity:
        value, err, y_start = _ray(fiber, vertices[-1], to_mp(complex(chain.ray_direction)))
        sign = 1 if carried is None else _match_sign(carried, y_start)
        total += sign * value
        error += err
        carried = mp.mpc(0)

    if isinstance(chain.end, SectionCover):
        target = chain.end.y(fiber.t)
        if abs(carried - target) > abs(carried + target):
            if isinstance(chain.start, SectionCover):
                raise AdmissibilityError(
                    f"Chain '{chain.name}' lands on the opposite sheet at its end point."
                )
            # Starting from a branch point the sheet is free: flip it.
            total, carried = -total, -carried
    return PathIntegral(total * chain.weight, error * abs(chain.weight), carried)


# ── periods and truncated Abel-Jacobi values ──


CYCLES = ("a", "b")


def period_full(t: Any, cycle: str = "a", clearance: float = DEFAULT_CLEARANCE) -> Any:
    """Half-loop period: a -> pi*2F1(1/2,1/2;1;t), b -> -i*pi*2F1(1/2,1/2;1;1-t).

    Both are computed by quadrature of 2 / sqrt(1 - lam sin(phi)^2) on [0, pi/2].
    """
    if cycle not in CYCLES:
        raise ValidationError(f"Unknown cycle '{cycle}'. Available: a, b.")
    fiber = LegendreFiber(t, clearance)
    lam = fiber.t if cycle == "a" else 1 - fiber.t
    if mp.im(lam) == 0 and mp.re(lam) >= 1:
        raise AdmissibilityError(
            f"Cycle {cycle} is evaluated off its branch cut; t={mp.nstr(fiber.t, 8)} lies on it."
        )
    value = mp.quad(lambda phi: 2 / mp.sqrt(1 - lam * mp.sin(phi) ** 2), [0, mp.pi / 2])
    return value if cycle == "a" else -1j * value


@dataclass(frozen=True)
class TruncatedAJ:
    """(-1)^n (2 pi i)^(p - d) times the chain integral, prefactor kept exact."""

    integral: Any
    error: Any
    sign: int
    two_pi_i_power: int

    @property
    def value(self) -> Any:
        return self.sign * (2j * mp.pi) ** self.two_pi_i_power * self.integral

    def to_dict(self, digits: int = 20) -> dict[str, Any]:
        return {
            "integral": format_complex(self.integral, digits),
            "error_estimate": mp.nstr(self.error, 5),
            "sign": self.sign,
            "two_pi_i_power": self.two_pi_i_power,
        }


def truncated_aj(
    chain: ChainSpec,
    t: Any,
    p: int = 1,
    n: int = 0,
    dimension: int = 1,
    clearance: float = DEFAULT_CLEARANCE,
) -> TruncatedAJ:
    fiber = LegendreFiber(t, clearance)
    result = integrate_chain(chain, fiber)
    return TruncatedAJ(
        integral=result.value,
        error=result.error,
        sign=(-1) ** n,
        two_pi_i_power=p - dimension,
    )


