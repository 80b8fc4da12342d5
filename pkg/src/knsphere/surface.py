"""Genus-0 marked-point configurations, half-integer weights, degree sets.

The sphere carries K distinct rational in-points and one out-point (a rational
or the point at infinity).  Weights and degrees are half-integers stored as
twice their value, which keeps every index computation in plain integers.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import json
from typing import Callable, Iterator

from .exact import INF, Point, parse_point, point_str


class ConfigError(ValueError):
    """Invalid marked-point configuration or degree data."""


@dataclass(frozen=True, order=True)
class HalfInt:
    """Element of (1/2)Z stored as twice its value."""

    twice: int

    @property
    def is_integer(self) -> bool:
        return self.twice % 2 == 0

    def as_int(self) -> int:
        if self.twice % 2:
            raise ValueError(f"{self} is not an integer")
        return self.twice // 2

    def as_fraction(self) -> Fraction:
        return Fraction(self.twice, 2)

    def __add__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice + other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice + 2 * other)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, HalfInt):
            return HalfInt(self.twice - other.twice)
        if isinstance(other, int):
            return HalfInt(self.twice - 2 * other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, int):
            return HalfInt(2 * other - self.twice)
        return NotImplemented

    def __neg__(self):
        return HalfInt(-self.twice)

    def __mul__(self, other):
        if isinstance(other, int):
            return HalfInt(self.twice * other)
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self):
        if self.twice % 2 == 0:
            return str(self.twice // 2)
        return f"{self.twice}/2"

    def __repr__(self):
        return f"HalfInt({self})"


def half(value) -> HalfInt:
    """Coerce an int, Fraction, HalfInt, or string like "-3/2" to a HalfInt."""
    if isinstance(value, HalfInt):
        return value
    if isinstance(value, int):
        return HalfInt(2 * value)
    f = Fraction(value)
    if f.denominator not in (1, 2):
        raise ConfigError(f"{value!r} is not a half-integer")
    return HalfInt(f.numerator * (2 // f.denominator))


HALF = HalfInt(1)
ONE = HalfInt(2)
ZERO = HalfInt(0)


def degree_set(lam: HalfInt) -> Callable[[HalfInt], bool]:
    """Membership test for the degree set of weight lam: integers for integer
    weight, half-odd integers for half-odd weight."""
    parity = lam.twice % 2

    def contains(n: HalfInt) -> bool:
        return n.twice % 2 == parity

    return contains


@dataclass(frozen=True, order=True)
class BasisIndex:
    """Label (degree n, in-point number p) of a homogeneous basis element."""

    degree: HalfInt
    point: int


@dataclass(frozen=True)
class Window:
    """Inclusive degree range [lo, hi] used to bound sweeps and tables."""

    lo: HalfInt
    hi: HalfInt

    @classmethod
    def parse(cls, text: str) -> "Window":
        try:
            lo, hi = text.split(":")
        except ValueError:
            raise ConfigError(f"window must look like LO:HI, got {text!r}") from None
        return cls(half(lo), half(hi))

    def __str__(self):
        return f"{self.lo}:{self.hi}"

    def shrunk(self, steps: int = 1) -> "Window":
        return Window(self.lo + steps, self.hi - steps)

    def contains(self, n: HalfInt) -> bool:
        return self.lo <= n <= self.hi

    def degrees(self, lam: HalfInt) -> list[HalfInt]:
        """Degrees of weight-lam elements inside the window, ascending."""
        start = self.lo.twice
        if (start - lam.twice) % 2:
            start += 1
        return [HalfInt(t) for t in range(start, self.hi.twice + 1, 2)]

    def indices(self, K: int, lam: HalfInt) -> list[BasisIndex]:
        return [
            BasisIndex(n, p) for n in self.degrees(lam) for p in range(1, K + 1)
        ]


@dataclass(frozen=True)
class SurfaceConfig:
    """K in-points and one out-point on the genus-0 sphere."""

    in_points: tuple
    out_point: Point
    genus: int = 0

    def __post_init__(self):
        if self.genus != 0:
            raise ConfigError("only genus 0 is supported")
        if not self.in_points:
            raise ConfigError("at least one in-point is required")
        pts = list(self.in_points)
        if self.out_point is not INF:
            pts.append(self.out_point)
        if len(set(pts)) != len(pts):
            raise ConfigError("marked points must be pairwise distinct")

    @classmethod
    def make(cls, in_points, out_point=INF) -> "SurfaceConfig":
        ins = tuple(Fraction(p) for p in in_points)
        out = out_point if out_point is INF else Fraction(out_point)
        return cls(ins, out)

    @property
    def K(self) -> int:
        return len(self.in_points)

    # -- JSON wire format (bit-exact round trip) ----------------------------

    @classmethod
    def from_json(cls, doc: dict) -> "SurfaceConfig":
        try:
            ins = [parse_point(s) for s in doc["in_points"]]
            out = parse_point(doc["out_point"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad configuration document: {exc}") from exc
        if any(p is INF for p in ins):
            raise ConfigError("in-points must be finite rationals")
        if doc.get("genus", 0) != 0:
            raise ConfigError("only genus 0 is supported")
        return cls(tuple(ins), out)

    def to_json(self) -> dict:
        return {
            "in_points": [point_str(p) for p in self.in_points],
            "out_point": point_str(self.out_point),
        }

    @classmethod
    def loads(cls, text: str) -> "SurfaceConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"bad configuration JSON: {exc}") from exc
        return cls.from_json(doc)

    def dumps(self) -> str:
        return json.dumps(self.to_json())


def prescribed_orders(cfg: SurfaceConfig, lam: HalfInt, idx: BasisIndex) -> tuple[tuple[int, ...], int]:
    """Vanishing orders of the basis element (lam, idx) at P_1..P_K and at Q.

    At the in-point P_i the order is (n + 1 - lam) - delta_i^p; at the single
    out-point it is -K*(n + 1 - lam) + (2*lam - 1)*(g - 1), which the genus-0
    constructor pins to g = 0.  The orders sum to the divisor degree of the
    weight bundle, which is -2*lam on the sphere.
    """
    if not degree_set(lam)(idx.degree):
        raise ConfigError(f"degree {idx.degree} not admissible for weight {lam}")
    K = cfg.K
    if not 1 <= idx.point <= K:
        raise ConfigError(f"point index {idx.point} out of range 1..{K}")
    base = (idx.degree - lam).as_int() + 1  # n + 1 - lam
    in_orders = tuple(base - (1 if i == idx.point else 0) for i in range(1, K + 1))
    out_order = -K * base + (lam.twice - 1) * (cfg.genus - 1)
    # divisor degree of the weight bundle on the sphere
    assert sum(in_orders) + out_order == -lam.twice, "order prescription out of balance"
    return in_orders, out_order


def degrees_between(lam: HalfInt, lo: HalfInt, hi: HalfInt) -> Iterator[HalfInt]:
    yield from Window(lo, hi).degrees(lam)
