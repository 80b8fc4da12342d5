"""Homogeneous basis forms, the residue pairing, and exact expansions.

A weight-lam form is represented globally as f(z)(dz)^lam by its coefficient
function f.  The degree-n basis element attached to the in-point P_p is the
unique form with the prescribed vanishing orders at every marked point whose
expansion at P_p starts (z - P_p)^(n - lam) * (1 + O(z - P_p)).  On the sphere
with a single out-point this element is a pure product of linear factors

    f = alpha * prod_i (z - P_i)^(e_i) * (z - Q)^(e_Q)   (no Q-factor if Q = inf)

with the exponents read off the order prescription; the normalizing constant
alpha is fixed by the unit leading jet at P_p.

The pairing of weights lam and 1 - lam is the sum of in-point residues of the
product 1-form; expansion coefficients are extracted by pairing against the
dual basis, so every expansion exercises the duality theorem.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .exact import (
    INF,
    Point,
    Poly,
    RatFunc,
    residue_of_product,
    root_multiplicity,
)
from .surface import (
    BasisIndex,
    ConfigError,
    HalfInt,
    ONE,
    SurfaceConfig,
    degree_set,
    half,
    prescribed_orders,
)

_ZERO = Fraction(0)


class WeightError(ValueError):
    """Operands have incompatible weights."""


class NotAHolomorphicError(ValueError):
    """A form has a pole away from the marked points."""


@dataclass(frozen=True)
class MeroForm:
    """A meromorphic weight-lam form f(z)(dz)^lam on the sphere."""

    weight: HalfInt
    func: RatFunc

    @property
    def is_zero(self) -> bool:
        return self.func.is_zero

    def order_at(self, P: Point) -> int:
        """Order at P as a form: at infinity the (dz)^lam twist shifts the
        coefficient-function order by -2*lam."""
        if self.func.is_zero:
            raise ValueError("the zero form has no order")
        if P is INF:
            return self.func.order_at(INF) - self.weight.twice
        return self.func.order_at(P)

    def is_a_holomorphic(self, cfg: SurfaceConfig) -> bool:
        """True when every pole lies in A = {P_1..P_K, Q}."""
        if self.func.is_zero:
            return True
        den = self.func.den
        for P in cfg.in_points:
            _, den = root_multiplicity(den, P)
        if cfg.out_point is not INF:
            _, den = root_multiplicity(den, cfg.out_point)
            if self.order_at(INF) < 0:
                return False
        return den.degree() == 0

    def require_a_holomorphic(self, cfg: SurfaceConfig) -> "MeroForm":
        if not self.is_a_holomorphic(cfg):
            raise NotAHolomorphicError(
                f"form of weight {self.weight} has a pole outside the marked points"
            )
        return self

    # linear structure within one weight

    def __add__(self, other):
        if not isinstance(other, MeroForm):
            return NotImplemented
        if other.weight != self.weight:
            raise WeightError("cannot add forms of different weights")
        return MeroForm(self.weight, self.func + other.func)

    def __sub__(self, other):
        if not isinstance(other, MeroForm):
            return NotImplemented
        if other.weight != self.weight:
            raise WeightError("cannot subtract forms of different weights")
        return MeroForm(self.weight, self.func - other.func)

    def __neg__(self):
        return MeroForm(self.weight, -self.func)

    def scale(self, c) -> "MeroForm":
        return MeroForm(self.weight, self.func * Fraction(c))

    def __str__(self):
        return f"({self.func})(dz)^{self.weight}"


def zero_form(weight: HalfInt) -> MeroForm:
    return MeroForm(weight, RatFunc.const(0))


class FormExpansion:
    """Sparse exact coordinates of a form in the homogeneous basis."""

    __slots__ = ("weight", "_terms")

    def __init__(self, weight: HalfInt, terms: Mapping[BasisIndex, Fraction] | None = None):
        self.weight = weight
        ok = degree_set(weight)
        out: dict[BasisIndex, Fraction] = {}
        for idx, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0:
                continue
            if not ok(idx.degree):
                raise ConfigError(
                    f"index degree {idx.degree} not admissible for weight {weight}"
                )
            out[idx] = c
        self._terms = out

    def items(self) -> list[tuple[BasisIndex, Fraction]]:
        return sorted(self._terms.items())

    def get(self, idx: BasisIndex) -> Fraction:
        return self._terms.get(idx, _ZERO)

    def mapping(self) -> dict[BasisIndex, Fraction]:
        return dict(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if not isinstance(other, FormExpansion):
            return NotImplemented
        return self.weight == other.weight and self._terms == other._terms

    def __repr__(self):
        body = ", ".join(f"({i.degree},{i.point}): {c}" for i, c in self.items())
        return f"FormExpansion({self.weight}; {{{body}}})"

    def __add__(self, other):
        if not isinstance(other, FormExpansion):
            return NotImplemented
        if other.weight != self.weight:
            raise WeightError("cannot add expansions of different weights")
        out = dict(self._terms)
        for idx, c in other._terms.items():
            out[idx] = out.get(idx, _ZERO) + c
        return FormExpansion(self.weight, out)

    def __sub__(self, other):
        if not isinstance(other, FormExpansion):
            return NotImplemented
        return self + other.scale(-1)

    def scale(self, c) -> "FormExpansion":
        c = Fraction(c)
        if c == 0:
            return FormExpansion(self.weight)
        return FormExpansion(self.weight, {i: c * v for i, v in self._terms.items()})

    def min_degree(self) -> HalfInt:
        if not self._terms:
            raise ValueError("empty expansion has no degree support")
        return min(i.degree for i in self._terms)

    def max_degree(self) -> HalfInt:
        if not self._terms:
            raise ValueError("empty expansion has no degree support")
        return max(i.degree for i in self._terms)


def unit_expansion(weight: HalfInt, idx: BasisIndex) -> FormExpansion:
    return FormExpansion(weight, {idx: Fraction(1)})


@lru_cache(maxsize=None)
def _basis_func(cfg: SurfaceConfig, lam: HalfInt, idx: BasisIndex) -> RatFunc:
    in_orders, out_order = prescribed_orders(cfg, lam, idx)
    factors = list(zip(cfg.in_points, in_orders))
    if cfg.out_point is not INF:
        factors.append((cfg.out_point, out_order))
    anchor = cfg.in_points[idx.point - 1]
    num = Poly.const(1)
    den = Poly.const(1)
    norm = Fraction(1)  # leading jet coefficient at the anchor point
    for pt, e in factors:
        if e == 0:
            continue
        if pt != anchor:
            norm *= (anchor - pt) ** e
        lin = Poly((-pt, Fraction(1)))
        if e > 0:
            num = num * lin ** e
        else:
            den = den * lin ** (-e)
    num = num * (1 / norm)
    return RatFunc._raw(num, den)


def basis_element(cfg: SurfaceConfig, lam: HalfInt, idx: BasisIndex) -> MeroForm:
    """The degree-idx.degree basis form of weight lam attached to P_idx.point."""
    return MeroForm(lam, _basis_func(cfg, lam, idx))


def kn_pairing(cfg: SurfaceConfig, f: MeroForm, g: MeroForm) -> Fraction:
    """Residue pairing of weights lam and 1 - lam over the in-points."""
    if f.weight + g.weight != ONE:
        raise WeightError(
            f"pairing needs weights summing to 1, got {f.weight} and {g.weight}"
        )
    if f.is_zero or g.is_zero:
        return _ZERO
    pair = ((f.func, 0), (g.func, 0))
    return sum(
        (residue_of_product(P, pair) for P in cfg.in_points), start=_ZERO
    )


def kn_pairing_out(cfg: SurfaceConfig, f: MeroForm, g: MeroForm) -> Fraction:
    """The same pairing evaluated through the out-point (negated residue)."""
    if f.weight + g.weight != ONE:
        raise WeightError(
            f"pairing needs weights summing to 1, got {f.weight} and {g.weight}"
        )
    if f.is_zero or g.is_zero:
        return _ZERO
    return -residue_of_product(cfg.out_point, ((f.func, 0), (g.func, 0)))


def expand(cfg: SurfaceConfig, f: MeroForm) -> FormExpansion:
    """Exact finite basis expansion of an A-holomorphic form.

    The coefficient at (n, p) is the pairing with the dual element of weight
    1 - lam and degree -n, so each call exercises the duality theorem; the
    degree support is bracketed by the orders of f at the in- and out-points.
    """
    f.require_a_holomorphic(cfg)
    if f.is_zero:
        return FormExpansion(f.weight)
    lam = f.weight
    dual_weight = ONE - lam
    n_lo = lam + min(f.func.order_at(P) for P in cfg.in_points)
    # K*(n - lam) <= -2*lam - ord_Q(f), in twice-units
    limit = lam.twice + 2 * Fraction(-lam.twice - f.order_at(cfg.out_point), cfg.K)
    terms: dict[BasisIndex, Fraction] = {}
    t = n_lo.twice
    while t <= limit:
        n = HalfInt(t)
        for p in range(1, cfg.K + 1):
            dual = basis_element(cfg, dual_weight, BasisIndex(-n, p))
            v = kn_pairing(cfg, f, dual)
            if v:
                terms[BasisIndex(n, p)] = v
        t += 2
    return FormExpansion(lam, terms)


def reconstruct(cfg: SurfaceConfig, expansion: FormExpansion) -> MeroForm:
    """Sum of coefficient * basis element; exact inverse of expand."""
    total = zero_form(expansion.weight)
    for idx, c in expansion.items():
        total = total + basis_element(cfg, expansion.weight, idx).scale(c)
    return total


def filtration_degree(cfg: SurfaceConfig, f: MeroForm) -> HalfInt:
    """Largest n with ord_{P_i}(f) >= n - lam at every in-point.

    This is the intrinsic filtration level of f and coincides with the minimal
    degree in expand(cfg, f).
    """
    if f.is_zero:
        raise ValueError("the zero form has no filtration degree")
    f.require_a_holomorphic(cfg)
    return f.weight + min(f.func.order_at(P) for P in cfg.in_points)
