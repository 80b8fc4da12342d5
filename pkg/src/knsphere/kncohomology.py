"""Geometric 2-cocycles of the superalgebra and their cohomology checks.

A cocycle is determined by an integer combination of the small circles around
the in-points (the cycle class) together with a projective connection.  On the
sphere the zero connection is globally valid (Moebius transition maps have
vanishing Schwarzian derivative), so a connection choice is the zero base plus
an optional quadratic-differential perturbation.

With R the perturbation's coefficient function, the cocycle evaluates vector
fields e, f and -1/2-forms phi, psi through in-point residues of

    (1/2)(e'''f - e f''') - R (e'f - e f')        (even-even)
    -(phi'' psi + phi psi'' - R phi psi)          (odd-odd)

and vanishes on mixed pairs.  All evaluations are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .exact import RatFunc, residue_of_product
from .knbasis import (
    FormExpansion,
    MeroForm,
    WeightError,
    basis_element,
)
from .knalgebra import (
    SuperElement,
    W_HALF,
    W_VEC,
    basis_pair_expansion,
    super_bracket,
)
from .surface import BasisIndex, ConfigError, HalfInt, SurfaceConfig, Window, half

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)

W_QUAD = half(2)


@dataclass(frozen=True)
class ProjectiveConnection:
    """Zero base connection plus an optional quadratic-differential shift."""

    omega: MeroForm | None = None

    def __post_init__(self):
        if self.omega is not None and self.omega.weight != W_QUAD:
            raise WeightError("connection perturbation must be a weight-2 form")

    @property
    def func(self) -> RatFunc | None:
        if self.omega is None or self.omega.is_zero:
            return None
        return self.omega.func


FLAT = ProjectiveConnection()


@dataclass(frozen=True)
class CycleClass:
    """Integer coefficients over the circles around the in-points."""

    coefficients: tuple

    @classmethod
    def circle(cls, i: int, K: int) -> "CycleClass":
        if not 1 <= i <= K:
            raise ConfigError(f"circle index {i} out of range 1..{K}")
        return cls(tuple(1 if j == i else 0 for j in range(1, K + 1)))

    @classmethod
    def separating(cls, K: int) -> "CycleClass":
        return cls((1,) * K)

    def __len__(self):
        return len(self.coefficients)


@dataclass(frozen=True)
class CocycleSpec:
    """One geometric cocycle: a cycle class and a connection choice."""

    cycle: CycleClass
    connection: ProjectiveConnection = FLAT


def schwarzian(h: RatFunc) -> RatFunc:
    """S(h) = h'''/h' - (3/2)(h''/h')^2; rejects constant h."""
    d1 = h.derivative()
    if d1.is_zero:
        raise ValueError("Schwarzian derivative of a constant map")
    d2 = d1.derivative()
    d3 = d2.derivative()
    ratio = d2 / d1
    return d3 / d1 - ratio * ratio * Fraction(3, 2)


def _cycle_sum(cfg: SurfaceConfig, cycle: CycleClass, factors) -> Fraction:
    if len(cycle) != cfg.K:
        raise ConfigError(
            f"cycle has {len(cycle)} coefficients but the configuration has {cfg.K} in-points"
        )
    total = _ZERO
    for c, P in zip(cycle.coefficients, cfg.in_points):
        if c:
            total += c * residue_of_product(P, factors)
    return total


def _vector_value(cfg, cycle, R: RatFunc | None, e: RatFunc, f: RatFunc) -> Fraction:
    v = _HALF * _cycle_sum(cfg, cycle, ((e, 3), (f, 0)))
    v -= _HALF * _cycle_sum(cfg, cycle, ((e, 0), (f, 3)))
    if R is not None:
        v -= _cycle_sum(cfg, cycle, ((R, 0), (e, 1), (f, 0)))
        v += _cycle_sum(cfg, cycle, ((R, 0), (e, 0), (f, 1)))
    return v


def _half_value(cfg, cycle, R: RatFunc | None, p: RatFunc, q: RatFunc) -> Fraction:
    v = _cycle_sum(cfg, cycle, ((p, 2), (q, 0)))
    v += _cycle_sum(cfg, cycle, ((p, 0), (q, 2)))
    if R is not None:
        v -= _cycle_sum(cfg, cycle, ((R, 0), (p, 0), (q, 0)))
    return -v


def cocycle_vector(cfg: SurfaceConfig, spec: CocycleSpec, e: MeroForm, f: MeroForm) -> Fraction:
    """Cocycle value on two vector fields."""
    if e.weight != W_VEC or f.weight != W_VEC:
        raise WeightError("vector cocycle needs two weight -1 forms")
    if e.is_zero or f.is_zero:
        return _ZERO
    return _vector_value(cfg, spec.cycle, spec.connection.func, e.func, f.func)


def cocycle_half(cfg: SurfaceConfig, spec: CocycleSpec, p: MeroForm, q: MeroForm) -> Fraction:
    """Cocycle value on two -1/2-forms (symmetric part)."""
    if p.weight != W_HALF or q.weight != W_HALF:
        raise WeightError("odd cocycle needs two weight -1/2 forms")
    if p.is_zero or q.is_zero:
        return _ZERO
    return _half_value(cfg, spec.cycle, spec.connection.func, p.func, q.func)


def _out_residue(cfg: SurfaceConfig, factors) -> Fraction:
    return residue_of_product(cfg.out_point, factors)


def cocycle_vector_out(cfg: SurfaceConfig, connection: ProjectiveConnection, e: MeroForm, f: MeroForm) -> Fraction:
    """Separating-cycle value computed through the out-point (negated residue)."""
    R = connection.func
    v = _HALF * _out_residue(cfg, ((e.func, 3), (f.func, 0)))
    v -= _HALF * _out_residue(cfg, ((e.func, 0), (f.func, 3)))
    if R is not None:
        v -= _out_residue(cfg, ((R, 0), (e.func, 1), (f.func, 0)))
        v += _out_residue(cfg, ((R, 0), (e.func, 0), (f.func, 1)))
    return -v


def cocycle_half_out(cfg: SurfaceConfig, connection: ProjectiveConnection, p: MeroForm, q: MeroForm) -> Fraction:
    R = connection.func
    v = _out_residue(cfg, ((p.func, 2), (q.func, 0)))
    v += _out_residue(cfg, ((p.func, 0), (q.func, 2)))
    if R is not None:
        v -= _out_residue(cfg, ((R, 0), (p.func, 0), (q.func, 0)))
    return v


@lru_cache(maxsize=None)
def cocycle_basis_value(
    cfg: SurfaceConfig, spec: CocycleSpec, parity: str, i1: BasisIndex, i2: BasisIndex
) -> Fraction:
    """Cached cocycle value on a same-parity basis pair."""
    if parity == "even":
        return cocycle_vector(
            cfg, spec, basis_element(cfg, W_VEC, i1), basis_element(cfg, W_VEC, i2)
        )
    if parity == "odd":
        return cocycle_half(
            cfg, spec, basis_element(cfg, W_HALF, i1), basis_element(cfg, W_HALF, i2)
        )
    raise ConfigError(f"unknown parity {parity!r}")


def cocycle_super(cfg: SurfaceConfig, spec: CocycleSpec, x: SuperElement, y: SuperElement) -> Fraction:
    """Bilinear cocycle on superalgebra elements: even-even plus odd-odd
    contributions; mixed pairs contribute zero."""
    total = _ZERO
    for i1, c1 in x.even.items():
        for i2, c2 in y.even.items():
            total += c1 * c2 * cocycle_basis_value(cfg, spec, "even", i1, i2)
    for i1, c1 in x.odd.items():
        for i2, c2 in y.odd.items():
            total += c1 * c2 * cocycle_basis_value(cfg, spec, "odd", i1, i2)
    return total


def _pure_parts(x: SuperElement):
    if x.even:
        yield 0, SuperElement.from_even(x.even)
    if x.odd:
        yield 1, SuperElement.from_odd(x.odd)


def super_cocycle_check(
    cfg: SurfaceConfig, spec: CocycleSpec, x: SuperElement, y: SuperElement, z: SuperElement
) -> Fraction:
    """Exact defect of the graded cocycle condition

        (-1)^(px*pz) c(x,[y,z]) + (-1)^(py*px) c(y,[z,x]) + (-1)^(pz*py) c(z,[x,y])

    extended multilinearly over the pure-parity parts of the arguments.
    Cocycles produced by this module return zero."""
    total = _ZERO
    for px, xp in _pure_parts(x):
        for py, yp in _pure_parts(y):
            for pz, zp in _pure_parts(z):
                s1 = -1 if px and pz else 1
                s2 = -1 if py and px else 1
                s3 = -1 if pz and py else 1
                total += s1 * cocycle_super(cfg, spec, xp, super_bracket(cfg, yp, zp))
                total += s2 * cocycle_super(cfg, spec, yp, super_bracket(cfg, zp, xp))
                total += s3 * cocycle_super(cfg, spec, zp, super_bracket(cfg, xp, yp))
    return total


# ---------------------------------------------------------------------------
# Linear forms, coboundaries, and the change-of-connection identity
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class LinearForm:
    """Linear form on one parity component, zero on the other."""

    parity: str
    values: Mapping[BasisIndex, Fraction]

    def __post_init__(self):
        if self.parity not in ("even", "odd"):
            raise ConfigError("linear form parity must be 'even' or 'odd'")
        want_integer = self.parity == "even"
        for idx in self.values:
            if idx.degree.is_integer != want_integer:
                raise ConfigError(
                    f"index degree {idx.degree} has the wrong parity for a {self.parity} form"
                )

    @property
    def weight(self) -> HalfInt:
        return W_VEC if self.parity == "even" else W_HALF

    def get(self, idx: BasisIndex) -> Fraction:
        return self.values.get(idx, _ZERO)

    def evaluate(self, exp: FormExpansion) -> Fraction:
        if exp.weight != self.weight:
            raise WeightError(
                f"{self.parity} linear form cannot evaluate a weight {exp.weight} expansion"
            )
        return sum((c * self.values.get(idx, _ZERO) for idx, c in exp.items()), start=_ZERO)


def coboundary(cfg: SurfaceConfig, k: LinearForm, x: SuperElement, y: SuperElement) -> Fraction:
    """delta_1 k (x, y) = k([x, y]): an even form sees the even part of the
    bracket, an odd form the odd part."""
    br = super_bracket(cfg, x, y)
    return k.evaluate(br.even if k.parity == "even" else br.odd)


def connection_kappa(cfg: SurfaceConfig, cycle: CycleClass, omega: MeroForm, idx: BasisIndex) -> Fraction:
    """kappa_C(e_idx) = cycle integral of omega * e_idx (zero on odd parts)."""
    e = basis_element(cfg, W_VEC, idx)
    return _cycle_sum(cfg, cycle, ((omega.func, 0), (e.func, 0)))


def connection_change_check(
    cfg: SurfaceConfig, cycle: CycleClass, omega: MeroForm, window: Window
) -> tuple[LinearForm, dict]:
    """Verify that perturbing the connection by omega shifts the cocycle by
    the coboundary of kappa(e) = integral of omega * e, exactly as bilinear
    forms on all window pairs; returns kappa restricted to the window.
    """
    if omega.weight != W_QUAD:
        raise WeightError("connection perturbation must be a weight-2 form")
    omega.require_a_holomorphic(cfg)
    spec_pert = CocycleSpec(cycle, ProjectiveConnection(omega))
    spec_flat = CocycleSpec(cycle, FLAT)
    kappa_cache: dict[BasisIndex, Fraction] = {}

    def kappa_at(idx: BasisIndex) -> Fraction:
        v = kappa_cache.get(idx)
        if v is None:
            v = connection_kappa(cfg, cycle, omega, idx)
            kappa_cache[idx] = v
        return v

    def kappa_on(exp: FormExpansion) -> Fraction:
        return sum((c * kappa_at(idx) for idx, c in exp.items()), start=_ZERO)

    checked = 0
    counterexample = None
    for parity, weight, kernel in (("even", W_VEC, "bracket"), ("odd", W_HALF, "mult")):
        for i1 in window.indices(cfg.K, weight):
            for i2 in window.indices(cfg.K, weight):
                lhs = cocycle_basis_value(cfg, spec_pert, parity, i1, i2) - cocycle_basis_value(
                    cfg, spec_flat, parity, i1, i2
                )
                rhs = kappa_on(basis_pair_expansion(cfg, kernel, weight, i1, weight, i2))
                checked += 1
                if lhs != rhs and counterexample is None:
                    counterexample = {
                        "parity_pattern": f"{parity}_{parity}",
                        "n": str(i1.degree),
                        "p": i1.point,
                        "m": str(i2.degree),
                        "r": i2.point,
                        "difference": str(lhs),
                        "coboundary": str(rhs),
                    }
    kappa = LinearForm(
        "even", {idx: kappa_at(idx) for idx in window.indices(cfg.K, W_VEC)}
    )
    report = {
        "pairs_checked": checked,
        "equal": counterexample is None,
        "counterexample": counterexample,
    }
    return kappa, report


# ---------------------------------------------------------------------------
# Boundedness, rank, triviality of the odd case
# ---------------------------------------------------------------------------


def boundedness_report(cfg: SurfaceConfig, spec: CocycleSpec, window: Window) -> dict:
    """Scan all same-parity window pairs and report the extreme levels n + m
    carrying a nonzero cocycle value."""
    max_level = None
    min_level = None
    checked = 0
    for parity, weight in (("even", W_VEC), ("odd", W_HALF)):
        for i1 in window.indices(cfg.K, weight):
            for i2 in window.indices(cfg.K, weight):
                checked += 1
                if cocycle_basis_value(cfg, spec, parity, i1, i2) != 0:
                    level = (i1.degree + i2.degree).as_int()
                    max_level = level if max_level is None else max(max_level, level)
                    min_level = level if min_level is None else min(min_level, level)
    return {
        "window": str(window),
        "pairs_checked": checked,
        "max_level_nonzero": max_level,
        "min_level_nonzero": min_level,
    }


def _exact_rank(rows: list[list[Fraction]]) -> int:
    rows = [row[:] for row in rows if any(row)]
    rank = 0
    col_count = len(rows[0]) if rows else 0
    col = 0
    while rank < len(rows) and col < col_count:
        pivot = None
        for r in range(rank, len(rows)):
            if rows[r][col] != 0:
                pivot = r
                break
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        pv = rows[rank][col]
        for r in range(rank + 1, len(rows)):
            c = rows[r][col]
            if c:
                factor = c / pv
                rows[r] = [a - factor * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def independence_rank(cfg: SurfaceConfig, specs: Sequence[CocycleSpec], window: Window) -> int:
    """Exact rank over Q of the cocycle evaluation matrix on window pairs."""
    if not specs:
        raise ConfigError("need at least one cocycle spec")
    pairs = [
        ("even", i1, i2)
        for i1 in window.indices(cfg.K, W_VEC)
        for i2 in window.indices(cfg.K, W_VEC)
    ] + [
        ("odd", i1, i2)
        for i1 in window.indices(cfg.K, W_HALF)
        for i2 in window.indices(cfg.K, W_HALF)
    ]
    rows = [
        [cocycle_basis_value(cfg, spec, parity, i1, i2) for parity, i1, i2 in pairs]
        for spec in specs
    ]
    return _exact_rank(rows)


def trivialize_odd_cocycle(
    cfg: SurfaceConfig,
    values: Mapping[tuple[BasisIndex, BasisIndex], Fraction],
    window: Window,
) -> tuple[LinearForm, dict]:
    """Build an odd linear form whose coboundary reproduces a bounded odd
    cocycle given on mixed (vector, -1/2-form) basis pairs inside the window.

    Descending over odd degrees k, the action e_{0,p}.phi_{k,p} = k phi_{k,p} + y
    (y of higher degree) inverts to

        Phi(phi_{k,p}) = (c(e_{0,p}, phi_{k,p}) - Phi(y)) / k,

    division being safe since k is half-odd.  Values at indices outside the
    window count as zero; the report flags when that truncation was hit, and
    records whether c - delta_1 Phi vanishes on every window pair.
    """
    phi: dict[BasisIndex, Fraction] = {}
    boundary_truncated = False
    odd_degrees = window.degrees(W_HALF)
    even_degrees = window.degrees(W_VEC)
    for k_deg in reversed(odd_degrees):
        k_val = k_deg.as_fraction()
        for p in range(1, cfg.K + 1):
            target = BasisIndex(k_deg, p)
            anchor = BasisIndex(HalfInt(0), p)
            action = basis_pair_expansion(cfg, "bracket", W_VEC, anchor, W_HALF, target)
            assert action.get(target) == k_val, "leading action coefficient must be the degree"
            acc = values.get((anchor, target), _ZERO)
            for idx, c in action.items():
                if idx == target:
                    continue
                assert idx.degree > k_deg, "action terms besides the leading one sit at higher degree"
                if window.contains(idx.degree):
                    acc -= c * phi.get(idx, _ZERO)
                else:
                    boundary_truncated = True
            phi[target] = acc / k_val
    form = LinearForm("odd", phi)
    remaining = 0
    counterexample = None
    checked = 0
    for n in even_degrees:
        for p in range(1, cfg.K + 1):
            ie = BasisIndex(n, p)
            for m in odd_degrees:
                for r in range(1, cfg.K + 1):
                    io = BasisIndex(m, r)
                    action = basis_pair_expansion(cfg, "bracket", W_VEC, ie, W_HALF, io)
                    residual = values.get((ie, io), _ZERO) - sum(
                        (c * phi.get(idx, _ZERO) for idx, c in action.items()), start=_ZERO
                    )
                    checked += 1
                    if residual != 0:
                        remaining += 1
                        if counterexample is None:
                            counterexample = {
                                "n": str(n),
                                "p": p,
                                "m": str(m),
                                "r": r,
                                "residual": str(residual),
                            }
    report = {
        "pairs_checked": checked,
        "vanishes": remaining == 0,
        "nonzero_residuals": remaining,
        "boundary_truncated": boundary_truncated,
        "counterexample": counterexample,
    }
    return form, report


def extended_bracket(
    cfg: SurfaceConfig, spec: CocycleSpec, x: SuperElement, y: SuperElement
) -> tuple[SuperElement, Fraction]:
    """Bracket in the central extension: the superalgebra bracket plus the
    scalar multiplying the central element."""
    return super_bracket(cfg, x, y), cocycle_super(cfg, spec, x, y)


def default_omega(cfg: SurfaceConfig) -> MeroForm:
    """A nonzero A-holomorphic quadratic differential for this configuration."""
    from .exact import INF, Poly

    if cfg.out_point is INF:
        return MeroForm(W_QUAD, RatFunc(Poly.monomial(1)))
    lin = Poly((-cfg.out_point, Fraction(1)))
    return MeroForm(W_QUAD, RatFunc(Poly.const(1), lin ** 4))
