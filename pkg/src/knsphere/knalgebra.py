"""Products and brackets of meromorphic forms, and their structure tables.

Every Lie-type operation here is a specialization of one generic bracket on
pairs of weighted forms,

    [s (dz)^a, t (dz)^b] = ((-a) s t' + b t s') (dz)^(a+b+1),

which restricts to the vector-field bracket at weights (-1,-1), to the Lie
derivative at (-1, b), to minus the Lie derivative at (b, -1), and to the
odd-odd part of the Jordan product at (-1/2,-1/2).  The associative product
multiplies coefficient functions and adds weights.

Structure constants are extracted through the duality pairing (never by
matching monomials), so tables are exact for every number of in-points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .exact import residue_of_product
from .knbasis import (
    FormExpansion,
    MeroForm,
    WeightError,
    basis_element,
    unit_expansion,
)
from .surface import BasisIndex, ConfigError, HalfInt, SurfaceConfig, Window, half

_ZERO = Fraction(0)

W_FUN = half(0)
W_HALF = half("-1/2")
W_VEC = half(-1)


def mult(f: MeroForm, g: MeroForm) -> MeroForm:
    """Associative product: multiply coefficient functions, add weights."""
    return MeroForm(f.weight + g.weight, f.func * g.func)


def bracket(f: MeroForm, g: MeroForm) -> MeroForm:
    """Generic weight-shifting bracket landing in weight a + b + 1."""
    a = f.weight.as_fraction()
    b = g.weight.as_fraction()
    func = f.func * g.func.derivative() * (-a) + g.func * f.func.derivative() * b
    return MeroForm(f.weight + g.weight + 1, func)


def lie_derivative(e: MeroForm, f: MeroForm) -> MeroForm:
    """Action of a vector field on a weight-b form: e f' + b f e'."""
    if e.weight != W_VEC:
        raise WeightError("Lie derivative needs a weight -1 first argument")
    return bracket(e, f)


# ---------------------------------------------------------------------------
# Operation tags and their kernels
# ---------------------------------------------------------------------------

OPERATIONS = ("mult", "bracket", "super", "jordan", "d1")

_OP_ALLOWED = {
    "super": {W_VEC, W_HALF},
    "jordan": {W_FUN, W_HALF},
    "d1": {W_FUN, W_VEC},
}


def operation_kernel(op: str, lam: HalfInt, nu: HalfInt) -> str:
    """Reduce an operation tag at a weight pair to 'mult' or 'bracket'."""
    if op not in OPERATIONS:
        raise ConfigError(f"unknown operation {op!r}; expected one of {OPERATIONS}")
    allowed = _OP_ALLOWED.get(op)
    if allowed is not None and (lam not in allowed or nu not in allowed):
        names = ", ".join(str(w) for w in sorted(allowed, key=lambda w: w.twice))
        raise ConfigError(f"operation {op!r} only acts on weights {{{names}}}")
    if op == "mult":
        return "mult"
    if op == "bracket" or op == "d1":
        return "bracket"
    if op == "super":
        return "mult" if lam == W_HALF and nu == W_HALF else "bracket"
    # jordan: function products except on the odd-odd part
    return "bracket" if lam == W_HALF and nu == W_HALF else "mult"


def _kernel_result_weight(kernel: str, lam: HalfInt, nu: HalfInt) -> HalfInt:
    return lam + nu if kernel == "mult" else lam + nu + 1


@lru_cache(maxsize=None)
def basis_pair_expansion(
    cfg: SurfaceConfig, kernel: str, lam: HalfInt, i1: BasisIndex, nu: HalfInt, i2: BasisIndex
) -> FormExpansion:
    """Exact expansion of kernel(basis(lam, i1), basis(nu, i2)).

    Coefficients are residue pairings against the dual basis, evaluated by jet
    convolution; the degree support starts at deg(i1) + deg(i2) and is capped
    through the out-point pole order.
    """
    from .surface import ONE, prescribed_orders

    s = basis_element(cfg, lam, i1).func
    t = basis_element(cfg, nu, i2).func
    mu = _kernel_result_weight(kernel, lam, nu)
    n_lo = i1.degree + i2.degree
    # form order of the result at the out-point, bounded below
    _, out1 = prescribed_orders(cfg, lam, i1)
    _, out2 = prescribed_orders(cfg, nu, i2)
    out_bound = out1 + out2 - (0 if kernel == "mult" else 1)
    # K*(n - mu) <= -2*mu - ord_Q, in twice-units
    limit_num = -2 * mu.twice - 2 * out_bound
    a = lam.as_fraction()
    b = nu.as_fraction()
    terms: dict[BasisIndex, Fraction] = {}
    t2 = n_lo.twice
    while cfg.K * (t2 - mu.twice) <= limit_num:
        n = HalfInt(t2)
        for p in range(1, cfg.K + 1):
            dual = basis_element(cfg, ONE - mu, BasisIndex(-n, p)).func
            v = _ZERO
            for P in cfg.in_points:
                if kernel == "mult":
                    v += residue_of_product(P, ((s, 0), (t, 0), (dual, 0)))
                else:
                    v += (-a) * residue_of_product(P, ((s, 0), (t, 1), (dual, 0)))
                    v += b * residue_of_product(P, ((t, 0), (s, 1), (dual, 0)))
            if v:
                terms[BasisIndex(n, p)] = v
        t2 += 2
    return FormExpansion(mu, terms)


def combine_bilinear(
    cfg: SurfaceConfig, kernel: str, x: FormExpansion, y: FormExpansion
) -> FormExpansion:
    """Bilinear extension of a kernel from basis pairs to expansions."""
    mu = _kernel_result_weight(kernel, x.weight, y.weight)
    acc: dict[BasisIndex, Fraction] = {}
    for ix, cx in x.items():
        for iy, cy in y.items():
            c = cx * cy
            for iz, cz in basis_pair_expansion(cfg, kernel, x.weight, ix, y.weight, iy).items():
                acc[iz] = acc.get(iz, _ZERO) + c * cz
    return FormExpansion(mu, acc)


# ---------------------------------------------------------------------------
# The Lie superalgebra, differential operators, and the Jordan superalgebra
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=True)
class SuperElement:
    """Element of the superalgebra: a vector field plus a -1/2-form."""

    even: FormExpansion
    odd: FormExpansion

    def __post_init__(self):
        if self.even.weight != W_VEC:
            raise WeightError("even part must have weight -1")
        if self.odd.weight != W_HALF:
            raise WeightError("odd part must have weight -1/2")

    @classmethod
    def from_even(cls, exp: FormExpansion) -> "SuperElement":
        return cls(exp, FormExpansion(W_HALF))

    @classmethod
    def from_odd(cls, exp: FormExpansion) -> "SuperElement":
        return cls(FormExpansion(W_VEC), exp)

    @classmethod
    def basis_even(cls, idx: BasisIndex) -> "SuperElement":
        return cls.from_even(unit_expansion(W_VEC, idx))

    @classmethod
    def basis_odd(cls, idx: BasisIndex) -> "SuperElement":
        return cls.from_odd(unit_expansion(W_HALF, idx))

    @property
    def is_zero(self) -> bool:
        return not self.even and not self.odd

    def __add__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        return SuperElement(self.even + other.even, self.odd + other.odd)

    def __sub__(self, other):
        if not isinstance(other, SuperElement):
            return NotImplemented
        return SuperElement(self.even - other.even, self.odd - other.odd)

    def scale(self, c) -> "SuperElement":
        return SuperElement(self.even.scale(c), self.odd.scale(c))


def super_bracket(cfg: SurfaceConfig, x: SuperElement, y: SuperElement) -> SuperElement:
    """Super bracket: vector bracket plus odd product on the even side, the
    two Lie-derivative actions on the odd side."""
    even = combine_bilinear(cfg, "bracket", x.even, y.even) + combine_bilinear(
        cfg, "mult", x.odd, y.odd
    )
    odd = combine_bilinear(cfg, "bracket", x.even, y.odd) + combine_bilinear(
        cfg, "bracket", x.odd, y.even
    )
    return SuperElement(even, odd)


@dataclass(frozen=True, eq=True)
class D1Element:
    """Differential operator of degree <= 1: a function plus a vector field."""

    fun: FormExpansion
    vec: FormExpansion

    def __post_init__(self):
        if self.fun.weight != W_FUN:
            raise WeightError("function part must have weight 0")
        if self.vec.weight != W_VEC:
            raise WeightError("vector part must have weight -1")

    def __add__(self, other):
        if not isinstance(other, D1Element):
            return NotImplemented
        return D1Element(self.fun + other.fun, self.vec + other.vec)


def d1_bracket(cfg: SurfaceConfig, a: D1Element, b: D1Element) -> D1Element:
    """[(g, e), (h, f)] = (e.h - f.g, [e, f]); the function part is abelian."""
    fun = combine_bilinear(cfg, "bracket", a.vec, b.fun) + combine_bilinear(
        cfg, "bracket", a.fun, b.vec
    )
    vec = combine_bilinear(cfg, "bracket", a.vec, b.vec)
    return D1Element(fun, vec)


@dataclass(frozen=True, eq=True)
class JordanElement:
    """Element of the Jordan superalgebra: a function plus a -1/2-form."""

    even: FormExpansion
    odd: FormExpansion

    def __post_init__(self):
        if self.even.weight != W_FUN:
            raise WeightError("even part must have weight 0")
        if self.odd.weight != W_HALF:
            raise WeightError("odd part must have weight -1/2")


def jordan_product(cfg: SurfaceConfig, x: JordanElement, y: JordanElement) -> JordanElement:
    """Supercommutative product: function products, except that two odd
    elements multiply through the weight (-1/2,-1/2) bracket into functions."""
    even = combine_bilinear(cfg, "mult", x.even, y.even) + combine_bilinear(
        cfg, "bracket", x.odd, y.odd
    )
    odd = combine_bilinear(cfg, "mult", x.even, y.odd) + combine_bilinear(
        cfg, "mult", y.even, x.odd
    )
    return JordanElement(even, odd)


# ---------------------------------------------------------------------------
# Structure tables and grading bounds
# ---------------------------------------------------------------------------


class StructTable:
    """Exact structure constants of one operation on one weight pair."""

    def __init__(self, cfg: SurfaceConfig, op: str, lam: HalfInt, nu: HalfInt, window: Window):
        kernel = operation_kernel(op, lam, nu)
        self.cfg = cfg
        self.op = op
        self.lam = lam
        self.nu = nu
        self.window = window
        self.result_weight = _kernel_result_weight(kernel, lam, nu)
        self.pairs: dict[tuple[BasisIndex, BasisIndex], FormExpansion] = {}
        for i1 in window.indices(cfg.K, lam):
            for i2 in window.indices(cfg.K, nu):
                self.pairs[(i1, i2)] = basis_pair_expansion(cfg, kernel, lam, i1, nu, i2)

    def rows(self):
        """Deterministic (n, p, m, r, h, s, coeff) rows, sorted."""
        for (i1, i2) in sorted(self.pairs):
            for iz, c in self.pairs[(i1, i2)].items():
                yield (i1.degree, i1.point, i2.degree, i2.point, iz.degree, iz.point, c)

    def entry(self, i1: BasisIndex, i2: BasisIndex) -> FormExpansion:
        return self.pairs[(i1, i2)]

    @property
    def is_empty(self) -> bool:
        return all(not e for e in self.pairs.values())


def struct_table(cfg: SurfaceConfig, op: str, lam: HalfInt, nu: HalfInt, window: Window) -> StructTable:
    return StructTable(cfg, op, lam, nu, window)


def grading_bounds(table: StructTable) -> tuple[int, int]:
    """(min, max) of h - (n + m) over all nonzero entries; raises when the
    table has no entries at all."""
    lo = None
    hi = None
    for (i1, i2), exp in table.pairs.items():
        base = i1.degree + i2.degree
        for iz, _ in exp.items():
            d = (iz.degree - base).as_int()
            lo = d if lo is None or d < lo else lo
            hi = d if hi is None or d > hi else hi
    if lo is None:
        raise ValueError("empty structure table has no grading bounds")
    return lo, hi


def grading_bounds_stable(cfg, op, lam, nu, window: Window) -> dict:
    """Bounds on the window plus a stability flag against the shrunk window."""
    table = struct_table(cfg, op, lam, nu, window)
    out: dict = {"window": str(window)}
    try:
        out["r_low"], out["r_high"] = grading_bounds(table)
    except ValueError:
        out["r_low"] = out["r_high"] = None
        out["stable"] = None
        return out
    inner = window.shrunk(1)
    if inner.lo > inner.hi:
        out["stable"] = None
        return out
    inner_table = struct_table(cfg, op, lam, nu, inner)
    try:
        inner_bounds = grading_bounds(inner_table)
    except ValueError:
        out["stable"] = None
        return out
    out["stable"] = inner_bounds == (out["r_low"], out["r_high"])
    return out


def triangular_part(x: FormExpansion, R: int) -> tuple[FormExpansion, FormExpansion, FormExpansion]:
    """Split an expansion into the degree ranges m > 0, -R <= m <= 0, m < -R."""
    if R < 0:
        raise ValueError("triangular split needs R >= 0")
    plus: dict[BasisIndex, Fraction] = {}
    zero: dict[BasisIndex, Fraction] = {}
    minus: dict[BasisIndex, Fraction] = {}
    for idx, c in x.items():
        if idx.degree.twice > 0:
            plus[idx] = c
        elif idx.degree.twice >= -2 * R:
            zero[idx] = c
        else:
            minus[idx] = c
    w = x.weight
    return FormExpansion(w, plus), FormExpansion(w, zero), FormExpansion(w, minus)
