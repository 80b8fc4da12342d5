"""Exact arithmetic core: rationals, dense polynomials, rational functions.

Scalars are arbitrary-precision rationals (``fractions.Fraction``); nothing in
this module ever rounds.  A polynomial is a dense tuple of coefficients in one
global variable z, ascending by power.  A rational function is a normalized
quotient num/den with den monic and gcd(num, den) = 1, so equality is plain
structural comparison.

Local data is extracted through Laurent jets: at a finite point P the local
coordinate is z - P, at infinity it is w = 1/z.  ``residue`` treats its
argument f as the coefficient function of the 1-form f dz, so at infinity the
substitution dz = -w^{-2} dw is built in.

``residue_of_product`` is the fast path used by the pairing and cocycle
machinery: it computes the exact residue of a product of (derivatives of)
rational functions by convolving cached jets, never forming the product as a
rational function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
import re
from typing import Iterable, Sequence, Union

Rat = Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


class _AtInfinity:
    """Singleton marker for the point at infinity."""

    __slots__ = ()
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "inf"


INF = _AtInfinity()

Point = Union[Fraction, _AtInfinity]


def rat(value) -> Fraction:
    """Coerce an int, string like ``"3/2"``, or Fraction to an exact rational."""
    return Fraction(value)


def parse_point(text: str) -> Point:
    return INF if text.strip() == "inf" else Fraction(text)


def point_str(P: Point) -> str:
    return "inf" if P is INF else str(P)


_TERM_RE = re.compile(
    r"(?P<sign>[+-]?)(?P<coef>\d+(?:/\d+)?)?(?:\*)?(?P<var>z(?:\^(?P<pow>\d+))?)?$"
)


class Poly:
    """Dense univariate polynomial over the rationals."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((Fraction(c),))

    @classmethod
    def monomial(cls, power: int, coeff=1) -> "Poly":
        if power < 0:
            raise ValueError("monomial power must be >= 0")
        return cls((_ZERO,) * power + (Fraction(coeff),))

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> int | None:
        """Degree, with None as the distinguished degree of the zero polynomial."""
        return len(self.coeffs) - 1 if self.coeffs else None

    def leading(self) -> Fraction:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __bool__(self):
        return bool(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coeffs)
        return self._hash

    def __repr__(self):
        return f"Poly({self})"

    # -- arithmetic ---------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other)
        return None

    def __add__(self, other):
        o = Poly._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self.coeffs, o.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        o = Poly._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = Poly._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly()
            return Poly(tuple(c * u for u in self.coeffs))
        if not isinstance(other, Poly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return Poly()
        out = [_ZERO] * (len(a) + len(b) - 1)
        for i, u in enumerate(a):
            if u == 0:
                continue
            for j, v in enumerate(b):
                out[i + j] += u * v
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __divmod__(self, other):
        o = Poly._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        db = len(o.coeffs) - 1
        lead_inv = 1 / o.coeffs[-1]
        if len(rem) - 1 < db:
            return Poly(), Poly(rem)
        quot = [_ZERO] * (len(rem) - db)
        for k in range(len(rem) - 1, db - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c * lead_inv
            quot[k - db] = q
            for j in range(db + 1):
                rem[k - db + j] -= q * o.coeffs[j]
        return Poly(quot), Poly(rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    # -- evaluation and calculus -------------------------------------------

    def __call__(self, x) -> Fraction:
        acc = _ZERO
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        return Poly(tuple(i * c for i, c in enumerate(self.coeffs) if i))

    def translate(self, a) -> "Poly":
        """Coefficients of p(z + a), i.e. the Taylor shift to the point -a."""
        a = Fraction(a)
        cs = list(self.coeffs)
        n = len(cs)
        for i in range(n - 1):
            for j in range(n - 2, i - 1, -1):
                cs[j] += a * cs[j + 1]
        return Poly(cs)

    def reversed_coeffs(self) -> "Poly":
        """z^deg * p(1/z): the coefficient sequence reversed."""
        return Poly(tuple(reversed(self.coeffs)))

    def monic(self) -> "Poly":
        if self.is_zero:
            return self
        lead = self.coeffs[-1]
        if lead == 1:
            return self
        return self * (1 / lead)

    # -- text format ---------------------------------------------------------

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "z" if k == 1 else f"z^{k}"
                body = var if mag == 1 else f"{mag}*{var}"
            parts.append((c < 0, body))
        neg, body = parts[0]
        out = ("-" if neg else "") + body
        for neg, body in parts[1:]:
            out += (" - " if neg else " + ") + body
        return out

    @classmethod
    def parse(cls, text: str) -> "Poly":
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty polynomial string")
        chunks = re.findall(r"[+-]?[^+-]+", s)
        if "".join(chunks) != s:
            raise ValueError(f"cannot parse polynomial: {text!r}")
        coeffs: dict[int, Fraction] = {}
        for chunk in chunks:
            m = _TERM_RE.fullmatch(chunk)
            if not m or (m.group("coef") is None and m.group("var") is None):
                raise ValueError(f"cannot parse polynomial term: {chunk!r}")
            sign = -1 if m.group("sign") == "-" else 1
            coef = Fraction(m.group("coef")) if m.group("coef") else _ONE
            if m.group("var"):
                power = int(m.group("pow")) if m.group("pow") else 1
            else:
                power = 0
            coeffs[power] = coeffs.get(power, _ZERO) + sign * coef
        out = [_ZERO] * (max(coeffs) + 1)
        for k, c in coeffs.items():
            out[k] = c
        return cls(out)


ZP = Poly.monomial(1)  # the variable z as a polynomial


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the rationals (Euclid); gcd(0, 0) = 0."""
    while not b.is_zero:
        a, b = b, a % b
    return a.monic()


def _divide_linear(p: Poly, r: Fraction) -> tuple[Poly, Fraction]:
    """Synthetic division: p = (z - r) * q + p(r)."""
    cs = p.coeffs
    n = len(cs) - 1
    quot = [_ZERO] * n
    acc = cs[n]
    for k in range(n - 1, -1, -1):
        quot[k] = acc
        acc = cs[k] + r * acc
    return Poly(quot), acc


def root_multiplicity(p: Poly, r: Fraction) -> tuple[int, Poly]:
    """Largest k with (z - r)^k dividing p, and the exact cofactor."""
    if p.is_zero:
        raise ValueError("zero polynomial vanishes to every order")
    r = Fraction(r)
    k = 0
    while True:
        quot, rem = _divide_linear(p, r)
        if rem != 0:
            return k, p
        p = quot
        k += 1


class RatFunc:
    """Normalized quotient of polynomials: den monic, gcd(num, den) = 1."""

    __slots__ = ("num", "den", "_hash", "_jets")

    def __init__(self, num, den=1):
        num = num if isinstance(num, Poly) else Poly.const(num) if isinstance(num, (int, Fraction)) else None
        den = den if isinstance(den, Poly) else Poly.const(den) if isinstance(den, (int, Fraction)) else None
        if num is None or den is None:
            raise TypeError("RatFunc expects polynomials or rationals")
        if den.is_zero:
            raise ZeroDivisionError("zero denominator")
        if num.is_zero:
            num, den = Poly(), Poly.const(1)
        else:
            g = poly_gcd(num, den)
            if g.degree():
                num, den = num // g, den // g
            lead = den.leading()
            if lead != 1:
                inv = 1 / lead
                num, den = num * inv, den * inv
        self.num = num
        self.den = den
        self._hash = None
        self._jets = None

    @classmethod
    def _raw(cls, num: Poly, den: Poly) -> "RatFunc":
        """Trusted constructor: caller guarantees den monic and gcd(num, den) = 1."""
        self = object.__new__(cls)
        self.num = num
        self.den = den
        self._hash = None
        self._jets = None
        return self

    @classmethod
    def const(cls, c) -> "RatFunc":
        c = Fraction(c)
        return cls._raw(Poly((c,)) if c else Poly(), Poly.const(1))

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    def __bool__(self):
        return not self.num.is_zero

    def __eq__(self, other):
        if isinstance(other, RatFunc):
            return self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction, Poly)):
            return self == RatFunc(other)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    def __repr__(self):
        return f"RatFunc({self})"

    def __str__(self):
        if self.den == Poly.const(1):
            return str(self.num)
        return f"({self.num})/({self.den})"

    @staticmethod
    def _coerce(other) -> "RatFunc | None":
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, (int, Fraction, Poly)):
            return RatFunc(other)
        return None

    def __add__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc._raw(-self.num, self.den)

    def __sub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return RatFunc._raw(Poly(), Poly.const(1))
            return RatFunc._raw(self.num * c, self.den)
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return RatFunc(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero:
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunc(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = RatFunc._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if n == 0:
            return RatFunc.const(1)
        if n < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of zero")
            return RatFunc(self.den ** (-n), self.num ** (-n))
        return RatFunc._raw(self.num ** n, self.den ** n)

    def __call__(self, x) -> Fraction:
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.num(x) / d

    def derivative(self) -> "RatFunc":
        return RatFunc(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def order_at(self, P: Point) -> int:
        """Order of vanishing at P (negative at a pole); undefined for 0."""
        if self.is_zero:
            raise ValueError("the zero function has no order")
        if P is INF:
            return self.den.degree() - self.num.degree()
        kn, _ = root_multiplicity(self.num, P)
        kd, _ = root_multiplicity(self.den, P)
        return kn - kd


@dataclass(frozen=True)
class LaurentJet:
    """Truncated Laurent expansion in the local coordinate at ``center``.

    ``coeffs[i]`` is the coefficient of t^(lead_order + i) where t = z - center
    (or t = w = 1/z at infinity).  The truncation length is len(coeffs); for a
    nonzero function coeffs[0] != 0.  The zero function yields empty coeffs.
    """

    center: Point
    lead_order: int
    coeffs: tuple

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, k: int) -> Fraction:
        if self.is_zero:
            return _ZERO
        if k < self.lead_order:
            return _ZERO
        if k >= self.lead_order + len(self.coeffs):
            raise ValueError(f"coefficient {k} beyond jet truncation")
        return self.coeffs[k - self.lead_order]


def _strip_low_zeros(p: Poly) -> tuple[int, tuple]:
    cs = p.coeffs
    i = 0
    while cs[i] == 0:
        i += 1
    return i, cs[i:]


def _series_quotient(num: Sequence[Fraction], den: Sequence[Fraction], length: int) -> list:
    """First ``length`` Taylor coefficients of num/den; requires den[0] != 0."""
    acc = list(num[:length]) + [_ZERO] * max(0, length - len(num))
    inv = 1 / den[0]
    out = []
    for k in range(length):
        c = acc[k] * inv
        out.append(c)
        jmax = min(len(den) - 1, length - 1 - k)
        for j in range(1, jmax + 1):
            if den[j]:
                acc[k + j] -= c * den[j]
    return out


def _local_parts(f: RatFunc, P: Point) -> tuple[int, tuple, tuple]:
    """Lead order of f at P plus local numerator/denominator coefficient
    sequences that are nonzero at 0."""
    if P is INF:
        dn, dd = f.num.degree(), f.den.degree()
        return dd - dn, tuple(reversed(f.num.coeffs)), tuple(reversed(f.den.coeffs))
    a, ncs = _strip_low_zeros(f.num.translate(P))
    b, dcs = _strip_low_zeros(f.den.translate(P))
    return a - b, ncs, dcs


def laurent_at(f: RatFunc, P: Point, length: int) -> LaurentJet:
    """Exact Laurent jet of f at P to the stated truncation length."""
    if length < 1:
        raise ValueError("jet length must be positive")
    if f.is_zero:
        return LaurentJet(P, 0, ())
    lead, ncs, dcs = _local_parts(f, P)
    return LaurentJet(P, lead, tuple(_series_quotient(ncs, dcs, length)))


def residue(f: RatFunc, P: Point) -> Fraction:
    """Residue at P of the 1-form f dz (dz = -w^{-2} dw at infinity)."""
    if f.is_zero:
        return _ZERO
    lead, ncs, dcs = _local_parts(f, P)
    if P is INF:
        # res = -[w^1] of the local expansion of f in w
        k = 1 - lead
        if k < 0:
            return _ZERO
        return -_series_quotient(ncs, dcs, k + 1)[k]
    k = -1 - lead
    if k < 0:
        return _ZERO
    return _series_quotient(ncs, dcs, k + 1)[k]


# ---------------------------------------------------------------------------
# Jet convolution engine.
#
# Residues of products of (z-derivatives of) rational functions are linear
# convolutions of local jets, so no product rational function is ever built.
# Jets live in a per-instance cache on each RatFunc, keyed by the expansion
# point, and are grown on demand.
# ---------------------------------------------------------------------------


def _cached_jet(f: RatFunc, P: Point, hi: int) -> tuple[int, list]:
    """(lead, coeffs) of f at P with indices [lead, max(hi, lead)] covered."""
    jets = f._jets
    if jets is None:
        jets = f._jets = {}
    entry = jets.get(P)
    if entry is not None:
        lead, coeffs = entry
        if lead + len(coeffs) - 1 >= hi:
            return entry
        length = max(hi - lead + 1, 2 * len(coeffs))
        lead2, ncs, dcs = _local_parts(f, P)
    else:
        lead2, ncs, dcs = _local_parts(f, P)
        length = max(hi - lead2 + 1, 1)
    entry = (lead2, _series_quotient(ncs, dcs, length))
    jets[P] = entry
    return entry


def _cached_lead(f: RatFunc, P: Point) -> int:
    """Exact lead order of f at P, sourced from the per-instance jet cache."""
    jets = f._jets
    if jets is not None:
        entry = jets.get(P)
        if entry is not None:
            return entry[0]
    return _cached_jet(f, P, 0)[0]


def _jet_dz(lead: int, coeffs: Sequence[Fraction], at_infinity: bool) -> tuple[int, list]:
    """Apply d/dz to a local jet: d/dt in the finite chart, -w^2 d/dw at infinity."""
    if at_infinity:
        return lead + 1, [-(lead + i) * c for i, c in enumerate(coeffs)]
    return lead - 1, [(lead + i) * c for i, c in enumerate(coeffs)]


def residue_of_product(P: Point, factors: Sequence[tuple[RatFunc, int]]) -> Fraction:
    """Exact residue at P of (prod_i d^{k_i} f_i / dz^{k_i}) dz.

    Each factor is (f, k) with k >= 0 the number of z-derivatives applied.
    """
    at_inf = P is INF
    target = 1 if at_inf else -1
    leads = []
    for f, k in factors:
        if f.is_zero:
            return _ZERO
        base = _cached_lead(f, P)
        # order bound after k z-derivatives: the finite chart can drop by k,
        # the infinity chart rises by k
        leads.append(base + k if at_inf else base - k)
    jets = []
    for (f, k), lead_bound in zip(factors, leads):
        hi = target - (sum(leads) - lead_bound)
        raw_hi = hi - k if at_inf else hi + k
        lead, coeffs = _cached_jet(f, P, raw_hi)
        coeffs = list(coeffs)
        for _ in range(k):
            lead, coeffs = _jet_dz(lead, coeffs, at_inf)
        jets.append((lead, coeffs, hi))
    value = _convolve_at(target, jets)
    return -value if at_inf else value


def _convolve_at(target: int, jets: list) -> Fraction:
    """Coefficient of t^target in the product of jets; jets must cover it."""
    if len(jets) == 1:
        lead, coeffs, _ = jets[0]
        idx = target - lead
        return coeffs[idx] if 0 <= idx < len(coeffs) else _ZERO
    if len(jets) == 2:
        (la, A, _), (lb, B, _) = jets
        lo = max(la, target - (lb + len(B) - 1))
        hi = min(la + len(A) - 1, target - lb)
        s = _ZERO
        for i in range(lo, hi + 1):
            a = A[i - la]
            if a:
                b = B[target - i - lb]
                if b:
                    s += a * b
        return s
    # three or more: peel one factor and recurse on the coefficient split
    la, A, _ = jets[0]
    rest = jets[1:]
    rest_lead = sum(j[0] for j in rest)
    rest_hi = sum(j[0] + len(j[1]) - 1 for j in rest)
    lo = max(la, target - rest_hi)
    hi = min(la + len(A) - 1, target - rest_lead)
    s = _ZERO
    for i in range(lo, hi + 1):
        a = A[i - la]
        if a:
            s += a * _convolve_at(target - i, rest)
    return s


