"""Window-certified verification suites.

Each suite sweeps a finite degree window of one configuration and returns a
list of check records {name, status, checked, counterexample}.  Values are
exact rationals throughout, so every check is a strict equality; a failing
check carries the first offending tuple as its counterexample payload.

The triple sweeps (Jacobi, cocycle conditions) run off cached structure
tables: brackets of basis pairs are expanded once, then each triple is a small
exact linear combination.  Defects of parity patterns whose every cocycle term
pairs opposite parities are zero by the (exhaustively checked) vanishing of
the cocycle on mixed pairs; the substantive patterns are swept in full.
"""

from __future__ import annotations

from fractions import Fraction
import math
import random

from . import kncohomology as knc
from .exact import Poly, RatFunc
from .knalgebra import (
    SuperElement,
    W_HALF,
    W_VEC,
    basis_pair_expansion,
    bracket,
    mult,
)
from .knbasis import (
    FormExpansion,
    basis_element,
    expand,
    kn_pairing,
    kn_pairing_out,
    reconstruct,
    unit_expansion,
)
from .kncohomology import (
    CocycleSpec,
    CycleClass,
    FLAT,
    LinearForm,
    ProjectiveConnection,
    boundedness_report,
    connection_change_check,
    default_omega,
    independence_rank,
    trivialize_odd_cocycle,
)
from .surface import BasisIndex, HalfInt, SurfaceConfig, Window

_ZERO = Fraction(0)

#: weights swept by the duality suite: -2 .. 2 in half-integer steps
DUALITY_WEIGHTS = tuple(HalfInt(t) for t in range(-4, 5))

SUITE_NAMES = (
    "duality",
    "jacobi",
    "poisson",
    "cocycle",
    "boundedness",
    "rank",
    "oddtrivial",
)


def _check(name: str, ok: bool, checked: int, counterexample=None, **extra) -> dict:
    rec = {"name": name, "status": "pass" if ok else "fail", "checked": checked}
    rec.update(extra)
    rec["counterexample"] = counterexample
    return rec


def _spec_label(spec: CocycleSpec) -> str:
    cyc = ",".join(str(c) for c in spec.cycle.coefficients)
    conn = "0" if spec.connection.func is None else str(spec.connection.func)
    return f"cycle=({cyc}),omega={conn}"


# ---------------------------------------------------------------------------
# duality
# ---------------------------------------------------------------------------


def suite_duality(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    checks = []
    K = cfg.K
    for lam in DUALITY_WEIGHTS:
        dual = HalfInt(2) - lam
        counterexample = None
        out_counterexample = None
        checked = 0
        for i1 in window.indices(K, lam):
            f = basis_element(cfg, lam, i1)
            for i2 in window.indices(K, lam):
                g = basis_element(cfg, dual, BasisIndex(-i2.degree, i2.point))
                v = kn_pairing(cfg, f, g)
                want = Fraction(1) if i1 == i2 else _ZERO
                checked += 1
                if v != want and counterexample is None:
                    counterexample = {
                        "lambda": str(lam), "n": str(i1.degree), "p": i1.point,
                        "m": str(i2.degree), "r": i2.point,
                        "value": str(v), "expected": str(want),
                    }
                w = kn_pairing_out(cfg, f, g)
                if w != v and out_counterexample is None:
                    out_counterexample = {
                        "lambda": str(lam), "n": str(i1.degree), "p": i1.point,
                        "m": str(i2.degree), "r": i2.point,
                        "in_value": str(v), "out_value": str(w),
                    }
        checks.append(_check(f"duality[lambda={lam}]", counterexample is None, checked, counterexample))
        checks.append(
            _check(
                f"pairing_in_out_agree[lambda={lam}]",
                out_counterexample is None,
                checked,
                out_counterexample,
            )
        )
    # expand/basis round trip on the window for one representative weight pair
    rt_counter = None
    rt_checked = 0
    for lam in (W_VEC, W_HALF):
        for idx in window.indices(K, lam):
            exp = expand(cfg, basis_element(cfg, lam, idx))
            rt_checked += 1
            if exp != unit_expansion(lam, idx) and rt_counter is None:
                rt_counter = {"lambda": str(lam), "n": str(idx.degree), "p": idx.point}
    checks.append(_check("expand_basis_round_trip", rt_counter is None, rt_checked, rt_counter))
    return checks


# ---------------------------------------------------------------------------
# shared triple machinery
# ---------------------------------------------------------------------------


class _TripleEngine:
    """Cached pair tables over (parity, twice-degree, point) keys.

    Expansions and cocycle values are stored integer-scaled over a common
    denominator, so the triple sweeps run on plain integers and only the
    table fills touch Fraction arithmetic.
    """

    def __init__(self, cfg: SurfaceConfig, window: Window):
        self.cfg = cfg
        self.window = window
        self.evens = [(0, n.twice, p) for n in window.degrees(W_VEC) for p in range(1, cfg.K + 1)]
        self.odds = [(1, n.twice, p) for n in window.degrees(W_HALF) for p in range(1, cfg.K + 1)]
        self._pexp: dict = {}

    def pexp(self, a, b) -> tuple:
        """(den, [(key, int)]) for the super bracket of two pure basis
        elements: the entry at key is int/den."""
        key = (a, b)
        entry = self._pexp.get(key)
        if entry is None:
            pa, ta, qa = a
            pb, tb, qb = b
            kernel = "mult" if pa and pb else "bracket"
            wa = W_HALF if pa else W_VEC
            wb = W_HALF if pb else W_VEC
            exp = basis_pair_expansion(
                self.cfg, kernel, wa, BasisIndex(HalfInt(ta), qa), wb, BasisIndex(HalfInt(tb), qb)
            )
            pw = pa ^ pb
            items = [((pw, i.degree.twice, i.point), c) for i, c in exp.items()]
            den = 1
            for _, c in items:
                den = den * c.denominator // math.gcd(den, c.denominator)
            entry = (den, [(k, int(c * den)) for k, c in items])
            self._pexp[key] = entry
        return entry

    def jacobi_defect(self, x, y, z) -> bool:
        """True when the graded Jacobi sum of three pure basis elements is
        nonzero (exact integer arithmetic over a common denominator)."""
        px, py, pz = x[0], y[0], z[0]
        plan = []
        den_all = 1
        for sign, a, b, c in (
            (-1 if px and pz else 1, x, y, z),
            (-1 if py and px else 1, y, z, x),
            (-1 if pz and py else 1, z, x, y),
        ):
            den_bc, inner = self.pexp(b, c)
            for w, aw in inner:
                den_aw, outer = self.pexp(a, w)
                if outer:
                    d = den_bc * den_aw
                    plan.append((sign * aw, d, outer))
                    den_all = den_all * d // math.gcd(den_all, d)
        acc: dict = {}
        get = acc.get
        for s_aw, d, outer in plan:
            scale = s_aw * (den_all // d)
            for v, av in outer:
                acc[v] = get(v, 0) + scale * av
        return any(acc.values())

    def cocycle_defect(self, values: dict, x, y, z) -> bool:
        """True when the graded cocycle-condition defect is nonzero, against
        an integer-scaled pair-value table from fill_values."""
        plan = []
        den_all = 1
        for sign, a, b, c in (
            (-1 if x[0] and z[0] else 1, x, y, z),
            (-1 if y[0] and x[0] else 1, y, z, x),
            (-1 if z[0] and y[0] else 1, z, x, y),
        ):
            if a[0] != b[0] ^ c[0]:
                continue  # mixed pairs carry no cocycle value
            den_bc, inner = self.pexp(b, c)
            if inner:
                plan.append((sign, den_bc, a, inner))
                den_all = den_all * den_bc // math.gcd(den_all, den_bc)
        total = 0
        vget = values.get
        for sign, den_bc, a, inner in plan:
            scale = sign * (den_all // den_bc)
            for w, aw in inner:
                cv = vget((a, w))
                if cv:
                    total += scale * aw * cv
        return total != 0

    def fill_values(self, spec: CocycleSpec) -> dict:
        """Integer-scaled cocycle values on all same-parity pairs the defect
        sweep can touch; the common denominator sits under key "__den__"."""
        cfg = self.cfg
        raw: dict = {}
        # pairs (x, w): x in the window, w in the degree range reachable by one bracket
        reach: dict = {}
        for group in (self.evens, self.odds):
            for a in group:
                for b in group:
                    for w, _ in self.pexp(a, b)[1]:
                        reach.setdefault(w, None)
        for a in self.evens:
            for b in self.odds:
                for w, _ in self.pexp(a, b)[1]:
                    reach.setdefault(w, None)
                for w, _ in self.pexp(b, a)[1]:
                    reach.setdefault(w, None)
        targets = list(reach)
        den = 1
        for group, parity, pbit in ((self.evens, "even", 0), (self.odds, "odd", 1)):
            for a in group:
                ia = BasisIndex(HalfInt(a[1]), a[2])
                for w in targets:
                    if w[0] != pbit:
                        continue
                    v = knc.cocycle_basis_value(
                        cfg, spec, parity, ia, BasisIndex(HalfInt(w[1]), w[2])
                    )
                    if v:
                        raw[(a, w)] = v
                        den = den * v.denominator // math.gcd(den, v.denominator)
        values = {k: int(v * den) for k, v in raw.items()}
        values["__den__"] = den
        return values


# ---------------------------------------------------------------------------
# jacobi / poisson
# ---------------------------------------------------------------------------


def suite_jacobi(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    eng = _TripleEngine(cfg, window)
    elements = eng.evens + eng.odds
    counterexample = None
    checked = 0
    for x in elements:
        for y in elements:
            for z in elements:
                checked += 1
                if eng.jacobi_defect(x, y, z) and counterexample is None:
                    counterexample = {"x": x, "y": y, "z": z}
    return [_check("super_jacobi", counterexample is None, checked, counterexample)]


def _random_form(cfg, window, lam, rng) -> "FormExpansion":
    indices = window.indices(cfg.K, lam)
    terms = {}
    for idx in rng.sample(indices, min(2, len(indices))):
        terms[idx] = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
    return FormExpansion(lam, terms)


def suite_poisson(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    rng = random.Random(seed or 20260401)
    weights = [HalfInt(t) for t in range(-4, 5)]
    leibniz_counter = None
    jacobi_counter = None
    checked = 0
    for _ in range(10):
        la, lb, lc = (rng.choice(weights) for _ in range(3))
        f = reconstruct(cfg, _random_form(cfg, window, la, rng))
        g = reconstruct(cfg, _random_form(cfg, window, lb, rng))
        h = reconstruct(cfg, _random_form(cfg, window, lc, rng))
        checked += 1
        lhs = bracket(f, mult(g, h))
        rhs = mult(bracket(f, g), h) + mult(g, bracket(f, h))
        if lhs.func != rhs.func and leibniz_counter is None:
            leibniz_counter = {"weights": [str(la), str(lb), str(lc)]}
        jac = bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g))
        if not jac.func.is_zero and jacobi_counter is None:
            jacobi_counter = {"weights": [str(la), str(lb), str(lc)]}
    return [
        _check("poisson_leibniz", leibniz_counter is None, checked, leibniz_counter),
        _check("mixed_weight_jacobi", jacobi_counter is None, checked, jacobi_counter),
    ]


# ---------------------------------------------------------------------------
# cocycle suite
# ---------------------------------------------------------------------------


def _standard_specs(cfg: SurfaceConfig) -> list[CocycleSpec]:
    K = cfg.K
    cycles = [CycleClass.circle(i, K) for i in range(1, K + 1)]
    if K > 1:
        cycles.append(CycleClass.separating(K))
    omega = default_omega(cfg)
    return [
        CocycleSpec(cy, conn)
        for cy in cycles
        for conn in (FLAT, ProjectiveConnection(omega))
    ]


def suite_cocycle(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    checks = []
    eng = _TripleEngine(cfg, window)
    specs = _standard_specs(cfg)

    for spec in specs:
        label = _spec_label(spec)
        values = eng.fill_values(spec)

        # graded symmetry: antisymmetric on even pairs, symmetric on odd pairs
        sym_counter = None
        sym_checked = 0
        for parity, weight, expect_sign in (("even", W_VEC, -1), ("odd", W_HALF, 1)):
            idxs = window.indices(cfg.K, weight)
            for i1 in idxs:
                for i2 in idxs:
                    sym_checked += 1
                    v = knc.cocycle_basis_value(cfg, spec, parity, i1, i2)
                    w = knc.cocycle_basis_value(cfg, spec, parity, i2, i1)
                    if v != expect_sign * w and sym_counter is None:
                        sym_counter = {
                            "parity": parity, "n": str(i1.degree), "p": i1.point,
                            "m": str(i2.degree), "r": i2.point, "value": str(v),
                        }
        checks.append(_check(f"cocycle_symmetry[{label}]", sym_counter is None, sym_checked, sym_counter))

        # mixed pairs carry no value (even central element)
        mixed_counter = None
        mixed_checked = 0
        for a in eng.evens[: 2 * cfg.K]:
            for b in eng.odds[: 2 * cfg.K]:
                x = SuperElement.basis_even(BasisIndex(HalfInt(a[1]), a[2]))
                y = SuperElement.basis_odd(BasisIndex(HalfInt(b[1]), b[2]))
                mixed_checked += 1
                if knc.cocycle_super(cfg, spec, x, y) != 0 and mixed_counter is None:
                    mixed_counter = {"x": a, "y": b}
        checks.append(_check(f"cocycle_mixed_zero[{label}]", mixed_counter is None, mixed_checked, mixed_counter))

        # super-cocycle condition on the substantive parity patterns
        defect_counter = None
        defect_checked = 0
        trivial = 0
        triples = []
        ev, od = eng.evens, eng.odds
        triples.extend((x, y, z) for x in ev for y in ev for z in ev)
        triples.extend((x, y, z) for x in ev for y in od for z in od)
        triples.extend((x, y, z) for x in od for y in ev for z in od)
        triples.extend((x, y, z) for x in od for y in od for z in ev)
        for x, y, z in triples:
            defect_checked += 1
            if eng.cocycle_defect(values, x, y, z) and defect_counter is None:
                defect_counter = {"x": x, "y": y, "z": z}
        # the remaining parity patterns pair opposite parities in every term,
        # hence vanish by the mixed-pair check above
        trivial = (len(ev) + len(od)) ** 3 - len(triples)
        checks.append(
            _check(
                f"super_cocycle_condition[{label}]",
                defect_counter is None,
                defect_checked,
                defect_counter,
                parity_trivial_triples=trivial,
            )
        )

    # cycle linearity: a random integer cycle equals the same combination of circles
    rng = random.Random(seed or 20260401)
    K = cfg.K
    lin_counter = None
    lin_checked = 0
    circle_specs = [CocycleSpec(CycleClass.circle(i, K), FLAT) for i in range(1, K + 1)]
    for _ in range(3):
        coeffs = tuple(rng.randint(-3, 3) for _ in range(K))
        spec = CocycleSpec(CycleClass(coeffs), FLAT)
        for parity, weight in (("even", W_VEC), ("odd", W_HALF)):
            idxs = window.indices(K, weight)
            for i1 in idxs[:: max(1, len(idxs) // 6)]:
                for i2 in idxs[:: max(1, len(idxs) // 6)]:
                    lin_checked += 1
                    lhs = knc.cocycle_basis_value(cfg, spec, parity, i1, i2)
                    rhs = sum(
                        (
                            c * knc.cocycle_basis_value(cfg, cs, parity, i1, i2)
                            for c, cs in zip(coeffs, circle_specs)
                        ),
                        start=_ZERO,
                    )
                    if lhs != rhs and lin_counter is None:
                        lin_counter = {"cycle": coeffs, "parity": parity,
                                       "n": str(i1.degree), "p": i1.point,
                                       "m": str(i2.degree), "r": i2.point}
    checks.append(_check("cocycle_cycle_linearity", lin_counter is None, lin_checked, lin_counter))

    # change of connection is the coboundary of the omega integral, exactly
    omega = default_omega(cfg)
    for cycle in (CycleClass.separating(K),):
        _, rep = connection_change_check(cfg, cycle, omega, window)
        checks.append(
            _check("connection_change_identity", rep["equal"], rep["pairs_checked"], rep["counterexample"])
        )

    # level-zero witness: every circle cocycle is visible at level zero
    wit_counter = None
    wit_checked = 0
    for i in range(1, K + 1):
        spec = CocycleSpec(CycleClass.circle(i, K), FLAT)
        found = False
        for a in eng.evens:
            if not window.contains(HalfInt(-a[1])):
                continue
            for q in range(1, K + 1):
                wit_checked += 1
                v = knc.cocycle_basis_value(
                    cfg, spec, "even", BasisIndex(HalfInt(a[1]), a[2]), BasisIndex(HalfInt(-a[1]), q)
                )
                if v != 0:
                    found = True
                    break
            if found:
                break
        if not found and wit_counter is None:
            wit_counter = {"circle": i}
    checks.append(_check("level_zero_nonvanishing", wit_counter is None, wit_checked, wit_counter))

    # separating cycle: in-point and out-point evaluations agree
    sep_flat = CocycleSpec(CycleClass.separating(K), FLAT)
    io_counter = None
    io_checked = 0
    for parity, weight in (("even", W_VEC), ("odd", W_HALF)):
        for i1 in window.indices(K, weight):
            f1 = basis_element(cfg, weight, i1)
            for i2 in window.indices(K, weight):
                f2 = basis_element(cfg, weight, i2)
                io_checked += 1
                v_in = knc.cocycle_basis_value(cfg, sep_flat, parity, i1, i2)
                if parity == "even":
                    v_out = knc.cocycle_vector_out(cfg, FLAT, f1, f2)
                else:
                    v_out = knc.cocycle_half_out(cfg, FLAT, f1, f2)
                if v_in != v_out and io_counter is None:
                    io_counter = {"parity": parity, "n": str(i1.degree), "p": i1.point,
                                  "m": str(i2.degree), "r": i2.point,
                                  "in": str(v_in), "out": str(v_out)}
    checks.append(_check("separating_cycle_in_out_agree", io_counter is None, io_checked, io_counter))

    # a bounded cocycle agreeing on the vector fields after the kappa
    # correction also agrees on the odd part
    _, rep = connection_change_check(cfg, CycleClass.separating(K), omega, window)
    checks.append(
        _check("restriction_determines", rep["equal"], rep["pairs_checked"], rep["counterexample"])
    )
    return checks


# ---------------------------------------------------------------------------
# boundedness / rank / odd trivialization
# ---------------------------------------------------------------------------


def suite_boundedness(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    checks = []
    K = cfg.K
    inner = window.shrunk(2)
    for i in range(1, K + 1):
        spec = CocycleSpec(CycleClass.circle(i, K), FLAT)
        rep = boundedness_report(cfg, spec, window)
        ok = rep["max_level_nonzero"] is not None and rep["max_level_nonzero"] <= 0
        checks.append(
            _check(
                f"circle_bounded_above_by_zero[C_{i}]",
                ok,
                rep["pairs_checked"],
                None if ok else rep,
                report=rep,
            )
        )
    sep = CocycleSpec(CycleClass.separating(K), FLAT)
    rep_full = boundedness_report(cfg, sep, window)
    ok_local = (
        rep_full["max_level_nonzero"] is not None
        and rep_full["max_level_nonzero"] <= 0
        and rep_full["min_level_nonzero"] is not None
    )
    checks.append(
        _check(
            "separating_cycle_local",
            ok_local,
            rep_full["pairs_checked"],
            None if ok_local else rep_full,
            report=rep_full,
        )
    )
    if inner.lo <= inner.hi:
        rep_inner = boundedness_report(cfg, sep, inner)
        stable = rep_full["min_level_nonzero"] == rep_inner["min_level_nonzero"]
        checks.append(
            _check(
                "separating_cycle_lower_bound_stable",
                stable,
                rep_full["pairs_checked"] + rep_inner["pairs_checked"],
                None if stable else {"outer": rep_full, "inner": rep_inner},
                outer=rep_full["min_level_nonzero"],
                inner=rep_inner["min_level_nonzero"],
            )
        )
    return checks


def suite_rank(cfg: SurfaceConfig, window: Window, seed: int = 0) -> list[dict]:
    K = cfg.K
    specs = [CocycleSpec(CycleClass.circle(i, K), FLAT) for i in range(1, K + 1)]
    r = independence_rank(cfg, specs, window)
    checks = [_check("circle_cocycles_rank", r == K, 1, None if r == K else {"rank": r, "K": K}, rank=r)]
    r2 = independence_rank(cfg, specs + [specs[0]], window)
    checks.append(
        _check("duplicate_spec_rank_unchanged", r2 == r, 1, None if r2 == r else {"rank": r2})
    )
    return checks


def suite_oddtrivial(cfg: SurfaceConfig, window: Window, seed: int = 0, trials: int = 5) -> list[dict]:
    rng = random.Random(seed or 20260401)
    K = cfg.K
    odd_indices = window.indices(K, W_HALF)
    even_indices = window.indices(K, W_VEC)
    counterexample = None
    checked = 0
    for trial in range(trials):
        values_k = {}
        for idx in odd_indices:
            if rng.random() < 0.6:
                v = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
                if v:
                    values_k[idx] = v
        kform = LinearForm("odd", values_k)
        cob: dict = {}
        for ie in even_indices:
            for io in odd_indices:
                action = basis_pair_expansion(cfg, "bracket", W_VEC, ie, W_HALF, io)
                v = kform.evaluate(action)
                if v:
                    cob[(ie, io)] = v
        phi, rep = trivialize_odd_cocycle(cfg, cob, window)
        checked += 1
        if not rep["vanishes"] and counterexample is None:
            counterexample = {"trial": trial, "report": rep}
    return [_check("odd_coboundary_round_trip", counterexample is None, checked, counterexample)]


SUITES = {
    "duality": suite_duality,
    "jacobi": suite_jacobi,
    "poisson": suite_poisson,
    "cocycle": suite_cocycle,
    "boundedness": suite_boundedness,
    "rank": suite_rank,
    "oddtrivial": suite_oddtrivial,
}


def run_suites(cfg: SurfaceConfig, names, window: Window, seed: int = 0) -> dict:
    if isinstance(names, str):
        names = [names]
    expanded = []
    for name in names:
        if name == "all":
            expanded.extend(SUITE_NAMES)
        elif name in SUITES:
            expanded.append(name)
        else:
            raise ValueError(f"unknown suite {name!r}; expected one of {SUITE_NAMES + ('all',)}")
    report: dict = {"config": cfg.to_json(), "window": str(window), "suites": {}}
    all_pass = True
    for name in expanded:
        checks = SUITES[name](cfg, window, seed)
        ok = all(c["status"] == "pass" for c in checks)
        all_pass = all_pass and ok
        report["suites"][name] = {"status": "pass" if ok else "fail", "checks": checks}
    report["all_pass"] = all_pass
    return report
