"""Command-line front end: basis dumps, structure tables, cocycle tables,
and the verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage or configuration error.
Rationals always serialize as strings like "3/2"; output is deterministic for
a fixed configuration and flag set.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from .exact import Poly, RatFunc
from .knalgebra import (
    OPERATIONS,
    W_HALF,
    W_VEC,
    grading_bounds,
    grading_bounds_stable,
    struct_table,
)
from .knbasis import MeroForm, basis_element
from .kncohomology import (
    CocycleSpec,
    CycleClass,
    FLAT,
    ProjectiveConnection,
    W_QUAD,
    boundedness_report,
)
from . import kncohomology as knc
from .surface import ConfigError, SurfaceConfig, Window, half
from .verify import SUITE_NAMES, run_suites


def load_config(source: str) -> SurfaceConfig:
    """Accept a JSON file path or an inline JSON document."""
    text = source
    if not source.lstrip().startswith("{"):
        if not os.path.exists(source):
            raise ConfigError(f"configuration file not found: {source}")
        with open(source, "r", encoding="utf-8") as fh:
            text = fh.read()
    return SurfaceConfig.loads(text)


def parse_ratfunc(text: str) -> RatFunc:
    """NUM/DEN with plain polynomials, (NUM)/(DEN) when coefficients carry '/'."""
    s = text.strip()
    if s.startswith("(") and ")/(" in s and s.endswith(")"):
        a, b = s[1:-1].split(")/(", 1)
        return RatFunc(Poly.parse(a), Poly.parse(b))
    if "/" in s:
        parts = s.split("/")
        if len(parts) == 2 and parts[0] and parts[1]:
            return RatFunc(Poly.parse(parts[0]), Poly.parse(parts[1]))
        raise ConfigError(
            "ambiguous '/' in rational function; write it as (NUM)/(DEN)"
        )
    return RatFunc(Poly.parse(s))


def _emit(text: str) -> None:
    sys.stdout.write(text)
    if not text.endswith("\n"):
        sys.stdout.write("\n")


def _csv_table(header_comments, fieldnames, rows, footer_comments) -> str:
    buf = io.StringIO()
    for line in header_comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    writer.writerows(rows)
    for line in footer_comments:
        buf.write(f"# {line}\n")
    return buf.getvalue()


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_basis(args) -> int:
    cfg = load_config(args.config)
    lam = half(args.lam)
    window = Window.parse(args.window)
    entries = []
    for idx in window.indices(cfg.K, lam):
        form = basis_element(cfg, lam, idx)
        entries.append(
            {
                "lambda": str(lam),
                "n": str(idx.degree),
                "p": idx.point,
                "num": str(form.func.num),
                "den": str(form.func.den),
            }
        )
    if args.format == "json":
        _emit(json.dumps(entries, indent=2))
    else:
        rows = [(e["lambda"], e["n"], e["p"], e["num"], e["den"]) for e in entries]
        _emit(_csv_table((), ("lambda", "n", "p", "num", "den"), rows, ()))
    return 0


def cmd_structconst(args) -> int:
    cfg = load_config(args.config)
    lam = half(args.lam)
    nu = half(args.nu)
    window = Window.parse(args.window)
    table = struct_table(cfg, args.op, lam, nu, window)
    scale = Fraction(2) if args.double_odd_product and lam == W_HALF and nu == W_HALF else Fraction(1)
    rows = [
        (str(n), p, str(m), r, str(h), s, str(c * scale))
        for (n, p, m, r, h, s, c) in table.rows()
    ]
    grading = grading_bounds_stable(cfg, args.op, lam, nu, window)
    if args.format == "json":
        doc = {
            "op": args.op,
            "lambda": str(lam),
            "nu": str(nu),
            "window": str(window),
            "odd_product_scale": str(scale),
            "rows": [
                {"n": n, "p": p, "m": m, "r": r, "h": h, "s": s, "coeff": c}
                for (n, p, m, r, h, s, c) in rows
            ],
            "grading": grading,
        }
        _emit(json.dumps(doc, indent=2))
    else:
        header = (
            f"op={args.op}",
            f"lambda={lam}",
            f"nu={nu}",
            f"window={window}",
            f"odd_product_scale={scale}",
        )
        footer = (
            f"r_low={grading['r_low']}",
            f"r_high={grading['r_high']}",
            f"stable={grading['stable']}",
        )
        _emit(_csv_table(header, ("n", "p", "m", "r", "h", "s", "coeff"), rows, footer))
    return 0


def _parse_cycle(text: str, K: int) -> CycleClass:
    try:
        coeffs = tuple(int(c) for c in text.split(","))
    except ValueError:
        raise ConfigError(f"cycle coefficients must be integers: {text!r}") from None
    if len(coeffs) != K:
        raise ConfigError(f"cycle has {len(coeffs)} coefficients but the configuration has {K} in-points")
    return CycleClass(coeffs)


def cmd_cocycle(args) -> int:
    cfg = load_config(args.config)
    window = Window.parse(args.window)
    cycle = _parse_cycle(args.cycle, cfg.K)
    if args.omega:
        omega = MeroForm(W_QUAD, parse_ratfunc(args.omega))
        omega.require_a_holomorphic(cfg)
        spec = CocycleSpec(cycle, ProjectiveConnection(omega))
        omega_str = str(omega.func)
    else:
        spec = CocycleSpec(cycle, FLAT)
        omega_str = None
    scale = Fraction(1, 12) if args.classical_normalization else Fraction(1)
    rows = []
    for parity, weight in (("even_even", W_VEC), ("odd_odd", W_HALF)):
        short = "even" if parity == "even_even" else "odd"
        for i1 in window.indices(cfg.K, weight):
            for i2 in window.indices(cfg.K, weight):
                v = knc.cocycle_basis_value(cfg, spec, short, i1, i2)
                if v:
                    rows.append(
                        (parity, str(i1.degree), i1.point, str(i2.degree), i2.point, str(v * scale))
                    )
    bounded = boundedness_report(cfg, spec, window)
    normalization = "classical" if args.classical_normalization else "raw"
    if args.format == "json":
        doc = {
            "cycle": ",".join(str(c) for c in cycle.coefficients),
            "omega": omega_str,
            "normalization": normalization,
            "window": str(window),
            "rows": [
                {"parity_pattern": pp, "n": n, "p": p, "m": m, "r": r, "value": v}
                for (pp, n, p, m, r, v) in rows
            ],
            "boundedness": bounded,
        }
        _emit(json.dumps(doc, indent=2))
    else:
        header = (
            f"cycle={','.join(str(c) for c in cycle.coefficients)}",
            f"omega={omega_str}",
            f"normalization={normalization}",
            f"window={window}",
        )
        footer = (
            f"max_level_nonzero={bounded['max_level_nonzero']}",
            f"min_level_nonzero={bounded['min_level_nonzero']}",
        )
        _emit(_csv_table(header, ("parity_pattern", "n", "p", "m", "r", "value"), rows, footer))
    return 0


def cmd_verify(args) -> int:
    cfg = load_config(args.config)
    window = Window.parse(args.window)
    report = run_suites(cfg, args.suite, window, seed=args.seed)
    _emit(json.dumps(report, indent=2))
    return 0 if report["all_pass"] else 1


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="knsphere",
        description="Exact multi-point algebras of meromorphic forms on the sphere",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", required=True, help="JSON file path or inline JSON document")
        p.add_argument("--window", required=True, help="inclusive degree range LO:HI, e.g. -4:4")
        p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("basis", help="dump homogeneous basis elements")
    common(p)
    p.add_argument("--lambda", dest="lam", required=True, help="weight, e.g. -1 or -1/2")
    p.set_defaults(func=cmd_basis)

    p = sub.add_parser("structconst", help="dump a structure-constant table")
    common(p)
    p.add_argument("--op", required=True, choices=OPERATIONS)
    p.add_argument("--lambda", dest="lam", required=True, help="first weight")
    p.add_argument("--nu", required=True, help="second weight")
    p.add_argument(
        "--double-odd-product",
        action="store_true",
        help="emit the odd-odd product table in the anticommutator scaling (rows doubled)",
    )
    p.set_defaults(func=cmd_structconst)

    p = sub.add_parser("cocycle", help="dump cocycle values on basis pairs")
    common(p)
    p.add_argument("--cycle", required=True, help="integer coefficients c1,...,cK over the in-circles")
    p.add_argument("--omega", default=None, help="quadratic-differential perturbation NUM/DEN")
    p.add_argument(
        "--classical-normalization",
        action="store_true",
        help="divide cocycle values by 12 (the central-term convention of the two-point algebra)",
    )
    p.set_defaults(func=cmd_cocycle)

    p = sub.add_parser("verify", help="run verification suites")
    common(p)
    p.add_argument("--suite", required=True, choices=SUITE_NAMES + ("all",))
    p.add_argument("--seed", type=int, default=0, help="seed for the randomized checks")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
