"""Command-line entry point: ``modperiods {classify,rep,weights,qexp,periods}``."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import cycmat
from .cyclofield import DEFAULT_LEVEL, parse_cycnum, zeta
from .genweights import UndecidableError, weights_and_verdict
from .modgroup import load_generators
from .periods import (
    EXAMPLES,
    assemble_period_matrix,
    extract_periods,
    lattice_and_ratio,
    run_example,
    siegel_check,
    PeriodReport,
)
from .qseries import (
    eisenstein,
    eta_pow4,
    j_invariant,
    cusp_forms_8A2,
)
from .reps import (
    SHAPES,
    Character,
    Dual,
    RepError,
    TwoDimIndec,
    catalog_rep,
    catalog_tables,
    char_rep,
    check_relations,
    classify_all,
    conjugate_rep,
    dual_rep,
    is_decomposable,
    make_rep,
    three_irr_sub,
    two_dim_indec,
)

ENV_PREFIX = "MODPERIODS_"
FORMATS = ("json", "text", "csv")


class CliError(Exception):
    """User-facing failure; printed without a traceback, exit status 2."""


@dataclass(frozen=True)
class RunConfig:
    level: int = DEFAULT_LEVEL
    terms: int = 150
    tolerance: float = 1e-4
    base_point: complex = 1j
    format: str | None = None  # None: each command picks its own default

    def __post_init__(self):
        if self.terms < 4:
            raise CliError(f"--terms must be >= 4, got {self.terms}")
        if self.level <= 0:
            raise CliError(f"--level must be positive, got {self.level}")
        if self.base_point.imag <= 0:
            raise CliError("--base-point must lie in the upper half-plane")
        if self.format is not None and self.format not in FORMATS:
            raise CliError(f"--format must be one of {', '.join(FORMATS)}")

    def fmt(self, default: str) -> str:
        return self.format or default


def parse_base_point(text: str) -> complex:
    try:
        re_part, im_part = (float(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(f"base point must be 're,im', got {text!r}") from exc
    return complex(re_part, im_part)


def _ints(text: str, n: int | None = None) -> tuple[int, ...]:
    try:
        vals = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise CliError(f"expected comma-separated integers, got {text!r}") from exc
    if n is not None and len(vals) != n:
        raise CliError(f"expected {n} integers, got {text!r}")
    return vals


def config_from(args: argparse.Namespace, environ=os.environ) -> RunConfig:
    """Command-line flags win over MODPERIODS_* environment variables."""

    def pick(name, conv):
        val = getattr(args, name, None)
        if val is None:
            env = environ.get(ENV_PREFIX + name.upper())
            if env is None:
                return None
            try:
                return conv(env)
            except ValueError as exc:
                raise CliError(f"bad {ENV_PREFIX}{name.upper()}={env!r}") from exc
        return conv(val) if isinstance(val, str) and conv is not str else val

    fields = {
        "level": pick("level", int),
        "terms": pick("terms", int),
        "tolerance": pick("tolerance", float),
        "base_point": pick("base_point", parse_base_point),
        "format": pick("format", str),
    }
    return RunConfig(**{k: v for k, v in fields.items() if v is not None})


def _emit(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


# -- classify ---------------------------------------------------------------


def tables_json(tables: dict) -> str:
    """Canonical serialization, one table per line (same bytes as the fixture)."""
    lines = []
    for shape, rows in tables.items():
        body = ", ".join("[" + ", ".join(str(x) for x in t) + "]" for t in rows)
        lines.append(f"  {json.dumps(shape)}: [{body}]")
    return "{\n" + ",\n".join(lines) + "\n}\n"


def cmd_classify(cfg: RunConfig, args) -> int:
    start = time.perf_counter()
    report = classify_all(cfg.level)
    elapsed = time.perf_counter() - start
    tables = report.tables
    if args.family:
        tables = {args.family: tables[args.family]}
    fixture = catalog_tables()
    ok = all(tables[k] == fixture[k] for k in tables)
    for shape, rows in tables.items():
        for t in rows:
            r = catalog_rep(shape, t, cfg.level)
            ok = ok and check_relations(r) and is_decomposable(r) is None

    fmt = "json" if args.json else cfg.fmt("text")
    if fmt == "json":
        sys.stdout.write(tables_json(tables))
    elif fmt == "csv":
        _emit("family,x1,x2,x3")
        for shape, rows in tables.items():
            for t in rows:
                _emit(",".join([shape, *map(str, t)]))
    else:
        for shape, rows in tables.items():
            _emit(f"{shape}  ({len(rows)} classes)")
            _emit("  x1 x2 x3")
            for t in rows:
                _emit("  " + " ".join(f"{x:>2}" for x in t))
        _emit(
            "total {}  relations passed {}  decomposable rejected {}  ({:.2f}s)".format(
                sum(len(v) for v in tables.values()),
                {k: report.candidates_passing_relations[k] for k in tables},
                {k: report.decomposable_rejected[k] for k in tables},
                elapsed,
            )
        )
        _emit("matches fixture: " + ("yes" if ok else "NO"))
    return 0 if ok else 1


# -- rep / weights descriptors ---------------------------------------------------


def _descriptor(args, level: int):
    """(Rep or family) from --family/--triple, --char or --two-dim."""
    if args.char is not None:
        return Character(args.char % 12), lambda: char_rep(args.char, level=level)
    if args.two_dim is not None:
        a, b = _ints(args.two_dim, 2)
        return TwoDimIndec(a % 12, b % 12), lambda: two_dim_indec(a, b, level)
    if args.family is None or args.triple is None:
        raise CliError("give --family with --triple, or --char, or --two-dim")
    t = _ints(args.triple, 3)
    rep = catalog_rep(args.family, t, level)
    return rep.family, lambda: rep


def _matrix_text(m) -> list[list[str]]:
    return [[str(x) for x in row] for row in m]


def cmd_rep_show(cfg: RunConfig, args) -> int:
    _, build = _descriptor(args, cfg.level)
    r = build()
    if args.dual:
        r = dual_rep(r)
    if cfg.fmt("text") == "json":
        _emit(json.dumps({"family": str(r.family), "group": r.group, "S": _matrix_text(r.S_mat), "T": _matrix_text(r.T_mat)}, indent=2))
    else:
        _emit(r.describe())
    return 0 if check_relations(r) else 1


def cmd_weights(cfg: RunConfig, args) -> int:
    family, build = _descriptor(args, cfg.level)
    build()  # validates the descriptor
    if args.dual:
        family = Dual(family)
    profile, verdict = weights_and_verdict(family)
    if cfg.fmt("text") == "json":
        obj = {"family": str(family), "weights": list(profile.weights)}
        if verdict is not None:
            obj.update(m_split=verdict.m_split, reason=verdict.reason)
        _emit(json.dumps(obj, indent=2))
    else:
        _emit(f"{family}: {profile}")
        if verdict is not None:
            _emit(f"M-split: {'yes' if verdict.m_split else 'no'}")
            _emit(f"reason: {verdict.reason}")
    return 0


# -- qexp ---------------------------------------------------------------------


def _form_series(name: str, terms: int, method: str):
    if name == "eta4":
        return eta_pow4(terms)
    if name in ("f1", "f2"):
        return cusp_forms_8A2(terms, method)[int(name[1]) - 1]
    if name in ("E2", "E4", "E6"):
        return eisenstein(int(name[1]), terms)
    if name == "j":
        return j_invariant(terms)
    raise CliError(f"unknown form {name!r}")


def cmd_qexp(cfg: RunConfig, args) -> int:
    f = _form_series(args.form, cfg.terms, args.method)
    rows = [(r, c) for r, c in f.terms() if c != 0 or args.zeros]
    fmt = cfg.fmt("csv")
    if fmt == "json":
        _emit(json.dumps([[str(r), str(c)] for r, c in rows]))
    else:
        sep = "," if fmt == "csv" else "  "
        _emit(sep.join(("exponent", "coefficient")))
        for r, c in rows:
            _emit(f"{r}{sep}{c}")
    return 0


# -- periods --------------------------------------------------------------------


def _rep_from_text(text: str, level: int):
    """``two-dim:a,b`` | ``irr-sub:p1/q1,p2/q2[,sign]`` | ``CR:x,y,z`` (also Y0, Y1) | JSON file with S and T."""
    kind, _, rest = text.partition(":")
    if kind == "two-dim":
        return two_dim_indec(*_ints(rest, 2), level=level)
    if kind == "irr-sub":
        parts = rest.split(",")
        if len(parts) not in (2, 3):
            raise CliError(f"irr-sub expects two exponents and an optional sign, got {rest!r}")
        lams = [Fraction(p) for p in parts[:2]]
        sign = int(parts[2]) if len(parts) == 3 else 1
        return three_irr_sub(*(zeta(x.numerator, x.denominator, level) for x in lams), sign)
    if kind in SHAPES:
        return catalog_rep(kind, _ints(rest, 3), level)
    if os.path.exists(text):
        with open(text, encoding="utf-8") as fh:
            data = json.load(fh)
        S_rows = [[parse_cycnum(str(x), None) for x in row] for row in data["S"]]
        T_rows = [[parse_cycnum(str(x), None) for x in row] for row in data["T"]]
        return make_rep(S_rows, T_rows, data.get("group", "PSL2"))
    raise CliError(f"cannot interpret --rep {text!r}")


def _custom_report(cfg: RunConfig, args) -> PeriodReport:
    r = _rep_from_text(args.rep, cfg.level)
    if args.conj:
        with open(args.conj, encoding="utf-8") as fh:
            M = cycmat.matrix([[parse_cycnum(str(x)) for x in row] for row in json.load(fh)])
        r = conjugate_rep(r, M)
    gens = load_generators(args.gens)
    scale = parse_cycnum(args.scale or "1", None)
    periods = extract_periods(r, gens, scale, _ints(args.components) if args.components else None)
    a_idx = _ints(args.a_cycles) if args.a_cycles else None
    b_idx = _ints(args.b_cycles) if args.b_cycles else None
    if a_idx is None or b_idx is None:
        raise CliError("custom periods need --a-cycles and --b-cycles")
    A, B, P = assemble_period_matrix(periods, a_idx, b_idx)
    report = PeriodReport(gens, periods, A, B, P, scale, siegel_check(P), name="custom")
    if len(P) == 1:
        report.lattice, report.ratio = lattice_and_ratio([v[0] for v in periods])
    report.expected_ok = {"siegel": report.siegel, "algebraic": report.algebraic_over_Q_zeta24()}
    return report


def cmd_periods(cfg: RunConfig, args) -> int:
    if args.example:
        if cfg.level % 24:
            raise CliError("bundled examples need a level divisible by 24")
        report = run_example(args.example, cfg.terms, cfg.base_point, numeric=not args.no_numeric, method=args.method)
    elif args.rep and args.gens:
        report = _custom_report(cfg, args)
    else:
        raise CliError("give --example, or --rep with --gens")
    ok = all(report.expected_ok.values())
    numeric_ok = True
    if report.numeric is not None:
        numeric_ok = report.numeric.within_bounds and report.numeric_deviation <= cfg.tolerance
    obj = report.to_json_obj()
    obj["tolerance"] = cfg.tolerance
    obj["verified"] = ok and numeric_ok
    if cfg.fmt("json") == "json":
        _emit(json.dumps(obj, indent=2, ensure_ascii=False))
    else:
        _emit(f"{report.name}: genus {report.genus}")
        _emit("period matrix:\n" + cycmat.format_matrix(report.period_matrix))
        if report.ratio is not None:
            _emit(f"ratio: {report.ratio}  ~ {report.ratio.to_complex():.6f}")
        _emit(f"Siegel: {'pass' if report.siegel else 'FAIL'}")
        for k, v in report.expected_ok.items():
            _emit(f"  {k}: {'pass' if v else 'FAIL'}")
        if report.numeric is not None:
            _emit(f"numeric deviation {report.numeric_deviation:.3e} (tolerance {cfg.tolerance:g}), within tail bounds: {report.numeric.within_bounds}")
    return 0 if obj["verified"] else 1


# -- parser -------------------------------------------------------------------------


def _add_descriptor_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--family", choices=sorted(SHAPES))
    p.add_argument("--triple", help="x1,x2,x3")
    p.add_argument("--char", type=int, metavar="A")
    p.add_argument("--two-dim", metavar="A,B")
    p.add_argument("--dual", action="store_true")


def _common(default) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level", type=int, default=default)
    common.add_argument("--terms", type=int, default=default)
    common.add_argument("--base-point", default=default, metavar="RE,IM")
    common.add_argument("--format", choices=FORMATS, default=default)
    common.add_argument("--tolerance", type=float, default=default)
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="modperiods", parents=[_common(None)], description=__doc__)
    # SUPPRESS keeps subcommand defaults from clobbering flags given before the subcommand
    common = _common(argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", parents=[common], help="tables of indecomposable 3-dim representations")
    p.add_argument("--family", choices=sorted(SHAPES))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("rep", parents=[common], help="show representation matrices")
    rsub = p.add_subparsers(dest="rep_command", required=True)
    show = rsub.add_parser("show", parents=[common])
    _add_descriptor_args(show)
    show.set_defaults(func=cmd_rep_show)

    p = sub.add_parser("weights", parents=[common], help="generating weights and M-split verdict")
    _add_descriptor_args(p)
    p.set_defaults(func=cmd_weights)

    p = sub.add_parser("qexp", parents=[common], help="q-expansion coefficients")
    p.add_argument("--form", required=True, choices=("eta4", "f1", "f2", "E2", "E4", "E6", "j"))
    p.add_argument("--method", choices=("hypergeometric", "mlde"), default="mlde")
    p.add_argument("--zeros", action="store_true", help="include zero coefficients")
    p.set_defaults(func=cmd_qexp)

    p = sub.add_parser("periods", parents=[common], help="exact and numeric periods")
    p.add_argument("--example", choices=EXAMPLES)
    p.add_argument("--rep")
    p.add_argument("--gens")
    p.add_argument("--scale")
    p.add_argument("--conj")
    p.add_argument("--components")
    p.add_argument("--a-cycles")
    p.add_argument("--b-cycles")
    p.add_argument("--method", choices=("hypergeometric", "mlde"), default="mlde")
    p.add_argument("--no-numeric", action="store_true")
    p.set_defaults(func=cmd_periods)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from(args)
        return args.func(cfg, args)
    except (CliError, RepError, UndecidableError, ValueError, OSError) as exc:
        sys.stderr.write(f"modperiods: error: {exc}\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
