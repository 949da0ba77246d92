"""Command-line front end.

    hyprec eval      --family NAME --k K --a 0.3 [--mode all] [--exact]
    hyprec table     --family NAME --k 1..4 --a 0.5:2.5:5 [--format csv]
    hyprec verify    --seed 42 --draws 50 --families all
    hyprec relations [--format json]

Exit codes: 0 success, 1 usage error, 2 domain or evaluation error (with a
JSON error object on stderr). Log verbosity comes from HYPREC_LOG.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import closedforms, contiguous, recursions, verify
from .errors import HyprecError
from .recursions import FamilyId, get_family

log = logging.getLogger("hyprec")

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 1, 2

FAMILY_NAMES = [f.value for f in FamilyId]
PARAM_FLAGS = ("n", "j", "a", "b", "c", "d")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indentation, so output round-trips."""
    return json.dumps(obj, sort_keys=True, indent=2)


def _enc(x):
    return verify._enc(x)


def parse_scalar(text: str, exact: bool):
    """Decimal or "p/q"; Fraction when exact, float otherwise."""
    text = text.strip()
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None
    return value if exact else float(value)


def _family_params(fam, args, exact: bool) -> tuple:
    out = []
    for name in fam.param_names:
        raw = getattr(args, name)
        if raw is None:
            raise UsageError(f"{fam.name} needs --{name} (parameters: {', '.join(fam.param_names)})")
        value = parse_scalar(raw, exact)
        if name in fam.int_params:
            if Fraction(value).denominator != 1:
                raise UsageError(f"--{name} must be an integer")
            value = int(value)
        out.append(value)
    return tuple(out)


def _setup_logging():
    level = os.environ.get("HYPREC_LOG", "warn").lower()
    levels = {"error": logging.ERROR, "warn": logging.WARNING, "warning": logging.WARNING,
              "info": logging.INFO, "debug": logging.DEBUG}
    logging.basicConfig(level=levels.get(level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")


# ---------------------------------------------------------------------------
# eval


def _evaluate(fam, k: int, params: tuple, mode: str, exact: bool) -> dict:
    values, extra = {}, {}
    modes = ("recursion", "series", "closedform") if mode == "all" else (mode,)
    if exact and not fam.exact_capable:
        raise HyprecError(f"{fam.name} has no exact rational mode (only pfaff, srivastava)")
    for m in modes:
        if m == "recursion":
            values[m] = recursions.recurse(fam, k, params)
        elif m == "series":
            if exact:
                values[m] = recursions.direct_value_exact(fam, k, params)
            else:
                res = recursions.direct_value(fam, k, params)
                values[m] = res.value
                extra["series_abs_error_estimate"] = float(res.abs_error_estimate)
                extra["series_terms"] = res.terms_used
                extra["series_class"] = res.cls.value
        else:
            cf = closedforms.closed_form_for_family(fam.name)
            if cf is None or k < cf.k_min:
                if mode != "all":
                    raise HyprecError(f"no closed form for {fam.name} at k={k}")
                continue
            values[m] = cf.evaluate(k, params)
    out = {
        "family": fam.name,
        "k": k,
        "params": {n: _enc(v) for n, v in zip(fam.param_names, params)},
        "exact": exact,
        "values": {m: _enc(v) for m, v in values.items()},
    }
    out.update(extra)
    if len(values) > 1:
        names = sorted(values)
        out["diffs"] = {
            f"{a}-{b}": _enc(abs(values[a] - values[b]))
            for i, a in enumerate(names) for b in names[i + 1:]
        }
    return out


def cmd_eval(args) -> int:
    try:
        fam = get_family(args.family)
    except KeyError:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILY_NAMES)}")
    params = _family_params(fam, args, args.exact)
    result = _evaluate(fam, args.k, params, args.mode, args.exact)
    if args.format == "pretty":
        label = ", ".join(f"{n}={v}" for n, v in result["params"].items())
        print(f"{fam.name}  k={args.k}  {label}")
        for m, v in result["values"].items():
            print(f"  {m:<11s} {v}")
        for pair, d in result.get("diffs", {}).items():
            print(f"  |{pair}| = {d}")
    elif args.format == "jsonl":
        print(json.dumps(result, sort_keys=True))
    else:
        print(dumps(result))
    return EXIT_OK


# ---------------------------------------------------------------------------
# table


def parse_k_range(text: str) -> list:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
            step = 1 if hi >= lo else -1
            return list(range(lo, hi + step, step))
        return [int(text)]
    except ValueError:
        raise UsageError(f"bad k range {text!r}; use K or LO..HI") from None


def parse_grid(text: str, integer: bool) -> list:
    """start:stop:count (linspace, inclusive) or a single value."""
    parts = text.split(":")
    try:
        if len(parts) == 1:
            values = [float(Fraction(parts[0]))]
        elif len(parts) == 3:
            count = int(parts[2])
            if count < 0:
                raise ValueError
            values = [float(x) for x in np.linspace(float(Fraction(parts[0])), float(Fraction(parts[1])), count)]
        else:
            raise ValueError
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"bad grid {text!r}; use START:STOP:COUNT or a single value") from None
    if integer:
        if any(v != int(v) for v in values):
            raise UsageError(f"grid {text!r} must give integers")
        return [int(v) for v in values]
    return values


def table_rows(fam, ks: list, grids: list) -> list:
    rows = []
    points = [()]
    for g in grids:
        points = [p + (v,) for p in points for v in g]
    if not grids or any(len(g) == 0 for g in grids):
        points = []
    for k in ks:
        for params in points:
            row = {"family": fam.name, "k": k, "params": params,
                   "recursion": None, "oracle": None, "abs_diff": None, "status": "ok", "reason": ""}
            if fam.classical is not None and k == 0:
                row["status"], row["reason"] = "skipped", "collapsed-index"
                try:
                    spec = recursions.definition(fam, k, params)
                    if verify._oracle_ok(spec, 1.25):
                        row["oracle"] = recursions.direct_value(fam, k, params).value
                except HyprecError:
                    pass
                rows.append(row)
                continue
            try:
                row["recursion"] = recursions.recurse(fam, k, params)
            except HyprecError as exc:
                row["status"], row["reason"] = "skipped", exc.kind
                rows.append(row)
                continue
            try:
                spec = recursions.definition(fam, k, params)
                if verify._oracle_ok(spec, 1.25):
                    row["oracle"] = recursions.direct_value(fam, k, params).value
                    row["abs_diff"] = abs(row["recursion"] - row["oracle"])
            except HyprecError as exc:
                row["reason"] = f"oracle: {exc.kind}"
            rows.append(row)
    return rows


def _csv_header(fam) -> list:
    return ["family", "k", *fam.param_names, "recursion", "oracle", "abs_diff", "status", "reason"]


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return repr(x)
    return str(x)


def cmd_table(args) -> int:
    try:
        fam = get_family(args.family)
    except KeyError:
        raise UsageError(f"unknown family {args.family!r}; choose from {', '.join(FAMILY_NAMES)}")
    ks = parse_k_range(args.k)
    grids = []
    for name in fam.param_names:
        raw = getattr(args, name)
        if raw is None:
            raise UsageError(f"{fam.name} needs --{name} as a grid START:STOP:COUNT")
        grids.append(parse_grid(raw, name in fam.int_params))
    rows = table_rows(fam, ks, grids)
    fmt = args.format or "csv"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(_csv_header(fam))
        for r in rows:
            w.writerow([r["family"], r["k"], *[_fmt(p) for p in r["params"]],
                        _fmt(r["recursion"]), _fmt(r["oracle"]), _fmt(r["abs_diff"]), r["status"], r["reason"]])
        sys.stdout.write(buf.getvalue())
        return EXIT_OK

    def as_dict(r):
        d = dict(r)
        d["params"] = {n: _enc(v) for n, v in zip(fam.param_names, r["params"])}
        for key in ("recursion", "oracle", "abs_diff"):
            d[key] = _enc(d[key])
        return d

    if fmt == "json":
        print(dumps({"family": fam.name, "rows": [as_dict(r) for r in rows]}))
    elif fmt == "jsonl":
        for r in rows:
            print(json.dumps(as_dict(r), sort_keys=True))
    else:
        print("  ".join(f"{h:>12s}" for h in _csv_header(fam)[1:-1]))
        for r in rows:
            cells = [r["k"], *r["params"], r["recursion"], r["oracle"], r["abs_diff"], r["status"]]
            print("  ".join(f"{_fmt(c) if not isinstance(c, float) else format(c, '.10g'):>12s}" for c in cells)
                  + (f"  {r['reason']}" if r["reason"] else ""))
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify


def _parse_box(items) -> Optional[dict]:
    if not items:
        return None
    box = {}
    for item in items:
        try:
            name, rng = item.split("=", 1)
            lo, hi = rng.split(":", 1)
            box[name.strip()] = (float(lo), float(hi))
        except ValueError:
            raise UsageError(f"bad --box {item!r}; use NAME=LO:HI") from None
    return box


def cmd_verify(args) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    try:
        targets = verify.target_names(families)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    try:
        config = verify.SamplerConfig(
            seed=args.seed,
            draws_per_family=args.draws,
            parameter_box=_parse_box(args.box),
            pole_margin=args.pole_margin,
            k_max=args.k_max,
            s_min=args.s_min,
            tol_abs=args.tol_abs,
            tol_rel=args.tol_rel,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.jobs is not None and args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    jobs = args.jobs or os.cpu_count() or 1
    report = verify.sweep(config, targets, jobs=jobs)
    fmt = args.format or "json"
    if fmt == "jsonl":
        for o in report.outcomes:
            print(json.dumps(o.to_dict(), sort_keys=True))
    elif fmt == "pretty":
        for name, c in report.counts().items():
            reasons = ", ".join(f"{r}={n}" for r, n in c["skip_reasons"].items())
            print(f"{name:<15s} pass {c['pass']:5d}  fail {c['fail']:4d}  skip {c['skip']:4d}"
                  f"  worst rel {c['worst_rel_diff']:.2e}" + (f"  ({reasons})" if reasons else ""))
        print(f"failures: {report.n_failures}")
    else:
        data = report.body() if args.no_meta else report.to_dict()
        print(dumps(data))
    return EXIT_OK if report.n_failures == 0 else EXIT_DOMAIN


# ---------------------------------------------------------------------------
# relations


def cmd_relations(args) -> int:
    rels = contiguous.list_relations(include_intermediate=args.all)
    entries = []
    for rid, statement, reference in rels:
        rel = contiguous.get_relation(rid)
        entries.append(rel.to_dict())
    fmt = args.format or "json"
    if fmt == "json":
        print(dumps({"relations": entries}))
    elif fmt == "jsonl":
        for e in entries:
            print(json.dumps(e, sort_keys=True))
    else:
        for e in entries:
            print(f"{e['id']}  [{e['kind']}]")
            print(f"    {e['statement']}")
            print(f"    ref: {e['reference']}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def _add_param_flags(p, help_suffix: str):
    for name in PARAM_FLAGS:
        p.add_argument(f"--{name}", help=f"parameter {name}{help_suffix}")


def build_parser() -> argparse.ArgumentParser:
    fams = ", ".join(FAMILY_NAMES)
    parser = _Parser(prog="hyprec", description="Recursive summation formulas for 2F1 and 3F2 series.",
                     epilog=f"families: {fams}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one G_k value", epilog=f"families: {fams}")
    p.add_argument("--family", required=True, help="family name (kebab-case)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["recursion", "series", "closedform", "all"], default="recursion")
    p.add_argument("--exact", action="store_true", help="exact rational evaluation (pfaff, srivastava)")
    p.add_argument("--format", choices=["json", "jsonl", "pretty"], default="json")
    _add_param_flags(p, " (decimal or p/q)")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("table", help="tabulate G_k over a k range and parameter grid", epilog=f"families: {fams}")
    p.add_argument("--family", required=True)
    p.add_argument("--k", required=True, help="K or LO..HI (inclusive)")
    p.add_argument("--format", choices=["csv", "json", "jsonl", "pretty"], default="csv")
    _add_param_flags(p, " grid START:STOP:COUNT")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="randomized recursion / series / closed-form cross-check")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--draws", type=int, default=50, help="draws per family")
    p.add_argument("--families", default="all", help=f"comma list or 'all' ({fams}, choi-identity)")
    p.add_argument("--k-max", type=int, default=8)
    p.add_argument("--pole-margin", type=float, default=0.05)
    p.add_argument("--s-min", type=float, default=1.25)
    p.add_argument("--tol-abs", type=float, default=1e-8)
    p.add_argument("--tol-rel", type=float, default=1e-8)
    p.add_argument("--box", action="append", help="override a parameter interval, NAME=LO:HI (repeatable)")
    p.add_argument("--jobs", type=int, default=None, help="worker threads (default: logical CPUs)")
    p.add_argument("--no-meta", action="store_true", help="omit the timing/meta section")
    p.add_argument("--format", choices=["json", "jsonl", "pretty"], default="json")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("relations", help="list the contiguous-relation catalog")
    p.add_argument("--format", choices=["json", "jsonl", "pretty"], default="json")
    p.add_argument("--all", action="store_true", help="include intermediate relations")
    p.set_defaults(func=cmd_relations)
    return parser


def _join_negative_values(argv: list) -> list:
    # "--a -1.5:-0.5:3" would otherwise be read as a new option
    out, i = [], 0
    flags = {f"--{n}" for n in PARAM_FLAGS} | {"--k", "--box", "--seed"}
    while i < len(argv):
        tok = argv[i]
        if tok in flags and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    _setup_logging()
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    args = parser.parse_args(_join_negative_values(argv))
    if not getattr(args, "command", None):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"hyprec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HyprecError as exc:
        print(json.dumps(exc.to_dict(), sort_keys=True), file=sys.stderr)
        return EXIT_DOMAIN
    except (ArithmeticError, ValueError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True), file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
