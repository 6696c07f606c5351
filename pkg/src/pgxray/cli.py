"""Command-line interface.

Every command prints a JSON report (or a table with ``--format table``)::

    {"command": ..., "field": {...}, "checks": [{check, q, expected, actual, pass}],
     "data": {...}, "wall_time": seconds}

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import admissibility as adm
from . import drq as drqmod
from . import gf, pg3
from . import transform as tr
from .config import DEFAULT, Config
from .errors import PgxrayError
from .verify import LEMMAS, Check, Context, _jsonable


class UsageError(Exception):
    pass


def _field(args) -> gf.Field:
    if args.q is not None:
        if args.p is not None or args.k is not None:
            raise UsageError("use either --q or --p/--k, not both")
        return gf.field_of_order(args.q, max_order=args.config.max_field_order)
    if args.p is not None:
        return gf.field_new(args.p, args.k or 1, max_order=args.config.max_field_order)
    raise UsageError("a field is required: --q N or --p P --k K")


def _geometry(args) -> pg3.Geometry:
    return pg3.build_geometry(_field(args), max_q=args.config.max_geometry_q)


def _read_json(path: str):
    return json.loads(Path(path).read_text())


def _write_out(args, payload) -> str | None:
    if not args.out:
        return None
    Path(args.out).write_text(json.dumps(_jsonable(payload)) + "\n")
    return args.out


def _values_arg(path: str) -> list:
    data = _read_json(path)
    if isinstance(data, dict):
        data = data["values"]
    return tr.from_json_values(data)


# -- commands ------------------------------------------------------------------------------


def cmd_counts(args):
    g = _geometry(args)
    q = g.q
    ctx = Context(g, args.config)
    checks = LEMMAS["counts"](ctx) + LEMMAS["triads"](ctx)
    data = {
        "points": g.n_points,
        "lines": g.n_lines,
        "lines_per_point": q * q + q + 1,
        "points_per_line": q + 1,
        "skew_per_line": q**4,
        "triad_extensions": drqmod.triad_extension_count(q),
        "drqs": drqmod.drq_count(q),
    }
    if q <= args.config.materialize_drq_q:
        n = sum(len(c) for c in drqmod.iter_drq_chunks(g, max_q=args.config.max_drq_q))
        checks.append(Check("drq_count", q, drqmod.drq_count(q), n))
        data["drqs"] = n
    return checks, data


def cmd_verify(args):
    g = _geometry(args)
    if not args.all and not args.lemma:
        raise UsageError("verify needs --lemma NAME or --all")
    names = list(LEMMAS) if args.all else args.lemma
    ctx = Context(g, args.config, seed=args.seed, threads=args.threads,
                  samples=args.samples, exact_rank=args.exact_rank)
    checks: list[Check] = []
    for name in names:
        checks.extend(LEMMAS[name](ctx))
    data = {"lemmas": names}
    if args.emit_matrix:
        Path(args.emit_matrix).write_text(json.dumps(np.asarray(ctx.cavalieri).tolist()) + "\n")
        data["matrix"] = args.emit_matrix
    return checks, data


def cmd_drq_enumerate(args):
    g = _geometry(args)
    drqs = drqmod.enumerate_drqs(g, max_q=args.config.max_drq_q)
    checks = [Check("drq_count", g.q, drqmod.drq_count(g.q), len(drqs))]
    payload = [d.to_dict() for d in drqs]
    data = {"count": len(drqs)}
    if _write_out(args, payload):
        data["out"] = args.out
    else:
        data["drqs"] = payload
    return checks, data


def _pick_drq(args, g) -> drqmod.DRQ:
    if args.drq:
        return drqmod.DRQ.from_dict(_read_json(args.drq))
    drqs = drqmod.enumerate_drqs(g, max_q=args.config.max_drq_q)
    if not 0 <= args.index < len(drqs):
        raise UsageError(f"--index must be in [0, {len(drqs)})")
    return drqs[args.index]


def cmd_drq_fit(args):
    g = _geometry(args)
    d = _pick_drq(args, g)
    drqmod.check_drq(g, d)
    form = drqmod.quadric_fit(g, d)
    terms = [f"x{i}x{j}" if i != j else f"x{i}^2" for i, j in drqmod.MONOMIALS]
    data = {"drq": d.to_dict(), "form": list(form), "monomials": terms}
    zeros = sum(drqmod.quadric_value(g.field, form, x) == 0 for x in g.points)
    return [Check("quadric_point_count", g.q, (g.q + 1) ** 2, zeros)], data


def _domain(args, g):
    if not args.complex:
        return None
    g2, c = adm.load_complex(args.complex)
    if g2.field != g.field:
        raise UsageError("complex file is over a different field")
    return c


def cmd_transform(args):
    g = _geometry(args)
    values = _values_arg(args.input)
    dom = _domain(args, g)
    checks: list[Check] = []
    if args.action == "forward":
        out = tr.xray(g, values, None if dom is None else dom.lines)
    elif args.action == "dual":
        out = tr.dual_xray(g, values)
    else:
        if dom is None:
            out = tr.bolker_invert(g, values)
            back = tr.xray(g, out)
        else:
            out = adm.invert_restricted(g, dom, values)
            back = tr.xray(g, out, dom.lines)
        checks.append(Check("round_trip", g.q, True, back == list(values)))
    payload = tr.to_json_values(out)
    data = {"length": len(out)}
    if _write_out(args, payload):
        data["out"] = args.out
    else:
        data["values"] = payload
    return checks, data


def cmd_admissible(args):
    g = _geometry(args)
    q = g.q
    action = args.action
    if action == "check":
        if not args.complex:
            raise UsageError("admissible check needs --complex FILE")
        c = _domain(args, g)
        v = adm.is_admissible(g, c)
        data = v.to_dict()
        checks = [Check("admissible", q, True, v.admissible)]
        if args.verify_drq:
            span = adm.drq_span(g, drqmod.enumerate_drqs(g, max_q=args.config.max_drq_q))
            nullity, vec = adm.drq_support(g, span, c)
            data["drq_nullity"] = nullity
            checks.append(Check("drq_decider_agrees", q, g.n_points - v.rank, nullity))
        return checks, data
    if action == "search":
        c = adm.search_admissible(g, args.seed)
        v = adm.is_admissible(g, c)
        _write_out(args, adm.complex_to_dict(g, c))
        return [Check("admissible", q, True, v.admissible)], {"seed": args.seed, **adm.complex_to_dict(g, c)}
    if action == "embed-drq":
        d = _pick_drq(args, g)
        c = adm.embed_drq_complex(g, d, args.seed)
        v = adm.is_admissible(g, c)
        _write_out(args, adm.complex_to_dict(g, c))
        data = {"drq": d.to_dict(), **adm.complex_to_dict(g, c), "verdict": v.to_dict()}
        return [Check("inadmissible", q, False, v.admissible)], data
    # sample
    span = None
    use_drq = args.verify_drq if args.verify_drq is not None else q <= 3
    if use_drq:
        span = adm.drq_span(g, drqmod.enumerate_drqs(g, max_q=args.config.max_drq_q))
    recs = adm.sample_admissibility(g, args.samples, args.seed, span, threads=args.threads)
    n_adm = sum(r.admissible for r in recs)
    data = {
        "samples": len(recs),
        "admissible": n_adm,
        "fraction": n_adm / len(recs) if recs else None,
        "rank_histogram": {str(k): v for k, v in sorted(_histogram(r.rank for r in recs).items())},
        "rng": args.config.rng_name,
    }
    checks = []
    if span is not None:
        checks.append(Check("theorem2_nullities_agree", q, len(recs), sum(r.agree for r in recs)))
    return checks, data


def _histogram(values) -> dict:
    out: dict = {}
    for v in values:
        out[v] = out.get(v, 0) + 1
    return out


def cmd_geometry_dump(args):
    g = _geometry(args)
    payload = g.to_dict()
    data = {"points": g.n_points, "lines": g.n_lines}
    if _write_out(args, payload):
        data["out"] = args.out
    else:
        data["geometry"] = payload
    return [], data


# -- parser ----------------------------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--q", type=int, help="field order (prime or prime power)")
    p.add_argument("--p", type=int, help="field characteristic")
    p.add_argument("--k", type=int, help="extension degree")
    p.add_argument("--format", choices=("json", "table"), default="json")
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the main artifact to FILE")
    p.add_argument("--config", type=Config.load, default=DEFAULT, help="JSON config file")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="pgxray", description="X-ray transform and DRQs on PG(3,q)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("counts", parents=[common], help="point, line, triad and DRQ counts")
    p.set_defaults(func=cmd_counts)

    p = sub.add_parser("verify", parents=[common], help="run lemma checks")
    p.add_argument("--lemma", action="append", choices=list(LEMMAS))
    p.add_argument("--all", action="store_true")
    p.add_argument("--samples", type=int, help="random complexes for theorem2")
    p.add_argument("--exact-rank", dest="exact_rank", action=argparse.BooleanOptionalAction, default=None)
    p.add_argument("--emit-matrix", metavar="FILE", help="write the Cavalieri matrix as dense JSON")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("drq", help="DRQ enumeration and quadric fitting")
    dsub = p.add_subparsers(dest="action", required=True)
    e = dsub.add_parser("enumerate", parents=[common])
    e.set_defaults(func=cmd_drq_enumerate)
    f = dsub.add_parser("fit", parents=[common])
    f.add_argument("--index", type=int, default=0, help="index into the canonical DRQ list")
    f.add_argument("--drq", help="JSON file {m: [...], n: [...]}")
    f.set_defaults(func=cmd_drq_fit)

    p = sub.add_parser("transform", help="forward, dual and inverse transforms")
    tsub = p.add_subparsers(dest="action", required=True)
    for name in ("forward", "dual", "invert"):
        t = tsub.add_parser(name, parents=[common])
        t.add_argument("--input", required=True, help='JSON array of "num/den" values')
        t.add_argument("--complex", help="restrict to the lines of a complex file")
        t.set_defaults(func=cmd_transform)

    p = sub.add_parser("admissible", help="line complexes")
    asub = p.add_subparsers(dest="action", required=True)
    for name in ("check", "search", "sample", "embed-drq"):
        a = asub.add_parser(name, parents=[common])
        a.set_defaults(func=cmd_admissible)
        if name == "check":
            a.add_argument("--complex")
        if name == "sample":
            a.add_argument("--samples", type=int, default=1000)
        if name == "embed-drq":
            a.add_argument("--index", type=int, default=0)
            a.add_argument("--drq")
        if name in ("check", "sample"):
            a.add_argument("--verify-drq", dest="verify_drq", action=argparse.BooleanOptionalAction,
                           default=None if name == "sample" else False)

    p = sub.add_parser("geometry", help="geometry export")
    gsub = p.add_subparsers(dest="action", required=True)
    d = gsub.add_parser("dump", parents=[common])
    d.set_defaults(func=cmd_geometry_dump)
    return parser


def _render_table(report: dict) -> str:
    lines = [f"{report['command']}  field={report['field']}  ({report['wall_time']:.2f}s)"]
    if report["checks"]:
        w = max(len(c["check"]) for c in report["checks"])
        for c in report["checks"]:
            mark = "PASS" if c["pass"] else "FAIL"
            lines.append(f"  {mark}  {c['check']:<{w}}  expected={c['expected']}  actual={c['actual']}")
    for k, v in report["data"].items():
        text = json.dumps(v)
        if len(text) > 100:
            text = text[:97] + "..."
        lines.append(f"  {k}: {text}")
    return "\n".join(lines)


def dispatch(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    start = time.perf_counter()
    command = " ".join(filter(None, [args.command, getattr(args, "action", None)]))
    try:
        checks, data = args.func(args)
        field = _field(args).to_dict()
    except UsageError as exc:
        print(f"pgxray: error: {exc}", file=sys.stderr)
        return 2
    except (PgxrayError, OSError, json.JSONDecodeError, KeyError, ValueError) as exc:
        print(f"pgxray: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    report = {
        "command": command,
        "field": field,
        "checks": [c.to_dict() for c in checks],
        "data": _jsonable(data),
        "wall_time": time.perf_counter() - start,
    }
    if args.format == "table":
        print(_render_table(report))
    else:
        print(json.dumps(report))
    return 0 if all(c.passed for c in checks) else 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
