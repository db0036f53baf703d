"""Command-line entry point: ``index3 <command> ...``.

Exit codes: 0 success or verified, 1 verification failed / not equivalent /
nothing found, 2 input error, 3 internal assertion failure.
"""
from __future__ import annotations

import argparse
import sys
from concurrent.futures import ProcessPoolExecutor
from contextlib import contextmanager
from typing import Iterator, Optional, Sequence

from . import __version__
from .arrow import (
    arrow_bounds,
    realizes_arrow,
    search_arrow,
    structure_check,
    szonyi_example,
)
from .blocking import analyze
from .census import Mapper, enumerate_index3, pg27_report
from .constructions import (
    ConstructionRecord,
    RedeiProfile,
    concurrent_from_arrow,
    determined_directions,
    affine_part,
    example45,
    megyesi,
    megyesi_cosets,
    profile_blocking_set,
    triangle_from_arrow,
    vertexless_triangle,
)
from .field import field_of_order
from .plane import canonical_form, line_equation
from .serialize import (
    InputError,
    dumps,
    model_for_case,
    parse_group,
    parse_int_set,
    pointset_from_json,
    read_json,
    triple_from_json,
)

OK, FAILED, INPUT_ERROR, INTERNAL = 0, 1, 2, 3


class Output:
    """Routes the JSON payload or the human text to the right stream."""

    def __init__(self, json_target: Optional[str]):
        self.json_target = json_target

    def emit(self, payload: dict, text: str) -> None:
        if self.json_target is None:
            print(text)
        elif self.json_target == "-":
            print(dumps(payload))
        else:
            with open(self.json_target, "w", encoding="utf-8") as fh:
                fh.write(dumps(payload) + "\n")
            print(text, file=sys.stderr)


@contextmanager
def worker_map(threads: int) -> Iterator[Mapper]:
    if threads <= 1:
        yield map
        return
    with ProcessPoolExecutor(max_workers=threads) as pool:
        yield lambda fn, xs: pool.map(fn, xs, chunksize=8)


# -- field -------------------------------------------------------------------------------


def cmd_field(args, out: Output) -> int:
    F = field_of_order(args.q)
    payload = {
        **F.to_json(),
        "modulus": list(F.modulus),
        "q": F.q,
        "primitive": F.primitive,
        "powers": [F.exp(i) for i in range(F.q - 1)],
    }
    text = [
        f"{F!r}: p = {F.p}, k = {F.k}",
        f"modulus (constant first): {list(F.modulus)}",
        f"primitive element: {F.primitive}",
        f"powers of the primitive: {payload['powers']}",
    ]
    if args.tables:
        payload["add_table"] = F.add_table.tolist()
        payload["mul_table"] = F.mul_table.tolist()
        text.append("addition:")
        text += ["  " + " ".join(f"{x:>3}" for x in row) for row in payload["add_table"]]
        text.append("multiplication:")
        text += ["  " + " ".join(f"{x:>3}" for x in row) for row in payload["mul_table"]]
    out.emit(payload, "\n".join(text))
    return OK


# -- construct ---------------------------------------------------------------------------


def _record_text(rec: ConstructionRecord) -> str:
    S = rec.points
    lines = [
        f"{rec.recipe} in PG(2,{S.field.q}) {rec.params}",
        f"size {len(S)} (predicted {rec.predicted_size})",
    ]
    if rec.predicted_directions is not None:
        lines.append(f"directions determined: predicted {rec.predicted_directions}")
    lines.append("points: " + " ".join("(" + ",".join(map(str, P)) + ")" for P in S))
    return "\n".join(lines)


def cmd_construct(args, out: Output) -> int:
    if args.recipe == "from-arrow":
        t = triple_from_json(read_json(args.triple))
        model = model_for_case(t.group, args.case)
        build = concurrent_from_arrow if args.case == "concurrent" else triangle_from_arrow
        rec = build(model.field, t)
    else:
        F = field_of_order(args.q)
        if args.recipe == "megyesi":
            if (args.g0 is None) != (args.g1 is None):
                raise InputError("--g0 and --g1 go together")
            if args.g0 is None:
                rec = megyesi(F, args.d, args.mode)
            else:
                rec = megyesi_cosets(F, args.d, args.mode, args.g0, args.g1)
        elif args.recipe == "triad":
            rec = profile_blocking_set(RedeiProfile("triad", F, parse_int_set(args.A)))
        elif args.recipe == "triangle":
            rec = profile_blocking_set(RedeiProfile.triangle_from_B(F, parse_int_set(args.B)))
        elif args.recipe == "example45":
            rec = example45(F, args.t)
        else:
            rec = vertexless_triangle(F)
    out.emit(rec.to_json(), _record_text(rec))
    return OK


# -- verify ------------------------------------------------------------------------------


def cmd_verify(args, out: Output) -> int:
    S = pointset_from_json(read_json(args.file))
    rep = analyze(S, args.max_index)
    payload = rep.to_json()
    text = [
        f"PG(2,{S.field.q}) point set of size {rep.size}",
        f"blocking: {rep.is_blocking}  proper: {rep.is_proper}  minimal: {rep.is_minimal}",
        f"index: {rep.index}",
        "intersection spectrum: " + ", ".join(f"{k}:{v}" for k, v in rep.intersection_spectrum.items()),
    ]
    if rep.redei_lines:
        text.append("Rédei lines: " + ", ".join(line_equation(l) for l in rep.redei_lines))
        if args.directions and (0, 0, 1) in rep.redei_lines:
            n = len(determined_directions(affine_part(S)))
            payload["determined_directions"] = n
            text.append(f"directions determined by the points off z = 0: {n}")
    else:
        text.append("not of Rédei type")
    out.emit(payload, "\n".join(text))
    return OK if rep.is_blocking and rep.is_proper and rep.is_minimal else FAILED


# -- equiv -------------------------------------------------------------------------------


def cmd_equiv(args, out: Output) -> int:
    S1 = pointset_from_json(read_json(args.a))
    S2 = pointset_from_json(read_json(args.b))
    if S1.field != S2.field:
        raise InputError(f"sets live over different fields ({S1.field!r}, {S2.field!r})")
    c1, c2 = canonical_form(S1, args.group), canonical_form(S2, args.group)
    same = c1 == c2
    payload = {
        "equivalent": same,
        "group": args.group,
        "canonical_a": [list(P) for P in c1],
        "canonical_b": [list(P) for P in c2],
    }
    verdict = "equivalent" if same else "not equivalent"
    out.emit(payload, f"{verdict} under {args.group}(3,{S1.field.q})")
    return OK if same else FAILED


# -- arrow -------------------------------------------------------------------------------


def _triple_text(t) -> str:
    G = t.group
    parts = []
    for name in "ABC":
        xs = [str(x[0]) if len(x) == 1 else "(" + ",".join(map(str, x)) + ")" for x in G.sorted(getattr(t, name))]
        parts.append(f"{name}={{{','.join(xs)}}}")
    return " ".join(parts) + f"  (m = {t.m})"


def cmd_arrow(args, out: Output) -> int:
    if args.action == "search":
        G, model = parse_group(args.group)
        found = search_arrow(G, args.m)
        shown = found if args.limit is None else found[: args.limit]
        payload = {
            "group": list(G.orders),
            "m": args.m,
            "count": len(found),
            "triples": [t.to_json() for t in shown],
        }
        if model is not None:
            payload["model"] = f"{model.kind}:{model.field.q}"
        text = [f"{G!r} -> {args.m}: {len(found)} maximal triple(s)"]
        text += ["  " + _triple_text(t) for t in shown]
        if len(shown) < len(found):
            text.append(f"  ... {len(found) - len(shown)} more")
        out.emit(payload, "\n".join(text))
        return OK if found else FAILED

    if args.action == "check":
        t = triple_from_json(read_json(args.triple))
        chk = realizes_arrow(t)
        n = t.group.order
        lo, hi = arrow_bounds(n)
        payload = {"triple": t.to_json(), "m": t.m, "status": chk.status, "bounds": [lo, hi]}
        text = [_triple_text(t), f"status: {chk.status}", f"bounds for n = {n}: {lo} <= m <= {hi}"]
        if chk.witness is not None:
            x, name = chk.witness
            payload["witness"] = {"element": t.group.to_json_element(x), "component": name}
            text.append(f"{t.group.to_json_element(x)} can be added to {name}")
        if chk.ok and t.m > n + 1:
            sc = structure_check(t)
            payload["structure"] = {
                "status": sc.status,
                "subgroup": sc.subgroup.to_json() if sc.subgroup is not None else None,
            }
            text.append(f"structure: {sc.status}")
        out.emit(payload, "\n".join(text))
        return OK if chk.ok else FAILED

    t = szonyi_example(args.p)
    chk = realizes_arrow(t)
    payload = {"p": args.p, "triple": t.to_json(), "m": t.m, "status": chk.status}
    out.emit(payload, f"Z{args.p} x Z{args.p}: " + _triple_text(t) + f"\nstatus: {chk.status}")
    return OK if chk.ok else FAILED


# -- census ------------------------------------------------------------------------------


def _census_text(report, checks=None) -> str:
    lines = [f"index-3 minimal blocking sets of PG(2,{report.q}), sizes {report.size_range[0]}-{report.size_range[1]}"]
    lines.append(f"candidates: {report.candidates_seen} enumerated, {report.candidates_kept} kept")
    for size, t in report.totals().items():
        lines.append(f"  size {size}: {t['redei']} Rédei, {t['non_redei']} non-Rédei")
    for i, c in enumerate(report.classes):
        src = ", ".join(f"{k}={v}" for k, v in c.source.items())
        flag = "  [unclaimed]" if c.unclaimed else ""
        kind = "Rédei" if c.is_redei else "non-Rédei"
        lines.append(f"  #{i + 1:<2} size {c.size} {kind:<9} {c.configuration:<21} {src}{flag}")
    if checks is not None:
        lines.append("reference checks:")
        lines += [f"  {'ok  ' if c.passed else 'FAIL'} {c.name}" for c in checks]
    return "\n".join(lines)


def cmd_census(args, out: Output) -> int:
    with worker_map(args.threads) as mapper:
        if args.action == "pg27":
            report, checks = pg27_report(mapper)
            payload = report.to_json()
            payload["checks"] = [{"name": c.name, "passed": c.passed} for c in checks]
            out.emit(payload, _census_text(report, checks))
            return OK
        F = field_of_order(args.q)
        report = enumerate_index3(F, args.min, args.max, mapper, allow_large_q=args.unsafe_large_q)
    out.emit(report.to_json(), _census_text(report))
    return OK


# -- parser ------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--json",
        nargs="?",
        const="-",
        metavar="PATH",
        help="machine-readable output on stdout, or to PATH if given",
    )
    common.add_argument("--threads", type=int, default=1, help="worker processes (speed only)")

    p = argparse.ArgumentParser(prog="index3", description="Index-3 blocking sets in PG(2,q).")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")

    f = sub.add_parser("field", parents=[common], help="describe GF(q)")
    f.add_argument("--q", type=int, required=True)
    f.add_argument("--tables", action="store_true", help="include addition and multiplication tables")
    f.set_defaults(func=cmd_field)

    c = sub.add_parser("construct", help="build a blocking set")
    cs = c.add_subparsers(dest="recipe", metavar="RECIPE", required=True)
    m = cs.add_parser("megyesi", parents=[common], help="coset construction with d | q or d | q-1")
    m.add_argument("--q", type=int, required=True)
    m.add_argument("--d", type=int, required=True)
    m.add_argument("--mode", choices=["add", "mult"], required=True)
    m.add_argument("--g0", type=int)
    m.add_argument("--g1", type=int)
    t = cs.add_parser("triad", parents=[common], help="Rédei set on three concurrent lines")
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--A", required=True, help="comma-separated field codes, e.g. 0,1,5")
    t = cs.add_parser("triangle", parents=[common], help="Rédei set on a triangle")
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--B", required=True, help="comma-separated nonzero field codes, e.g. 1,2")
    e = cs.add_parser("example45", parents=[common], help="triangle profile A = {a, a^2, ..., a^t}")
    e.add_argument("--q", type=int, required=True)
    e.add_argument("--t", type=int, required=True)
    v = cs.add_parser("vertexless", parents=[common], help="triangle sides without their vertices")
    v.add_argument("--q", type=int, required=True)
    a = cs.add_parser("from-arrow", parents=[common], help="blocking set from a maximal arrow triple")
    a.add_argument("--case", choices=["concurrent", "triangle"], required=True)
    a.add_argument("--triple", required=True, help="triple JSON file ('-' for stdin)")
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", parents=[common], help="check a point set")
    v.add_argument("file", help="PointSet or construction JSON ('-' for stdin)")
    v.add_argument("--max-index", type=int, default=4)
    v.add_argument("--directions", action="store_true", help="count directions when z = 0 is a Rédei line")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("equiv", parents=[common], help="decide projective equivalence")
    q.add_argument("a")
    q.add_argument("b")
    q.add_argument("--group", choices=["PGL", "PGammaL"], default="PGL")
    q.set_defaults(func=cmd_equiv)

    r = sub.add_parser("arrow", help="arrow relations G -> m")
    rs = r.add_subparsers(dest="action", metavar="ACTION", required=True)
    s = rs.add_parser("search", parents=[common], help="all maximal triples with |A|+|B|+|C| = m")
    s.add_argument("--group", required=True, help="add:q, mult:q or cyclic:n1,n2,...")
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--limit", type=int, help="list at most this many triples")
    k = rs.add_parser("check", parents=[common], help="check a triple")
    k.add_argument("--triple", required=True)
    z = rs.add_parser("szonyi", parents=[common], help="the parabola triple in Z_p x Z_p")
    z.add_argument("--p", type=int, required=True)
    r.set_defaults(func=cmd_arrow)

    n = sub.add_parser("census", help="classify index-3 blocking sets")
    ns = n.add_subparsers(dest="action", metavar="ACTION", required=True)
    ns.add_parser("pg27", parents=[common], help="PG(2,7), sizes 12-14, with reference checks")
    u = ns.add_parser("run", parents=[common], help="census with custom parameters")
    u.add_argument("--q", type=int, required=True)
    u.add_argument("--min", type=int, default=12)
    u.add_argument("--max", type=int, default=14)
    u.add_argument("--unsafe-large-q", action="store_true", help="allow q other than 7 (no guarantees)")
    n.set_defaults(func=cmd_census)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_usage(sys.stderr)
        print("index3: error: a command is required", file=sys.stderr)
        return INPUT_ERROR
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be positive")
    out = Output(args.json)
    try:
        return args.func(args, out)
    except AssertionError as e:
        print(f"index3: internal check failed: {e}", file=sys.stderr)
        return INTERNAL
    except (ValueError, ZeroDivisionError) as e:
        # FieldError, GeometryError, ArrowError, ConstructionError and InputError are ValueErrors
        print(f"index3: error: {e}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
