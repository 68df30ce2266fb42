"""Command-line interface.

    nichols-lattice cartan   --row r2/row9
    nichols-lattice classify --inline "rank=2; q[1]=2/3; q[2]=2/3; q[1,2]=5/6"
    nichols-lattice charge   --row r2/row14 --chamber 1
    nichols-lattice verify-tables --rank 2

Exit codes: 0 success (NoSolution included), 1 domain error, 2 usage
error, 3 internal inconsistency.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import catalog
from .braiding import BraidingDiagram, cartan_matrix, classify_all, format_diagram, parse_diagram
from .charge import background_charge, central_charge
from .errors import NicholsError, UnboundParameter
from .exact import AffineExpr, as_rational, format_rational
from .groupoid import enumerate_groupoid, positive_roots, root_label
from .oracle import compare_pbw, graded_dimensions
from .realise import congruent, evaluate_matrix, format_matrix, solve_realisation
from .screening import SUBMULTISETS, SUBSETS, relation_report


class UsageError(Exception):
    pass


_RATIONAL = re.compile(r'(?<!")(-?\d+/\d+)(?!")')


# ---------------------------------------------------------------------------
# inputs

def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise UsageError(f"--param expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        name = name.strip().replace("′", "'")
        try:
            out[name] = as_rational(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"--param {name}: {exc}") from None
    return out


def _source(args):
    given = [x for x in (args.row, args.diagram, args.inline) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --row, --diagram, --inline")
    if args.row is not None:
        return catalog.get_row(args.row), None
    if args.diagram is not None:
        try:
            with open(args.diagram, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read {args.diagram}: {exc.strerror}") from None
    else:
        text = args.inline
    return None, parse_diagram(text)


def _bind(d: BraidingDiagram, params: dict) -> BraidingDiagram:
    missing = [p for p in d.parameters if p not in params]
    if missing:
        raise UnboundParameter(f"no value for {', '.join(missing)} (use --param)")
    return d.instantiate(params)


def _runs(args):
    """(assignment, concrete chamber-I diagram, entry) for every instantiation requested."""
    entry, d = _source(args)
    params = _params(args.param)
    if entry is None:
        return [(params, _bind(d, params), None)]
    if params:
        return [(params, catalog.instantiate(entry, params)[0], entry)]
    return [(a, catalog.instantiate(entry, a)[0], entry) for a in catalog.assignments(entry)]


def _chamber_frame(entry, graph, k: int):
    """Basis of the groupoid chamber matching stored chamber k (1-based)."""
    n = graph.rank
    if k == 1 or entry is None:
        if k != 1:
            raise UsageError("--chamber other than 1 needs --row")
        return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))
    if not 1 <= k <= len(entry.chambers):
        raise UsageError(f"{entry.id} stores {len(entry.chambers)} chamber(s)")
    spec = entry.chambers[k - 1]
    target = spec.diagram.instantiate({**catalog.default_assignment(entry)}) if spec.diagram.parameters else spec.diagram
    frames = catalog.frames_for(graph, target)
    if not frames:
        raise NicholsError(f"stored chamber {k} is not reached by the groupoid")
    return frames[0]


def _fmt_assignment(a) -> dict:
    return {k: format_rational(v) for k, v in a.items()}


# ---------------------------------------------------------------------------
# commands; each returns (json-able result, csv table or None, text)

def cmd_cartan(args):
    out = []
    for a, d, entry in _runs(args)[:1]:
        a_mat = cartan_matrix(d)
        out.append({"diagram": format_diagram(d), "cartan": [list(r) for r in a_mat],
                    "classes": [str(c) for c in classify_all(d, a_mat)]})
    res = out[0]
    table = (["i"] + [f"a_i{j + 1}" for j in range(len(res["cartan"]))] + ["class"],
             [[i + 1] + row + [res["classes"][i]] for i, row in enumerate(res["cartan"])])
    text = "\n".join(["cartan matrix:"] + ["  " + " ".join(f"{x:>3}" for x in row) for row in res["cartan"]]
                     + ["classes: " + ", ".join(res["classes"])])
    return res, table, text


def cmd_groupoid(args):
    a, d, entry = _runs(args)[0]
    g = enumerate_groupoid(d, args.budget)
    roots = positive_roots(g).positive_roots
    cartans = sorted({c.cartan for c in g.chambers})
    res = {"diagram": format_diagram(d), "chambers": len(g.chambers),
           "positive_roots": [list(r) for r in roots], "root_labels": [root_label(r) for r in roots],
           "cartan_matrices": [[list(r) for r in c] for c in cartans],
           "cartan_types": [[list(r) for r in c] for c in sorted(g.cartan_types())]}
    table = (["root", "label"], [[" ".join(map(str, r)), root_label(r)] for r in roots])
    text = (f"{len(g.chambers)} chambers, {len(roots)} positive roots, {len(cartans)} distinct Cartan matrices "
            f"({len(g.cartan_types())} up to relabelling)\n"
            + "roots: " + ", ".join(root_label(r) for r in roots))
    return res, table, text


def cmd_classify(args):
    runs = []
    rows = []
    for a, d, entry in _runs(args):
        g = enumerate_groupoid(d, args.budget)
        rep = solve_realisation(d, g, budget=args.budget)
        item = {"assignment": _fmt_assignment(a), **rep.to_json()}
        if entry is not None:
            for fam, fj in zip(rep.families, item["families"]):
                views = []
                for k in range(1, len(entry.chambers) + 1):
                    spec = entry.chambers[k - 1]
                    target = spec.diagram.instantiate(a) if spec.diagram.parameters else spec.diagram
                    frames = catalog.frames_for(g, target)
                    if frames:
                        views.append({"chamber": spec.label or str(k),
                                      "m": format_matrix(congruent(fam.entries, frames[0]))})
                fj["chambers"] = views
        for fj in item["families"]:
            for v in fj.get("chambers", [{"chamber": "I", "m": fj["m"]}]):
                rows.append([json.dumps(item["assignment"]), v["chamber"], json.dumps(v["m"]),
                             "; ".join(fj["constraints"])])
        runs.append(item)
    verdict = "Solutions" if any(r["verdict"] == "Solutions" for r in runs) else "NoSolution"
    res = {"verdict": verdict, "runs": runs}
    lines = [f"verdict: {verdict}"]
    for r in runs:
        lines.append(f"at {r['assignment'] or '{}'}: {r['verdict']}")
        for f in r["families"]:
            for v in f.get("chambers", [{"chamber": "I", "m": f["m"]}]):
                lines.append(f"  chamber {v['chamber']}: m = {v['m']}")
            if f["constraints"]:
                lines.append("  constraints: " + "; ".join(f["constraints"]))
        for w in r["witnesses"]:
            lines.append(f"  witness ({w['kind']}): values {w['values']} {w['note']}".rstrip())
    return res, (["assignment", "chamber", "m", "constraints"], rows), "\n".join(lines)


def _family_m(args):
    """Concrete m for charge and relations: inline JSON, else a row family."""
    params = _params(args.param)
    if args.inline is not None and args.inline.lstrip().startswith("["):
        try:
            rows = json.loads(_RATIONAL.sub(r'"\1"', args.inline))
        except json.JSONDecodeError as exc:
            raise UsageError(f"--inline: {exc}") from None
        return tuple(tuple(as_rational(x) for x in r) for r in rows), None, None
    entry, d = _source(args)
    if entry is not None and entry.expected.families:
        k = args.family - 1
        if not 0 <= k < len(entry.expected.families):
            raise UsageError(f"{entry.id} has {len(entry.expected.families)} family(ies)")
        spec = entry.expected.families[k]
        fam = spec.to_family()
        cs = fam.constraints
        values = dict(params)
        for p in fam.parameters:
            if p not in values:
                v = cs.reduce(AffineExpr.var(p))
                if not v.is_constant():
                    raise UnboundParameter(f"family parameter {p} is free; give --param {p}=...")
                values[p] = v.constant
        if not cs.satisfied_by(values):
            raise NicholsError("parameter values violate the family constraints")
        return evaluate_matrix(fam.entries, values), entry, None
    runs = _runs(args)
    for a, dd, entry in runs:
        rep = solve_realisation(dd, budget=args.budget)
        for fam in rep.families:
            if not fam.parameters:
                return evaluate_matrix(fam.entries, {}), entry, rep.graph
    raise NicholsError("no realising family with fixed values; pass the matrix with --inline")


def cmd_charge(args):
    m, entry, graph = _family_m(args)
    if args.chamber != 1:
        if entry is None:
            raise UsageError("--chamber other than 1 needs --row")
        graph = graph or enumerate_groupoid(catalog.instantiate(entry, _params(args.param) or None)[0], args.budget)
        m = evaluate_matrix(congruent(m, _chamber_frame(entry, graph, args.chamber)), {})
    c = central_charge(m)
    q = background_charge(m)
    res = {"central_charge": format_rational(c), "background_charge": [format_rational(x) for x in q.coeffs],
           "m": format_matrix(m)}
    return res, (["central_charge"], [[format_rational(c)]]), format_rational(c)


def cmd_relations(args):
    m, entry, graph = _family_m(args)
    basis = None
    if args.chamber != 1:
        if entry is None:
            raise UsageError("--chamber other than 1 needs --row")
        graph = graph or enumerate_groupoid(catalog.instantiate(entry, _params(args.param) or None)[0], args.budget)
        basis = _chamber_frame(entry, graph, args.chamber)
    report = relation_report(m, {}, basis, mode=args.smallness_mode, budget=args.budget)
    items = [{**r.to_json(), **s.to_json()} for r, s in report]
    table = (["relation", "degree", "status", "condition", "note"],
             [[i["description"], " ".join(map(str, i["degree"])), i["status"], i["condition"], i["note"]]
              for i in items])
    text = "\n".join(f"{i['description']:<28} {i['status']:<26} {i['condition']}" for i in items)
    return {"relations": items}, table, text


def cmd_oracle(args):
    a, d, entry = _runs(args)[0]
    totals, per = graded_dimensions(d, args.max_degree, args.degree_cap)
    res = {"diagram": format_diagram(d), "dimensions": totals,
           "multidegrees": [{"degree": list(k), "dim": v} for k, v in sorted(per.items())]}
    if args.pbw:
        res["pbw_mismatches"] = [{"degree": list(k), "oracle": x, "pbw": y}
                                 for k, x, y in compare_pbw(d, args.max_degree, args.degree_cap)]
    table = (["degree", "dim"], [[" ".join(map(str, k)), v] for k, v in sorted(per.items())])
    text = "dimensions by degree: " + " ".join(map(str, totals))
    return res, table, text


def cmd_verify_tables(args):
    checks = catalog.verify_tables(args.rank, args.budget)
    by_row = {}
    for ch in checks:
        by_row.setdefault(ch.entry.row, []).append(ch)
    rows = sorted(by_row, key=lambda r: (int("".join(c for c in r if c.isdigit()) or 0), r))
    ok = [r for r in rows if all(c.ok for c in by_row[r])]
    res = {"rank": args.rank, "verified": len(ok), "rows": len(rows),
           "entries": [{"id": c.entry.id, "row": c.entry.row, "label": c.entry.display, "ok": c.ok,
                        "problems": c.problems} for c in checks]}
    table = (["id", "row", "ok", "problems"],
             [[c.entry.id, c.entry.display, c.ok, "; ".join(c.problems)] for c in checks])
    lines = [c.summary() for c in checks] + [f"{len(ok)}/{len(rows)} rows verified"]
    return res, table, "\n".join(lines), (0 if len(ok) == len(rows) else 1)


def cmd_export(args):
    entries = catalog.bundled(args.rank)
    items = []
    for e in entries:
        items.append({"id": e.id, "row": e.row, "label": e.display, "rank": e.rank,
                      "diagram": format_diagram(e.diagram),
                      "verdict": e.expected.verdict,
                      "families": [{"label": f.label, "m": format_matrix(f.views[0].m),
                                    "constraints": f.constraints.describe()} for f in e.expected.families],
                      "charge": format_rational(e.expected.charge) if e.expected.charge is not None else None})
    table = (["id", "row", "diagram", "verdict", "constraints", "charge"],
             [[i["id"], i["label"], i["diagram"], i["verdict"] or "",
               " | ".join("; ".join(f["constraints"]) for f in i["families"] if f["constraints"]), i["charge"] or ""] for i in items])
    text = "\n".join(f"{i['id']:<22} {i['verdict'] or '-':<11} {i['diagram']}" for i in items)
    return {"rank": args.rank, "rows": items}, table, text


# ---------------------------------------------------------------------------
# parser and driver

def _add_source(p, inline_help="diagram text, e.g. 'rank=2; q[1]=2/3; q[2]=1; q[1,2]=4/3'"):
    p.add_argument("--row", help="catalog row id, e.g. r2/row9")
    p.add_argument("--diagram", help="file holding a diagram in text form")
    p.add_argument("--inline", help=inline_help)
    p.add_argument("--param", action="append", metavar="NAME=VALUE", help="parameter value (repeatable)")


def _add_globals(p, defaults: bool):
    # accepted before or after the subcommand
    d = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
    p.add_argument("--format", choices=("json", "csv", "text"), default=d("text"))
    p.add_argument("--budget", type=int, default=d(10_000), help="chamber budget for groupoid enumeration")
    p.add_argument("--degree-cap", type=int, default=d(6), help="largest degree the oracle accepts")
    p.add_argument("--smallness-mode", choices=(SUBSETS, SUBMULTISETS), default=d(SUBSETS))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nichols-lattice",
                                     description="Realising lattices for diagonal Nichols algebras.")
    _add_globals(parser, defaults=True)
    common = argparse.ArgumentParser(add_help=False)
    _add_globals(common, defaults=False)
    sub = parser.add_subparsers(dest="command", required=True)
    add = sub.add_parser

    def sub_add(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = sub_add

    p = sub.add_parser("cartan", help="Cartan matrix and root classes")
    _add_source(p)
    p.set_defaults(func=cmd_cartan)
    p = sub.add_parser("groupoid", help="chambers and positive roots")
    _add_source(p)
    p.set_defaults(func=cmd_groupoid)
    p = sub.add_parser("classify", help="all realising m-matrices")
    _add_source(p)
    p.set_defaults(func=cmd_classify)
    for name, func, hlp in (("charge", cmd_charge, "central charge"),
                            ("relations", cmd_relations, "status of each defining relation")):
        p = sub.add_parser(name, help=hlp)
        _add_source(p, "diagram text, or an m-matrix as JSON, e.g. '[[2/3,-7/12],[-7/12,2/3]]'")
        p.add_argument("--chamber", type=int, default=1, help="stored chamber, 1-based")
        p.add_argument("--family", type=int, default=1, help="which stored family, 1-based")
        p.set_defaults(func=func)
    p = sub.add_parser("oracle", help="graded dimensions from the quantum symmetrizer")
    _add_source(p)
    p.add_argument("--max-degree", type=int, default=4)
    p.add_argument("--pbw", action="store_true", help="also compare with PBW monomial counts")
    p.set_defaults(func=cmd_oracle)
    p = sub.add_parser("verify-tables", help="check every catalog row against the solver")
    p.add_argument("--rank", type=int, choices=(2, 3), default=2)
    p.set_defaults(func=cmd_verify_tables)
    p = sub.add_parser("export", help="dump the bundled catalog")
    p.add_argument("--rank", type=int, choices=(2, 3), default=2)
    p.set_defaults(func=cmd_export)
    return parser


def _json_default(x):
    if isinstance(x, Fraction):
        return format_rational(x)
    raise TypeError(f"not serialisable: {type(x).__name__}")


def render(fmt: str, result, table, text) -> str:
    if fmt == "json":
        return json.dumps(result, indent=2, default=_json_default)
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(table[0])
        w.writerows(table[1])
        return buf.getvalue().rstrip("\n")
    return text


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.budget < 1:
        print("error: --budget must be positive", file=stderr)
        return 2
    try:
        out = args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except NicholsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return exc.exit_code
    code = 0
    if len(out) == 4:
        code = out[3]
        out = out[:3]
    print(render(args.format, *out), file=stdout)
    return code


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
