"""Command-line front end.

Exit codes: 0 success, 2 bad input, 3 bounds do not meet, 4 numeric budget
exhausted.  JSON goes to stdout with sorted keys; ``--out`` also writes files
in the requested ``--format`` list.
"""

from __future__ import annotations

import argparse
import csv
import datetime as _dt
import io as _io
import json
import math
import sys
from pathlib import Path

from . import billiards, domains
from .certify import CERT_TOL, CLOSED_FORM_TOL, PROBLEMS, BoundsDoNotMeet, certify, decimal
from .geometry import ConvexPolygon, GeometryError, sub
from .io import ParseError, load_geometry, parse_number
from .maximize import FAMILIES, BudgetExhausted, maximize_mass
from .svg import render
from .widths import geometric_width, lattice_lengths, min_sum_multiset

EXIT_OK, EXIT_PARSE, EXIT_BOUNDS, EXIT_BUDGET = 0, 2, 3, 4
FORMATS = ("json", "csv", "svg")
SUMMARY_COLUMNS = ("problem", "p", "lower", "upper", "certified", "closed_form", "abs_err")


class UsageError(ValueError):
    pass


def _formats(text: str) -> list[str]:
    out = [f.strip() for f in text.split(",") if f.strip()]
    bad = [f for f in out if f not in FORMATS]
    if bad:
        raise argparse.ArgumentTypeError(f"unknown format(s) {bad}; choose from {FORMATS}")
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--domain", default=None, help="built-in domain: T, S or tetrahedron")
    common.add_argument("--input", default=None, help="geometry JSON file")
    common.add_argument("--out", default=None, help="directory for artifact files")
    common.add_argument("--format", type=_formats, default=["json"], help="comma list of json,csv,svg")
    common.add_argument("--seedless", action="store_true", help="no timestamps in any output")

    parser = argparse.ArgumentParser(prog="pwidths", description=__doc__.splitlines()[0])
    sub_ = parser.add_subparsers(dest="command", required=True)

    sub_.add_parser("width", parents=[common], help="geometric width of a polygon")

    b = sub_.add_parser("billiard", parents=[common], help="simulate one billiard trajectory")
    b.add_argument("--start", required=True, help="A, mid:AB or x,y")
    b.add_argument("--dir", required=True, help="dx,dy, to:<point> or angle:<degrees>")
    b.add_argument("--mode", choices=(billiards.PLAIN, billiards.T_BILLIARD), default=billiards.PLAIN)
    b.add_argument("--max-bounces", type=int, default=10_000)
    b.add_argument("--through-orthogonal", action="store_true", help="do not stop at orthogonal chords")

    s = sub_.add_parser("sweep-max", parents=[common], help="maximize mass over a sweepout family")
    s.add_argument("--family", required=True, choices=sorted(FAMILIES))
    s.add_argument("--grid", type=int, default=None)
    s.add_argument("--rounds", type=int, default=None)
    s.add_argument("--max-samples", type=int, default=None)

    la = sub_.add_parser("lattice", parents=[common], help="billiard length lattice")
    la.add_argument("--kind", choices=("triangle", "square"), default=None)
    la.add_argument("--cutoff", default="3")
    la.add_argument("--threshold", default=None, help="also report the least sum >= threshold")

    c = sub_.add_parser("certify", parents=[common], help="certify one p-width")
    c.add_argument("--p", type=int, required=True)
    c.add_argument("--grid", type=int, default=None)
    c.add_argument("--max-samples", type=int, default=None)

    r = sub_.add_parser("reproduce-all", parents=[common], help="all seven certificates")
    r.add_argument("--grid", type=int, default=None)
    r.add_argument("--max-samples", type=int, default=None)
    return parser


# --- helpers -------------------------------------------------------------------


def _polygon(args, default: str | None = None) -> tuple[str, ConvexPolygon]:
    if args.input:
        geom = load_geometry(args.input)
        if not isinstance(geom, ConvexPolygon):
            raise UsageError("this command needs a polygon")
        return "P", geom
    name = args.domain or default
    if name not in domains.BUILTIN:
        raise UsageError(f"need --domain T|S or --input (got {name!r})")
    return name, domains.BUILTIN[name]()


def _direction(P: ConvexPolygon, start, text: str):
    text = text.strip()
    if text.startswith("to:"):
        return sub(domains.named_point(P, text[3:]), start)
    if text.startswith("angle:"):
        a = math.radians(parse_number(text[6:]))
        return (math.cos(a), math.sin(a))
    return domains.named_point(P, text)


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _timestamp(args) -> str | None:
    if args.seedless:
        return None
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def _csv_text(header, rows) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(args, stem: str, doc: dict, csv_rows=None, svg_args=None) -> None:
    sys.stdout.write(_dump(doc))
    if not args.out:
        return
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if "json" in args.format:
        (out / f"{stem}.json").write_text(_dump(doc))
    if "csv" in args.format and csv_rows is not None:
        (out / f"{stem}.csv").write_text(_csv_text(*csv_rows))
    if "svg" in args.format and svg_args is not None:
        P, pieces = svg_args
        (out / f"{stem}.svg").write_text(render(P, pieces, title=stem, timestamp=_timestamp(args)))


# --- commands ------------------------------------------------------------------


def cmd_width(args) -> int:
    name, P = _polygon(args)
    w = geometric_width(P)
    doc = {
        "domain": name,
        "width": w.value,
        "decimal": decimal(w.value),
        "direction": list(w.direction),
    }
    rows = (("domain", "width", "dx", "dy"), [(name, decimal(w.value), *map(decimal, w.direction))])
    _emit(args, f"width-{name}", doc, rows, (P, ()))
    return EXIT_OK


def cmd_billiard(args) -> int:
    name, P = _polygon(args)
    start = domains.named_point(P, args.start)
    d = _direction(P, start, args.dir)
    traj = billiards.simulate(
        P,
        start,
        d,
        mode=args.mode,
        max_bounces=args.max_bounces,
        stop_at_orthogonal=not args.through_orthogonal,
    )
    doc = traj.to_json()
    doc["domain"] = name
    term = traj.terminal
    doc["reason"] = term.reason
    doc["residual"] = term.residual
    if billiards.is_equilateral(P) and P.n == 3:
        match = billiards.lattice_membership(traj)
        if match is not None:
            doc["lattice"] = {"a": match.a, "b": match.b, "residual": match.residual}
    pts = traj.points
    rows = (("x", "y"), [(decimal(p[0]), decimal(p[1])) for p in pts])
    _emit(args, f"billiard-{name}", doc, rows, (P, [tuple(pts)]))
    if term.kind == "truncated" and term.reason in ("bounces", "length"):
        return EXIT_BUDGET
    return EXIT_OK


def cmd_sweep_max(args) -> int:
    domain = None
    if args.input:
        domain = load_geometry(args.input)
    rep = maximize_mass(
        args.family,
        grid=args.grid,
        domain=domain,
        rounds=args.rounds if args.rounds is not None else 40,
        max_samples=args.max_samples,
        record="csv" in args.format and bool(args.out),
    )
    doc = rep.to_json()
    doc["history"] = list(rep.history)
    rows = None
    if rep.sampled is not None:
        rows = (
            [f"x{i}" for i in range(len(rep.argmax.params))] + ["mass"],
            [[decimal(x) for x in p] + ["" if m is None else decimal(m)] for p, m in rep.sampled],
        )
    svg_args = _argmax_picture(rep) if "svg" in args.format else None
    _emit(args, f"sweep-{args.family}", doc, rows, svg_args)
    return EXIT_OK


def _argmax_picture(rep):
    from .maximize import LinesFamily, HyperbolaFamily, PhiFamily
    from .sweepouts import hyperbola_sweepout_mass, line_sweepout_mass, pair_phi_mass, phi_mass_at

    x = rep.argmax.params
    if rep.family == "phi-T":
        T = PhiFamily().domain
        return T, phi_mass_at(T, *x).pieces
    if rep.family == "pair-phi-T":
        T = PhiFamily().domain
        return T, pair_phi_mass(T, x[:2], x[2:]).pieces
    if rep.family == "lines-P":
        fam = LinesFamily()
        return fam.domain, line_sweepout_mass(fam.domain, fam.line(x)).pieces
    if rep.family == "hyperbola-S":
        fam = HyperbolaFamily()
        return fam.domain, hyperbola_sweepout_mass(fam.domain, fam.coefficients(x)).pieces
    return None  # planes live in 3D


def cmd_lattice(args) -> int:
    kind = args.kind or {"T": "triangle", "S": "square"}.get(args.domain or "T")
    if kind is None:
        raise UsageError("need --kind triangle|square")
    cutoff = parse_number(args.cutoff)
    L = lattice_lengths(kind, cutoff)
    doc = {
        "kind": kind,
        "cutoff": cutoff,
        "values": [{"value": e.value, "a": e.a, "b": e.b, "norm": e.norm} for e in L.entries],
    }
    if args.threshold is not None:
        theta = parse_number(args.threshold)
        L2 = lattice_lengths(kind, max(cutoff, theta + 2 * L.unit))
        total, chosen = min_sum_multiset(L2, theta)
        doc["min_sum_at_least"] = {
            "threshold": theta,
            "value": total,
            "summands": [[e.a, e.b] for e in chosen],
        }
    rows = (("value", "a", "b"), [(decimal(e.value), e.a, e.b) for e in L.entries])
    _emit(args, f"lattice-{kind}", doc, rows)
    return EXIT_OK


def cmd_certify(args) -> int:
    problem = _polygon(args)[1] if args.input else (args.domain or "T")
    cert = certify(problem, args.p, grid=args.grid, max_samples=args.max_samples)
    doc = cert.to_json()
    rows = (SUMMARY_COLUMNS, [_summary_row(cert)])
    _emit(args, f"certificate-{cert.problem}-{cert.p}", doc, rows)
    if cert.certified is None:
        sys.stderr.write(str(BoundsDoNotMeet(cert)) + "\n")
        return EXIT_BOUNDS
    return EXIT_OK


def _summary_row(cert):
    return (
        cert.problem,
        cert.p,
        decimal(cert.lower.value),
        decimal(cert.upper.value),
        "" if cert.certified is None else decimal(cert.certified),
        cert.closed_form or "",
        "" if cert.abs_err is None else decimal(cert.abs_err),
    )


def cmd_reproduce_all(args) -> int:
    certs = [
        certify(name, p, grid=args.grid, max_samples=args.max_samples) for name, p in PROBLEMS
    ]
    ok = all(
        c.certified is not None and c.abs_err is not None and c.abs_err <= CLOSED_FORM_TOL
        for c in certs
    )
    doc = {
        "certificates": [c.to_json() for c in certs],
        "all_certified": ok,
        "tolerance": CERT_TOL,
        "closed_form_tolerance": CLOSED_FORM_TOL,
        "grid": args.grid,
    }
    sys.stdout.write(_dump(doc))
    summary = _csv_text(SUMMARY_COLUMNS, [_summary_row(c) for c in certs])
    sys.stderr.write(summary)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "summary.csv").write_text(summary)
        if "json" in args.format:
            (out / "reproduce-all.json").write_text(_dump(doc))
    return EXIT_OK if ok else EXIT_BOUNDS


COMMANDS = {
    "width": cmd_width,
    "billiard": cmd_billiard,
    "sweep-max": cmd_sweep_max,
    "lattice": cmd_lattice,
    "certify": cmd_certify,
    "reproduce-all": cmd_reproduce_all,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except BudgetExhausted as exc:
        sys.stderr.write(f"budget exhausted: {exc}\n")
        return EXIT_BUDGET
    except BoundsDoNotMeet as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_BOUNDS
    except (ParseError, UsageError, GeometryError, ValueError, KeyError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
