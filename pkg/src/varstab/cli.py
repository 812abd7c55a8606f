"""Command-line front end.

    varstab check isolated-calmness problem.json
    varstab check aubin problem.json --relative
    varstab graphder problem.json --direction "1;0;1;0" --element "0;0"
    varstab solve problem.json --param "1;0"
    varstab sample problem.json --grid grid.json

Exit codes: 0 HOLDS, 1 FAILS or DISPROVED, 2 INCONCLUSIVE, 64 usage
error, 65 malformed problem or grid file.
"""

import argparse
import json
import sys as _sys

from .exactmath import Q, fmt
from .status import EXIT_CODES, HOLDS, FAILS, Verdict, jsonable

EX_USAGE = 64
EX_DATAERR = 65

CHECKS = ("assumption1", "robinson", "nondegeneracy", "socic", "isolated-calmness",
          "metric-regularity", "aubin")


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_vector(text: str, what: str = "vector") -> tuple:
    """'1;-1/2;0' -> rational tuple; an empty string is the empty vector."""
    text = text.strip()
    if not text:
        return ()
    try:
        return tuple(Q(part.strip()) for part in text.split(";"))
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad {what} {text!r}: {exc}") from None


def load_problem(path: str):
    from .sysmodel import system_from_json

    try:
        with open(path) as fh:
            raw = fh.read()
    except OSError as exc:
        raise DataError(f"{path}: {exc.strerror}") from None
    try:
        obj = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(obj, dict):
        raise DataError(f"{path}: top level must be an object")
    for key in ("dims", "f", "g", "D", "refpoint"):
        if key not in obj:
            raise DataError(f"{path}: missing field {key!r}")
    try:
        return system_from_json(obj)
    except KeyError as exc:
        raise DataError(f"{path}: missing field {exc}") from None
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise DataError(f"{path}: schema error: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="varstab", description="Exact stability checks for parametric variational systems.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("check", help="run a condition checker")
    c.add_argument("condition", choices=CHECKS)
    c.add_argument("problem")
    c.add_argument("--direction", help="semicolon-separated rationals")
    c.add_argument("--relative", action="store_true",
                   help="aubin: relative to the problem's P_tangent cone")
    c.add_argument("--json", action="store_true")

    g = sub.add_parser("graphder", help="graphical derivative DPsi in a direction")
    g.add_argument("problem")
    g.add_argument("--direction", required=True, help='"q;u" as semicolon-separated rationals')
    g.add_argument("--element", help="test membership of this vector")
    g.add_argument("--waive-assumption1", action="store_true")
    g.add_argument("--json", action="store_true")

    s = sub.add_parser("solve", help="enumerate S(p) for an affine system")
    s.add_argument("problem")
    s.add_argument("--param", required=True)
    s.add_argument("--json", action="store_true")

    m = sub.add_parser("sample", help="calmness and Aubin ratio sampling")
    m.add_argument("problem")
    m.add_argument("--grid", required=True, help="JSON list of parameter vectors")
    m.add_argument("--json", action="store_true")
    return p


def _fmt_value(v) -> str:
    v = jsonable(v)
    if isinstance(v, list) and all(isinstance(x, str) for x in v):
        return "(" + ", ".join(v) + ")"
    return json.dumps(v)


def render_verdict(v: Verdict) -> str:
    lines = [f"{v.condition}: {v.status}"]
    for k, val in v.certificate.items():
        lines.append(f"  {k}: {_fmt_value(val)}")
    for pr in v.prerequisites:
        lines.append(f"  prerequisite {pr['name']}: {pr['status']}")
    if v.strata:
        lines.append(f"  strata: {len(v.strata)}")
    return "\n".join(lines)


def _direction(args, sysm, dim, default_zero=True):
    if args.direction is None:
        if default_zero:
            return (Q(0),) * dim
        return None
    v = parse_vector(args.direction, "direction")
    if len(v) != dim:
        raise UsageError(f"direction must have {dim} entries, got {len(v)}")
    return v


def run_check(args, out) -> int:
    from . import verdicts as V
    from .polyhedra import HCone

    sysm = load_problem(args.problem)
    cond = args.condition
    if cond == "assumption1":
        res = V.check_assumption1(sysm)
    elif cond == "robinson":
        res = V.check_robinson_cq(sysm)
    elif cond == "nondegeneracy":
        res = V.check_nondegeneracy(sysm, _direction(args, sysm, sysm.l + sysm.n))
    elif cond == "socic":
        u = _direction(args, sysm, sysm.n, default_zero=False)
        res = V.check_socic(sysm) if u is None else V.check_socic_dir(sysm, u)
    elif cond == "isolated-calmness":
        res = V.check_isolated_calmness(sysm)
    elif cond == "metric-regularity":
        res = V.check_metreg_M_dir(sysm, _direction(args, sysm, sysm.l + sysm.n))
    else:
        if args.relative:
            if sysm.TP is None:
                raise DataError(f"{args.problem}: --relative needs a P_tangent field")
            res = V.check_rel_aubin(sysm, sysm.TP)
        else:
            res = V.check_rel_aubin(sysm, HCone.whole(sysm.l))
            res.condition = "aubin"
    if args.json:
        out.write(json.dumps(res.to_json(), indent=2) + "\n")
    else:
        out.write(render_verdict(res) + "\n")
    return EXIT_CODES[res.status]


def run_graphder(args, out) -> int:
    from .graphder import dpsi

    sysm = load_problem(args.problem)
    qu = parse_vector(args.direction, "direction")
    if len(qu) != sysm.l + sysm.n:
        raise UsageError(f"direction must have {sysm.l + sysm.n} entries")
    try:
        ds = dpsi(sysm, None, qu, waive_assumption1=args.waive_assumption1)
    except ValueError as exc:
        out.write(f"graphder: INCONCLUSIVE\n  note: {exc}\n")
        return EXIT_CODES["INCONCLUSIVE"]
    report = {"direction": jsonable(qu), "strata": ds.to_json()}
    code = 0
    if args.element is not None:
        vstar = parse_vector(args.element, "element")
        if len(vstar) != sysm.n:
            raise UsageError(f"element must have {sysm.n} entries")
        wit = ds.member(vstar)
        report["element"] = jsonable(vstar)
        report["member"] = wit is not None
        if wit is not None:
            report["lambda"], report["eta"] = jsonable(wit[0]), jsonable(wit[1])
        code = 0 if wit is not None else 1
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(f"DPsi at direction ({', '.join(fmt(x) for x in qu)}): {len(ds.strata)} strata\n")
        for st in ds.strata:
            out.write(f"  face {sorted(st.face)}: cone rays {_fmt_value(st.cone.rays)}"
                      f" lines {_fmt_value(st.cone.lines)}\n")
        if "member" in report:
            out.write(f"  element {_fmt_value(report['element'])}: "
                      f"{'member' if report['member'] else 'not a member'}\n")
            if report["member"]:
                out.write(f"    lambda {_fmt_value(report['lambda'])}, eta {_fmt_value(report['eta'])}\n")
    return code


def run_solve(args, out) -> int:
    from .oracle import solve_solution_map

    sysm = load_problem(args.problem)
    p = parse_vector(args.param, "parameter")
    if len(p) != sysm.l:
        raise UsageError(f"parameter must have {sysm.l} entries")
    try:
        S = solve_solution_map(sysm, p)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.json:
        out.write(json.dumps(S.to_json(), indent=2) + "\n")
    else:
        out.write(f"S({', '.join(fmt(x) for x in p)}): {len(S.pieces)} piece(s)\n")
        for pc in S.pieces:
            desc = _fmt_value(pc.vertices[0]) if pc.bounded and len(pc.vertices) == 1 else \
                f"vertices {_fmt_value(pc.vertices)} rays {_fmt_value(pc.rays)} lines {_fmt_value(pc.lines)}"
            out.write(f"  {desc}  [active rows {sorted(pc.pattern)}]\n")
    return 0


def run_sample(args, out) -> int:
    from .oracle import sample_aubin, sample_calmness

    sysm = load_problem(args.problem)
    try:
        with open(args.grid) as fh:
            raw = json.load(fh)
        grid = [tuple(Q(x) for x in p) for p in raw]
    except (OSError, json.JSONDecodeError, TypeError, ValueError) as exc:
        raise DataError(f"{args.grid}: {exc}") from None
    if not grid:
        raise DataError(f"{args.grid}: empty grid")
    if any(len(p) != sysm.l for p in grid):
        raise DataError(f"{args.grid}: every parameter needs {sysm.l} entries")
    try:
        cal = sample_calmness(sysm, grid)
        aub = sample_aubin(sysm, grid, sysm.TP)
    except ValueError as exc:
        raise DataError(str(exc)) from None
    if args.json:
        out.write(json.dumps({"calmness": cal.to_json(), "aubin": aub.to_json()}, indent=2) + "\n")
    else:
        out.write(f"calmness: max squared ratio {_fmt_value(cal.max_ratio_sq)} at {_fmt_value(cal.argmax)}\n")
        if aub.unbounded:
            out.write(f"aubin: unbounded (empty S(p') at {_fmt_value(aub.argmax)})\n")
        else:
            out.write(f"aubin: max squared ratio {_fmt_value(aub.max_ratio_sq)} at {_fmt_value(aub.argmax)}\n")
    return 0


def run(argv=None, out=None) -> int:
    out = out if out is not None else _sys.stdout
    err = _sys.stderr
    try:
        args = build_parser().parse_args(argv)
        handler = {"check": run_check, "graphder": run_graphder,
                   "solve": run_solve, "sample": run_sample}[args.command]
        return handler(args, out)
    except UsageError as exc:
        err.write(f"varstab: usage error: {exc}\n")
        return EX_USAGE
    except DataError as exc:
        err.write(f"varstab: {exc}\n")
        return EX_DATAERR


def main():
    raise SystemExit(run())


if __name__ == "__main__":
    main()
