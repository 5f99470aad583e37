"""Command-line surface: batch checks over model files and formula text.

Exit status contract, shared by every subcommand:
  0  the property holds / the formula is valid / no countermodel in range
  1  a countermodel or refutation was found
  2  usage, parse, or model-validation error
  3  a resource limit was reached (see MODALKIT_BUDGET)

With ``--json``, stdout carries exactly one JSON document and nothing else;
human-readable diagnostics go to stderr.  ``--jobs N`` parallelizes search
partitioning without changing any output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .formula import FORMATS, bind_free, free_vars, is_propositional, render
from .model import ModelError, load_domain_frame, load_frame, load_model
from .parser import ParseError, parse
from .correspondence import axiom_report, barcan_report
from .semantics import (Budget, EvalError, ResourceLimit, evaluate,
                        frame_valid)
from .search import (SearchSpec, find_countermodel, find_fo_countermodel,
                     FO_WORLD_CEILING, PROP_WORLD_CEILING)

__all__ = ["main", "main_entry"]

EXIT_HOLDS = 0
EXIT_FOUND = 1
EXIT_USAGE = 2
EXIT_LIMIT = 3


def _emit(args, doc: dict, human: str) -> None:
    if args.json:
        print(json.dumps(doc, indent=2, sort_keys=False))
    else:
        print(human)


def _fail(args, kind: str, message: str, code: int, extra: dict | None = None
          ) -> int:
    if args is not None and getattr(args, "json", False):
        doc = {"error": {"kind": kind, "message": message, **(extra or {})}}
        print(json.dumps(doc, indent=2))
        print(message, file=sys.stderr)
    else:
        print(f"error: {message}", file=sys.stderr)
    return code


def _parse_env(pairs: list[str] | None) -> dict[str, str]:
    env: dict[str, str] = {}
    for raw in pairs or ():
        name, sep, value = raw.partition("=")
        if not sep or not name or not value:
            raise ValueError(f"--env expects name=element, got {raw!r}")
        env[name] = value
    return env


# ---------------------------------------------------------------------------
# Subcommands

def _cmd_check(args) -> int:
    m = load_model(args.model)
    f = parse(args.formula)
    env = _parse_env(args.env)
    if env:
        f = bind_free(f, env.keys())
    missing = set(free_vars(f)) - set(env)
    if missing:
        raise ValueError(f"open formula; supply --env for "
                         f"{sorted(missing)}")
    if args.world is not None:
        if args.world not in m.frame.index:
            raise ValueError(f"unknown world {args.world!r}")
        value = evaluate(m, f, args.world, env=env)
        _emit(args, {"command": "check", "formula": args.formula,
                     "world": args.world, "value": value},
              "true" if value else "false")
        return EXIT_HOLDS if value else EXIT_FOUND
    witness = None
    for w in m.worlds:
        if not evaluate(m, f, w, env=env):
            witness = w
            break
    doc = {"command": "check", "formula": args.formula,
           "valid": witness is None}
    if witness is None:
        _emit(args, doc, "valid")
        return EXIT_HOLDS
    doc["witness"] = {"world": witness}
    _emit(args, doc, f"invalid at {witness}")
    return EXIT_FOUND


def _cmd_frame_valid(args) -> int:
    fr = load_frame(args.frame)
    scheme = parse(args.scheme)
    v = frame_valid(fr, scheme, Budget())
    doc = {"command": "frame-valid", "scheme": args.scheme, **v.to_dict()}
    if v.holds:
        _emit(args, doc, "frame-valid")
        return EXIT_HOLDS
    parts = [f"refuted at {v.world}"]
    for name, worlds in sorted(v.assignment.items()):
        parts.append(f"  {name} = {{{', '.join(worlds)}}}")
    _emit(args, doc, "\n".join(parts))
    return EXIT_FOUND


def _cmd_correspond(args) -> int:
    fr = load_frame(args.frame)
    rep = axiom_report(fr, Budget())
    doc = {"command": "correspond", **rep}
    lines = ["properties: " +
             " ".join(f"{k}={'yes' if v else 'no'}"
                      for k, v in rep["properties"].items())]
    all_hold = True
    for axiom_id, e in rep["axioms"].items():
        status = "holds" if e["holds"] else "fails"
        all_hold = all_hold and e["holds"]
        prop = e.get("frame_property")
        tag = f" ({prop}={'yes' if e['property'] else 'no'})" if prop else ""
        note = "" if e["consistent"] else "  INCONSISTENT"
        lines.append(f"{axiom_id}: {status}{tag}{note}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_HOLDS if all_hold else EXIT_FOUND


def _cmd_barcan(args) -> int:
    df = load_domain_frame(args.dframe)
    rep = barcan_report(df, Budget())
    doc = {"command": "barcan", **rep}
    mono = rep["monotonicity"]
    lines = ["domains: " +
             " ".join(f"{k}={'yes' if v else 'no'}" for k, v in mono.items())
             + f" symmetric={'yes' if rep['symmetric'] else 'no'}"]
    all_hold = True
    for axiom_id, e in rep["axioms"].items():
        status = "holds" if e["holds"] else "fails"
        all_hold = all_hold and e["holds"]
        note = "" if e["consistent"] else "  INCONSISTENT"
        lines.append(f"{axiom_id}: {status}{note}")
    _emit(args, doc, "\n".join(lines))
    return EXIT_HOLDS if all_hold else EXIT_FOUND


def _cmd_countermodel(args) -> int:
    conclusion = parse(args.conclusion)
    premises = tuple(parse(t) for t in args.premise or ())
    schemes = tuple(parse(t) for t in args.scheme_premise or ())
    constraints = frozenset(
        c.strip() for chunk in args.require or ()
        for c in chunk.split(",") if c.strip())
    spec = SearchSpec(conclusion=conclusion,
                      premise_formulas=premises,
                      premise_schemes=schemes,
                      frame_constraints=constraints,
                      max_worlds=args.max_worlds,
                      max_domain=args.max_domain,
                      reading=args.reading,
                      mode=args.mode)
    first_order = not all(is_propositional(f) for f in spec.formulas())
    if first_order:
        if spec.max_domain < 1:
            raise ValueError("quantified formulas need --max-domain >= 1")
        result = find_fo_countermodel(spec, jobs=args.jobs)
    else:
        result = find_countermodel(spec, jobs=args.jobs)
    if result is None:
        scope = f"up to {spec.max_worlds} worlds"
        if first_order:
            scope += f", domain up to {spec.max_domain}"
        doc = {"command": "countermodel", "found": False,
               "max_worlds": spec.max_worlds}
        if first_order:
            doc["max_domain"] = spec.max_domain
        _emit(args, doc, f"no countermodel {scope}")
        return EXIT_HOLDS
    payload = result.to_dict()
    doc = {"command": "countermodel", "found": True, **payload}
    _emit(args, doc,
          "countermodel found:\n" + json.dumps(payload, indent=2))
    return EXIT_FOUND


def _cmd_render(args) -> int:
    f = parse(args.formula)
    print(render(f, args.format))
    return EXIT_HOLDS


# ---------------------------------------------------------------------------
# Argument parsing and dispatch

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="modalkit",
        description="Finite-model workbench for propositional and "
                    "quantified modal logic.")
    sub = p.add_subparsers(dest="command", required=True)

    def add_json(sp):
        sp.add_argument("--json", action="store_true",
                        help="emit a single JSON document on stdout")

    sp = sub.add_parser("check", help="evaluate a formula on a model")
    sp.add_argument("--model", required=True, help="model JSON file")
    sp.add_argument("--formula", required=True, help="formula text")
    sp.add_argument("--world", help="evaluate at this world only")
    sp.add_argument("--env", action="append", metavar="NAME=ELEMENT",
                    help="bind a free variable (repeatable)")
    add_json(sp)
    sp.set_defaults(fn=_cmd_check)

    sp = sub.add_parser("frame-valid",
                        help="schematic validity on a bare frame")
    sp.add_argument("--frame", required=True, help="frame JSON file")
    sp.add_argument("--scheme", required=True, help="scheme text")
    add_json(sp)
    sp.set_defaults(fn=_cmd_frame_valid)

    sp = sub.add_parser("correspond",
                        help="axiom/property correspondence report")
    sp.add_argument("--frame", required=True, help="frame JSON file")
    add_json(sp)
    sp.set_defaults(fn=_cmd_correspond)

    sp = sub.add_parser("barcan",
                        help="Barcan schemes vs domain monotonicity")
    sp.add_argument("--dframe", required=True,
                    help="domain-frame JSON file")
    add_json(sp)
    sp.set_defaults(fn=_cmd_barcan)

    sp = sub.add_parser("countermodel", help="bounded countermodel search")
    sp.add_argument("--conclusion", required=True, help="formula to refute")
    sp.add_argument("--premise", action="append", metavar="TEXT",
                    help="formula that must be valid (repeatable)")
    sp.add_argument("--scheme-premise", action="append", metavar="TEXT",
                    help="scheme that must be schematically valid "
                         "(repeatable)")
    sp.add_argument("--require", action="append", metavar="PROPS",
                    help="frame constraints, comma-separated (repeatable)")
    sp.add_argument("--max-worlds", type=int, default=3,
                    help=f"world bound (default 3; ceiling "
                         f"{PROP_WORLD_CEILING} propositional, "
                         f"{FO_WORLD_CEILING} quantified)")
    sp.add_argument("--max-domain", type=int, default=0,
                    help="domain bound for quantified search "
                         "(default 0 = propositional)")
    sp.add_argument("--mode", choices=("constant", "varying"),
                    default="constant", help="domain regime")
    sp.add_argument("--reading", choices=("object", "meta"),
                    default="object", help="how to read the conclusion")
    sp.add_argument("--jobs", type=int, default=1,
                    help="worker processes (never changes the output)")
    add_json(sp)
    sp.set_defaults(fn=_cmd_countermodel)

    sp = sub.add_parser("render", help="re-render a formula")
    sp.add_argument("--formula", required=True, help="formula text")
    sp.add_argument("--format", choices=FORMATS, default="unicode")
    sp.set_defaults(fn=_cmd_render)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.fn(args)
    except ParseError as e:
        span = {"start": e.span.start, "end": e.span.end} if e.span else None
        return _fail(args, "parse", str(e), EXIT_USAGE,
                     {"span": span} if span else None)
    except ModelError as e:
        return _fail(args, "model", str(e), EXIT_USAGE, {"path": e.path})
    except ResourceLimit as e:
        extra = {"frontier": e.frontier} if e.frontier is not None else None
        return _fail(args, "resource-limit", str(e), EXIT_LIMIT, extra)
    except EvalError as e:
        return _fail(args, "evaluation", str(e), EXIT_USAGE)
    except ValueError as e:
        return _fail(args, "usage", str(e), EXIT_USAGE)


def main_entry() -> None:
    raise SystemExit(main(sys.argv[1:]))
