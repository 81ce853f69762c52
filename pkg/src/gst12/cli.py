"""Command-line entry point.

Exit status: 0 on success, 1 on bad input, 2 when a verification or bound
check fails.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import fields

from .errors import ParseError, PreconditionError, ResourceLimitError
from .harness import (GenParams, RatioConfig, gen_random, parse_instance, parse_solution,
                      run_ratio_experiment, solve, write_instance, write_solution)
from .instance import is_valid_solution, solution_cost
from .ledger import audit_stp_run, check_safety_lemmas
from .oracle import skeleton_cost, steiner_forest_opt
from .rayward_smith import Trace

EXIT_OK, EXIT_INPUT, EXIT_CHECK = 0, 1, 2


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _instance(path: str):
    try:
        return parse_instance(_read(path))
    except ParseError as exc:
        raise InputError(f"{path}: {exc}") from None


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _convert(value: str, kind):
    if kind is tuple:
        return tuple(int(x) for x in value.split(",") if x)
    if kind == "float | None":
        return float(value)
    return {"int": int, "float": float, "str": str}.get(kind, str)(value)


def _key_values(tokens: list[str], cls):
    """Build ``cls`` from ``key=value`` tokens; field types come from the dataclass."""
    types = {f.name: f.type for f in fields(cls)}
    kwargs = {}
    for tok in tokens:
        key, sep, value = tok.partition("=")
        if not sep or key not in types:
            raise InputError(f"bad parameter {tok!r}; expected one of {', '.join(types)} as key=value")
        kind = tuple if types[key] == "tuple" else types[key]
        try:
            kwargs[key] = _convert(value, kind)
        except ValueError:
            raise InputError(f"bad value for {key}: {value!r}") from None
    try:
        return cls(**kwargs)
    except TypeError as exc:
        raise InputError(str(exc)) from None


def cmd_solve(args) -> int:
    inst = _instance(args.file)
    mode = "stp" if args.algo == "rs" else "gst"
    try:
        f, trace = solve(inst, mode, args.stars)
    except PreconditionError as exc:
        raise InputError(str(exc)) from None
    _emit(write_solution(f, solution_cost(inst.graph, f)), args.out)
    if args.trace:
        _emit(json.dumps(trace.to_dict(), indent=1) + "\n", args.trace)
    return EXIT_OK


def cmd_exact(args) -> int:
    inst = _instance(args.file)
    opt = steiner_forest_opt(inst)
    _emit(write_solution(opt.pairs, opt.cost), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _instance(args.instance)
    try:
        cost, pairs = parse_solution(_read(args.solution))
    except ParseError as exc:
        raise InputError(f"{args.solution}: {exc}") from None
    for u, v in pairs:
        if not (0 <= u < inst.n and 0 <= v < inst.n):
            raise InputError(f"{args.solution}: pair ({u}, {v}) out of range")
    actual = solution_cost(inst.graph, pairs)
    problems = []
    if not is_valid_solution(inst, pairs):
        problems.append("some requirement is not connected")
    if actual != cost:
        problems.append(f"declared cost {cost} but the pairs cost {actual}")
    for p in problems:
        print(f"FAIL: {p}")
    if problems:
        return EXIT_CHECK
    print(f"OK: cost {actual}")
    return EXIT_OK


def cmd_gen(args) -> int:
    params = _key_values(args.params, GenParams)
    try:
        inst = gen_random(params)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(write_instance(inst), args.out)
    return EXIT_OK


def cmd_ratio(args) -> int:
    config = _key_values(args.config, RatioConfig)
    try:
        report = run_ratio_experiment(config)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _emit(report.to_csv(), args.out)
    s = report.summary()
    print(" ".join(f"{k}={v}" for k, v in s.items()), file=sys.stderr)
    return EXIT_OK if report.ok else EXIT_CHECK


def _print_block(title: str, items: dict) -> None:
    print(f"[{title}]")
    for k, v in items.items():
        print(f"  {k}: {v}")


def cmd_audit(args) -> int:
    inst = _instance(args.file)
    opt = steiner_forest_opt(inst)
    if len(inst.requirements) <= 1:
        f, trace = solve(inst, "stp")
        report = audit_stp_run(inst, opt, trace)
        if args.json:
            print(report.to_json(indent=1))
        else:
            _print_block("stp", {"alg": report.alg_cost, "opt": report.opt_cost,
                                 "skeleton": report.skeleton,
                                 "initial_prom_cost": report.initial_prom_cost})
            _print_block("hard_facts", report.hard_facts)
            _print_block("diagnostics", {"bridgeless_ok": report.bridgeless_ok,
                                         "monotone_rate": f"{report.monotone_rate:.3f}"})
            print("[steps]")
            for r in report.rows:
                d = r.to_dict()
                print("  " + " ".join(f"{k}={v}" for k, v in d.items()))
        bound = 3 * report.alg_cost <= 3 * report.opt_cost + report.skeleton
        return EXIT_OK if report.ok and report.bridgeless_ok and bound else EXIT_CHECK

    f, _ = solve(inst, "gst")
    alg = solution_cost(inst.graph, f)
    summary = {"alg": alg, "opt": opt.cost, "skeleton": skeleton_cost(inst.graph, opt.pairs),
               "bound_2alg_le_3opt": 2 * alg <= 3 * opt.cost}
    try:
        rows = check_safety_lemmas(inst, opt)
    except PreconditionError:
        rows = None
    if args.json:
        print(json.dumps({"gst": summary,
                          "safety": None if rows is None else [r.to_dict() for r in rows]}, indent=1))
    else:
        _print_block("gst", summary)
        print("[safety]")
        if rows is None:
            print("  skipped: GE-preprocessing is not at a fixpoint")
        for r in rows or ():
            d = r.to_dict()
            print("  " + " ".join(f"{k}={v}" for k, v in d.items()))
    return EXIT_OK if summary["bound_2alg_le_3opt"] else EXIT_CHECK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="gst12", description="GST[1,2] solvers, exact oracle and audits")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a heuristic and print the solution")
    p.add_argument("file")
    p.add_argument("--algo", choices=("rs", "gst"), default="gst")
    p.add_argument("--stars", choices=("all", "active"), default="active")
    p.add_argument("--trace", metavar="OUT", help="write the move trace as JSON")
    p.add_argument("--out", help="solution file (default stdout)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("exact", help="print an optimal solution")
    p.add_argument("file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_exact)

    p = sub.add_parser("verify", help="check a solution file against an instance")
    p.add_argument("instance")
    p.add_argument("solution")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("gen", help="write a random instance, e.g. nodes=8 pairs=2 seed=3")
    p.add_argument("params", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("ratio", help="ratio experiment as CSV, e.g. count=200 mode=stp")
    p.add_argument("config", nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=cmd_ratio)

    p = sub.add_parser("audit", help="potential ledger (one group) or safety report")
    p.add_argument("file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_audit)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"gst12: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ResourceLimitError as exc:
        print(f"gst12: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
