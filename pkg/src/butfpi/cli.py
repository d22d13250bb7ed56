"""Command-line interface.

Subcommands::

    run        evaluate a source program, printing value, steps, and a trace
    translate  emit the pi-calculus translation as process text
    simulate   reduce a translated program (or raw process text) with a trace
    check      correspondence report: value agreement and step accounting
    cost       work/span measurement
    scale      scaling families against their predicted shapes
    explore    exhaustive state-space search for small programs

Exit codes: 0 success (and checks passed), 1 a check failed, 2 usage or
parse errors.  JSON output is byte-stable for a fixed argv and seed; text
output is for humans and may change.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from butfpi.butf.eval import EvalResult, Stuck, eval_expr
from butfpi.butf.parse import ParseError, parse
from butfpi.butf.pretty import pretty
from butfpi.butf.syntax import Expr
from butfpi.correspondence import _peek_send, check_program, read_back, value_equal
from butfpi.cost import FAMILIES, fit_check, measure, scaling_experiment
from butfpi.epi.engine import EngineError, barbs, explore, normalize, run
from butfpi.epi.parse import ProcessParseError, parse_process
from butfpi.epi.pretty import pretty_process
from butfpi.translate import TranslationOptions, translate
from butfpi.ugrammar import diagnose


def _default_fuel() -> int:
    try:
        return int(os.environ.get("BUTFPI_FUEL", ""))
    except ValueError:
        return 1_000_000


def _emit(data: dict, fmt: str) -> None:
    if fmt == "json":
        print(json.dumps(data, sort_keys=True, indent=2))


class _UsageError(Exception):
    pass


def _read_program(args) -> Expr:
    if args.expr is not None:
        return parse(args.expr)
    if args.program is None:
        raise _UsageError("provide a program file or -e/--expr")
    with open(args.program, encoding="utf-8") as fh:
        return parse(fh.read())


def _options(args) -> TranslationOptions:
    return TranslationOptions(
        strict_bullets=not getattr(args, "paper_literal", False),
        paper_literal_repeat=getattr(args, "paper_literal_repeat", False),
    )


def _add_program_arg(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("program", nargs="?", help="path to a .butf source file")
    sub.add_argument("-e", "--expr", help="inline program text instead of a file")


def _add_mode_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--paper-literal", action="store_true",
                     help="drop the size/iota bullets, as printed in the calculus")
    sub.add_argument("--paper-literal-repeat", action="store_true",
                     help="keep the >= 0 repeat guard that also emits (-1, -1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="butfpi",
        description="functional array programs, their pi-calculus translations, "
                    "and the accounting between them")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="evaluate a source program")
    _add_program_arg(p)
    p.add_argument("--fuel", type=int, default=None, help="max reduction steps")
    p.add_argument("--trace", action="store_true", help="print one line per step")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("translate", help="emit the pi-calculus translation")
    _add_program_arg(p)
    _add_mode_flags(p)
    p.add_argument("--out", default="o", help="root output channel name")

    p = sub.add_parser("simulate", help="reduce a translation or raw process text")
    _add_program_arg(p)
    _add_mode_flags(p)
    p.add_argument("--raw", help="raw process text to reduce instead of a program")
    p.add_argument("--raw-file", help="path to a .epi process file")
    p.add_argument("--policy", choices=("priority", "random"), default="priority")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=None, help="max engine steps")
    p.add_argument("--gc", action="store_true", help="collect unreachable servers")
    p.add_argument("--permissive", action="store_true",
                   help="drop faulting threads instead of aborting")
    p.add_argument("--stop-barb", help="halt once this channel is observable")
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("check", help="correspondence report for a program")
    _add_program_arg(p)
    _add_mode_flags(p)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("cost", help="work/span measurement")
    _add_program_arg(p)
    _add_mode_flags(p)
    p.add_argument("--seeds", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("scale", help="scaling families vs predicted shapes")
    p.add_argument("--family", choices=sorted(FAMILIES), required=True)
    p.add_argument("--sizes", required=True,
                   help="comma-separated strictly increasing sizes, e.g. 1,2,4,8")
    p.add_argument("--seeds", type=int, default=0)
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")

    p = sub.add_parser("explore", help="exhaustive exploration of small programs")
    _add_program_arg(p)
    _add_mode_flags(p)
    p.add_argument("--raw", help="raw process text instead of a program")
    p.add_argument("--state-bound", type=int, default=100_000)
    p.add_argument("--depth-bound", type=int, default=100_000)
    p.add_argument("--format", choices=("text", "json"), default="text")

    return parser


def cmd_run(args) -> int:
    e = _read_program(args)
    fuel = args.fuel if args.fuel is not None else _default_fuel()
    result = eval_expr(e, fuel=fuel, want_trace=args.trace)
    if isinstance(result, EvalResult):
        if args.format == "json":
            _emit({"status": "value", "value": pretty(result.value),
                   "steps": result.steps,
                   "trace": [{"idx": t.index, "rule": t.rule,
                              "path": list(t.path), "after": t.after}
                             for t in result.trace]}, "json")
        else:
            for t in result.trace:
                print(f"#{t.index} {t.rule}: {t.after}")
            print(f"{pretty(result.value)}")
            print(f"steps: {result.steps}", file=sys.stderr)
        return 0
    if isinstance(result, Stuck):
        _report_simple(args, {"status": "stuck", "reason": result.reason,
                              "steps": result.steps},
                       f"stuck after {result.steps} steps: {result.reason}")
        return 1
    _report_simple(args, {"status": "diverged", "steps": result.steps},
                   f"no value after {result.steps} steps")
    return 1


def _report_simple(args, data: dict, text: str) -> None:
    if getattr(args, "format", "text") == "json":
        _emit(data, "json")
    else:
        print(text)


def cmd_translate(args) -> int:
    e = _read_program(args)
    opts = _options(args)
    process = translate(e, args.out, opts)
    print(f"-- {opts.header()} out={args.out} fresh=deterministic")
    print(pretty_process(process))
    problem = diagnose(process)
    if problem is not None:
        print(f"warning: not well-behaved: {problem}", file=sys.stderr)
    return 0


def cmd_simulate(args) -> int:
    budget = args.budget if args.budget is not None else _default_fuel()
    if args.raw is not None or args.raw_file is not None:
        text = args.raw
        if text is None:
            with open(args.raw_file, encoding="utf-8") as fh:
                text = fh.read()
        config = normalize(parse_process(text))
    else:
        e = _read_program(args)
        config = normalize(translate(e, "o", _options(args)))
    trace = run(config, policy=args.policy, seed=args.seed, budget=budget,
                stop_barb=args.stop_barb, permissive=args.permissive, gc=args.gc)
    if args.format == "json":
        _emit(trace.to_dict(), "json")
    else:
        for s in trace.steps:
            chan = f" {s.channel}" if s.channel else ""
            print(f"#{s.index} {s.rule}{chan} [{s.kind}] depth={s.depth_after}")
        print(f"status: {trace.status}  work: {trace.work}  span: {trace.span}  "
              f"admin: {trace.admin_steps}")
        final_barbs = sorted(f"{n}:{p}" for n, p in barbs(trace.config))
        print(f"barbs: {', '.join(final_barbs) if final_barbs else '(none)'}")
    return 0 if trace.status in ("terminated", "barb") else 1


def cmd_check(args) -> int:
    e = _read_program(args)
    budget = args.budget if args.budget is not None else 200_000
    report = check_program(e, seeds=args.seeds, budget=budget, opts=_options(args))
    if args.format == "json":
        _emit(report.to_dict(), "json")
    else:
        print(f"program:   {report.program}")
        print(f"mode:      {report.mode}")
        print(f"status:    {report.status}")
        print(f"butf:      steps={report.butf_steps} value={report.butf_value}")
        print(f"important: min={report.important_min} max={report.important_max} "
              f"adjusted={report.adjusted_min}..{report.adjusted_max} "
              f"(dummy penalty {report.dummy_penalty})")
        print(f"value_match: {report.value_match}")
        for d in report.deviations:
            print(f"note: {d}")
    return 0 if report.status == "ok" else 1


def cmd_cost(args) -> int:
    e = _read_program(args)
    budget = args.budget if args.budget is not None else 500_000
    report = measure(e, seeds=args.seeds, budget=budget, opts=_options(args))
    if args.format == "json":
        _emit(report.to_dict(), "json")
    else:
        print(f"work: {report.work}  span: {report.span}  "
              f"admin: {report.admin_steps}  status: {report.status}")
    return 0 if report.status == "ok" else 1


def cmd_scale(args) -> int:
    try:
        sizes = [int(x) for x in args.sizes.split(",") if x]
    except ValueError:
        print("sizes must be integers", file=sys.stderr)
        return 2
    budget = args.budget if args.budget is not None else 500_000
    table = scaling_experiment(args.family, sizes, seeds=args.seeds, budget=budget)
    verdict = fit_check(table)
    if args.format == "csv":
        sys.stdout.write(table.to_csv())
    elif args.format == "json":
        _emit({"table": table.to_dict(), "verdict": verdict.to_dict()}, "json")
    else:
        for r in table.rows:
            print(f"n={r.n:4d}  work={r.work:5d}  span={r.span:4d}  admin={r.admin_steps}")
        for name, ok, detail in verdict.checks:
            print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return 0 if verdict.passed else 1


def cmd_explore(args) -> int:
    if args.raw is not None:
        config = normalize(parse_process(args.raw))
        oracle_value = None
    else:
        e = _read_program(args)
        config = normalize(translate(e, "o", _options(args)))
        oracle = eval_expr(e)
        oracle_value = oracle.value if isinstance(oracle, EvalResult) else None
    terminals, bound_hit, states = explore(config, args.state_bound, args.depth_bound)
    data = {"states": states, "terminals": len(terminals), "bound_hit": bound_hit}
    agree = None
    if oracle_value is not None and not bound_hit:
        agree = True
        for t in terminals:
            payload = _peek_send(t, "o")
            if payload is None:
                agree = False
                continue
            value, _cfg = read_back(t, payload[0], oracle_value)
            if not value_equal(oracle_value, value):
                agree = False
        data["all_terminals_agree"] = agree
        data["value"] = pretty(oracle_value)
    if args.format == "json":
        _emit(data, "json")
    else:
        print(f"states: {states}  terminals: {len(terminals)}  bound_hit: {bound_hit}")
        if agree is not None:
            print(f"all terminals agree on {data['value']}: {agree}")
    if bound_hit:
        return 0
    return 0 if agree in (None, True) else 1


def dispatch(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    handler = {
        "run": cmd_run,
        "translate": cmd_translate,
        "simulate": cmd_simulate,
        "check": cmd_check,
        "cost": cmd_cost,
        "scale": cmd_scale,
        "explore": cmd_explore,
    }[args.command]
    try:
        return handler(args)
    except (ParseError, ProcessParseError) as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (EngineError, ValueError, _UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
