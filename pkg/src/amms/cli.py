"""Command line entry point: ``amms {solve,verify,mms,gen,suite,bench}``.

Exit status is 0 on success, 1 when a verification or suite check fails and 2
when the oracle budget is exceeded, the instance is degenerate or the input is
malformed.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .core import (
    Allocation,
    AmmsError,
    DegenerateInstanceError,
    Instance,
    OracleBudgetError,
    alpha_for,
    format_rational,
    parse_rational,
)
from .harness import (
    COST_MODELS,
    SUITES,
    SuiteFailure,
    bench,
    format_report,
    tight_example,
    gen_random,
    run_suite,
)
from .matching import build_graph
from .mms import DEFAULT_ITEM_BUDGET, mms, normalize
from .solvers import ReductionTrace, solve
from .verify import verify_allocation

EXIT_OK, EXIT_FAILED, EXIT_ERROR = 0, 1, 2


def _read_json(path: Optional[str]):
    if path is None or path == "-":
        return json.load(sys.stdin)
    return json.loads(Path(path).read_text())


def _write_json(data, path: Optional[str]) -> None:
    text = json.dumps(data, indent=2, sort_keys=True)
    if path is None or path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def cmd_solve(args) -> int:
    instance = Instance.from_json(_read_json(args.input))
    allocation, trace = solve(instance, args.budget)
    _write_json(allocation.to_json(), args.output)
    if args.trace:
        payload = trace.to_json() if isinstance(trace, ReductionTrace) else {"n": instance.n, "case": trace}
        _write_json(payload, args.trace)
    if args.dump_graph:
        norm = normalize(instance, args.budget)
        graph = build_graph(norm.full_view(), norm.witnesses[instance.n - 1])
        _write_json(graph.to_json(), args.dump_graph)
    if args.output not in (None, "-") and not args.json:
        ratios = " ".join(format_rational(r) for r in allocation.ratios)
        print(f"case={allocation.case} flexible={allocation.flexible_agent} ratios={ratios}")
    return EXIT_OK


def cmd_verify(args) -> int:
    instance = Instance.from_json(_read_json(args.input))
    allocation = Allocation.from_json(_read_json(args.allocation))
    alpha = parse_rational(args.alpha) if args.alpha is not None else alpha_for(instance.n)
    report = verify_allocation(instance, allocation, alpha)
    _write_json(report.to_json(), args.output)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_mms(args) -> int:
    instance = Instance.from_json(_read_json(args.input))
    k = args.k if args.k is not None else instance.n
    result = mms(instance, args.agent, instance.items, k, args.budget)
    _write_json({
        "agent": args.agent,
        "k": k,
        "value": format_rational(result.value),
        "witness": [sorted(b) for b in result.witness],
    }, args.output)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.tight_example:
        instance = tight_example()
    else:
        instance = gen_random(args.n, args.m, args.model, args.seed)
    _write_json(instance.to_json(), args.output)
    return EXIT_OK


def cmd_suite(args) -> int:
    config = _read_json(args.config) if args.config else {}
    config.setdefault("seed", args.seed)
    config.setdefault("workers", args.workers)
    config.setdefault("failures_dir", args.failures_dir)
    if args.suites:
        config["suites"] = {name: {"count": args.count} if args.count else {} for name in args.suites}
    try:
        report = run_suite(config)
    except SuiteFailure as exc:
        print(f"suite failed: {exc}", file=sys.stderr)
        if exc.artifact is not None:
            print(f"artifact: {exc.artifact}", file=sys.stderr)
        return EXIT_FAILED
    if args.json:
        for name, summary in report["suites"].items():
            print(json.dumps({"suite": name, **summary}, sort_keys=True))
    else:
        print(format_report(report))
    if args.output:
        _write_json(report, args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    rows = bench(args.n, args.m, args.repeats, args.seed)
    if args.json:
        for row in rows:
            print(json.dumps(row, sort_keys=True))
    else:
        print(f"{'n':>3} {'m':>3} {'mean_s':>10} {'max_s':>10}")
        for row in rows:
            print(f"{row['n']:>3} {row['m']:>3} {row['mean_s']:>10.4f} {row['max_s']:>10.4f}")
    return EXIT_OK


def _common(suppress: bool) -> argparse.ArgumentParser:
    # Shared flags work both before and after the subcommand name.
    default = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--input", default=default(None), help="input JSON file (default stdin)")
    p.add_argument("--output", default=default(None), help="output JSON file (default stdout)")
    p.add_argument("--seed", type=int, default=default(0))
    p.add_argument("--json", action="store_true", default=default(False), help="machine-readable output")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amms", description=__doc__.splitlines()[0], parents=[_common(False)])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common(True)

    p = sub.add_parser("solve", parents=[common], help="compute an AMMS allocation")
    p.add_argument("--trace", help="write the reduction trace (or case tag) here")
    p.add_argument("--dump-graph", help="write the feasibility graph on the last agent's MMS partition")
    p.add_argument("--budget", type=int, default=DEFAULT_ITEM_BUDGET, help="largest item count for the oracle")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="check an allocation independently")
    p.add_argument("--allocation", required=True)
    p.add_argument("--alpha", help="bound for the flexible agent, e.g. 9/8 (default: guarantee for n)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("mms", parents=[common], help="maximin share of one agent")
    p.add_argument("--agent", type=int, required=True)
    p.add_argument("--k", type=int, help="number of bundles (default n)")
    p.add_argument("--budget", type=int, default=DEFAULT_ITEM_BUDGET)
    p.set_defaults(func=cmd_mms)

    p = sub.add_parser("gen", parents=[common], help="generate an instance")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--m", type=int, default=8)
    p.add_argument("--model", choices=COST_MODELS, default="uniform")
    p.add_argument("--tight-example", action="store_true", help="the 3-agent 9/8 instance")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("suite", parents=[common], help="run randomized check suites")
    p.add_argument("--config", help="suite config JSON")
    p.add_argument("suites", nargs="*", metavar="SUITE",
                   help=f"suites to run with defaults: {', '.join(SUITES)}")
    p.add_argument("--count", type=int, help="instances per suite")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--failures-dir", default="failures")
    p.set_defaults(func=cmd_suite)

    p = sub.add_parser("bench", parents=[common], help="time the solver")
    p.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    p.add_argument("--m", type=int, nargs="+", default=[8, 10, 12])
    p.add_argument("--repeats", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (OracleBudgetError, DegenerateInstanceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except AmmsError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (ValueError, KeyError, json.JSONDecodeError, OSError) as exc:
        print(f"bad input: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
