"""Command-line interface: ``fanmatch {normalize,check,fuzz,corpus}``."""

from __future__ import annotations

import argparse
import json
import sys

from . import harness
from .encoding import build_initial
from .engine import Cycle, NormalForm, OutOfFuel, Stuck, run
from .terms import ParseError, parse, to_str

EXIT_OK = 0
EXIT_STUCK = 2
EXIT_FUEL = 3
EXIT_USAGE = 4
EXIT_MISMATCH = 5

VERDICT_EXIT = {
    "Match": EXIT_OK,
    "Mismatch": EXIT_MISMATCH,
    "EngineStuck": EXIT_STUCK,
    "EngineCycle": EXIT_STUCK,
    "EngineFuel": EXIT_FUEL,
    "OracleFuel": EXIT_FUEL,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _add_source(p):
    p.add_argument("-e", "--expr", help="term text; backslash or λ for lambda")
    p.add_argument("-f", "--file", help="read the term from a file")


def _add_fuel(p):
    p.add_argument("--max-interactions", type=int, default=harness.DEFAULT_ENGINE_FUEL,
                   help="engine fuel (default %(default)s)")
    p.add_argument("--oracle-fuel", type=int, default=harness.DEFAULT_ORACLE_FUEL,
                   help="oracle beta-step fuel (default %(default)s)")


def build_parser():
    parser = _Parser(prog="fanmatch", description=__doc__)
    parser.add_argument("--json", action="store_true", help="structured JSON output")
    sub = parser.add_subparsers(dest="mode", required=True, parser_class=_Parser)

    p = sub.add_parser("normalize", help="reduce a term with the net engine")
    _add_source(p)
    _add_fuel(p)
    p.add_argument("--trace", action="store_true", help="print one line per interaction")
    p.add_argument("--stats", action="store_true", help="print interaction statistics")

    p = sub.add_parser("check", help="compare the engine with the oracle on a term")
    _add_source(p)
    _add_fuel(p)

    p = sub.add_parser("fuzz", help="compare engine and oracle on random terms")
    _add_fuel(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cases", type=int, default=1000)
    p.add_argument("--max-size", type=int, default=25)
    p.add_argument("--save-dir", default="counterexamples",
                   help="where counterexample files go (default %(default)s)")

    p = sub.add_parser("corpus", help="run the regression corpus")
    _add_fuel(p)
    p.add_argument("--report-dir", help="also write CSV tables and PNG figures here")

    for p in sub.choices.values():
        p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                       help="structured JSON output")
    return parser


def _read_term(args):
    if args.expr is not None and args.file is not None:
        raise UsageError("give either --expr or --file, not both")
    if args.expr is not None:
        text = args.expr
    elif args.file is not None:
        try:
            with open(args.file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(str(exc)) from exc
    else:
        text = sys.stdin.read()
    lines = [ln for ln in text.splitlines() if not ln.lstrip().startswith("#")]
    return parse(" ".join(lines))


def _emit(args, payload, text_lines):
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        for line in text_lines:
            print(line)


def _stats_payload(state, stats):
    d = stats.as_dict()
    d["n"] = state.n
    return d


def cmd_normalize(args):
    term = _read_term(args)
    state = build_initial(term)
    if args.trace:
        state.enable_trace()
    outcome = run(state, args.max_interactions)
    payload = {"outcome": type(outcome).__name__}
    lines = []
    if isinstance(outcome, NormalForm):
        payload["term"] = to_str(outcome.term)
        lines.append(payload["term"])
        code = EXIT_OK
    elif isinstance(outcome, (Stuck, Cycle)):
        payload["diagnostic"] = outcome.diagnostic
        payload["snapshot"] = outcome.snapshot
        print(f"{payload['outcome'].lower()}: {outcome.diagnostic}", file=sys.stderr)
        print(outcome.snapshot, file=sys.stderr)
        code = EXIT_STUCK
    else:
        assert isinstance(outcome, OutOfFuel)
        print(f"interaction limit {args.max_interactions} reached", file=sys.stderr)
        code = EXIT_FUEL
    if args.trace:
        payload["trace"] = list(state.trace)
        lines += state.trace
    if args.stats:
        payload["stats"] = _stats_payload(state, outcome.stats)
        payload["phi"] = [[i, j, v] for (i, j), v in state.phi.items()]
        lines += [f"{k}: {v}" for k, v in payload["stats"].items()]
    _emit(args, payload, lines)
    return code


def cmd_check(args):
    term = _read_term(args)
    verdict = harness.run_case(term, args.max_interactions, args.oracle_fuel)
    k = harness.kind(verdict)
    payload = {"verdict": k}
    lines = [k]
    if isinstance(verdict, harness.Match):
        payload["term"] = to_str(verdict.term)
        payload["oracle_beta"] = verdict.oracle_steps
        payload["engine_beta"] = verdict.engine_stats.rules["R2"]
        payload["interactions"] = verdict.engine_stats.interactions
        lines += [payload["term"], f"oracle_beta: {verdict.oracle_steps}",
                  f"engine_beta: {payload['engine_beta']}",
                  f"interactions: {payload['interactions']}"]
    elif isinstance(verdict, harness.Mismatch):
        payload["engine"] = to_str(verdict.engine_term)
        payload["oracle"] = to_str(verdict.oracle_term)
        lines += [f"engine: {payload['engine']}", f"oracle: {payload['oracle']}"]
    elif isinstance(verdict, (harness.EngineStuck, harness.EngineCycle)):
        payload["diagnostic"] = verdict.diagnostic
        payload["snapshot"] = verdict.snapshot
        lines += [verdict.diagnostic, verdict.snapshot]
    _emit(args, payload, lines)
    return VERDICT_EXIT[k]


def cmd_fuzz(args):
    if args.cases < 1:
        raise UsageError("--cases must be at least 1")
    if args.max_size < 2:
        raise UsageError("--max-size must be at least 2")
    report = harness.fuzz(args.seed, args.cases, args.max_size, args.max_interactions,
                          args.oracle_fuel, save_dir=args.save_dir)
    payload = {
        "seed": report.seed, "cases": report.cases, "max_size": report.max_size,
        "engine_fuel": report.engine_fuel, "oracle_fuel": report.oracle_fuel,
        "counts": report.counts, "counterexamples": report.files,
    }
    # wall time goes to stderr so stdout stays byte-stable
    print(f"duration_s: {report.duration:.3f}", file=sys.stderr)
    _emit(args, payload, report.to_text(timing=False).splitlines())
    if report.counts["Mismatch"]:
        return EXIT_MISMATCH
    if report.failures:
        return EXIT_STUCK
    return EXIT_OK


def cmd_corpus(args):
    from . import report

    rows = report.corpus_rows(args.max_interactions, args.oracle_fuel)
    payload = {"rows": rows}
    fields = report.CORPUS_FIELDS
    lines = ["\t".join(fields)]
    lines += ["\t".join(str(r.get(f, "")) for f in fields) for r in rows]
    if args.report_dir:
        paths = report.write_report(args.report_dir, corpus_table=rows)
        payload["files"] = {k: str(v) for k, v in paths.items()}
        for p in paths.values():
            print(f"wrote {p}", file=sys.stderr)
    _emit(args, payload, lines)
    codes = [VERDICT_EXIT[r["verdict"]] for r in rows]
    return max(codes, default=EXIT_OK)


COMMANDS = {"normalize": cmd_normalize, "check": cmd_check, "fuzz": cmd_fuzz,
            "corpus": cmd_corpus}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if not hasattr(args, "json"):
        args.json = False
    try:
        return COMMANDS[args.mode](args)
    except (UsageError, ParseError) as exc:
        print(f"fanmatch: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
