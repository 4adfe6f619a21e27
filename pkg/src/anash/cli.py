"""anash command line.

Subcommands:
  solve   compute a 1/3+delta approximate equilibrium of a game file
  gen     generate a seeded instance and write it as a game file
  batch   solve a JSON list of instance specs into a CSV
  verify  certify a profile file against a game file
  oracle  exact equilibria of a tiny game by support enumeration

Exit codes: 0 success, 2 usage error, 3 unreadable or malformed input,
4 a guarantee or verification failure, 5 internal solver failure.
"""

import argparse
import json
import sys

from .errors import (
    GuaranteeViolationError,
    InputError,
    InvariantViolationError,
    ParameterError,
    ParseError,
    SolverFailureError,
    StructuralError,
    UsageError,
)
from .gameio import load_game, load_profile, save_game
from .instances import FAMILIES, InstanceSpec, generate
from .oracle import certify, support_enumeration
from .pipeline import make_config, run_batch, run_solve, trace_document


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anash",
        description="approximate Nash equilibria of bimatrix games "
        "(guarantee 1/3 + delta)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve one game file")
    p.add_argument("game", help="path to a game file")
    p.add_argument("--delta", type=float, default=None,
                   help="stationarity slack (default 0.005)")
    p.add_argument("--max-iterations", type=int, default=None)
    p.add_argument("--pad", action="store_true",
                   help="zero-pad a nonsquare game to square")
    p.add_argument("--strict", action="store_true",
                   help="reject payoffs outside [0, 1] instead of normalizing")
    p.add_argument("--json", action="store_true",
                   help="print the full construction trace as JSON")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("gen", help="generate an instance file")
    p.add_argument("family", choices=[f for f in FAMILIES if f != "from-file"])
    p.add_argument("n", type=int)
    p.add_argument("seed", type=int)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--win-prob", type=float, default=None,
                   help="win-lose family: probability of a 1 entry")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("batch", help="solve a list of instance specs")
    p.add_argument("specs", help="JSON file: list of "
                   '{"family", "n", "seed", "extra"?} objects')
    p.add_argument("-o", "--output", required=True, help="CSV output path")
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--max-iterations", type=int, default=None)
    p.set_defaults(func=cmd_batch)

    p = sub.add_parser("verify", help="certify a profile against a game")
    p.add_argument("game")
    p.add_argument("profile", help="two-line probability file")
    p.add_argument("--epsilon", type=float, required=True,
                   help="approximation level to certify")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="exact equilibria of a tiny game")
    p.add_argument("game")
    p.set_defaults(func=cmd_oracle)
    return parser


def cmd_solve(args):
    game = load_game(args.game, pad=args.pad, strict=args.strict)
    config = make_config(delta=args.delta, max_iterations=args.max_iterations)
    spec = InstanceSpec(family="from-file", n=game.n,
                        extra={"path": str(args.game)})
    record, trace = run_solve(game, config, instance=spec)
    if args.json:
        print(json.dumps(trace_document(record, trace), indent=2))
        return 0
    chosen = trace.chosen
    print(f"n={game.n} delta={record.delta} case={record.case_label} "
          f"iterations={record.iterations}")
    print("row strategy:", _fmt(chosen.profile.row.probs))
    print("col strategy:", _fmt(chosen.profile.col.probs))
    print(f"max regret: {record.achieved_epsilon:.9f} "
          f"(guarantee {1.0 / 3.0 + record.delta:.9f})")
    return 0


def cmd_gen(args):
    extra = {}
    if args.win_prob is not None:
        if args.family != "win-lose":
            raise UsageError("--win-prob only applies to the win-lose family")
        extra["p"] = args.win_prob
    spec = InstanceSpec(family=args.family, n=args.n, seed=args.seed,
                        extra=extra)
    game = generate(spec)
    save_game(game, args.output)
    print(f"wrote {args.family} n={args.n} seed={args.seed} to {args.output}")
    return 0


def cmd_batch(args):
    try:
        with open(args.specs, encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"specs file is not valid JSON: {exc}",
                         line=exc.lineno, column=exc.colno) from None
    if not isinstance(raw, list):
        raise ParseError("specs file must contain a JSON list")
    specs = []
    for k, item in enumerate(raw):
        if not isinstance(item, dict) or "family" not in item:
            raise ParseError(f"spec {k} must be an object with a 'family' key")
        specs.append(InstanceSpec(
            family=item["family"],
            n=int(item.get("n", 0)),
            seed=int(item.get("seed", 0)),
            extra=dict(item.get("extra", {})),
        ))
    config = make_config(delta=args.delta, max_iterations=args.max_iterations)
    summary = run_batch(specs, config, args.output)
    print(f"solved {summary['solved']}/{summary['total']} "
          f"(max epsilon {summary['max_epsilon']:.9f}, "
          f"mean iterations {summary['mean_iterations']:.1f})")
    print("cases:", json.dumps(summary["cases"], sort_keys=True))
    if summary["guarantee_violations"]:
        print(f"{summary['guarantee_violations']} guarantee violations",
              file=sys.stderr)
        return 4
    if summary["failures"]:
        print(f"{summary['failures']} solver failures", file=sys.stderr)
        return 5
    return 0


def cmd_verify(args):
    game = load_game(args.game)
    profile = load_profile(args.profile, game.n)
    ok, report = certify(game, profile, args.epsilon)
    print(f"row regret: {report.row_regret:.12f}")
    print(f"col regret: {report.col_regret:.12f}")
    print(f"max regret: {report.max_regret:.12f} vs epsilon {args.epsilon}")
    if ok:
        print("certified")
        return 0
    print("NOT within epsilon")
    return 4


def cmd_oracle(args):
    game = load_game(args.game)
    if game.n > 5:
        raise UsageError(f"oracle handles n <= 5 games, this one is {game.n}")
    equilibria = support_enumeration(game)
    for eq in equilibria:
        print(f"supports {sorted(eq.row_support)} x {sorted(eq.col_support)} "
              f"(residual {eq.residual:.2e})")
        print("  row:", _fmt(eq.profile.row.probs))
        print("  col:", _fmt(eq.profile.col.probs))
    print(f"{len(equilibria)} exact equilibria")
    if not equilibria:
        print("no support pair solved cleanly; the game may be degenerate",
              file=sys.stderr)
        return 5
    return 0


def _fmt(probs):
    return "[" + ", ".join(f"{v:.9f}" for v in probs) + "]"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, InputError, ParameterError, StructuralError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GuaranteeViolationError as exc:
        print(f"guarantee violation: {exc}", file=sys.stderr)
        trace = exc.trace
        if trace is not None:
            print(f"  case {trace.case_label}, lambda={trace.lam!r}, "
                  f"mu={trace.mu!r}", file=sys.stderr)
            for cand in trace.candidates:
                print(f"  candidate {cand.description}: max regret "
                      f"{cand.report.max_regret!r}", file=sys.stderr)
        return 4
    except (SolverFailureError, InvariantViolationError) as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 5


if __name__ == "__main__":
    sys.exit(main())
