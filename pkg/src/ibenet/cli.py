"""Command line: ``run`` one episode, or ``sweep`` alpha for reaction times."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .errors import IBeNetError
from .harness import CSV, TRACE_LINES, emit, first_consummatory, load_scenario, run_scenario, sweep_alpha


def _alphas(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ibenet", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one episode")
    run.add_argument("scenario", help="scenario file, or the name of a bundled scenario")
    run.add_argument("--alpha", type=float, default=None)
    run.add_argument("--seed", type=int, default=None)
    run.add_argument("--ticks", type=int, default=None)
    run.add_argument("--trace", default=None, help="write the per-tick trace here")

    sw = sub.add_parser("sweep", help="reaction time over a list of alpha values")
    sw.add_argument("scenario")
    sw.add_argument("--alphas", type=_alphas, required=True, help="e.g. 0,0.25,0.5")
    sw.add_argument("--repeats", type=int, required=True)
    sw.add_argument("--out", required=True, help="CSV with one row per run")
    sw.add_argument("--summary", default=None, help="CSV with the per-alpha medians")
    return p


def _run(args: argparse.Namespace) -> None:
    s = load_scenario(args.scenario)
    trace = run_scenario(s, alpha_override=args.alpha, seed=args.seed, max_ticks=args.ticks)
    if args.trace:
        emit(trace, TRACE_LINES, args.trace)
    labels = trace.labels()
    first = first_consummatory(labels)
    print(f"{s.name}: alpha={trace.alpha} seed={trace.seed} ticks={len(labels)}")
    if first is None:
        print("no consummatory action")
    else:
        print(f"first consummatory action: {first[1]} at tick {first[0]}")


def _sweep(args: argparse.Namespace) -> None:
    if args.repeats < 1:
        raise IBeNetError("--repeats must be >= 1")
    s = load_scenario(args.scenario)
    result = sweep_alpha(s, args.alphas, args.repeats)
    emit(result, CSV, args.out)
    if args.summary:
        emit(result.summary_table(), CSV, args.summary)
    for row in result.summary:
        print(f"alpha={row['alpha']} median_rtime={row['median_rtime']} resolved={row['resolved']}/{row['runs']}")
    print(f"spearman={result.spearman:.4f}")


def main(argv: Sequence[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "run":
            _run(args)
        else:
            _sweep(args)
    except (IBeNetError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0
