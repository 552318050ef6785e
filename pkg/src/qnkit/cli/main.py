"""Command line entry point: ``qnkit solve|bounds|sweep <model-file> [options]``."""

import argparse
import sys

from ..errors import QnError
from .render import FORMATS, render
from .runner import RunOptions, run
from .schema import TIME_UNITS, load_model


def build_parser():
    parser = argparse.ArgumentParser(
        prog="qnkit",
        description="Analyze Markov chains, single-station queues and queueing networks.")
    parser.add_argument("command", choices=("solve", "bounds", "sweep"))
    parser.add_argument("model", help="JSON model file")
    parser.add_argument("--method", choices=("mva", "conv", "bs", "aba", "bsb"))
    parser.add_argument("--format", choices=FORMATS, default="table")
    parser.add_argument("--output", help="write the result here instead of stdout")
    parser.add_argument("--horizon", type=float,
                        help="transient analysis at this time (steps for DTMCs)")
    parser.add_argument("--horizon-units", choices=sorted(TIME_UNITS),
                        help="unit of --horizon and of reported times (CTMC models)")
    parser.add_argument("--transient-until-absorbing", action="store_true",
                        help="mean time to absorption and sojourn times before absorption")
    parser.add_argument("--tol", type=float, default=1e-7)
    parser.add_argument("--max-iter", type=int, default=100000)
    parser.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    options = RunOptions(method=args.method, horizon=args.horizon,
                         horizon_units=args.horizon_units,
                         until_absorbing=args.transient_until_absorbing,
                         tol=args.tol, max_iter=args.max_iter, jobs=max(1, args.jobs))
    try:
        doc = load_model(args.model)
        result = run(args.command, doc, options)
        text = render(result, args.format)
    except QnError as exc:
        print(f"qnkit: error: {exc}", file=sys.stderr)
        return exc.exit_code
    if args.output:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"qnkit: error: {args.output}: {exc.strerror}", file=sys.stderr)
            return 1
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
