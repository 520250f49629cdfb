"""Figure CLI: one subcommand per figure kind, one image per invocation."""

import argparse
import sys

from .errors import InputError
from .figures import FigureSpec, render


def build_parser():
    parser = argparse.ArgumentParser(
        prog="anyonbn-plots",
        description="Render figures from the kinetic solver's CSV and "
                    "snapshot outputs")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("timeseries",
                       help="diagnostic columns against time")
    p.add_argument("csv", help="diagnostics CSV path")
    p.add_argument("-o", "--output", required=True, help="image path")
    p.add_argument("--columns", nargs="+",
                   default=["mass", "energy", "sup_norm"],
                   help="columns to plot (default: mass energy sup_norm)")

    p = sub.add_parser("alpha-convergence",
                       help="sweep distances vs alpha on log-log axes")
    p.add_argument("summary", help="sweep summary CSV path")
    p.add_argument("-o", "--output", required=True, help="image path")

    p = sub.add_parser("refinement",
                       help="residual vs resolution on log-log axes")
    p.add_argument("table", help="refinement CSV path")
    p.add_argument("-o", "--output", required=True, help="image path")

    p = sub.add_parser("heatmap",
                       help="speed marginal per spatial cell")
    p.add_argument("snapshot", help="snapshot text file path")
    p.add_argument("-o", "--output", required=True, help="image path")
    p.add_argument("--bins", type=int, help="number of speed bins")

    return parser


def spec_from_args(args):
    if args.command == "timeseries":
        return FigureSpec(kind="timeseries", inputs=(args.csv,),
                          output=args.output, columns=tuple(args.columns))
    if args.command == "alpha-convergence":
        return FigureSpec(kind="alpha_convergence", inputs=(args.summary,),
                          output=args.output, log_y=True)
    if args.command == "refinement":
        return FigureSpec(kind="refinement", inputs=(args.table,),
                          output=args.output, log_y=True)
    return FigureSpec(kind="heatmap", inputs=(args.snapshot,),
                      output=args.output,
                      options={"bins": args.bins} if args.bins else {})


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        path = render(spec_from_args(args))
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 65
    print(f"wrote {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
