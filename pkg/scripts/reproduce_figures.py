#!/usr/bin/env python3
"""Run the bundled experiments end to end and drop CSVs per figure.

At the full 200 trials, figures 1 and 3 take a few minutes each, figure 4
around five, and figure 2 (exact vertex connectivity at four k values per
sampled graph) is the long one.  Use --trials to dial any of that down.

    python scripts/reproduce_figures.py --out results --trials 200 --plot
"""

import argparse
import sys
import time

from keygraph.cli import main as keygraph_main


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--figures", default="1,2,3,4", help="comma-separated subset of 1-4")
    parser.add_argument("--trials", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--workers", type=int, default=None)
    parser.add_argument("--out", default="results")
    parser.add_argument("--plot", action="store_true", help="also emit matplotlib scripts")
    args = parser.parse_args(argv)

    for fig in args.figures.split(","):
        fig = fig.strip()
        cli_args = [
            "figure", fig,
            "--trials", str(args.trials),
            "--seed", str(args.seed),
            "--out", args.out,
        ]
        if args.workers is not None:
            cli_args += ["--workers", str(args.workers)]
        if args.plot:
            cli_args.append("--plot-script")
        start = time.perf_counter()
        code = keygraph_main(cli_args)
        elapsed = time.perf_counter() - start
        print(f"figure {fig}: exit {code} in {elapsed:.1f}s")
        if code != 0:
            return code
    return 0


if __name__ == "__main__":
    sys.exit(run())
