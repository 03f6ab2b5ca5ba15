#!/usr/bin/env python3
"""Print how a parameter family tracks the k-connectivity scaling as n grows.

Evaluates the bundled example family (pool n log n, rings in powers of
log n) at a geometric ladder of network sizes and reports gamma_n, the
admissibility window, and the one-law side-condition ratios at each
size.  gamma_n drifting upward is the signature of the supercritical
regime.

    python scripts/scaling_report.py --k 2 --epsilon 0.2 --alpha 0.6
"""

import argparse
import sys

from keygraph import ExampleScalingParams, evaluate_scaling, example_scaling


def run(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--k", type=int, default=2)
    parser.add_argument("--epsilon", type=float, default=0.2)
    parser.add_argument("--alpha", type=float, default=1.0, help="constant channel probability")
    parser.add_argument("--r", type=int, default=2)
    parser.add_argument("--mu-r", type=float, default=0.5, dest="mu_r")
    parser.add_argument("--sizes", default="100,1000,10000,100000,1000000")
    args = parser.parse_args(argv)

    family = ExampleScalingParams(
        epsilon=args.epsilon, alpha_fn=lambda n: args.alpha, mu_r=args.mu_r
    )
    print(f"{'n':>9} {'P':>12} {'K':>16} {'gamma_n':>10} {'admissible':>10} "
          f"{'P/n':>8} {'Kr/P':>9} {'Kr/(K1 log n)':>14}")
    for size in args.sizes.split(","):
        n = int(size)
        params = example_scaling(n, family, r=args.r)
        ev = evaluate_scaling(params, args.k)
        flags = ev.one_law_flags
        K_str = "/".join(str(k) for k in params.K)
        print(
            f"{n:>9} {params.P:>12} {K_str:>16} {ev.gamma_n:>10.2f} "
            f"{str(ev.admissible):>10} {flags.pool_to_n:>8.1f} "
            f"{flags.max_ring_to_pool:>9.5f} {flags.ring_spread_to_log:>14.3f}"
        )
    return 0


if __name__ == "__main__":
    sys.exit(run())
