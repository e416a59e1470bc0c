"""Error-versus-noise sweeps for delay-free and delayed estimators.

Fits log(error) against log(delta) and compares the slope with the rate
predicted by the error bound.

    python3 scripts/convergence_sweep.py --n 1 --q 1 --trials 5
"""

import argparse
import json

import numpy as np

from causal_jacobi.signals import test_signal_truth
from causal_jacobi.sweep import SweepPlan, run_sweep


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=1)
    parser.add_argument("--q", type=int, default=1)
    parser.add_argument("--levels", type=int, default=6)
    parser.add_argument("--trials", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--json", action="store_true", help="print full results as JSON")
    args = parser.parse_args(argv)

    truth = test_signal_truth()
    deltas = np.logspace(-4, -1, args.levels)
    results = {}
    for delayed in (False, True):
        plan = SweepPlan(args.n, args.q, delayed=delayed, deltas=deltas, trials=args.trials)
        result = run_sweep(plan, truth, seed=args.seed)
        label = "delayed" if delayed else "delay_free"
        results[label] = result.to_dict()
        print(
            f"{label:10s} slope={result.slope:.4f} theory={result.theoretical_exponent:.4f} "
            f"rel.err={result.relative_slope_error:.3f} {'ok' if result.passed else 'MISS'}"
        )
        for level in result.levels:
            print(f"    delta={level.delta:.2e} h={level.h_used:.4f} err={level.mean_error:.3e} psi={level.psi:.3e}")
    if args.json:
        print(json.dumps(results, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
