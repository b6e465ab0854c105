"""Exact sweeps over imaginary discriminants and how slowly they converge.

The mean of f / c^omega is reported at X/4, X/2 and X, and split by omega.
At desk scale most discriminants have three or four prime factors, so the
means sit well below their limits.  The per-omega means show the drift
toward them.

Run: python demos/sweep_convergence.py [X]
"""
import sys

from unramified2.predict import correlation_prediction
from unramified2.group2 import preset
from unramified2.sweep import SweepConfig, sweep_moments


def main(X: int) -> None:
    for name in ("D4:C4", "D4oC4:Q8"):
        rep = sweep_moments(SweepConfig([name], -1, X))
        row = rep.moments[0]
        limit = correlation_prediction([preset(name)], -1).value
        cps = ", ".join(f"{float(x):.4f}" for x in row.checkpoints)
        print(f"{name}: {rep.count} fields, mean at X/4, X/2, X = {cps}; limit {limit} = {float(limit):.4f}")
        for entry in rep.by_omega:
            print(f"    omega={entry['omega']}: {entry['count']:>8} fields, mean {entry['mean_float']:.4f}")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 10**6)
