"""Write a CSV trace of f, g, h derivatives over a log-spaced grid.

    python scripts/derivative_traces.py --max-order 6 --out traces.csv
"""

import argparse
from dataclasses import dataclass

import numpy as np

from expbump.derivatives import FunctionId, eval_derivative, trace_csv


@dataclass
class TraceConfig:
    max_order: int = 6
    t_min: float = 1e-3
    t_max: float = 1e2
    points_per_side: int = 60


def traces(cfg: TraceConfig):
    pos = np.geomspace(cfg.t_min, cfg.t_max, cfg.points_per_side)
    grid = np.concatenate([-pos[::-1], pos])
    for fn in FunctionId:
        for i in range(cfg.max_order + 1):
            for t in grid:
                t = float(t)
                yield fn, i, t, eval_derivative(fn, i, t)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-order", type=int, default=TraceConfig.max_order)
    parser.add_argument("--points", type=int, default=TraceConfig.points_per_side)
    parser.add_argument("--out", default="-")
    args = parser.parse_args()
    cfg = TraceConfig(max_order=args.max_order, points_per_side=args.points)
    text = trace_csv(traces(cfg))
    if args.out == "-":
        print(text, end="")
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


if __name__ == "__main__":
    main()
