"""Run every monotonicity and discontinuity check and print a summary table.

    python scripts/verify_monotonicity.py [--max-order 20] [--samples 200]
"""

import argparse
from dataclasses import dataclass

from expbump.derivatives import FunctionId, Side, limit_at_zero
from expbump.monotonicity import (
    IntervalSpec,
    check_am,
    check_cm,
    check_lcm,
    cm_am_reflection_equivalence,
)

F, G, H = FunctionId.F, FunctionId.G, FunctionId.H
POS, NEG = IntervalSpec.positive(), IntervalSpec.negative()


@dataclass
class RunConfig:
    max_order: int = 20
    lcm_order: int = 30
    samples: int = 200


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--max-order", type=int, default=RunConfig.max_order)
    parser.add_argument("--samples", type=int, default=RunConfig.samples)
    args = parser.parse_args()
    cfg = RunConfig(max_order=args.max_order, samples=args.samples)

    reports = [
        check_cm(H, POS, cfg.max_order, cfg.samples),
        check_cm(H, POS, cfg.max_order, cfg.samples, exact=False),
        check_cm(G, POS, 3, cfg.samples),
        check_am(G, NEG, cfg.max_order, cfg.samples),
        check_am(G, NEG, cfg.max_order, cfg.samples, exact=False),
        check_am(H, NEG, 2, cfg.samples),
        check_lcm(H, POS, cfg.lcm_order),
        check_lcm(G, POS, cfg.lcm_order, reciprocal=True),
        check_lcm(G, NEG, cfg.lcm_order),
        check_lcm(H, NEG, cfg.lcm_order, reciprocal=True),
    ]
    print(f"{'kind':4} {'fn':4} {'interval':8} {'order':>5}  verdict           first witness")
    for r in reports:
        w = r.witnesses[0] if r.witnesses else None
        wtxt = f"n={w.order} t={w.t:.4g} value={w.value:.4g}" if w else ""
        print(f"{r.kind.value:4} {r.function_label:4} {str(r.interval):8} {r.max_order:5d}  "
              f"{r.verdict.value:17} {wtxt}")

    print()
    for fn in (G, H):
        for side in (Side.LEFT, Side.RIGHT):
            print(f"lim {fn.value}(t) as t -> 0 from {side.value}: {limit_at_zero(fn, side).limit.value}")
    ok = cm_am_reflection_equivalence(cfg.max_order, 100)
    print(f"\n(-1)^n h^(n)(t) == g^(n)(-t) on the grid: {ok}")


if __name__ == "__main__":
    main()
