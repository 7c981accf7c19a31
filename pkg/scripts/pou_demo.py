"""Partition-of-unity weights and their derivatives for a JSON cover.

    python scripts/pou_demo.py scripts/covers/three_patches.json --points 61 --order 3
"""

import argparse
from dataclasses import dataclass

import numpy as np

from expbump.pou import Cover, pou_over_cover, uniform_points


@dataclass
class DemoConfig:
    points: int = 61
    order: int = 3


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("cover")
    parser.add_argument("--points", type=int, default=DemoConfig.points)
    parser.add_argument("--order", type=int, default=DemoConfig.order)
    parser.add_argument("--csv", help="also write the full weight table here")
    args = parser.parse_args()
    cfg = DemoConfig(points=args.points, order=args.order)

    with open(args.cover) as fh:
        cover = Cover.from_json(fh.read())
    ev = pou_over_cover(cover, uniform_points(cover, cfg.points), cfg.order)
    vals = ev.values()
    print(f"{len(cover.patches)} patches on [{cover.domain[0]}, {cover.domain[1]}], "
          f"{cfg.points} points, jet order {cfg.order}")
    print(f"max |sum w - 1|        = {np.abs(vals.sum(axis=1) - 1).max():.3e}")
    for m in range(1, cfg.order + 1):
        d = ev.derivatives(m)
        print(f"max |sum w^({m})|       = {np.abs(d.sum(axis=1)).max():.3e}"
              f"   (max |w^({m})| = {np.abs(d).max():.3e})")
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(ev.to_csv())


if __name__ == "__main__":
    main()
