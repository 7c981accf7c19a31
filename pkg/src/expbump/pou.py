"""Smooth steps, bumps and partitions of unity on 1-D interval covers.

The step is the usual quotient sigma(t) = f(t) / (f(t) + f(1 - t)) built on
f(t) = exp(-1/t) [t > 0]; it is 0 for t <= 0 and 1 for t >= 1.  Derivatives
of every composite are carried as jets seeded by the closed-form
derivatives of f.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .derivatives import FunctionId, eval_derivative, format_float
from .jets import Jet

__all__ = [
    "DEFAULT_JET_ORDER",
    "MAX_JET_ORDER",
    "CoverageError",
    "Patch",
    "Cover",
    "PartitionWeightSet",
    "PouEvaluation",
    "jet_of_f",
    "smooth_step",
    "bump",
    "pou_over_cover",
    "uniform_points",
]

DEFAULT_JET_ORDER = 6
MAX_JET_ORDER = 16
EDGE_CUTOFF = 1e-8
LOG_CUTOFF = -700.0


class CoverageError(ValueError):
    """A point of the domain is not inside any patch."""

    def __init__(self, x: float, detail: str = "not inside any open patch"):
        self.x = x
        super().__init__(f"uncovered point x={format_float(x)}: {detail}")


def _check_order(order: int):
    if not 0 <= order <= MAX_JET_ORDER:
        raise ValueError(f"jet order must be in 0..{MAX_JET_ORDER}, got {order}")


def jet_of_f(t: float, order: int) -> Jet:
    """Jet of f at t: coefficients f^(i)(t) / i!.

    Zero when t <= 0, and also when t is so close to the support edge
    (t <= 1e-8 or -1/t < -700) that every coefficient is negligible.
    """
    t = float(t)
    if t <= EDGE_CUTOFF or -1.0 / t < LOG_CUTOFF:
        return Jet.zero(t, order)
    return Jet.from_derivatives(t, [eval_derivative(FunctionId.F, i, t).value for i in range(order + 1)])


def smooth_step(t: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Jet of sigma(t) = f(t) / (f(t) + f(1 - t))."""
    _check_order(order)
    t = float(t)
    if t <= 0.0:
        return Jet.zero(t, order)
    if t >= 1.0:
        return Jet.constant(t, 1.0, order)
    num = jet_of_f(t, order)
    # jet of s -> f(1 - s) at t from the jet of f at 1 - t
    mirrored = jet_of_f(1.0 - t, order).affine_pullback(t, -1.0)
    den = num + mirrored
    # max(t, 1 - t) >= 1/2, so one of the two terms is at least exp(-2)
    assert den.value > 0.0, f"step denominator vanished at t={t}"
    return num / den


@dataclass(frozen=True)
class Patch:
    lower: float
    upper: float
    ramp: float

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"patch needs lower < upper, got ({self.lower}, {self.upper})")
        if not 0.0 < self.ramp <= (self.upper - self.lower) / 2:
            raise ValueError(
                f"patch ramp must be in (0, {(self.upper - self.lower) / 2}], got {self.ramp}"
            )

    def contains_open(self, x: float) -> bool:
        return self.lower < x < self.upper


def bump(patch: Patch, t: float, order: int = DEFAULT_JET_ORDER) -> Jet:
    """Jet of the bump that rises on [lower, lower+ramp], is 1 on the
    plateau and falls on [upper-ramp, upper]; zero outside the patch."""
    _check_order(order)
    t = float(t)
    if t <= patch.lower or t >= patch.upper:
        return Jet.zero(t, order)
    inv = 1.0 / patch.ramp
    rise = smooth_step((t - patch.lower) * inv, order).affine_pullback(t, inv)
    fall = smooth_step((patch.upper - t) * inv, order).affine_pullback(t, -inv)
    # on the plateau one factor is the constant 1
    if _is_one(fall):
        return rise
    if _is_one(rise):
        return fall
    return rise * fall


def _is_one(jet: Jet) -> bool:
    return jet.value == 1.0 and not any(jet.coefficients[1:])


@dataclass(frozen=True)
class Cover:
    domain: tuple[float, float]
    patches: tuple[Patch, ...]

    def __post_init__(self):
        a, b = self.domain
        if not a <= b:
            raise ValueError(f"cover domain needs A <= B, got [{a}, {b}]")
        if not self.patches:
            raise ValueError("a cover needs at least one patch")

    @classmethod
    def from_dict(cls, spec: dict) -> "Cover":
        a, b = spec["domain"]
        patches = tuple(
            Patch(float(p["lower"]), float(p["upper"]), float(p["ramp"])) for p in spec["patches"]
        )
        return cls((float(a), float(b)), patches)

    @classmethod
    def from_json(cls, text: str) -> "Cover":
        return cls.from_dict(json.loads(text))

    def to_dict(self) -> dict:
        return {
            "domain": list(self.domain),
            "patches": [{"lower": p.lower, "upper": p.upper, "ramp": p.ramp} for p in self.patches],
        }

    def find_gap(self) -> float | None:
        """First x in [A, B] outside every open patch, or None."""
        a, b = self.domain
        cur = a
        while True:
            reach = [p.upper for p in self.patches if p.contains_open(cur)]
            if not reach:
                return cur
            cur = max(reach)
            if cur > b:
                return None

    def validate(self) -> None:
        gap = self.find_gap()
        if gap is not None:
            raise CoverageError(gap)


@dataclass(frozen=True)
class PartitionWeightSet:
    """Weights bump_j / sum_k bump_k over a validated cover."""

    cover: Cover

    def __post_init__(self):
        self.cover.validate()

    def bumps(self, x: float, order: int = DEFAULT_JET_ORDER) -> list[Jet]:
        return [bump(p, x, order) for p in self.cover.patches]

    def weights(self, x: float, order: int = DEFAULT_JET_ORDER) -> list[Jet]:
        bumps = self.bumps(x, order)
        total = bumps[0]
        for b in bumps[1:]:
            total = total + b
        if total.value <= 0.0:
            raise CoverageError(x, "all bumps vanish numerically")
        return [Jet.zero(float(x), order) if b.is_zero() else b / total for b in bumps]

    def weight(self, j: int, x: float) -> float:
        return self.weights(x, 0)[j].value

    def __call__(self, x: float) -> np.ndarray:
        return np.array([w.value for w in self.weights(x, 0)])


@dataclass(frozen=True)
class PouEvaluation:
    weight_set: PartitionWeightSet
    order: int
    points: tuple[float, ...]
    jets: tuple[tuple[Jet, ...], ...] = field(repr=False)

    def values(self) -> np.ndarray:
        """(n_points, n_patches) weight values."""
        return self.derivatives(0)

    def derivatives(self, m: int) -> np.ndarray:
        """(n_points, n_patches) array of m-th derivatives of the weights."""
        n_patch = len(self.weight_set.cover.patches)
        out = np.zeros((len(self.points), n_patch))
        for r, row in enumerate(self.jets):
            for j, jet in enumerate(row):
                out[r, j] = jet.derivative(m)
        return out

    def to_rows(self) -> list[list]:
        rows = []
        for x, row in zip(self.points, self.jets):
            for j, jet in enumerate(row):
                rows.append([x, j, *jet.derivatives()])
        return rows

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["x", "patch_index", "weight"] + [f"d{m}" for m in range(1, self.order + 1)])
        for x, j, *ds in self.to_rows():
            writer.writerow([format_float(x), j] + [format_float(d) for d in ds])
        return buf.getvalue()


def pou_over_cover(cover: Cover, points: Iterable[float], order: int = DEFAULT_JET_ORDER) -> PouEvaluation:
    _check_order(order)
    ws = PartitionWeightSet(cover)
    pts = tuple(float(x) for x in points)
    jets = tuple(tuple(ws.weights(x, order)) for x in pts)
    return PouEvaluation(ws, order, pts, jets)


def uniform_points(cover: Cover, n: int) -> list[float]:
    a, b = cover.domain
    if n == 1:
        return [a]
    return [float(x) for x in np.linspace(a, b, n)]
