"""Truncated Taylor polynomials (jets) at a point.

A jet of order m at x0 stores c_0..c_m with c_j = q^(j)(x0) / j!.
Arithmetic truncates at m, which is exact for the first m+1 derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

__all__ = ["Jet", "JetDivisionError"]


class JetDivisionError(ZeroDivisionError):
    pass


@dataclass(frozen=True)
class Jet:
    center: float
    coefficients: tuple[float, ...]

    def __post_init__(self):
        if not self.coefficients:
            raise ValueError("a jet needs at least one coefficient")

    @classmethod
    def from_derivatives(cls, center: float, derivatives: Sequence[float]) -> "Jet":
        return cls(center, tuple(d / math.factorial(j) for j, d in enumerate(derivatives)))

    @classmethod
    def constant(cls, center: float, value: float, order: int) -> "Jet":
        return cls(center, (float(value),) + (0.0,) * order)

    @classmethod
    def zero(cls, center: float, order: int) -> "Jet":
        return cls.constant(center, 0.0, order)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    @property
    def value(self) -> float:
        return self.coefficients[0]

    def derivatives(self) -> tuple[float, ...]:
        return tuple(c * math.factorial(j) for j, c in enumerate(self.coefficients))

    def derivative(self, j: int) -> float:
        return self.coefficients[j] * math.factorial(j)

    def is_zero(self) -> bool:
        return not any(self.coefficients)

    def _check(self, other: "Jet"):
        if other.order != self.order:
            raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
        if other.center != self.center:
            raise ValueError(f"jet centers differ: {self.center} vs {other.center}")

    def __add__(self, other):
        if isinstance(other, Jet):
            self._check(other)
            return Jet(self.center, tuple(a + b for a, b in zip(self.coefficients, other.coefficients)))
        c = list(self.coefficients)
        c[0] += other
        return Jet(self.center, tuple(c))

    __radd__ = __add__

    def __neg__(self):
        return Jet(self.center, tuple(-a for a in self.coefficients))

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.center, tuple(a * other for a in self.coefficients))
        self._check(other)
        a, b = self.coefficients, other.coefficients
        return Jet(self.center, tuple(
            math.fsum(a[j] * b[n - j] for j in range(n + 1)) for n in range(len(a))
        ))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return Jet(self.center, tuple(a / other for a in self.coefficients))
        self._check(other)
        a, b = self.coefficients, other.coefficients
        if b[0] == 0.0:
            raise JetDivisionError("jet division by a jet with zero constant term")
        # q * b = a, solved order by order
        q: list[float] = []
        for n in range(len(a)):
            acc = a[n] - math.fsum(q[j] * b[n - j] for j in range(n))
            q.append(acc / b[0])
        return Jet(self.center, tuple(q))

    def affine_pullback(self, center: float, scale: float) -> "Jet":
        """Jet of x -> q(x0' + scale * (x - center)) at ``center``, given this jet of q at x0'."""
        return Jet(center, tuple(c * scale**j for j, c in enumerate(self.coefficients)))

    def __call__(self, x: float) -> float:
        """Evaluate the truncated Taylor polynomial at x."""
        d = x - self.center
        acc = 0.0
        for c in reversed(self.coefficients):
            acc = acc * d + c
        return acc
