"""Exact coefficient triangle for the derivatives of exp(+-1/t).

The i-th derivative of h(t) = exp(1/t) has the shape

    h^(i)(t) = (-1)^i exp(1/t) t^(-2i) sum_{k=0}^{i-1} a(i, k) t^k

with a(i, k) = C(i, k) C(i-1, k) k!.  Everything here works on Python
integers, so rows stay exact for any order.
"""

from __future__ import annotations

import csv
import io
import json
import threading
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

__all__ = [
    "DEFAULT_MAX_ORDER",
    "CoefficientMismatchError",
    "CoefficientRow",
    "CoefficientTriangle",
    "coeff_closed_form",
    "coeff_reindexed",
    "coeff_row_recurrence",
    "coeff_triangle",
    "coefficient_row",
    "symbolic_diff_oracle",
    "triangle_to_csv",
    "triangle_to_json",
]

DEFAULT_MAX_ORDER = 64


class CoefficientMismatchError(RuntimeError):
    """Recurrence and closed form disagree at some (i, k)."""

    def __init__(self, i: int, k: int, recurrence: int, closed: int):
        self.i, self.k = i, k
        self.recurrence, self.closed = recurrence, closed
        super().__init__(
            f"coefficient mismatch at (i={i}, k={k}): "
            f"recurrence gives {recurrence}, closed form gives {closed}"
        )


@dataclass(frozen=True)
class CoefficientRow:
    order: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.order < 1:
            raise ValueError(f"row order must be >= 1, got {self.order}")
        if len(self.entries) != self.order:
            raise ValueError(
                f"row of order {self.order} needs {self.order} entries, "
                f"got {len(self.entries)}"
            )

    def __getitem__(self, k: int) -> int:
        return self.entries[k]

    def __len__(self) -> int:
        return self.order

    def __iter__(self):
        return iter(self.entries)


@dataclass(frozen=True)
class CoefficientTriangle:
    rows: tuple[CoefficientRow, ...]

    @property
    def max_order(self) -> int:
        return len(self.rows)

    def row(self, i: int) -> CoefficientRow:
        if not 1 <= i <= len(self.rows):
            raise IndexError(f"order i={i} outside 1..{len(self.rows)}")
        return self.rows[i - 1]

    def __getitem__(self, ik: tuple[int, int]) -> int:
        i, k = ik
        return self.row(i)[k]


def coeff_closed_form(i: int, k: int) -> int:
    """a(i, k) = C(i, k) * C(i-1, k) * k!, exact."""
    if i < 1:
        raise ValueError(f"order i must be >= 1, got i={i}")
    if not 0 <= k <= i - 1:
        raise ValueError(f"index k={k} outside 0..{i - 1} for i={i}")
    return comb(i, k) * comb(i - 1, k) * factorial(k)


def coeff_reindexed(i: int, m: int) -> int:
    """a(i, i-m) = C(i-1, m-1) * i! / m!, for 1 <= m <= i.

    Same numbers as :func:`coeff_closed_form`, indexed from the top of the
    row; used as a second closed-form check.
    """
    if not 1 <= m <= i:
        raise ValueError(f"index m={m} outside 1..{i} for i={i}")
    q, r = divmod(comb(i - 1, m - 1) * factorial(i), factorial(m))
    assert r == 0
    return q


def coeff_row_recurrence(row: CoefficientRow) -> CoefficientRow:
    """Advance one order: b_0 = a_0, b_k = a_k + (2i-k+1) a_{k-1}, b_i = (i+1) a_{i-1}."""
    i = row.order
    a = row.entries
    b = [a[0]]
    b.extend(a[k] + (2 * i - k + 1) * a[k - 1] for k in range(1, i))
    b.append((i + 1) * a[i - 1])
    return CoefficientRow(i + 1, tuple(b))


def coeff_triangle(max_order: int) -> CoefficientTriangle:
    """Rows 1..max_order built by the recurrence, each entry checked
    against the closed form. Raises CoefficientMismatchError on the first
    disagreement."""
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1, got {max_order}")
    row = CoefficientRow(1, (1,))
    rows = []
    for i in range(1, max_order + 1):
        if i > 1:
            row = coeff_row_recurrence(row)
        for k, value in enumerate(row.entries):
            closed = coeff_closed_form(i, k)
            if value != closed:
                raise CoefficientMismatchError(i, k, value, closed)
        rows.append(row)
    return CoefficientTriangle(tuple(rows))


_cache_lock = threading.Lock()
_row_cache: list[CoefficientRow] = []


def coefficient_row(i: int) -> CoefficientRow:
    """Memoized row of order i.

    The first DEFAULT_MAX_ORDER rows come from a verified triangle; later
    rows are extended by the recurrence and checked against the closed form.
    """
    if i < 1:
        raise ValueError(f"order i must be >= 1, got i={i}")
    if i <= len(_row_cache):
        return _row_cache[i - 1]
    with _cache_lock:
        if not _row_cache:
            _row_cache.extend(coeff_triangle(DEFAULT_MAX_ORDER).rows)
        while len(_row_cache) < i:
            nxt = coeff_row_recurrence(_row_cache[-1])
            for k, value in enumerate(nxt.entries):
                closed = coeff_closed_form(nxt.order, k)
                if value != closed:
                    raise CoefficientMismatchError(nxt.order, k, value, closed)
            _row_cache.append(nxt)
    return _row_cache[i - 1]


def symbolic_diff_oracle(i: int) -> CoefficientRow:
    """Differentiate exp(1/t) i times term by term and read off the row.

    An expression is held as {power p: coefficient c} meaning
    exp(1/t) * sum c * t^p.  Only two rules are used:
    d/dt exp(1/t) = -t^-2 exp(1/t) and d/dt t^p = p t^(p-1).
    """
    if i < 1:
        raise ValueError(f"order i must be >= 1, got i={i}")
    expr: dict[int, Fraction] = {0: Fraction(1)}
    for _ in range(i):
        out: dict[int, Fraction] = {}
        for p, c in expr.items():
            # product rule: (exp(1/t))' t^p + exp(1/t) (t^p)'
            out[p - 2] = out.get(p - 2, Fraction(0)) - c
            if p != 0:
                out[p - 1] = out.get(p - 1, Fraction(0)) + p * c
        expr = {p: c for p, c in out.items() if c != 0}

    # match against (-1)^i t^(-2i) sum a_k t^k, i.e. power k - 2i
    sign = -1 if i % 2 else 1
    entries = []
    for k in range(i):
        c = sign * expr.pop(k - 2 * i, Fraction(0))
        if c.denominator != 1:
            raise ArithmeticError(f"non-integer coefficient {c} at k={k}")
        entries.append(int(c))
    if expr:
        raise ArithmeticError(f"unexpected powers left over: {sorted(expr)}")
    return CoefficientRow(i, tuple(entries))


def triangle_to_csv(triangle: CoefficientTriangle) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "k", "a_ik"])
    for row in triangle.rows:
        for k, value in enumerate(row.entries):
            writer.writerow([row.order, k, str(value)])
    return buf.getvalue()


def triangle_to_json(triangle: CoefficientTriangle) -> str:
    # decimal strings: a(i, i-1) = i! leaves the 53-bit range at i = 19
    rows = [[str(v) for v in row.entries] for row in triangle.rows]
    return json.dumps({"max_order": triangle.max_order, "rows": rows}, indent=2) + "\n"
