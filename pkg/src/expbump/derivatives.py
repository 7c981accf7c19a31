"""Overflow-safe evaluation of f, g, h and their derivatives.

    f(t) = exp(-1/t) for t > 0, 0 for t <= 0
    g(t) = exp(-1/t),  t != 0
    h(t) = exp(1/t),   t != 0

Every nonzero evaluation is carried as (sign, log|value|) first and only
then turned into a double, so results that leave the double range come
back as a status instead of a silent inf or 0.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import sys
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .coeffs import CoefficientRow, coefficient_row

__all__ = [
    "FunctionId",
    "Status",
    "Side",
    "Limit",
    "DerivativeForm",
    "EvalResult",
    "LimitClassification",
    "EvaluationRangeError",
    "derivative_form",
    "eval_derivative",
    "limit_at_zero",
    "reflection_residual",
    "derivative_scale",
    "format_float",
    "trace_csv",
]

LOG_MAX = math.log(sys.float_info.max)
LOG_MIN_NORMAL = math.log(sys.float_info.min)
COMPENSATED_ABOVE = 25


class FunctionId(enum.Enum):
    F = "f"
    G = "g"
    H = "h"

    @classmethod
    def parse(cls, name: str) -> "FunctionId":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown function {name!r}; expected f, g or h") from None


class Status(enum.Enum):
    FINITE = "finite"
    UNDERFLOW_ZERO = "underflow_zero"
    OVERFLOW_INF = "overflow_inf"
    UNDEFINED_AT_ZERO = "undefined_at_zero"


class Side(enum.Enum):
    LEFT = "left_of_zero"
    RIGHT = "right_of_zero"

    @classmethod
    def parse(cls, name: str) -> "Side":
        key = name.lower()
        if key in ("left", "left_of_zero", "-"):
            return cls.LEFT
        if key in ("right", "right_of_zero", "+"):
            return cls.RIGHT
        raise ValueError(f"unknown side {name!r}; expected left or right")


class Limit(enum.Enum):
    ZERO = "zero"
    PLUS_INFINITY = "plus_infinity"


@dataclass(frozen=True)
class DerivativeForm:
    """Closed form  sign * exp(exp_sign/t) * t^(-power) * sum (+-1)^k a_k t^k.

    ``zero_for_nonpositive`` marks the f branch that is identically 0 on t <= 0.
    """

    function: FunctionId
    order: int
    sign_factor: int
    exp_sign: int
    power: int
    row: CoefficientRow
    alternating: bool
    zero_for_nonpositive: bool = False


@dataclass(frozen=True)
class EvalResult:
    value: float
    status: Status
    log_form: tuple[int, float] | None = None

    @property
    def sign(self) -> int:
        """Sign of the true value, also when the double over/underflowed."""
        if self.log_form is not None:
            return self.log_form[0]
        if self.value != self.value:
            return 0
        return (self.value > 0) - (self.value < 0)

    @property
    def log_magnitude(self) -> float:
        if self.log_form is not None:
            return self.log_form[1]
        if self.value == 0:
            return -math.inf
        return math.log(abs(self.value))


@dataclass(frozen=True)
class LimitClassification:
    function: FunctionId
    side: Side
    limit: Limit
    evidence: tuple[tuple[float, float], ...] = ()


class EvaluationRangeError(ArithmeticError):
    def __init__(self, status: Status, where: str = ""):
        self.status = status
        super().__init__(f"evaluation not finite ({status.value}){where}")


def derivative_form(fn: FunctionId, i: int) -> DerivativeForm:
    if i < 1:
        raise ValueError(f"derivative order must be >= 1, got {i}")
    row = coefficient_row(i)
    if fn is FunctionId.H:
        return DerivativeForm(fn, i, (-1) ** i, +1, 2 * i, row, alternating=False)
    return DerivativeForm(
        fn, i, +1, -1, 2 * i, row, alternating=True,
        zero_for_nonpositive=fn is FunctionId.F,
    )


@lru_cache(maxsize=None)
def _signed_row(i: int, alternating: bool) -> tuple[float, float, tuple[float, ...]]:
    """(ln a_max, float(a_max) or inf, (+-1)^k a_k / a_max).

    Dividing by the largest entry keeps the float conversion in range for
    any order; int / int is correctly rounded.
    """
    row = coefficient_row(i).entries
    top = max(row)
    try:
        top_float = float(top)
    except OverflowError:
        top_float = math.inf
    c = tuple(-(a / top) if alternating and k % 2 else a / top for k, a in enumerate(row))
    return math.log(top), top_float, c


def _poly(i: int, x: float, alternating: bool):
    """Evaluate S(x) = sum (+-1)^k a(i,k) x^k.

    Returns (sign, log|S|, log of sum a(i,k)|x|^k, S as a double or None).
    For |x| > 1 the reversed polynomial in 1/x is used with x^(i-1)
    factored out, so nothing overflows before the logs are taken.
    """
    log_top, top_float, c = _signed_row(i, alternating)
    n = len(c)
    ax = abs(x)
    if ax > 1.0:
        var = 1.0 / x
        seq = range(n)
        log_shift = (n - 1) * math.log(ax)
        lead = -1 if x < 0 and (n - 1) % 2 else 1
    else:
        var = x
        seq = range(n - 1, -1, -1)
        log_shift = 0.0
        lead = 1

    if n > COMPENSATED_ABOVE:
        terms = [c[k] * var ** (n - 1 - k if ax > 1.0 else k) for k in range(n)]
        s = math.fsum(terms)
        scale = math.fsum(abs(tm) for tm in terms)
    else:
        s = scale = 0.0
        av = abs(var)
        for k in seq:
            s = s * var + c[k]
            scale = scale * av + abs(c[k])

    log_scale = log_top + log_shift + math.log(scale)
    if (x > 0 and not alternating) or (x < 0 and alternating):
        # all terms share one sign: the sum cannot cancel
        sign, log_abs = 1, log_scale
    elif s == 0.0:
        return 0, -math.inf, log_scale, 0.0
    else:
        sign = lead * (1 if s > 0 else -1)
        log_abs = log_top + log_shift + math.log(abs(s))

    try:
        value = sign * top_float * abs(s) * (ax ** (n - 1) if ax > 1.0 else 1.0)
    except OverflowError:
        value = None
    if value is not None and not math.isfinite(value):
        value = None
    return sign, log_abs, log_scale, value


def _materialize(sign: int, log_mag: float, direct: float | None = None) -> EvalResult:
    if sign == 0:
        return EvalResult(0.0, Status.FINITE, (0, -math.inf))
    if log_mag > LOG_MAX:
        return EvalResult(sign * math.inf, Status.OVERFLOW_INF, (sign, log_mag))
    if log_mag < LOG_MIN_NORMAL:
        return EvalResult(0.0, Status.UNDERFLOW_ZERO, (sign, log_mag))
    value = direct
    if value is None or not math.isfinite(value) or abs(value) < sys.float_info.min:
        value = sign * math.exp(log_mag)
    if abs(value) < sys.float_info.min:
        return EvalResult(0.0, Status.UNDERFLOW_ZERO, (sign, log_mag))
    if math.isinf(value):
        return EvalResult(value, Status.OVERFLOW_INF, (sign, log_mag))
    return EvalResult(value, Status.FINITE, (sign, log_mag))


def _evaluate(fn: FunctionId, i: int, t: float):
    """(sign, log|value|, log scale, direct double or None) for fn^(i)(t),
    t != 0 and t outside the f zero branch."""
    exp_arg = 1.0 / t if fn is FunctionId.H else -1.0 / t
    try:
        e = math.exp(exp_arg)
    except OverflowError:
        e = math.inf
    if i == 0:
        return 1, exp_arg, exp_arg, e
    alternating = fn is not FunctionId.H
    s_sign, s_log, scale_log, s_value = _poly(i, t, alternating)
    log_pow = -2 * i * math.log(abs(t))
    lead = -1 if fn is FunctionId.H and i % 2 else 1
    direct = None
    if s_value is not None and 0.0 < e < math.inf:
        try:
            p = abs(t) ** (-2 * i)
        except OverflowError:
            p = math.inf
        if 0.0 < p < math.inf:
            direct = lead * e * p * s_value
    return lead * s_sign, exp_arg + log_pow + s_log, exp_arg + log_pow + scale_log, direct


def eval_derivative(fn: FunctionId, i: int, t: float) -> EvalResult:
    """fn^(i)(t) as an EvalResult. i = 0 gives the function value."""
    if i < 0:
        raise ValueError(f"derivative order must be >= 0, got {i}")
    t = float(t)
    if fn is FunctionId.F and t <= 0.0:
        return EvalResult(0.0, Status.FINITE, (0, -math.inf))
    if t == 0.0:
        return EvalResult(math.nan, Status.UNDEFINED_AT_ZERO, None)
    sign, log_mag, _, direct = _evaluate(fn, i, t)
    return _materialize(sign, log_mag, direct)


def derivative_scale(fn: FunctionId, i: int, t: float) -> float:
    """log of exp(+-1/t) t^(-2i) sum a(i,k) |t|^k: the magnitude the
    alternating sum would have without cancellation. -inf on the f zero branch."""
    t = float(t)
    if fn is FunctionId.F and t <= 0.0:
        return -math.inf
    if t == 0.0:
        raise ValueError("scale undefined at t = 0")
    return _evaluate(fn, i, t)[2]


def limit_at_zero(fn: FunctionId, side: Side, samples: int = 12) -> LimitClassification:
    """One-sided limit of g or h at 0, backed by sampling t = +-10^-1 ... +-10^-samples/4."""
    if fn is FunctionId.F:
        raise ValueError("f is continuous at 0; only g and h have a jump there")
    direction = 1.0 if side is Side.RIGHT else -1.0
    # h(t) = exp(1/t): exponent -> +inf from the right, -inf from the left
    exponent_sign = direction if fn is FunctionId.H else -direction
    limit = Limit.PLUS_INFINITY if exponent_sign > 0 else Limit.ZERO

    evidence = []
    prev = None
    for j in range(samples):
        t = direction * 10.0 ** (-1.0 - 0.25 * j)
        r = eval_derivative(fn, 0, t)
        log_mag = r.log_magnitude
        if prev is not None:
            moving_up = log_mag > prev
            if moving_up != (limit is Limit.PLUS_INFINITY):
                raise ArithmeticError(f"non-monotone approach of {fn.value} at t={t}")
        prev = log_mag
        evidence.append((t, r.value))
    return LimitClassification(fn, side, limit, tuple(evidence))


def reflection_residual(i: int, t: float) -> float:
    """|g^(i)(t) - (-1)^i h^(i)(-t)| / max(1, |g^(i)(t)|)."""
    if t == 0:
        raise ValueError("reflection residual needs t != 0")
    lhs = eval_derivative(FunctionId.G, i, t)
    rhs = eval_derivative(FunctionId.H, i, -t)
    for r, where in ((lhs, f" for g^({i})({t})"), (rhs, f" for h^({i})({-t})")):
        if r.status is not Status.FINITE:
            raise EvaluationRangeError(r.status, where)
    rhs_value = rhs.value if i % 2 == 0 else -rhs.value
    return abs(lhs.value - rhs_value) / max(1.0, abs(lhs.value))


def format_float(x: float) -> str:
    """Shortest round-trip decimal; inf/nan spelled out."""
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return repr(float(x))


def trace_csv(rows: Iterable[tuple[FunctionId, int, float, EvalResult]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["fn", "i", "t", "value", "status", "sign", "log_magnitude"])
    for fn, i, t, r in rows:
        sign, log_mag = r.log_form if r.log_form is not None else ("", math.nan)
        writer.writerow([
            fn.value, i, format_float(t), format_float(r.value), r.status.value,
            sign, "" if r.log_form is None else format_float(log_mag),
        ])
    return buf.getvalue()
