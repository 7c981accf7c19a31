"""Complete, absolute and logarithmically complete monotonicity checks.

Each check first tries an exact argument that uses only the positivity of
the integer coefficient rows and the sign of t on the interval.  When no
such argument applies, the derivative signs are sampled on a
deterministic log-spaced grid.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .coeffs import coefficient_row
from .derivatives import (
    FunctionId,
    Status,
    derivative_scale,
    eval_derivative,
    format_float,
)

__all__ = [
    "Kind",
    "Verdict",
    "IntervalSpec",
    "Witness",
    "MonotonicityReport",
    "check_cm",
    "check_am",
    "check_lcm",
    "log_derivative_one_over_t",
    "cm_am_reflection_equivalence",
    "sample_grid",
]

SAMPLE_LO = 1e-3
SAMPLE_HI = 1e3
ZERO_TOL = 1e-14


class Kind(enum.Enum):
    CM = "CM"
    AM = "AM"
    LCM = "LCM"


class Verdict(enum.Enum):
    PROVED_EXACT = "proved_exact"
    VERIFIED_SAMPLED = "verified_sampled"
    VIOLATED = "violated"

    @property
    def ok(self) -> bool:
        return self is not Verdict.VIOLATED


@dataclass(frozen=True)
class IntervalSpec:
    lower: float
    upper: float
    open_ends: tuple[bool, bool] = (True, True)

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError(f"interval needs lower < upper, got {self.lower}:{self.upper}")

    @classmethod
    def parse(cls, text: str) -> "IntervalSpec":
        """Parse ``a:b`` with ``inf`` / ``-inf`` allowed; both ends open."""
        try:
            a, b = text.split(":")
            return cls(float(a), float(b))
        except ValueError as exc:
            raise ValueError(f"bad interval {text!r}: expected a:b, e.g. 0:inf") from exc

    @classmethod
    def positive(cls) -> "IntervalSpec":
        return cls(0.0, math.inf)

    @classmethod
    def negative(cls) -> "IntervalSpec":
        return cls(-math.inf, 0.0)

    @property
    def is_positive(self) -> bool:
        return self.lower >= 0.0

    @property
    def is_negative(self) -> bool:
        return self.upper <= 0.0

    def contains(self, t: float) -> bool:
        lo_ok = t > self.lower if self.open_ends[0] else t >= self.lower
        hi_ok = t < self.upper if self.open_ends[1] else t <= self.upper
        return lo_ok and hi_ok

    def __str__(self) -> str:
        return f"{_bound(self.lower)}:{_bound(self.upper)}"


def _bound(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, "g") if x == int(x) else format_float(x)


@dataclass(frozen=True)
class Witness:
    order: int
    t: float
    value: float


@dataclass(frozen=True)
class MonotonicityReport:
    kind: Kind
    function: FunctionId
    interval: IntervalSpec
    max_order: int
    verdict: Verdict
    witnesses: tuple[Witness, ...] = ()
    samples_per_order: int = 0
    reciprocal: bool = False
    # sampled values treated as zero by the roundoff tolerance
    forgiven: int = field(default=0, compare=False)

    def __post_init__(self):
        if (self.verdict is Verdict.VIOLATED) != bool(self.witnesses):
            raise ValueError("a report is violated exactly when it carries witnesses")

    @property
    def function_label(self) -> str:
        return f"1/{self.function.value}" if self.reciprocal else self.function.value

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "function": self.function_label,
            "interval": str(self.interval),
            "max_order": self.max_order,
            "verdict": self.verdict.value,
            "witnesses": [
                {"order": w.order, "t": _json_float(w.t), "value": _json_float(w.value)}
                for w in self.witnesses
            ],
            "samples_per_order": self.samples_per_order,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def _json_float(x: float):
    return x if math.isfinite(x) else format_float(x)


def sample_grid(interval: IntervalSpec, samples: int) -> np.ndarray:
    """Deterministic log-spaced sample points inside the interval.

    Infinite ends are cut at |t| = 1e3 and an end at 0 at |t| = 1e-3 (or a
    thousandth of the other end when that is closer).  An interval that
    straddles 0 gets half of the points on each side.
    """
    if samples < 1:
        raise ValueError(f"need at least one sample, got {samples}")

    def side(lo: float, hi: float, n: int) -> np.ndarray:
        # lo, hi are |t| bounds on one side of 0
        if lo <= 0.0:
            lo = min(SAMPLE_LO, hi * SAMPLE_LO)
        if math.isinf(hi):
            hi = max(SAMPLE_HI, lo * SAMPLE_HI)
        return np.geomspace(lo, hi, n)

    if interval.is_positive:
        return side(interval.lower, interval.upper, samples)
    if interval.is_negative:
        return -side(-interval.upper, -interval.lower, samples)[::-1]
    n_neg = samples // 2
    neg = -side(0.0, -interval.lower, n_neg)[::-1] if n_neg else np.empty(0)
    pos = side(0.0, interval.upper, samples - n_neg)
    return np.concatenate([neg, pos])


def _check_domain(fn: FunctionId, interval: IntervalSpec):
    if fn is FunctionId.F:
        return
    if not (interval.is_positive or interval.is_negative):
        raise ValueError(f"{fn.value} is undefined at 0, which lies inside {interval}")
    if (interval.lower == 0.0 and not interval.open_ends[0]) or (
        interval.upper == 0.0 and not interval.open_ends[1]
    ):
        raise ValueError(f"{fn.value} is undefined at the closed end 0 of {interval}")


def _coefficients_positive(max_order: int) -> bool:
    return all(a > 0 for i in range(1, max_order + 1) for a in coefficient_row(i).entries)


def _sample_derivative_signs(kind: Kind, fn: FunctionId, interval: IntervalSpec,
                             max_order: int, samples: int) -> MonotonicityReport:
    grid = sample_grid(interval, samples)
    witnesses = []
    forgiven = 0
    for n in range(max_order + 1):
        flip = -1 if kind is Kind.CM and n % 2 else 1
        bad = []
        for t in grid:
            t = float(t)
            r = eval_derivative(fn, n, t)
            if flip * r.sign >= 0:
                continue
            # roundoff near a root of the alternating sum is not a counterexample
            if r.log_magnitude < math.log(ZERO_TOL) + derivative_scale(fn, n, t):
                forgiven += 1
                continue
            bad.append((t, r))
        if bad:
            finite = [b for b in bad if b[1].status is Status.FINITE]
            t, r = (finite or bad)[0]
            witnesses.append(Witness(n, t, r.value))
    verdict = Verdict.VIOLATED if witnesses else Verdict.VERIFIED_SAMPLED
    return MonotonicityReport(kind, fn, interval, max_order, verdict, tuple(witnesses),
                              len(grid), forgiven=forgiven)


def check_cm(fn: FunctionId, interval: IntervalSpec, max_order: int = 20,
             samples: int = 200, exact: bool = True) -> MonotonicityReport:
    """(-1)^n fn^(n) >= 0 on the interval for n = 0..max_order.

    With ``exact`` the sign argument is tried first: for h on t > 0 every
    term of exp(1/t) t^-2n sum a(n,k) t^k is positive.  ``exact=False``
    forces the sampled route.
    """
    _check_domain(fn, interval)
    if exact:
        if fn is FunctionId.H and interval.is_positive and _coefficients_positive(max_order):
            return MonotonicityReport(Kind.CM, fn, interval, max_order, Verdict.PROVED_EXACT,
                                      samples_per_order=0)
        if fn is FunctionId.F and interval.is_negative:
            # f vanishes identically there
            return MonotonicityReport(Kind.CM, fn, interval, max_order, Verdict.PROVED_EXACT)
    return _sample_derivative_signs(Kind.CM, fn, interval, max_order, samples)


def check_am(fn: FunctionId, interval: IntervalSpec, max_order: int = 20,
             samples: int = 200, exact: bool = True) -> MonotonicityReport:
    """fn^(n) >= 0 on the interval for n = 0..max_order.

    Exact route: for g on t < 0 each (-1)^k a(n,k) t^k equals a(n,k)|t|^k > 0
    and exp(-1/t) t^-2n > 0.
    """
    _check_domain(fn, interval)
    if exact:
        if fn is FunctionId.G and interval.is_negative and _coefficients_positive(max_order):
            return MonotonicityReport(Kind.AM, fn, interval, max_order, Verdict.PROVED_EXACT)
        if fn is FunctionId.F and interval.is_negative:
            return MonotonicityReport(Kind.AM, fn, interval, max_order, Verdict.PROVED_EXACT)
    return _sample_derivative_signs(Kind.AM, fn, interval, max_order, samples)


def log_derivative_one_over_t(k: int, t: float, sign: int) -> float:
    """k-th derivative of sign/t, i.e. sign (-1)^k k! t^-(k+1)."""
    if t == 0:
        raise ValueError("1/t has no derivatives at t = 0")
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, got {sign}")
    r = float(math.factorial(k))
    for _ in range(k + 1):
        r /= t
    return r if (sign * (-1) ** k) > 0 else -r


def _log_sign(fn: FunctionId, reciprocal: bool) -> int:
    # ln h = 1/t, ln g = ln f = -1/t (f only where positive)
    s = 1 if fn is FunctionId.H else -1
    return -s if reciprocal else s


def check_lcm(fn: FunctionId, interval: IntervalSpec, max_order: int = 30,
              samples: int = 200, reciprocal: bool = False,
              exact: bool = True) -> MonotonicityReport:
    """(-1)^k [ln q]^(k) >= 0 for k = 1..max_order, q = fn or 1/fn.

    ln q = s/t with s = +-1, so (-1)^k [ln q]^(k) = s k! t^-(k+1).  Its
    sign is fixed by s and the sign of t alone, which is the exact route.
    """
    _check_domain(fn, interval)
    if fn is FunctionId.F and not interval.is_positive:
        raise ValueError(f"f is not strictly positive on {interval}")
    if max_order < 1:
        raise ValueError(f"max_order must be >= 1 for LCM, got {max_order}")
    s = _log_sign(fn, reciprocal)

    if exact:
        t_sign = 1 if interval.is_positive else -1
        # sign of s * k! * t^-(k+1) for every k
        signs = [s * t_sign ** (k + 1) for k in range(1, max_order + 1)]
        if all(x > 0 for x in signs):
            return MonotonicityReport(Kind.LCM, fn, interval, max_order, Verdict.PROVED_EXACT,
                                      reciprocal=reciprocal)

    grid = sample_grid(interval, samples)
    witnesses = []
    for k in range(1, max_order + 1):
        for t in grid:
            t = float(t)
            v = (-1) ** k * log_derivative_one_over_t(k, t, s)
            if v < 0:
                witnesses.append(Witness(k, t, v))
                break
    verdict = Verdict.VIOLATED if witnesses else Verdict.VERIFIED_SAMPLED
    return MonotonicityReport(Kind.LCM, fn, interval, max_order, verdict, tuple(witnesses),
                              len(grid), reciprocal=reciprocal)


def _same_extended(a, b, rtol: float) -> bool:
    if a.status is Status.FINITE and b.status is Status.FINITE:
        return abs(a.value - b.value) <= rtol * max(abs(a.value), abs(b.value))
    if a.log_form is None or b.log_form is None:
        return False
    # a log difference of d is a relative difference of about d
    return a.sign == b.sign and abs(a.log_magnitude - b.log_magnitude) <= rtol


def cm_am_reflection_equivalence(max_order: int = 20, samples: int = 100,
                                 rtol: float = 1e-12) -> bool:
    """(-1)^n h^(n)(t) == g^(n)(-t) for t > 0 on the sampling grid.

    Out-of-range values are compared through their (sign, log|.|) forms.
    """
    for t in sample_grid(IntervalSpec.positive(), samples):
        t = float(t)
        for n in range(max_order + 1):
            h = eval_derivative(FunctionId.H, n, t)
            if n % 2:
                lf = None if h.log_form is None else (-h.log_form[0], h.log_form[1])
                h = type(h)(-h.value, h.status, lf)
            g = eval_derivative(FunctionId.G, n, -t)
            if not _same_extended(h, g, rtol):
                return False
    return True
