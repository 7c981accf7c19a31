"""Exact derivatives, monotonicity checks and smooth partitions of unity
for f(t) = exp(-1/t) [t > 0], g(t) = exp(-1/t) and h(t) = exp(1/t)."""

from .coeffs import (
    CoefficientRow,
    CoefficientTriangle,
    coeff_closed_form,
    coeff_row_recurrence,
    coeff_triangle,
    coefficient_row,
    symbolic_diff_oracle,
)
from .derivatives import (
    EvalResult,
    FunctionId,
    Side,
    Status,
    derivative_form,
    eval_derivative,
    limit_at_zero,
    reflection_residual,
)
from .jets import Jet
from .monotonicity import (
    IntervalSpec,
    MonotonicityReport,
    Verdict,
    check_am,
    check_cm,
    check_lcm,
    cm_am_reflection_equivalence,
    log_derivative_one_over_t,
)
from .pou import Cover, Patch, PartitionWeightSet, bump, jet_of_f, pou_over_cover, smooth_step

__version__ = "0.1.0"
