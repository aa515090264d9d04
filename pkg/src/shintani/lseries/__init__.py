"""Sum expressions, the multiple Gamma function, derivatives at s = 0 and identities."""

from shintani.lseries.derivative import brumer_stark_rhs, derivative0, global_derivative0
from shintani.lseries.gamma import GammaQuery, gamma_multiple
from shintani.lseries.sums import (
    LSeriesConfig,
    L_px_sum,
    L_px_value0,
    TruncationReport,
    special_value_complex0,
    sum_expr_chi,
    sum_expr_zeta,
    truncation_series,
)

__all__ = [
    "GammaQuery",
    "LSeriesConfig",
    "L_px_sum",
    "L_px_value0",
    "TruncationReport",
    "brumer_stark_rhs",
    "derivative0",
    "gamma_multiple",
    "global_derivative0",
    "special_value_complex0",
    "sum_expr_chi",
    "sum_expr_zeta",
    "truncation_series",
]
