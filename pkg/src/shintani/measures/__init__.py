"""
Periods of the zeta and Dirichlet measures on O_{V,p}.

Modules:
    periods: closed-form periods and the identities between them
    oracle: independent Abel-limit evaluation
"""

from .oracle import oracle_period
from .periods import MeasureKind, MeasureSpec, PeriodQuery, period

__all__ = ["MeasureKind", "MeasureSpec", "PeriodQuery", "oracle_period", "period"]
