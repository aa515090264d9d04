"""
Exact arithmetic for the measure and L-series layers.

Modules:
    cyclotomic: elements of Q(zeta_m)
    polynomials: sparse polynomials in u over Q(zeta_m)
    ratfunc: rational functions in u and their values at u = 1
    padic: capped-precision p-adic numbers, log, exp and Gamma
"""

from .cyclotomic import ONE, ZERO, CycloValue
from .padic import PadicNumber, embed_cyclo, morita_gamma, power, teichmuller
from .polynomials import PolynomialU
from .ratfunc import RationalFunctionU, abel_limit, pole_order_at_one, taylor_at_one

__all__ = [
    "CycloValue",
    "ONE",
    "ZERO",
    "PadicNumber",
    "PolynomialU",
    "RationalFunctionU",
    "abel_limit",
    "embed_cyclo",
    "morita_gamma",
    "pole_order_at_one",
    "power",
    "taylor_at_one",
    "teichmuller",
]
