#!/usr/bin/env python3
"""
Shintani - Abel-Limit Oracle

Independent evaluation of cylinder measures. The generating function of the
measure is restricted to the residue class of the cylinder, which collapses
it to a one-variable rational function in u; its value at u = 1 is the
period. No closed-form period formula is used here.
"""

import itertools
from fractions import Fraction
from math import lcm, prod
from typing import Optional

from shintani.arith.cyclotomic import ZERO, CycloValue
from shintani.arith.polynomials import PolynomialU
from shintani.arith.ratfunc import RationalFunctionU, abel_limit
from shintani.config import Config
from shintani.errors import InstanceTooLarge, ParameterViolation
from shintani.field.model import flat
from shintani.measures.periods import MeasureKind, MeasureSpec, Period, PeriodQuery


def _guard(spec: MeasureSpec, q: PeriodQuery) -> None:
    pn = spec.p ** q.n
    if spec.N > Config.ORACLE_MAX_N or pn > Config.ORACLE_MAX_PN or spec.k > Config.ORACLE_MAX_K:
        raise InstanceTooLarge(
            f"oracle limited to N <= {Config.ORACLE_MAX_N}, p^n <= {Config.ORACLE_MAX_PN}, "
            f"k <= {Config.ORACLE_MAX_K}; got N = {spec.N}, p^n = {pn}, k = {spec.k}"
        )


# =============================================================================
# ZETA MEASURE
# =============================================================================

def _zeta_function(spec: MeasureSpec, q: PeriodQuery) -> RationalFunctionU:
    """N * (class sum over rho = 0) / (1-u^N)^k - 1/(1-u)^k for the cylinder."""
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    base = spec.residue_at(q.l)
    step = [pn * r % N for r in spec.residues]
    numerator = PolynomialU.from_terms(
        (sum(r), N)
        for r in itertools.product(range(N), repeat=k)
        if (base + sum(ri * si for ri, si in zip(r, step))) % N == 0
    )
    inside = RationalFunctionU(numerator, PolynomialU.one_minus_power(N, k))
    return inside - RationalFunctionU(PolynomialU.constant(1), PolynomialU.one_minus_power(1, k))


# =============================================================================
# DIRICHLET MEASURE
# =============================================================================

def _dirichlet_function(spec: MeasureSpec, q: PeriodQuery) -> RationalFunctionU:
    """sum over d of chi(x + d.v) u^(D * exponent) / (1 - u^(D N p^n))^k.

    D clears the denominators of the coordinates of x.
    """
    assert spec.chi is not None
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    x = spec.x_coords
    D = lcm(1, *(c.denominator for c in x))
    terms = []
    for d in itertools.product(range(N), repeat=k):
        value = spec.chi.at_residue(spec.residue_at(d))
        if not value:
            continue
        exponent = Fraction(0)
        for xi, di, li in zip(x, d, q.l):
            h = flat(Fraction(li - di, N), pn)
            exponent += xi + di + N * h
        terms.append((int(exponent * D), value))
    return RationalFunctionU(PolynomialU.from_terms(terms), PolynomialU.one_minus_power(D * N * pn, k))


def oracle_period(spec: MeasureSpec, q: PeriodQuery) -> Period:
    """The period of the cylinder by Abel summation of the generating function.

    Raises:
        InstanceTooLarge: N, p^n or k exceeds the oracle guard rails
    """
    q.check(spec)
    _guard(spec, q)
    if spec.kind is MeasureKind.ZETA:
        return abel_limit(_zeta_function(spec, q)).rational_value()
    return abel_limit(_dirichlet_function(spec, q))


# =============================================================================
# PER ADDITIVE CHARACTER
# =============================================================================

def _xi(spec: MeasureSpec, j: int, residue: int) -> CycloValue:
    """xi_j(y) = zeta_N^(j rho(y))."""
    return CycloValue.root_of_unity(spec.N, j * residue % spec.N)


def _check_xi(spec: MeasureSpec, j: int) -> None:
    if spec.kind is not MeasureKind.ZETA:
        raise ParameterViolation("the per-xi oracle belongs to the zeta measure")
    if j % spec.N == 0:
        raise ParameterViolation("xi must be nontrivial")


def oracle_period_xi(spec: MeasureSpec, q: PeriodQuery, j: int) -> CycloValue:
    """Abel limit of sum over r in [0, N)^k of xi_j(y + p^n r.v) u^|r| / (1 - u^N)^k.

    Raises:
        PoleAtOne: xi_j(p^n v_i) = 1 for some i
    """
    _check_xi(spec, j)
    q.check(spec)
    _guard(spec, q)
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    base = spec.residue_at(q.l)
    numerator = PolynomialU.from_terms(
        (sum(r), _xi(spec, j, base + pn * sum(ri * si for ri, si in zip(r, spec.residues))))
        for r in itertools.product(range(N), repeat=k)
    )
    return abel_limit(RationalFunctionU(numerator, PolynomialU.one_minus_power(N, k)))


def closed_form_xi(spec: MeasureSpec, q: PeriodQuery, j: int) -> Optional[CycloValue]:
    """xi_j(y) / prod (1 - xi_j(p^n v_i)), or None when a factor vanishes."""
    _check_xi(spec, j)
    q.check(spec)
    pn = spec.p ** q.n
    factors = [1 - _xi(spec, j, pn * r) for r in spec.residues]
    if any(f == ZERO for f in factors):
        return None
    return _xi(spec, j, spec.residue_at(q.l)) / prod(factors, start=CycloValue.rational(1))


def xi_sum(spec: MeasureSpec, q: PeriodQuery) -> Optional[CycloValue]:
    """Sum of closed_form_xi over the nontrivial xi; None if any term is undefined."""
    total = ZERO
    for j in range(1, spec.N):
        term = closed_form_xi(spec, q, j)
        if term is None:
            return None
        total = total + term
    return total
