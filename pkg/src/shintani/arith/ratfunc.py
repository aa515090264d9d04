#!/usr/bin/env python3
"""
Shintani - Rational Functions in u

Quotients of PolynomialU with exact evaluation at u = 1. Generating functions
of the measures are restricted to a residue class and collapse to such a
quotient; its regular value at u = 1 is the Abel limit u -> 1-.
"""

from dataclasses import dataclass

from shintani.arith.cyclotomic import CycloValue
from shintani.arith.polynomials import Coefficient, PolynomialU
from shintani.errors import PoleAtOne


def _cancel_at_one(num: PolynomialU, den: PolynomialU) -> tuple[PolynomialU, PolynomialU]:
    while num and den and not num.value_at_one() and not den.value_at_one():
        num = num.divide_by_u_minus_one()
        den = den.divide_by_u_minus_one()
    return num, den


@dataclass(frozen=True, eq=False, init=False)
class RationalFunctionU:
    """num/den with common (u - 1) factors cancelled."""

    num: PolynomialU
    den: PolynomialU

    def __init__(self, num: PolynomialU, den: PolynomialU | None = None):
        if den is None:
            den = PolynomialU.constant(1)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if not num:
            den = PolynomialU.constant(1)
        num, den = _cancel_at_one(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    @classmethod
    def constant(cls, c: Coefficient) -> "RationalFunctionU":
        return cls(PolynomialU.constant(c))

    def __add__(self, other: "RationalFunctionU") -> "RationalFunctionU":
        return RationalFunctionU(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "RationalFunctionU":
        return RationalFunctionU(-self.num, self.den)

    def __sub__(self, other: "RationalFunctionU") -> "RationalFunctionU":
        return self + (-other)

    def __mul__(self, other) -> "RationalFunctionU":
        if isinstance(other, RationalFunctionU):
            return RationalFunctionU(self.num * other.num, self.den * other.den)
        return RationalFunctionU(self.num * other, self.den)

    __rmul__ = __mul__

    def __truediv__(self, other: "RationalFunctionU") -> "RationalFunctionU":
        if not other.num:
            raise ZeroDivisionError("division by the zero function")
        return RationalFunctionU(self.num * other.den, self.den * other.num)

    def evaluate(self, u: float) -> complex:
        return self.num.evaluate(u) / self.den.evaluate(u)


def _order_at_one(poly: PolynomialU) -> int:
    order = 0
    while poly and not poly.value_at_one():
        poly = poly.divide_by_u_minus_one()
        order += 1
    return order


def pole_order_at_one(f: RationalFunctionU) -> int:
    """Order of the pole of f at u = 1 (0 when f is regular there)."""
    if not f.num:
        return 0
    return max(0, _order_at_one(f.den) - _order_at_one(f.num))


def taylor_at_one(f: RationalFunctionU, order: int) -> list[CycloValue]:
    """Coefficients c_0..c_order of f(1 + eps) as a power series in eps.

    Raises:
        PoleAtOne: f is singular at u = 1
    """
    pole = pole_order_at_one(f)
    if pole:
        raise PoleAtOne(pole)
    num = f.num.taylor_coefficients(order + 1)
    den = f.den.taylor_coefficients(order + 1)
    inv_lead = den[0].inverse()
    out: list[CycloValue] = []
    for j in range(order + 1):
        acc = num[j]
        for i in range(1, j + 1):
            acc = acc - den[i] * out[j - i]
        out.append(acc * inv_lead)
    return out


def abel_limit(f: RationalFunctionU) -> CycloValue:
    """The value f(1) of a function regular at u = 1."""
    return taylor_at_one(f, 0)[0]
