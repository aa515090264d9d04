#!/usr/bin/env python3
"""
Shintani - Polynomials in u

Sparse univariate polynomials with CycloValue coefficients, the building block
of the Abel-limit rational functions.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Union

from shintani.arith.cyclotomic import ZERO, CycloValue

Coefficient = Union[CycloValue, int, Fraction]


@dataclass(frozen=True, eq=False)
class PolynomialU:
    """Sparse polynomial sum(c_e * u^e); zero coefficients are never stored."""

    terms: dict[int, CycloValue] = field(default_factory=dict)

    @classmethod
    def from_terms(cls, pairs) -> "PolynomialU":
        """Accumulate (exponent, coefficient) pairs."""
        acc: dict[int, CycloValue] = {}
        for e, c in pairs:
            if e < 0:
                raise ValueError(f"negative exponent {e}")
            acc[e] = acc.get(e, ZERO) + CycloValue.coerce(c)
        return cls({e: c for e, c in acc.items() if c})

    @classmethod
    def constant(cls, c: Coefficient) -> "PolynomialU":
        return cls.from_terms([(0, c)])

    @classmethod
    def monomial(cls, e: int, c: Coefficient = 1) -> "PolynomialU":
        return cls.from_terms([(e, c)])

    @classmethod
    def one_minus_power(cls, a: int, k: int = 1, c: Coefficient = 1) -> "PolynomialU":
        """(1 - c*u^a)^k."""
        c = CycloValue.coerce(c)
        return cls.from_terms((a * j, c ** j * ((-1) ** j * comb(k, j))) for j in range(k + 1))

    @classmethod
    def from_dense(cls, dense) -> "PolynomialU":
        return cls.from_terms(enumerate(dense))

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def __add__(self, other: "PolynomialU") -> "PolynomialU":
        return PolynomialU.from_terms(list(self.terms.items()) + list(other.terms.items()))

    def __neg__(self) -> "PolynomialU":
        return PolynomialU({e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "PolynomialU") -> "PolynomialU":
        return self + (-other)

    def __mul__(self, other) -> "PolynomialU":
        if isinstance(other, (int, Fraction, CycloValue)):
            return PolynomialU.from_terms((e, c * other) for e, c in self.terms.items())
        return PolynomialU.from_terms(
            (e1 + e2, c1 * c2)
            for e1, c1 in self.terms.items()
            for e2, c2 in other.terms.items()
        )

    __rmul__ = __mul__

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def degree(self) -> int:
        return max(self.terms, default=-1)

    def value_at_one(self) -> CycloValue:
        return sum(self.terms.values(), ZERO)

    def evaluate(self, u: float) -> complex:
        return sum((c.to_complex() * u ** e for e, c in self.terms.items()), 0j)

    def divide_by_u_minus_one(self) -> "PolynomialU":
        """Exact quotient by (u - 1); the polynomial must vanish at u = 1."""
        if self.value_at_one():
            raise ValueError("polynomial does not vanish at u = 1")
        deg = self.degree
        quotient: list[CycloValue] = [ZERO] * deg
        running = ZERO
        for e in range(deg, 0, -1):
            running = running + self.terms.get(e, ZERO)
            quotient[e - 1] = running
        return PolynomialU.from_dense(quotient)

    def taylor_coefficients(self, count: int) -> list[CycloValue]:
        """Coefficients of eps^0..eps^(count-1) after substituting u = 1 + eps."""
        return [
            sum((c * comb(e, j) for e, c in self.terms.items() if e >= j), ZERO)
            for j in range(count)
        ]

    def __repr__(self) -> str:
        return " + ".join(f"({c})*u^{e}" for e, c in sorted(self.terms.items())) or "0"
