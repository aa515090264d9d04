#!/usr/bin/env python3
"""
Shintani - Cyclotomic Values

Exact elements of Q(zeta_m), stored as residues modulo the m-th cyclotomic
polynomial. All character values in the package are CycloValue instances.
"""

import cmath
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Union

from sympy import Poly, Rational, Symbol, cyclotomic_poly, mobius, totient

_X = Symbol("x")

Scalar = Union[int, Fraction]


@lru_cache(maxsize=None)
def cyclotomic_coeffs(m: int) -> tuple[int, ...]:
    """Coefficients of the m-th cyclotomic polynomial, lowest degree first."""
    return tuple(int(c) for c in reversed(Poly(cyclotomic_poly(m, _X), _X).all_coeffs()))


@lru_cache(maxsize=None)
def _trace_weight(m: int, j: int) -> Fraction:
    """Normalized trace of zeta_m^j, i.e. mu(m/g)/phi(m/g) with g = gcd(j, m)."""
    d = m // gcd(j, m)
    return Fraction(int(mobius(d)), int(totient(d)))


def _reduce(m: int, dense: list[Fraction]) -> tuple[Fraction, ...]:
    """Reduce a dense coefficient list modulo Phi_m (monic)."""
    phi = cyclotomic_coeffs(m)
    deg = len(phi) - 1
    work = list(dense)
    for top in range(len(work) - 1, deg - 1, -1):
        c = work[top]
        if c:
            shift = top - deg
            for i, a in enumerate(phi):
                work[shift + i] -= c * a
    work = work[:deg] + [Fraction(0)] * max(0, deg - len(work))
    return tuple(Fraction(c) for c in work[:deg])


@dataclass(frozen=True, eq=False)
class CycloValue:
    """Element of Q(zeta_m) as a residue modulo Phi_m.

    coeffs has exactly phi(m) entries, coefficient of zeta_m^j at index j.
    """

    m: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != len(cyclotomic_coeffs(self.m)) - 1:
            raise ValueError(f"CycloValue of order {self.m} needs {int(totient(self.m))} coefficients")

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def from_dense(cls, m: int, dense) -> "CycloValue":
        """Build from coefficients of 1, zeta, zeta^2, ... of any length."""
        return cls(m, _reduce(m, [Fraction(c) for c in dense]))

    @classmethod
    def rational(cls, value: Scalar, m: int = 1) -> "CycloValue":
        return cls.from_dense(m, [value])

    @classmethod
    def root_of_unity(cls, m: int, j: int = 1) -> "CycloValue":
        """zeta_m^j."""
        dense = [Fraction(0)] * (j % m + 1)
        dense[j % m] = Fraction(1)
        return cls.from_dense(m, dense)

    @staticmethod
    def coerce(value: "CycloValue | Scalar") -> "CycloValue":
        if isinstance(value, CycloValue):
            return value
        if isinstance(value, (int, Fraction)):
            return CycloValue.rational(value)
        raise TypeError(f"cannot convert {type(value).__name__} to CycloValue")

    # -------------------------------------------------------------------------
    # Embedding between cyclotomic fields
    # -------------------------------------------------------------------------

    def embed(self, order: int) -> "CycloValue":
        """The same number viewed in Q(zeta_order); requires m | order."""
        if order == self.m:
            return self
        if order % self.m:
            raise ValueError(f"cannot embed order {self.m} into order {order}")
        step = order // self.m
        dense = [Fraction(0)] * (step * (len(self.coeffs) - 1) + 1)
        for j, c in enumerate(self.coeffs):
            dense[j * step] = c
        return CycloValue.from_dense(order, dense)

    def _aligned(self, other: "CycloValue") -> tuple["CycloValue", "CycloValue"]:
        order = lcm(self.m, other.m)
        return self.embed(order), other.embed(order)

    # -------------------------------------------------------------------------
    # Ring operations
    # -------------------------------------------------------------------------

    def __add__(self, other):
        try:
            other = CycloValue.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._aligned(other)
        return CycloValue(a.m, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CycloValue(self.m, tuple(-c for c in self.coeffs))

    def __sub__(self, other):
        try:
            other = CycloValue.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycloValue(self.m, tuple(c * other for c in self.coeffs))
        if not isinstance(other, CycloValue):
            return NotImplemented
        if other.m == 1:
            return self * other.coeffs[0]
        if self.m == 1:
            return other * self.coeffs[0]
        a, b = self._aligned(other)
        dense = [Fraction(0)] * (len(a.coeffs) + len(b.coeffs) - 1)
        for i, x in enumerate(a.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    if y:
                        dense[i + j] += x * y
        return CycloValue(a.m, _reduce(a.m, dense))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (Fraction(1) / Fraction(other))
        if not isinstance(other, CycloValue):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return CycloValue.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = CycloValue.rational(1, self.m)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def inverse(self) -> "CycloValue":
        if not self:
            raise ZeroDivisionError("inverse of zero")
        if self.m == 1 or self.is_rational():
            return CycloValue.rational(1 / self.rational_value(), self.m)
        phi = Poly(list(reversed(cyclotomic_coeffs(self.m))), _X, domain="QQ")
        f = Poly([_to_sympy(c) for c in reversed(self.coeffs)], _X, domain="QQ")
        inv = f.invert(phi)
        dense = [Fraction(int(c.p), int(c.q)) for c in reversed(inv.all_coeffs())]
        return CycloValue.from_dense(self.m, dense)

    def conjugate(self) -> "CycloValue":
        """Complex conjugation zeta -> zeta^(m-1)."""
        dense = [Fraction(0)] * self.m
        for j, c in enumerate(self.coeffs):
            dense[(-j) % self.m] += c
        return CycloValue.from_dense(self.m, dense)

    # -------------------------------------------------------------------------
    # Comparison and inspection
    # -------------------------------------------------------------------------

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def __eq__(self, other) -> bool:
        try:
            other = CycloValue.coerce(other)
        except TypeError:
            return NotImplemented
        a, b = self._aligned(other)
        return a.coeffs == b.coeffs

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash(sum((c * _trace_weight(self.m, j) for j, c in enumerate(self.coeffs)), Fraction(0)))

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational_value(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    def to_complex(self) -> complex:
        zeta = cmath.exp(2j * cmath.pi / self.m)
        return sum((float(c) * zeta ** j for j, c in enumerate(self.coeffs)), 0j)

    def to_json(self) -> dict:
        return {"m": self.m, "coeffs": [str(c) for c in self.coeffs]}

    def __repr__(self) -> str:
        if self.is_rational():
            return f"CycloValue({self.coeffs[0]})"
        terms = [f"{c}*z{self.m}^{j}" for j, c in enumerate(self.coeffs) if c]
        return "CycloValue(" + " + ".join(terms) + ")"


def _to_sympy(c: Fraction) -> Rational:
    return Rational(c.numerator, c.denominator)


ZERO = CycloValue.rational(0)
ONE = CycloValue.rational(1)
