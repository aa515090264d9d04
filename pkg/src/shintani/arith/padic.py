#!/usr/bin/env python3
"""
Shintani - p-adic Arithmetic

Capped-precision p-adic numbers with precision bookkeeping, the Teichmuller
lift, the projection <y> = y/omega(y), the Iwasawa logarithm, the exponential,
the powers <y>^(-s) and the classical Morita Gamma function.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Union

from sympy import primitive_root

from shintani.arith.cyclotomic import CycloValue
from shintani.config import Config
from shintani.errors import (
    DomainViolation,
    EmbeddingUnavailable,
    EvenPrimeUnsupported,
    NotAUnit,
    PrecisionExhausted,
)

Exact = Union[int, Fraction]


def valuation(value: Exact, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    value = Fraction(value)
    if value == 0:
        raise ValueError("valuation of zero")
    v = 0
    num, den = value.numerator, value.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def check_prime(p: int) -> None:
    if p == 2:
        raise EvenPrimeUnsupported()
    if p < 2:
        raise ValueError(f"{p} is not a prime")


# =============================================================================
# PADIC NUMBER
# =============================================================================

@dataclass(frozen=True, eq=False)
class PadicNumber:
    """p^valuation * unit, known modulo p^(valuation + precision).

    A zero-at-precision element has unit = 0, precision = 0 and stores its
    absolute precision in valuation.
    """

    p: int
    valuation: int
    unit: int
    precision: int

    __hash__ = None  # type: ignore[assignment]

    # -------------------------------------------------------------------------
    # Construction
    # -------------------------------------------------------------------------

    @classmethod
    def zero(cls, p: int, absolute_precision: int) -> "PadicNumber":
        return cls(p, absolute_precision, 0, 0)

    @classmethod
    def one(cls, p: int, absolute_precision: int) -> "PadicNumber":
        return cls.from_rational(p, 1, absolute_precision)

    @classmethod
    def from_rational(cls, p: int, value: Exact, absolute_precision: int) -> "PadicNumber":
        """value modulo p^absolute_precision."""
        value = Fraction(value)
        if value == 0:
            return cls.zero(p, absolute_precision)
        v = valuation(value, p)
        rel = absolute_precision - v
        if rel <= 0:
            return cls.zero(p, absolute_precision)
        modulus = p ** rel
        num = value.numerator // p ** max(v, 0)
        den = value.denominator // p ** max(-v, 0)
        return cls(p, v, num * pow(den, -1, modulus) % modulus, rel)

    @classmethod
    def from_residue(cls, p: int, residue: int, absolute_precision: int) -> "PadicNumber":
        return cls.from_rational(p, residue % p ** absolute_precision, absolute_precision)

    def _coerce(self, other: Union["PadicNumber", Exact], relative: bool) -> "PadicNumber":
        if isinstance(other, PadicNumber):
            if other.p != self.p:
                raise ValueError(f"mixing primes {self.p} and {other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return PadicNumber.zero(self.p, self.absolute_precision + abs(self.valuation) + 1)
            extra = self.precision if relative else self.absolute_precision - valuation(other, self.p)
            return PadicNumber.from_rational(self.p, other, valuation(other, self.p) + max(extra, 1))
        raise TypeError(f"cannot convert {type(other).__name__} to PadicNumber")

    # -------------------------------------------------------------------------
    # Inspection
    # -------------------------------------------------------------------------

    @property
    def absolute_precision(self) -> int:
        return self.valuation + self.precision

    def is_zero(self) -> bool:
        """True when the value is zero at the tracked precision."""
        return self.unit == 0

    def is_unit(self) -> bool:
        return not self.is_zero() and self.valuation == 0

    def residue(self) -> int:
        """Integer representative in [0, p^A) of an integral element."""
        if self.is_zero():
            return 0
        if self.valuation < 0:
            raise DomainViolation(f"{self} is not p-integral")
        modulus = self.p ** self.absolute_precision
        return self.unit * self.p ** self.valuation % modulus

    def unit_part(self) -> "PadicNumber":
        if self.is_zero():
            raise PrecisionExhausted("unit part of a zero-at-precision element")
        return PadicNumber(self.p, 0, self.unit, self.precision)

    def truncate(self, absolute_precision: int) -> "PadicNumber":
        target = min(absolute_precision, self.absolute_precision)
        if self.is_zero():
            return PadicNumber.zero(self.p, target)
        rel = target - self.valuation
        if rel <= 0:
            return PadicNumber.zero(self.p, target)
        return PadicNumber(self.p, self.valuation, self.unit % self.p ** rel, rel)

    def digits(self) -> list[int]:
        """Base-p digits of the unit part, least significant first."""
        out = []
        u = self.unit
        for _ in range(self.precision):
            u, d = divmod(u, self.p)
            out.append(d)
        return out

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "valuation": self.valuation,
            "digits": self.digits(),
            "precision": self.precision,
        }

    def to_fraction(self) -> Fraction:
        """The canonical rational representative p^v * unit."""
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def __repr__(self) -> str:
        if self.is_zero():
            return f"O({self.p}^{self.absolute_precision})"
        return f"{self.unit}*{self.p}^{self.valuation} + O({self.p}^{self.absolute_precision})"

    # -------------------------------------------------------------------------
    # Arithmetic
    # -------------------------------------------------------------------------

    def __add__(self, other):
        try:
            other = self._coerce(other, relative=False)
        except TypeError:
            return NotImplemented
        p = self.p
        target = min(self.absolute_precision, other.absolute_precision)
        low = min(self.valuation, other.valuation)
        rel = target - low
        if rel <= 0:
            return PadicNumber.zero(p, target)
        modulus = p ** rel
        total = (self.unit * p ** (self.valuation - low) + other.unit * p ** (other.valuation - low)) % modulus
        if total == 0:
            return PadicNumber.zero(p, target)
        shift = 0
        while total % p == 0:
            total //= p
            shift += 1
        rel -= shift
        return PadicNumber(p, low + shift, total % p ** rel, rel)

    __radd__ = __add__

    def __neg__(self):
        if self.is_zero():
            return self
        return PadicNumber(self.p, self.valuation, -self.unit % self.p ** self.precision, self.precision)

    def __sub__(self, other):
        try:
            other = self._coerce(other, relative=False)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = self._coerce(other, relative=True)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PadicNumber.zero(self.p, self.valuation + other.valuation)
        rel = min(self.precision, other.precision)
        return PadicNumber(
            self.p,
            self.valuation + other.valuation,
            self.unit * other.unit % self.p ** rel,
            rel,
        )

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero():
            raise PrecisionExhausted("cannot invert a zero-at-precision element")
        modulus = self.p ** self.precision
        return PadicNumber(self.p, -self.valuation, pow(self.unit, -1, modulus), self.precision)

    def __truediv__(self, other):
        try:
            other = self._coerce(other, relative=True)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self._coerce(other, relative=True) * self.inverse()

    def __pow__(self, exponent: int):
        if exponent < 0:
            return self.inverse() ** (-exponent)
        if exponent == 0:
            return PadicNumber.one(self.p, max(self.precision, 1))
        if self.is_zero():
            return PadicNumber.zero(self.p, self.valuation * exponent)
        modulus = self.p ** self.precision
        return PadicNumber(self.p, self.valuation * exponent, pow(self.unit, exponent, modulus), self.precision)

    # -------------------------------------------------------------------------
    # Comparison
    # -------------------------------------------------------------------------

    def __eq__(self, other) -> bool:
        try:
            other = self._coerce(other, relative=False)
        except TypeError:
            return NotImplemented
        return (self - other).is_zero()

    def distance(self, other: Union["PadicNumber", Exact]) -> int:
        """v_p(self - other); a lower bound when the difference is zero-at-precision."""
        diff = self - other
        return diff.valuation

    def congruent(self, other: Union["PadicNumber", Exact], exponent: int) -> bool:
        """self == other mod p^exponent.

        Raises:
            PrecisionExhausted: the tracked precision is below the requested exponent
        """
        diff = self - other
        if not diff.is_zero():
            return diff.valuation >= exponent
        if diff.absolute_precision >= exponent:
            return True
        raise PrecisionExhausted(
            f"difference known only modulo {self.p}^{diff.absolute_precision}, asked for {exponent}"
        )


# =============================================================================
# TEICHMULLER, ANGLE, LOG, EXP, POWER
# =============================================================================

@lru_cache(maxsize=None)
def _teichmuller_residue(y_mod_p: int, p: int, precision: int) -> int:
    modulus = p ** precision
    w = y_mod_p
    for _ in range(precision):
        w = pow(w, p, modulus)
    return w


def teichmuller(y: Union[int, PadicNumber], p: int, precision: Optional[int] = None) -> PadicNumber:
    """The (p-1)-st root of unity congruent to y mod p.

    Raises:
        EvenPrimeUnsupported: p = 2
        NotAUnit: y divisible by p
    """
    check_prime(p)
    if isinstance(y, PadicNumber):
        if not y.is_unit():
            raise NotAUnit(y.residue() if y.valuation >= 0 else 0, p)
        precision = precision or y.precision
        y = y.unit
    precision = precision or Config.DEFAULT_PRECISION
    if y % p == 0:
        raise NotAUnit(y, p)
    return PadicNumber(p, 0, _teichmuller_residue(y % p, p, precision), precision)


def angle(y: PadicNumber) -> PadicNumber:
    """<y> = y / omega(y), an element of 1 + pZ_p."""
    if not y.is_unit():
        raise DomainViolation(f"angle needs a p-adic unit, got {y}")
    return y / teichmuller(y, y.p)


def _floor_log(n: int, p: int) -> int:
    e = 0
    while n >= p:
        n //= p
        e += 1
    return e


def padic_log(u: PadicNumber) -> PadicNumber:
    """Iwasawa logarithm on 1 + pZ_p.

    Raises:
        DomainViolation: u is not congruent to 1 mod p
    """
    p = u.p
    check_prime(p)
    if not u.is_unit() or u.unit % p != 1:
        raise DomainViolation(f"log needs an argument congruent to 1 mod {p}, got {u}")
    target = u.absolute_precision
    z = u - 1
    if z.is_zero():
        return PadicNumber.zero(p, target)
    vz = z.valuation
    last = 1
    while (last + 1) * vz - _floor_log(last + 1, p) < target:
        last += 1
    # p-divisions of the terms eat at most floor(log_p(last)) digits
    work = target + _floor_log(last, p) + Config.GUARD_DIGITS
    big = p ** work
    modulus = p ** target
    zint = z.residue() % big
    total = 0
    power = 1
    for n in range(1, last + 1):
        power = power * zint % big
        a = 0
        m = n
        while m % p == 0:
            m //= p
            a += 1
        term = (power // p ** a) * pow(m, -1, modulus)
        total += term if n % 2 else -term
    return PadicNumber.from_residue(p, total % modulus, target)


def padic_exp(z: PadicNumber) -> PadicNumber:
    """Exponential on pZ_p.

    Raises:
        DomainViolation: z has valuation below 1
        PrecisionExhausted: z carries no precision
    """
    p = z.p
    check_prime(p)
    target = z.absolute_precision
    if target <= 0:
        raise PrecisionExhausted("exp of an element known to no digits")
    if z.is_zero():
        return PadicNumber.one(p, target)
    if z.valuation < 1:
        raise DomainViolation(f"exp needs valuation >= 1, got {z}")
    vz = z.valuation
    last = 1
    while Fraction((last + 1) * vz) - Fraction(last, p - 1) < target:
        last += 1
    work = target + (last - 1) // (p - 1) + Config.GUARD_DIGITS
    big = p ** work
    modulus = p ** target
    zint = z.residue() % big
    total = 1
    power = 1
    fact_v = 0
    fact_unit = 1
    for n in range(1, last + 1):
        power = power * zint % big
        m = n
        while m % p == 0:
            m //= p
            fact_v += 1
        fact_unit = fact_unit * m % modulus
        total += (power // p ** fact_v) * pow(fact_unit, -1, modulus)
    return PadicNumber.from_residue(p, total % modulus, target)


def as_exponent(s: Union[PadicNumber, Exact], p: int, precision: int) -> PadicNumber:
    """Validate s as an element of Z_p.

    Raises:
        DomainViolation: s is not p-integral
    """
    if isinstance(s, PadicNumber):
        if not s.is_zero() and s.valuation < 0:
            raise DomainViolation(f"exponent {s} is not in Z_{p}")
        return s
    s = Fraction(s)
    if s != 0 and valuation(s, p) < 0:
        raise DomainViolation(f"exponent {s} is not in Z_{p}")
    return PadicNumber.from_rational(p, s, precision + (valuation(s, p) if s else 0))


def power(y: PadicNumber, s: Union[PadicNumber, Exact]) -> PadicNumber:
    """<y>^(-s) = exp(-s * log <y>); power(y, -1) = <y>."""
    if isinstance(s, (int, Fraction)) and s == 0:
        return PadicNumber.one(y.p, y.absolute_precision)
    exponent = as_exponent(s, y.p, y.absolute_precision)
    log_angle = padic_log(angle(y))
    result = padic_exp(-(exponent * log_angle))
    return result.truncate(y.absolute_precision)


def iwasawa_log(y: PadicNumber) -> PadicNumber:
    """log_p extended to all nonzero y with log_p(p) = 0."""
    return padic_log(angle(y.unit_part()))


# =============================================================================
# EMBEDDING OF CHARACTER VALUES
# =============================================================================

def embed_cyclo(value: CycloValue, p: int, precision: int, root_index: int = 1) -> PadicNumber:
    """Map a cyclotomic value into Q_p.

    zeta_m goes to the Teichmuller lift of g^((p-1)/m * root_index) with g the
    least primitive root mod p.

    Raises:
        EmbeddingUnavailable: m does not divide p - 1
    """
    check_prime(p)
    if value.is_rational():
        c = value.rational_value()
        if c == 0:
            return PadicNumber.zero(p, precision)
        return PadicNumber.from_rational(p, c, valuation(c, p) + precision)
    m = value.m
    if (p - 1) % m:
        raise EmbeddingUnavailable(m, p)
    g = int(primitive_root(p))
    zeta = teichmuller(pow(g, (p - 1) // m * root_index, p), p, precision)
    total = PadicNumber.zero(p, precision)
    current = PadicNumber.one(p, precision)
    for c in value.coeffs:
        if c:
            total = total + current * c
        current = current * zeta
    return total


# =============================================================================
# MORITA GAMMA
# =============================================================================

def _gamma_target(y: Union[int, PadicNumber], p: int, precision: int) -> int:
    modulus = p ** precision
    residue = y.residue() if isinstance(y, PadicNumber) else y
    n = residue % modulus
    return n or modulus


def morita_gamma_batch(ys, p: int, precision: int) -> list[PadicNumber]:
    """Morita Gamma at several points with one sweep over [1, p^precision)."""
    check_prime(p)
    modulus = p ** precision
    targets = [_gamma_target(y, p, precision) for y in ys]
    order = sorted(range(len(targets)), key=lambda i: targets[i])
    results: list[Optional[PadicNumber]] = [None] * len(targets)
    running = 1
    j = 1
    for i in order:
        n = targets[i]
        while j < n:
            if j % p:
                running = running * j % modulus
            j += 1
        value = running if n % 2 == 0 else -running % modulus
        results[i] = PadicNumber.from_residue(p, value, precision)
    return results  # type: ignore[return-value]


def morita_gamma(y: Union[int, PadicNumber], p: int, precision: int) -> PadicNumber:
    """Gamma_p(n) = (-1)^n prod_{0<j<n, p∤j} j for n = y mod p^precision in [1, p^precision]."""
    return morita_gamma_batch([y], p, precision)[0]
