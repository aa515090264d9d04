#!/usr/bin/env python3
"""
Shintani - Errors

One exception class per failure mode. Every class derives from ShintaniError
and from the closest builtin, so callers can catch either.
"""

from typing import Optional


class ShintaniError(Exception):
    """Base class for all library errors."""


# =============================================================================
# EXACT AND P-ADIC ARITHMETIC
# =============================================================================

class PoleAtOne(ShintaniError, ZeroDivisionError):
    """A rational function in u is singular at u = 1."""

    def __init__(self, order: int):
        self.order = order
        super().__init__(f"pole of order {order} at u = 1")


class NotAUnit(ShintaniError, ValueError):
    def __init__(self, value: int, p: int):
        self.value = value
        self.p = p
        super().__init__(f"{value} is not a unit modulo {p}")


class EvenPrimeUnsupported(ShintaniError, ValueError):
    def __init__(self) -> None:
        super().__init__("p = 2 is not supported")


class DomainViolation(ShintaniError, ValueError):
    """Argument outside the domain of a p-adic series."""


class PrecisionExhausted(ShintaniError, ArithmeticError):
    """The guaranteed p-adic precision dropped to zero."""


class EmbeddingUnavailable(ShintaniError, ValueError):
    def __init__(self, order: int, p: int):
        self.order = order
        self.p = p
        super().__init__(f"no {order}-th roots of unity in Q_{p} (order does not divide {p - 1})")


# =============================================================================
# FIELD MODEL AND CONES
# =============================================================================

class NotIntegralAtModulus(ShintaniError, ValueError):
    def __init__(self, value: object, modulus: int):
        self.value = value
        self.modulus = modulus
        super().__init__(f"{value} is not integral at {modulus}")


class UndecidedAtPrecision(ShintaniError, ArithmeticError):
    """Interval refinement could not decide a sign."""


class FieldDataInvalid(ShintaniError, ValueError):
    def __init__(self, message: str, index: Optional[tuple[int, ...]] = None):
        self.index = index
        if index is not None:
            message = f"{message} at basis index {index}"
        super().__init__(message)


class CNMapInvalid(ShintaniError, ValueError):
    def __init__(self, message: str, pair: Optional[tuple[int, int]] = None):
        self.pair = pair
        if pair is not None:
            message = f"{message} (basis pair {pair})"
        super().__init__(message)


class LatticeNotContained(ShintaniError, ValueError):
    """The cone lattice is not contained in the ideal lattice."""


class NarrowClassNumberNotOne(ShintaniError, ValueError):
    def __init__(self, discriminant: int, class_number: int):
        self.discriminant = discriminant
        self.class_number = class_number
        super().__init__(f"narrow class number of discriminant {discriminant} is {class_number}")


class UnitNotFound(ShintaniError, RuntimeError):
    """No fundamental unit found within the continued-fraction search bound."""


class NotInAnyCone(ShintaniError, RuntimeError):
    """A totally positive point lies in no cone translate (invalid decomposition)."""


class AmbiguousLocation(ShintaniError, RuntimeError):
    """A point lies in more than one cone translate (invalid decomposition)."""


class PDividesIndex(ShintaniError, ValueError):
    def __init__(self, p: int, index: int):
        self.p = p
        self.index = index
        super().__init__(f"p = {p} divides the lattice index {index}")


# =============================================================================
# CHARACTERS
# =============================================================================

class NotCoprimeToModulus(ShintaniError, ValueError):
    def __init__(self, residue: int, modulus: int):
        self.residue = residue
        self.modulus = modulus
        super().__init__(f"residue {residue} is not coprime to {modulus}")


class NotCoprimeToP(ShintaniError, ValueError):
    def __init__(self, p: int):
        self.p = p
        super().__init__(f"element is not coprime to p = {p}")


class CharacterHasTrivialNarrowModulus(ShintaniError, ValueError):
    """The character is trivial on the image of (O/N)^x."""


class PsiLevelUnsupported(ShintaniError, ValueError):
    """The auxiliary character cannot be evaluated for this configuration."""


# =============================================================================
# MEASURES AND L-SERIES
# =============================================================================

class LevelNotOneModN(ShintaniError, ValueError):
    def __init__(self, level: int, modulus: int):
        self.level = level
        self.modulus = modulus
        super().__init__(f"p^n = {level} is not congruent to 1 modulo {modulus}")


class InstanceTooLarge(ShintaniError, ValueError):
    """Oracle guard rail: the instance exceeds the configured limits."""


class AssumptionOpViolated(ShintaniError, ValueError):
    """The cone lattice is not a Z_p-basis of O_p (p divides [O : L_V])."""


class PNotInert(ShintaniError, ValueError):
    def __init__(self, p: int):
        self.p = p
        super().__init__(f"p = {p} is not inert")


class NotConverged(ShintaniError, ArithmeticError):
    def __init__(self, exponent: int):
        self.exponent = exponent
        super().__init__(f"Gamma approximants not stable at approximation exponent {exponent}")


class ParameterViolation(ShintaniError, ValueError):
    """Parameters outside the admissible range of an operation."""


class NoRootMod(ShintaniError, ValueError):
    def __init__(self, modulus: int):
        self.modulus = modulus
        super().__init__(f"X^2 - 3X + 1 has no root modulo {modulus}")


# =============================================================================
# INPUT FILES
# =============================================================================

class InputFileError(ShintaniError, ValueError):
    """A field file or run manifest failed to parse or validate."""
