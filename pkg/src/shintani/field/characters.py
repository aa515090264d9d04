#!/usr/bin/env python3
"""
Shintani - Characters

Characters of (Z/N)^x through the Cassou-Nogues map, Hecke characters on
the narrow ray class group of modulus N (for narrow class number one),
auxiliary characters psi of p-power level, and omega_F = omega o Nm.
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Optional, Sequence

from sympy import factorint, primitive_root
from sympy.ntheory.modular import crt
from termcolor import cprint

from shintani.arith.cyclotomic import ONE, ZERO, CycloValue
from shintani.arith.padic import PadicNumber, teichmuller, valuation
from shintani.errors import (
    CharacterHasTrivialNarrowModulus,
    NotCoprimeToModulus,
    NotCoprimeToP,
    ParameterViolation,
)
from shintani.field.model import CNResidueMap, FieldElement


# =============================================================================
# UNIT GROUP OF Z/N
# =============================================================================

def _local_generators(prime: int, exponent: int) -> list[tuple[int, int]]:
    """(generator, order) pairs of the cyclic factors of (Z/prime^exponent)^x."""
    modulus = prime ** exponent
    if prime != 2:
        return [(int(primitive_root(modulus)), modulus // prime * (prime - 1))]
    if exponent == 1:
        return []
    if exponent == 2:
        return [(3, 2)]
    return [(modulus - 1, 2), (5, modulus // 4)]


@dataclass(frozen=True, eq=False)
class UnitGroup:
    """(Z/N)^x as a product of cyclic groups with a discrete-log table."""

    modulus: int
    generators: tuple[int, ...]
    orders: tuple[int, ...]

    @classmethod
    def of(cls, modulus: int) -> "UnitGroup":
        if modulus < 2:
            raise ParameterViolation(f"modulus must be > 1, got {modulus}")
        factors = sorted(factorint(modulus).items())
        moduli = [q ** e for q, e in factors]
        gens, orders = [], []
        for idx, (q, e) in enumerate(factors):
            for g, order in _local_generators(q, e):
                residues = [1] * len(moduli)
                residues[idx] = g
                lifted, _ = crt(moduli, residues)
                gens.append(int(lifted) % modulus)
                orders.append(order)
        return cls(modulus, tuple(gens), tuple(orders))

    @cached_property
    def logs(self) -> dict[int, tuple[int, ...]]:
        """Residue -> exponent vector in the generators."""
        table = {}
        for exps in itertools.product(*(range(o) for o in self.orders)):
            value = 1
            for g, e in zip(self.generators, exps):
                value = value * pow(g, e, self.modulus) % self.modulus
            table[value] = exps
        return table

    @property
    def order(self) -> int:
        return len(self.logs)

    def log(self, a: int) -> tuple[int, ...]:
        a %= self.modulus
        if gcd(a, self.modulus) != 1:
            raise NotCoprimeToModulus(a, self.modulus)
        return self.logs[a]

    def units(self) -> list[int]:
        return sorted(self.logs)


# =============================================================================
# RESIDUE CHARACTERS
# =============================================================================

@dataclass(frozen=True, eq=False)
class ResidueCharacter:
    """chi(g_j) = zeta_{o_j}^{c_j} on the generators g_j of (Z/N)^x; zero on non-units."""

    group: UnitGroup
    exponents: tuple[int, ...]

    @property
    def modulus(self) -> int:
        return self.group.modulus

    @cached_property
    def order(self) -> int:
        return lcm(1, *(o // gcd(c, o) for c, o in zip(self.exponents, self.group.orders)))

    def phase(self, a: int) -> Fraction:
        """chi(a) = exp(2 pi i * phase)."""
        logs = self.group.log(a)
        total = sum((Fraction(c * e, o) for c, e, o in zip(self.exponents, logs, self.group.orders)), Fraction(0))
        return total - (total.numerator // total.denominator)

    def __call__(self, a: int) -> CycloValue:
        if gcd(a % self.modulus, self.modulus) != 1:
            return ZERO
        phase = self.phase(a)
        return CycloValue.root_of_unity(self.order, int(phase * self.order))

    @cached_property
    def values(self) -> dict[int, CycloValue]:
        return {a: self(a) for a in self.group.units()}

    def value(self, a: int) -> CycloValue:
        """Cached table lookup, zero on non-units."""
        return self.values.get(a % self.modulus, ZERO)

    def is_trivial(self) -> bool:
        return self.order == 1

    def is_even(self) -> bool:
        return self.value(self.modulus - 1) == ONE

    def trivial_on(self, residues: Sequence[int]) -> bool:
        return all(self.phase(r) == 0 for r in residues)


# =============================================================================
# HECKE CHARACTERS
# =============================================================================

@dataclass(frozen=True, eq=False)
class HeckeCharacter:
    """A character on Cl+(N) lifted from (O/N)^x through rho (narrow class number one)."""

    residue: ResidueCharacter
    cn: CNResidueMap
    index: int = 0
    ideal_values: tuple[CycloValue, ...] = (ONE,)

    @property
    def modulus(self) -> int:
        return self.cn.modulus

    @property
    def order(self) -> int:
        return self.residue.order

    @property
    def nontrivial_narrow_modulus(self) -> bool:
        return not self.residue.is_trivial()

    def require_nontrivial(self) -> None:
        if not self.nontrivial_narrow_modulus:
            raise CharacterHasTrivialNarrowModulus(f"character {self.index} mod {self.modulus} is trivial on (O/N)^x")

    def at_residue(self, r: int) -> CycloValue:
        """Value on a residue class mod N, zero on non-units."""
        return self.residue.value(r)

    def __call__(self, y: FieldElement) -> CycloValue:
        """Value on an N-integral element, zero when y is not prime to N."""
        return self.residue.value(self.cn.apply(y))


def evaluate(chi: HeckeCharacter, y) -> CycloValue:
    """chi(y) for a field element or a rational integer (such as p).

    Raises:
        NotCoprimeToModulus: y is not prime to N
    """
    r = chi.cn.apply(y) if isinstance(y, FieldElement) else int(y) % chi.modulus
    if gcd(r, chi.modulus) != 1:
        raise NotCoprimeToModulus(r, chi.modulus)
    return chi.residue.value(r)


def evaluate_ideal(chi: HeckeCharacter, i: int) -> CycloValue:
    """chi(a_i) on the i-th class representative."""
    return chi.ideal_values[i]


def enumerate_characters(cn: CNResidueMap, unit_images: Sequence[int]) -> list[HeckeCharacter]:
    """All characters of (Z/N)^x / <unit images>, ordered by (order, exponents)."""
    group = UnitGroup.of(cn.modulus)
    for r in unit_images:
        if gcd(r, cn.modulus) != 1:
            raise NotCoprimeToModulus(r, cn.modulus)
    found = []
    for exps in itertools.product(*(range(o) for o in group.orders)):
        chi = ResidueCharacter(group, exps)
        if chi.trivial_on(unit_images):
            found.append(chi)
    found.sort(key=lambda c: (c.order, c.exponents))
    return [HeckeCharacter(chi, cn, index=i) for i, chi in enumerate(found)]


def character_table(chi: HeckeCharacter) -> dict:
    """JSON-ready dump of the value table."""
    return {
        "modulus": chi.modulus,
        "index": chi.index,
        "order": chi.order,
        "exponents": list(chi.residue.exponents),
        "nontrivial_narrow_modulus": chi.nontrivial_narrow_modulus,
        "values": {str(a): v.to_json() for a, v in chi.residue.values.items()},
    }


# =============================================================================
# PSI CHARACTERS OF P-POWER LEVEL
# =============================================================================

@dataclass(frozen=True, eq=False)
class PsiCharacter:
    """A finite character of level p^t.

    kind is "trivial", "norm" (psi(y) = eta(Nm y) for eta mod p^t) or
    "table" (values on basis coordinates mod p^t).
    """

    p: int
    t: int = 0
    kind: str = "trivial"
    eta: Optional[ResidueCharacter] = None
    table: dict[tuple[int, ...], CycloValue] = field(default_factory=dict)

    @classmethod
    def trivial(cls, p: int) -> "PsiCharacter":
        return cls(p)

    @classmethod
    def from_norm(cls, p: int, t: int, exponents: Sequence[int]) -> "PsiCharacter":
        if t < 1:
            raise ParameterViolation("a norm character needs level t >= 1")
        eta = ResidueCharacter(UnitGroup.of(p ** t), tuple(exponents))
        if eta.is_trivial():
            return cls.trivial(p)
        return cls(p, t, "norm", eta)

    @classmethod
    def from_table(
        cls,
        p: int,
        t: int,
        values: dict[tuple[int, ...], CycloValue],
        multiply,
        unit_generators: Sequence[tuple[int, ...]] = (),
    ) -> "PsiCharacter":
        """Validate a coordinate table.

        multiply(a, b) returns the product coordinates mod p^t; the table must
        be multiplicative and trivial on unit_generators.
        """
        modulus = p ** t
        keys = list(values)
        for a in keys:
            for b in keys:
                ab = tuple(c % modulus for c in multiply(a, b))
                if ab not in values or values[ab] != values[a] * values[b]:
                    raise ParameterViolation(f"psi table is not multiplicative at {a}, {b}")
        for u in unit_generators:
            u = tuple(c % modulus for c in u)
            if values.get(u) != ONE:
                raise ParameterViolation(f"psi is not trivial on the unit {u}")
        return cls(p, t, "table", None, dict(values))

    def is_trivial(self) -> bool:
        return self.kind == "trivial"

    def __call__(self, y: FieldElement) -> CycloValue:
        if self.kind == "trivial":
            return ONE
        if self.kind == "norm":
            assert self.eta is not None
            n = y.norm()
            return self.eta.value(n.numerator * pow(n.denominator, -1, self.eta.modulus))
        modulus = self.p ** self.t
        key = tuple(c.numerator * pow(c.denominator, -1, modulus) % modulus for c in y.coords)
        return self.table.get(key, ZERO)


# =============================================================================
# OMEGA_F
# =============================================================================

def omega_F(y: FieldElement, p: int, precision: int) -> PadicNumber:
    """Teichmuller lift of Nm(y) mod p^precision.

    Raises:
        NotCoprimeToP: Nm(y) is divisible by p
    """
    n = y.norm()
    if n == 0 or valuation(n, p) != 0:
        raise NotCoprimeToP(p)
    return teichmuller(PadicNumber.from_rational(p, n, precision), p, precision)


if __name__ == "__main__":
    cprint("=" * 60, "cyan")
    cprint("CHARACTERS MOD 5", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    cn = CNResidueMap(5, (1,), "five")
    for chi in enumerate_characters(cn, []):
        row = ", ".join(f"{a}: {chi.at_residue(a)}" for a in range(1, 5))
        cprint(f"  chi_{chi.index} (order {chi.order}): {row}", "green")
    cprint("\n✅ Character table complete!", "green", attrs=["bold"])
