#!/usr/bin/env python3
"""
Shintani - Multiple p-adic Gamma

Gamma_V(y) = lim over n -> y (n > 0) of prod over 1 <= l < n, Nm(l.v) prime
to p, of <Nm(l.v)>.

Modulo p^M the norm only depends on l mod p^M, so the box [1, n) splits into
full periods and a remainder in each coordinate. Every residue r in [1, p^M]^k
then occurs prod_i (a_i + [r_i <= b_i]) times, where n_i - 1 = a_i p^M + b_i.
The product is assembled from one sweep over [1, p^M]^k, whatever the
approximation exponent.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import prod
from typing import Optional, Sequence

from sympy import Poly, Rational, symbols
from termcolor import cprint

from shintani.arith.padic import PadicNumber, angle, check_prime, morita_gamma
from shintani.config import Config
from shintani.errors import AssumptionOpViolated, InstanceTooLarge, NotConverged, ParameterViolation
from shintani.field.cones import ConeContext, IdealLattice
from shintani.field.model import Coords, FieldElement, ModularNormForm, NormForm, sharp, to_fraction


@dataclass(frozen=True)
class GammaQuery:
    """Target y = sum y_i v_i with p-integral coordinates, wanted modulo p^precision."""

    y: Coords
    p: int
    precision: int = Config.GAMMA_PRECISION
    extra: Optional[int] = None

    def __post_init__(self):
        check_prime(self.p)
        if self.precision < 1 or (self.extra is not None and self.extra < 0):
            raise ParameterViolation("Gamma needs precision >= 1 and a nonnegative extra exponent")
        for c in self.y:
            if Fraction(c).denominator % self.p == 0:
                raise ParameterViolation(f"coordinate {c} of y is not {self.p}-integral")

    @classmethod
    def at(cls, cone: ConeContext, y: FieldElement, p: int, precision: int = Config.GAMMA_PRECISION) -> "GammaQuery":
        return cls(cone.coordinates(y), p, precision)

    @property
    def exponent(self) -> int:
        """M' = M + extra, by default M + max(GAMMA_EXTRA_DIGITS, M - 1).

        Approximants at M' and beyond differ by p^(M' - M)-th powers of
        principal units, so they agree modulo p^M once M' >= 2M - 1.
        """
        extra = self.extra if self.extra is not None else max(Config.GAMMA_EXTRA_DIGITS, self.precision - 1)
        return self.precision + extra

    def approximant(self, exponent: int) -> tuple[int, ...]:
        """The minimal positive n with n = y mod p^exponent."""
        return tuple(sharp(c, self.p ** exponent) for c in self.y)


# =============================================================================
# NORM FORM IN CONE COORDINATES
# =============================================================================

@lru_cache(maxsize=32)
def _cone_norm_form(form: NormForm, generators: tuple[Coords, ...]) -> NormForm:
    """Nm(sum l_i v_i) as a polynomial in the cone coordinates l."""
    k = len(generators)
    ls = symbols(f"l0:{k}")
    basis_coords = [
        sum(Rational(g[j].numerator, g[j].denominator) * l for g, l in zip(generators, ls))
        for j in range(len(generators[0]))
    ]
    expr = 0
    for exps, c in form.terms:
        term = Rational(c.numerator, c.denominator)
        for t, e in zip(basis_coords, exps):
            term *= t ** e
        expr += term
    poly = Poly(expr, *ls)
    return NormForm(tuple((tuple(int(e) for e in exps), to_fraction(c)) for exps, c in poly.terms()))


def cone_norm_form(cone: ConeContext) -> NormForm:
    return _cone_norm_form(cone.field.norm_form, tuple(g.coords for g in cone.generators))


# =============================================================================
# BLOCK PRODUCTS
# =============================================================================

def _block_products(form: ModularNormForm, k: int, p: int, remainders: Sequence[int]) -> dict[tuple[int, ...], int]:
    """Products of Nm(r.v) mod p^M over r in [1, p^M]^k, split by the pattern r_i <= b_i."""
    modulus = form.modulus
    blocks: dict[tuple[int, ...], int] = {}
    for r in itertools.product(range(1, modulus + 1), repeat=k):
        nm = form(r)
        if nm % p == 0:
            continue
        pattern = tuple(int(ri <= bi) for ri, bi in zip(r, remainders))
        blocks[pattern] = blocks.get(pattern, 1) * nm % modulus
    return blocks


def _box_product(blocks: dict[tuple[int, ...], int], sides: Sequence[int], modulus: int) -> int:
    """prod over 1 <= l < n of Nm(l.v), from the block products."""
    total = 1
    for pattern, block in blocks.items():
        count = 1
        for side, inside in zip(sides, pattern):
            count *= (side - 1) // modulus + inside
        if count:
            total = total * pow(block, count, modulus) % modulus
    return total


def gamma_multiple(query: GammaQuery, cone: ConeContext, ring: Optional[IdealLattice] = None) -> PadicNumber:
    """Gamma_V(y) modulo p^M, released once approximants at M' and M' + 2 agree.

    Raises:
        AssumptionOpViolated: p divides [ring : L_V]
        InstanceTooLarge: p^(M k) exceeds Config.GAMMA_MAX_RESIDUES
        NotConverged: the two approximants differ modulo p^M
    """
    p, M = query.p, query.precision
    if len(query.y) != cone.k:
        raise ParameterViolation(f"y has {len(query.y)} coordinates, cone has {cone.k} generators")
    if ring is not None and not cone.is_p_regular(p, ring):
        raise AssumptionOpViolated(f"p = {p} divides [O : L_{cone.label}]")
    if p ** (M * cone.k) > Config.GAMMA_MAX_RESIDUES:
        raise InstanceTooLarge(
            f"Gamma_V modulo {p}^{M} sweeps {p}^{M * cone.k} residues, limit {Config.GAMMA_MAX_RESIDUES}"
        )
    modulus = p ** M
    form = cone_norm_form(cone).modular(modulus)
    first = query.approximant(query.exponent)
    remainders = [(n - 1) % modulus for n in first]
    blocks = _block_products(form, cone.k, p, remainders)

    values = []
    for exponent in (query.exponent, query.exponent + 2):
        product = _box_product(blocks, query.approximant(exponent), modulus)
        values.append(angle(PadicNumber.from_residue(p, product, M)))
    if values[0] != values[1]:
        cprint(f"  Warning: Gamma approximants differ at M' = {query.exponent}", "yellow")
        raise NotConverged(query.exponent)
    return values[0]


def gamma_direct(query: GammaQuery, cone: ConeContext) -> PadicNumber:
    """The approximant at M' by walking the whole box (small instances only)."""
    p, M = query.p, query.precision
    sides = query.approximant(query.exponent)
    if prod(n - 1 for n in sides) > Config.GAMMA_MAX_RESIDUES:
        raise InstanceTooLarge(f"box of sides {sides} exceeds {Config.GAMMA_MAX_RESIDUES} points")
    modulus = p ** M
    form = cone_norm_form(cone).modular(modulus)
    total = 1
    for l in itertools.product(*(range(1, n) for n in sides)):
        nm = form(l)
        if nm % p:
            total = total * nm % modulus
    return angle(PadicNumber.from_residue(p, total, M))


def morita_angle(y: Fraction, p: int, precision: int) -> PadicNumber:
    """<Gamma_p(y)> for the classical Morita Gamma function."""
    return angle(morita_gamma(sharp(y, p ** precision), p, precision))


if __name__ == "__main__":
    from shintani.field.loader import load_field

    bundle = load_field("qsqrt5")
    cone = bundle.decomposition.cones[0]
    cprint("=" * 60, "cyan")
    cprint("MULTIPLE GAMMA ON Q(sqrt5), p = 3", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    for y in [(Fraction(1), Fraction(1)), (Fraction(1, 5), Fraction(2, 5)), (Fraction(3), Fraction(7))]:
        value = gamma_multiple(GammaQuery(y, 3, 4), cone, bundle.decomposition.ring)
        cprint(f"  Gamma({y[0]}, {y[1]}) = {value}", "green")
    cprint("\n✅ Gamma complete!", "green", attrs=["bold"])
