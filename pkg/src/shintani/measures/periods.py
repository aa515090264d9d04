#!/usr/bin/env python3
"""
Shintani - Measure Periods

Closed-form periods of the measures attached to a cone V, a base point x and
either an integral ideal N (the zeta measure) or a Hecke character chi of
nontrivial narrow modulus (the Dirichlet measure). A period is the value of
a measure on a cylinder x + l*v + p^n O_{V,p}.

Character sums are first collected as exact rational weights per residue
class of N, then paired with the character table once.
"""

import itertools
from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property, lru_cache
from math import comb, prod
from typing import Iterable, Optional, Sequence, Union

from sympy import Poly, Symbol, binomial, cancel, expand_func, isprime
from termcolor import cprint

from shintani.arith.cyclotomic import ZERO, CycloValue
from shintani.arith.padic import check_prime, valuation
from shintani.arith.polynomials import PolynomialU
from shintani.arith.ratfunc import RationalFunctionU, taylor_at_one
from shintani.errors import LevelNotOneModN, ParameterViolation
from shintani.field.characters import HeckeCharacter
from shintani.field.cones import ConeContext
from shintani.field.model import CNResidueMap, FieldElement, flat, to_fraction

Period = Union[Fraction, CycloValue]

_X = Symbol("X")


# =============================================================================
# MEASURE DESCRIPTIONS
# =============================================================================

class MeasureKind(str, Enum):
    ZETA = "zeta"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True, eq=False)
class MeasureSpec:
    """The measure mu_{V,x,N} (zeta) or mu_{V,x,chi} (dirichlet) on O_{V,p}."""

    kind: MeasureKind
    cone: ConeContext
    cn: CNResidueMap
    x: FieldElement
    p: int
    chi: Optional[HeckeCharacter] = None

    def __post_init__(self):
        check_prime(self.p)
        if not isprime(self.p) or self.cn.modulus % self.p == 0:
            raise ParameterViolation(f"p = {self.p} must be a prime not dividing N = {self.cn.modulus}")
        self.cn.apply(self.x)
        if self.kind is MeasureKind.DIRICHLET:
            if self.chi is None:
                raise ParameterViolation("a Dirichlet measure needs a character")
            if self.chi.modulus != self.cn.modulus:
                raise ParameterViolation("character modulus differs from the CN map")
            self.chi.require_nontrivial()

    @classmethod
    def zeta(cls, cone: ConeContext, cn: CNResidueMap, x: FieldElement, p: int) -> "MeasureSpec":
        return cls(MeasureKind.ZETA, cone, cn, x, p)

    @classmethod
    def dirichlet(cls, cone: ConeContext, chi: HeckeCharacter, x: FieldElement, p: int) -> "MeasureSpec":
        return cls(MeasureKind.DIRICHLET, cone, chi.cn, x, p, chi)

    @property
    def k(self) -> int:
        return self.cone.k

    @property
    def N(self) -> int:
        return self.cn.modulus

    @cached_property
    def residues(self) -> tuple[int, ...]:
        return self.cone.residues(self.cn)

    @cached_property
    def x_coords(self) -> tuple[Fraction, ...]:
        return self.cone.coordinates(self.x)

    @cached_property
    def rho_x(self) -> int:
        return self.cn.apply(self.x)

    @cached_property
    def t(self) -> int:
        """Least t >= 0 with x in p^-t O_{V,p}."""
        return max([0] + [-valuation(c, self.p) for c in self.x_coords if c])

    def residue_at(self, offsets: Sequence[int]) -> int:
        """rho(x + sum offsets_i v_i) mod N."""
        return (self.rho_x + sum(o * r for o, r in zip(offsets, self.residues))) % self.N


@dataclass(frozen=True)
class PeriodQuery:
    """The cylinder x + l*v + p^n O_{V,p}, 0 <= l_i < p^n."""

    l: tuple[int, ...]
    n: int

    def check(self, spec: MeasureSpec) -> None:
        pn = spec.p ** self.n
        if self.n < 0 or len(self.l) != spec.k or any(not 0 <= li < pn for li in self.l):
            raise ParameterViolation(f"query {self} out of range for p^n = {pn}")


def _pair(chi: HeckeCharacter, weights: dict[int, Fraction]) -> CycloValue:
    total = ZERO
    for r, w in sorted(weights.items()):
        if w:
            total = total + chi.at_residue(r) * w
    return total


def _pn_inverse(p: int, n: int, N: int) -> int:
    return pow(p ** n, -1, N)


# =============================================================================
# H_V AND THE ZETA COEFFICIENTS
# =============================================================================

@lru_cache(maxsize=None)
def h_table(residues: tuple[int, ...], N: int) -> tuple[int, ...]:
    """table[r] = sum of d_1...d_k over 1 <= d_i < N with sum d_i rho(v_i) = -r mod N."""
    table = [0] * N
    for d in itertools.product(range(1, N), repeat=len(residues)):
        s = sum(di * ri for di, ri in zip(d, residues)) % N
        table[-s % N] += prod(d)
    return tuple(table)


def H_V(cone: ConeContext, cn: CNResidueMap, y: Union[FieldElement, int]) -> int:
    """Sum of d_1...d_k over 1 <= d_i < N with d.v = -y mod N.

    The last coordinate is solved through rho(v_k)^-1.
    """
    N = cn.modulus
    residues = cone.residues(cn)
    target = (-(cn.apply(y) if isinstance(y, FieldElement) else y)) % N
    inv_last = pow(residues[-1], -1, N)
    total = 0
    for head in itertools.product(range(1, N), repeat=len(residues) - 1):
        s = sum(d * r for d, r in zip(head, residues))
        last = (target - s) * inv_last % N
        if last:
            total += prod(head) * last
    return total


def coeff_a_VN(cone: ConeContext, cn: CNResidueMap, y: Union[FieldElement, int]) -> Fraction:
    """a_{V,N}(y) = (-1)^(k-1) H_V(y) / N^(k-1)."""
    k = cone.k
    return Fraction((-1) ** (k - 1) * H_V(cone, cn, y), cn.modulus ** (k - 1))


@lru_cache(maxsize=None)
def b_coefficients(N: int, k: int) -> tuple[Fraction, ...]:
    """b_0..b_k with N^k ((1-u)/(1-u^N))^k = sum b_i (u-1)^i + O((u-1)^(k+1))."""
    if N < 2:
        raise ParameterViolation(f"N must exceed 1, got {N}")
    f = RationalFunctionU(PolynomialU.one_minus_power(1, k) * N ** k, PolynomialU.one_minus_power(N, k))
    return tuple(c.rational_value() for c in taylor_at_one(f, k))


def residue_box(residues: Sequence[int], N: int, target: int) -> Iterable[tuple[int, ...]]:
    """R(y, N): z in [0, N)^k with sum z_i rho(v_i) = target mod N."""
    inv_last = pow(residues[-1], -1, N)
    for head in itertools.product(range(N), repeat=len(residues) - 1):
        s = sum(z * r for z, r in zip(head, residues))
        yield head + ((target - s) * inv_last % N,)


# =============================================================================
# CLOSED-FORM POLYNOMIALS P_i
# =============================================================================

def _compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    for c in itertools.product(range(total + 1), repeat=parts):
        if sum(c) == total:
            yield c


@lru_cache(maxsize=None)
def lemma33_P(i: int, k: int) -> Poly:
    """P_i(X) = (1/X) sum over i_1+..+i_k = i of prod binom(X, i_j + 1).

    For i = k the all-ones composition is left out (it carries the H_V term).
    """
    if not 0 <= i <= k:
        raise ParameterViolation(f"need 0 <= i <= k, got i = {i}, k = {k}")
    total = 0
    for c in _compositions(i, k):
        if i == k and all(c):
            continue
        total += prod(expand_func(binomial(_X, cj + 1)) for cj in c)
    return Poly(cancel(total / _X), _X, domain="QQ")


def p_value(i: int, k: int, N: int) -> Fraction:
    return to_fraction(lemma33_P(i, k).eval(N))


def lemma33_check(i: int, k: int, N: int, residues: Sequence[int], y: int) -> bool:
    """sum over R(y, N) of binom(z~, i), less the product sum when i = k, equals P_i(N)."""
    residues = tuple(residues)
    lhs = sum(comb(sum(z), i) for z in residue_box(residues, N, y % N))
    if i == k:
        lhs -= h_table(residues, N)[-y % N]
    return Fraction(lhs) == p_value(i, k, N)


# =============================================================================
# ZETA PERIODS
# =============================================================================

def _scaled_residue(spec: MeasureSpec, q: PeriodQuery) -> int:
    """rho((x + l.v) / p^n) mod N."""
    return spec.residue_at(q.l) * _pn_inverse(spec.p, q.n, spec.N) % spec.N


def period_zeta(spec: MeasureSpec, q: PeriodQuery) -> Fraction:
    """mu(x + l.v + p^n O) = (-1)^k [H_V((x + l.v)/p^n) / N^(k-1) - ((N-1)/2)^k]."""
    q.check(spec)
    k, N = spec.k, spec.N
    h = h_table(spec.residues, N)[_scaled_residue(spec, q)]
    return (-1) ** k * (Fraction(h, N ** (k - 1)) - Fraction(N - 1, 2) ** k)


def period_zeta_expanded(spec: MeasureSpec, q: PeriodQuery) -> Fraction:
    """((-1)^k / N^(k-1)) sum over z in R(-y/p^n, N) of sum_i b_i binom(z~, k-i)."""
    q.check(spec)
    k, N = spec.k, spec.N
    b = b_coefficients(N, k)
    target = -_scaled_residue(spec, q) % N
    total = Fraction(0)
    for z in residue_box(spec.residues, N, target):
        zt = sum(z)
        total += sum((b[i] * comb(zt, k - i) for i in range(k + 1)), Fraction(0))
    return (-1) ** k * total / N ** (k - 1)


def telescoping_check(cone: ConeContext, cn: CNResidueMap, x: FieldElement, q: int) -> bool:
    """sum over l in [0, q)^k of H_V(x + l.v), less H_V(x), equals N^(k-1) ((N-1)/2)^k (q^k - 1).

    q must be 1 mod N.
    """
    N, k = cn.modulus, cone.k
    if q % N != 1:
        raise LevelNotOneModN(q, N)
    residues = cone.residues(cn)
    table = h_table(residues, N)
    rho_x = cn.apply(x)
    counts = [(q - r + N - 1) // N for r in range(N)]
    total = 0
    for rs in itertools.product(range(N), repeat=k):
        weight = prod(counts[r] for r in rs)
        total += weight * table[(rho_x + sum(r * v for r, v in zip(rs, residues))) % N]
    total -= table[rho_x % N]
    return Fraction(total) == N ** (k - 1) * Fraction(N - 1, 2) ** k * (q ** k - 1)


# =============================================================================
# DIRICHLET PERIODS
# =============================================================================

def _require_dirichlet(spec: MeasureSpec) -> HeckeCharacter:
    if spec.kind is not MeasureKind.DIRICHLET or spec.chi is None:
        raise ParameterViolation("a Dirichlet measure is required")
    return spec.chi


def period_chi(spec: MeasureSpec, q: PeriodQuery) -> CycloValue:
    """(-1)^k N^-k sum over d in [0, N)^k of chi(x + (l + p^n d).v) prod d_i."""
    chi = _require_dirichlet(spec)
    q.check(spec)
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    weights: dict[int, Fraction] = defaultdict(Fraction)
    for d in itertools.product(range(N), repeat=k):
        w = prod(d)
        if w:
            weights[spec.residue_at([li + pn * di for li, di in zip(q.l, d)])] += w
    return _pair(chi, weights) * Fraction((-1) ** k, N ** k)


def period_chi_intermediate(spec: MeasureSpec, q: PeriodQuery) -> CycloValue:
    """(-1)^k N^-k sum over d of chi(x + d.v) prod ((d_i - l_i)/p^n) flat N."""
    chi = _require_dirichlet(spec)
    q.check(spec)
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    weights: dict[int, Fraction] = defaultdict(Fraction)
    for d in itertools.product(range(N), repeat=k):
        w = prod(flat(Fraction(di - li, pn), N) for di, li in zip(d, q.l))
        if w:
            weights[spec.residue_at(d)] += w
    return _pair(chi, weights) * Fraction((-1) ** k, N ** k)


def period_chi_q(spec: MeasureSpec, q: PeriodQuery) -> CycloValue:
    """The subset form, valid when p^n = 1 mod N.

    Raises:
        LevelNotOneModN: p^n is not 1 mod N
    """
    chi = _require_dirichlet(spec)
    q.check(spec)
    k, N, pn = spec.k, spec.N, spec.p ** q.n
    if pn % N != 1 % N:
        raise LevelNotOneModN(pn, N)
    weights: dict[int, Fraction] = defaultdict(Fraction)
    for S in itertools.product((True, False), repeat=k):
        ranges = [range(N) if in_s else range(q.l[i]) for i, in_s in enumerate(S)]
        scale = Fraction(1, N ** sum(S))
        for d in itertools.product(*ranges):
            w = prod(di for di, in_s in zip(d, S) if in_s)
            if w:
                weights[spec.residue_at(d)] += w * scale
    return _pair(chi, weights) * (-1) ** k


def _flat_p_integral(c: Fraction, p: int, n: int) -> int:
    """c flat p^n, zero when c is not p-integral."""
    if c.denominator % p == 0:
        return 0
    return flat(c, p ** n)


def omega_S(spec: MeasureSpec, a: FieldElement, n: int, S: Iterable[int]) -> CycloValue:
    """The S-piece of the period at a + p^n O_{V,p}; S holds 0-based coordinate indices."""
    chi = _require_dirichlet(spec)
    k, N, p = spec.k, spec.N, spec.p
    S = frozenset(S)
    a_coords = spec.cone.coordinates(a)
    x_coords = spec.x_coords
    for i in S:
        if (x_coords[i] - a_coords[i]).denominator % p == 0:
            return ZERO
    weights: dict[int, Fraction] = defaultdict(Fraction)
    for d in itertools.product(range(N), repeat=k):
        w = Fraction(1)
        for i in range(k):
            if i in S:
                w *= (x_coords[i] + d[i]) / N
            else:
                w *= _flat_p_integral((a_coords[i] - x_coords[i] - d[i]) / N, p, n)
            if not w:
                break
        if w:
            weights[spec.residue_at(d)] += w
    return _pair(chi, weights) * Fraction((-1) ** k, p ** (n * k))


def omega_total(spec: MeasureSpec, a: FieldElement, n: int) -> CycloValue:
    """Sum of omega_S over all subsets S."""
    total = ZERO
    for size in range(spec.k + 1):
        for S in itertools.combinations(range(spec.k), size):
            total = total + omega_S(spec, a, n, S)
    return total


# =============================================================================
# DISPATCH AND ADDITIVITY
# =============================================================================

def period(spec: MeasureSpec, q: PeriodQuery) -> Period:
    if spec.kind is MeasureKind.ZETA:
        return period_zeta(spec, q)
    return period_chi(spec, q)


def children_sum(spec: MeasureSpec, q: PeriodQuery) -> Period:
    """Sum of the periods of the p^k children x + (l + p^n c).v + p^(n+1) O."""
    pn = spec.p ** q.n
    total: Period = Fraction(0) if spec.kind is MeasureKind.ZETA else ZERO
    for c in itertools.product(range(spec.p), repeat=spec.k):
        child = PeriodQuery(tuple(li + pn * ci for li, ci in zip(q.l, c)), q.n + 1)
        total = total + period(spec, child)
    return total


if __name__ == "__main__":
    from shintani.field.loader import load_field

    bundle = load_field("qsqrt5")
    cone = bundle.decomposition.cones[0]
    cn = bundle.cn("sqrt5")
    one = bundle.field.unit_element()
    chi = bundle.characters(cn)[1]

    cprint("=" * 60, "cyan")
    cprint("PERIODS ON Q(sqrt5), N = (sqrt5), p = 3", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    zeta = MeasureSpec.zeta(cone, cn, one, 3)
    dirichlet = MeasureSpec.dirichlet(cone, chi, one, 3)
    for l in itertools.product(range(3), repeat=2):
        q = PeriodQuery(l, 1)
        cprint(f"  l = {l}: zeta {period_zeta(zeta, q)}, chi {period_chi(dirichlet, q)}", "green")
    cprint("\n✅ Periods complete!", "green", attrs=["bold"])
