#!/usr/bin/env python3
"""
Shintani - Sum Expressions

Truncated sum expressions for p-adic Hecke L-functions:

    zeta mode       S_n = sum_V sum_x sum_l a_{V,N}(y) psi omega_F^e(y) <Nm y>^-s
    dirichlet mode  S_n = (-1)^k sum_V sum_x sum_l sum_{d < l mod N} chi(x + d.v) psi(y) <Nm y>^-s

with y = x + l.v, 0 <= l_i < q^n and y prime to p. A summand depends on l
only through l mod N, l mod p^t (psi) and l mod p^j (the weight at working
precision), so the loop runs over residue classes weighted by exact class
counts whenever that is cheaper than enumerating points.
"""

import itertools
import time
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm, prod
from typing import Optional, Union

from sympy import isprime
from sympy.ntheory import n_order
from termcolor import cprint

from shintani.arith.cyclotomic import ZERO, CycloValue
from shintani.arith.padic import PadicNumber, check_prime, embed_cyclo, power, teichmuller, valuation
from shintani.config import Config
from shintani.errors import AssumptionOpViolated, PNotInert, ParameterViolation, PsiLevelUnsupported
from shintani.field.characters import HeckeCharacter, PsiCharacter, evaluate
from shintani.field.cones import ConeContext, Decomposition, IdealLattice, parallelotope_points, tau_p_inv
from shintani.field.model import CNResidueMap, FieldElement, is_inert
from shintani.measures.periods import h_table
from shintani.utils import parallel_map

PadicExponent = Union[int, Fraction, PadicNumber]


# =============================================================================
# CONFIGURATION AND REPORTS
# =============================================================================

@dataclass(frozen=True, eq=False)
class LSeriesConfig:
    """One sum-expression setting: decomposition, CN map, p, precision and characters.

    chi None selects zeta mode. denominator is the h of base points
    x = (c/h).v; q is the least power of p with q = 1 mod N*h.
    Derivatives evaluate Gamma_V to gamma_digits, which stays bounded
    while precision only drives the sum expressions.
    """

    decomposition: Decomposition
    cn: CNResidueMap
    p: int
    precision: int = Config.DEFAULT_PRECISION
    chi: Optional[HeckeCharacter] = None
    psi: Optional[PsiCharacter] = None
    omega_power: int = -1
    root_index: int = 1
    denominator: int = 1
    gamma_precision: Optional[int] = None

    def __post_init__(self):
        check_prime(self.p)
        if not isprime(self.p) or self.cn.modulus % self.p == 0:
            raise ParameterViolation(f"p = {self.p} must be an odd prime not dividing N = {self.cn.modulus}")
        if gcd(self.denominator, self.p * self.cn.modulus) != 1:
            raise ParameterViolation(f"denominator {self.denominator} must be prime to N p")
        if self.gamma_precision is not None and self.gamma_precision < 1:
            raise ParameterViolation(f"gamma_precision must be >= 1, got {self.gamma_precision}")
        if self.psi is None:
            object.__setattr__(self, "psi", PsiCharacter.trivial(self.p))
        if self.psi.p != self.p:
            raise PsiLevelUnsupported(f"psi has level {self.psi.p}^{self.psi.t}, expected a power of {self.p}")
        if self.psi.t > self.precision:
            raise PsiLevelUnsupported(f"psi level {self.p}^{self.psi.t} exceeds the working precision")
        if len(self.decomposition.ideals) != 1:
            raise ParameterViolation("sum expressions are implemented for narrow class number one")
        if self.chi is not None:
            if self.chi.modulus != self.cn.modulus:
                raise ParameterViolation("character modulus differs from the CN map")
            self.chi.require_nontrivial()

    @property
    def N(self) -> int:
        return self.cn.modulus

    @property
    def k(self) -> int:
        return self.decomposition.field.degree

    @property
    def is_zeta(self) -> bool:
        return self.chi is None

    @property
    def lattice(self) -> IdealLattice:
        return self.decomposition.ideals[0]

    @cached_property
    def q(self) -> int:
        return self.p ** n_order(self.p, self.N * self.denominator)

    @property
    def gamma_digits(self) -> int:
        if self.gamma_precision is not None:
            return self.gamma_precision
        return min(self.precision, Config.GAMMA_PRECISION)

    def embed(self, value: CycloValue) -> PadicNumber:
        return embed_cyclo(value, self.p, self.precision, self.root_index)


@dataclass
class TruncationReport:
    """S_n with its distance to S_(n-1)."""

    level: int
    value: PadicNumber
    distance: Optional[int]
    terms: int
    elapsed_ms: float

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "value": self.value.to_json(),
            "distance_to_previous": self.distance,
            "terms": self.terms,
            "runtime_ms": round(self.elapsed_ms, 3),
        }


# =============================================================================
# SUMMANDS
# =============================================================================

def _exponent_valuation(s: PadicExponent, p: int) -> Optional[int]:
    """v_p(s), None for s = 0."""
    if isinstance(s, PadicNumber):
        return None if s.is_zero() else s.valuation
    return valuation(s, p) if s else None


def class_digits(cfg: LSeriesConfig, s: PadicExponent) -> int:
    """j with the weight <Nm y>^-s mod p^W depending only on y mod p^j."""
    vs = _exponent_valuation(s, cfg.p)
    weight_digits = 0 if vs is None else cfg.precision - vs
    return max(1, cfg.psi.t, weight_digits)


def _coefficients(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement) -> dict[tuple[int, ...], PadicNumber]:
    """Coefficient of the summand at l, keyed by l mod N."""
    N, k, p, W = cfg.N, cone.k, cfg.p, cfg.precision
    residues = cone.residues(cfg.cn)
    rho_x = cfg.cn.apply(x)
    out = {}
    if cfg.is_zeta:
        table = h_table(residues, N)
        sign = (-1) ** (k - 1)
        for r in itertools.product(range(N), repeat=k):
            rho = (rho_x + sum(a * b for a, b in zip(r, residues))) % N
            out[r] = PadicNumber.from_rational(p, Fraction(sign * table[rho], N ** (k - 1)), W)
        return out
    assert cfg.chi is not None
    embedded: dict[CycloValue, PadicNumber] = {}
    for r in itertools.product(range(N), repeat=k):
        counts: dict[int, int] = defaultdict(int)
        for d in itertools.product(*(range(ri) for ri in r)):
            counts[(rho_x + sum(a * b for a, b in zip(d, residues))) % N] += 1
        value = ZERO
        for rho, c in sorted(counts.items()):
            value = value + cfg.chi.at_residue(rho) * c
        value = value * (-1) ** k
        if value not in embedded:
            embedded[value] = cfg.embed(value)
        out[r] = embedded[value]
    return out


def summand_weight(cfg: LSeriesConfig, y: FieldElement, s: PadicExponent) -> Optional[PadicNumber]:
    """psi omega_F^e(y) <Nm y>^-s, or None when y is not prime to p."""
    p, W = cfg.p, cfg.precision
    nm = PadicNumber.from_rational(p, y.norm(), W)
    if not nm.is_unit():
        return None
    weight = power(nm, s)
    if cfg.is_zeta and cfg.omega_power:
        weight = weight * teichmuller(nm, p, W) ** cfg.omega_power
    if not cfg.psi.is_trivial():
        weight = weight * cfg.embed(cfg.psi(y))
    return weight


@dataclass(frozen=True, eq=False)
class _RowTask:
    cfg: LSeriesConfig
    cone: ConeContext
    x: FieldElement
    s: PadicExponent
    coefficients: dict[tuple[int, ...], PadicNumber]
    modulus: int
    span: int
    first: int


def _class_count(span: int, modulus: int, r: int) -> int:
    """#{0 <= l < span : l = r mod modulus}."""
    return (span - r + modulus - 1) // modulus


def _row_sum(task: _RowTask) -> tuple[PadicNumber, int]:
    cfg, cone, N = task.cfg, task.cone, task.cfg.N
    total = PadicNumber.zero(cfg.p, cfg.precision)
    terms = 0
    first_count = _class_count(task.span, task.modulus, task.first)
    for rest in itertools.product(range(min(task.modulus, task.span)), repeat=cone.k - 1):
        offsets = (task.first,) + rest
        weight = summand_weight(cfg, cone.point(task.x, offsets), task.s)
        if weight is None:
            continue
        count = first_count * prod(_class_count(task.span, task.modulus, r) for r in rest)
        terms += count
        coef = task.coefficients[tuple(o % N for o in offsets)]
        if not coef.is_zero():
            total = total + coef * weight * count
    return total, terms


def piece_sum(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, s: PadicExponent, n: int) -> tuple[PadicNumber, int]:
    """sum over 0 <= l < q^n, x + l.v prime to p, of coefficient times weight; returns (value, terms)."""
    span = cfg.q ** n
    modulus = lcm(cfg.N, cfg.p ** class_digits(cfg, s))
    if modulus >= span:
        modulus = span
        if span ** cone.k > Config.DIRECT_ENUMERATION_LIMIT:
            cprint(f"  Warning: enumerating {span ** cone.k} points directly", "yellow")
    coefficients = _coefficients(cfg, cone, x)
    tasks = [_RowTask(cfg, cone, x, s, coefficients, modulus, span, first) for first in range(modulus)]
    total = PadicNumber.zero(cfg.p, cfg.precision)
    terms = 0
    for value, count in parallel_map(_row_sum, tasks):
        total = total + value
        terms += count
    return total, terms


# =============================================================================
# SUM EXPRESSIONS
# =============================================================================

def _sum_expression(cfg: LSeriesConfig, s: PadicExponent, n: int) -> TruncationReport:
    start = time.perf_counter()
    dec = cfg.decomposition
    total = PadicNumber.zero(cfg.p, cfg.precision)
    terms = 0
    for cone in dec.cones:
        for x in parallelotope_points(cone, cfg.lattice):
            value, count = piece_sum(cfg, cone, x, s, n)
            total = total + value
            terms += count
    return TruncationReport(n, total, None, terms, (time.perf_counter() - start) * 1000)


def _require_level(n: int) -> None:
    if n < 1:
        raise ParameterViolation(f"truncation level must be at least 1, got {n}")


def sum_expr_zeta(cfg: LSeriesConfig, s: PadicExponent, n: int) -> TruncationReport:
    """S_n approximating (1 - psi(N)<N>^(1-s)) L_{F,p}(s, psi), weights psi omega_F^omega_power."""
    if not cfg.is_zeta:
        raise ParameterViolation("sum_expr_zeta needs a configuration without a character")
    _require_level(n)
    return _sum_expression(cfg, s, n)


def sum_expr_chi(cfg: LSeriesConfig, s: PadicExponent, n: int) -> TruncationReport:
    """S_n approximating L_{F,p}(s, chi psi omega_F)."""
    if cfg.is_zeta:
        raise ParameterViolation("sum_expr_chi needs a character")
    _require_level(n)
    return _sum_expression(cfg, s, n)


def truncation_series(cfg: LSeriesConfig, s: PadicExponent, levels: int) -> list[TruncationReport]:
    """S_0..S_levels with v_p(S_n - S_(n-1))."""
    reports: list[TruncationReport] = []
    for n in range(levels + 1):
        report = _sum_expression(cfg, s, n)
        if reports:
            report.distance = report.value.distance(reports[-1].value)
        reports.append(report)
    return reports


# =============================================================================
# SINGLE (V, x) FUNCTIONS AND VALUES AT s = 0
# =============================================================================

def require_assumption_op(cfg: LSeriesConfig, cone: ConeContext) -> None:
    """O_p = O_{V,p}, i.e. p does not divide [O : L_V]."""
    index = cone.lattice_index(cfg.decomposition.ring)
    if index % cfg.p == 0:
        raise AssumptionOpViolated(f"p = {cfg.p} divides [O : L_{cone.label}] = {index}")


def L_px_sum(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, s: PadicExponent, n: int) -> TruncationReport:
    """Truncation of L_{p,V,x}(s, chi psi omega_F)."""
    if cfg.is_zeta:
        raise ParameterViolation("L_{p,V,x} needs a character")
    require_assumption_op(cfg, cone)
    _require_level(n)
    start = time.perf_counter()
    value, terms = piece_sum(cfg, cone, x, s, n)
    return TruncationReport(n, value, None, terms, (time.perf_counter() - start) * 1000)


def special_value_complex0(cone: ConeContext, x: FieldElement, chi: HeckeCharacter) -> CycloValue:
    """L_{V,x}(0, chi) = (-1)^k N^-k sum over d in [0, N)^k of chi(x + d.v) prod d_i."""
    chi.require_nontrivial()
    N, k = chi.modulus, cone.k
    residues = cone.residues(chi.cn)
    rho_x = chi.cn.apply(x)
    weights: dict[int, int] = defaultdict(int)
    for d in itertools.product(range(N), repeat=k):
        w = prod(d)
        if w:
            weights[(rho_x + sum(a * b for a, b in zip(d, residues))) % N] += w
    total = ZERO
    for rho, w in sorted(weights.items()):
        total = total + chi.at_residue(rho) * w
    return total * Fraction((-1) ** k, N ** k)


def interpolation_value0(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement) -> CycloValue:
    """L_{p,V,x}(0, chi omega_F) = L_{V,x}(0, chi) - chi(p) L_{V, tau_p^-1 x}(0, chi), exactly.

    Raises:
        AssumptionOpViolated: p divides [O : L_V]
        PNotInert: p is not inert in F
    """
    if cfg.chi is None:
        raise ParameterViolation("values at s = 0 need a character")
    require_assumption_op(cfg, cone)
    if not is_inert(cfg.decomposition.field, cfg.p):
        raise PNotInert(cfg.p)
    chi = cfg.chi
    shifted = tau_p_inv(cone, cfg.lattice, x, cfg.p)
    return special_value_complex0(cone, x, chi) - evaluate(chi, cfg.p) * special_value_complex0(cone, shifted, chi)


def L_px_value0(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement) -> PadicNumber:
    """interpolation_value0 mapped into Q_p."""
    return cfg.embed(interpolation_value0(cfg, cone, x))


def summed_value0(cfg: LSeriesConfig) -> CycloValue:
    """sum over V and x of L_{p,V,x}(0, chi omega_F)."""
    total = ZERO
    for cone in cfg.decomposition.cones:
        for x in parallelotope_points(cone, cfg.lattice):
            total = total + interpolation_value0(cfg, cone, x)
    return total


# =============================================================================
# LINE SUMS
# =============================================================================

def lemma45_sum(
    a: FieldElement,
    v: FieldElement,
    psi: PsiCharacter,
    s: PadicExponent,
    n: int,
    precision: int,
    include_divisible: bool = False,
) -> PadicNumber:
    """sum over 0 <= m < p^n with a + m v prime to p of psi(a + m v) <Nm(a + m v)>^-s.

    include_divisible adds psi(a + m v) for the points divisible by p.
    """
    p = psi.p
    total = PadicNumber.zero(p, precision)
    for m in range(p ** n):
        y = a + v * m
        nm = PadicNumber.from_rational(p, y.norm(), precision)
        if nm.is_unit():
            term = power(nm, s)
        elif include_divisible:
            term = PadicNumber.one(p, precision)
        else:
            continue
        if not psi.is_trivial():
            term = term * embed_cyclo(psi(y), p, precision)
        total = total + term
    return total


def lemma45_check(
    a: FieldElement,
    v: FieldElement,
    psi: PsiCharacter,
    s: PadicExponent,
    n: int,
    precision: Optional[int] = None,
) -> bool:
    """The line sum vanishes modulo p^(n - t), with t at least 1."""
    t = max(1, psi.t)
    if n < t:
        raise ParameterViolation(f"need n >= t = {t}, got n = {n}")
    precision = max(precision or Config.DEFAULT_PRECISION, n)
    return lemma45_sum(a, v, psi, s, n, precision).congruent(0, n - t)


if __name__ == "__main__":
    from shintani.field.loader import load_field

    bundle = load_field("qsqrt5")
    cn = bundle.cn("sqrt5")
    chi = bundle.characters(cn)[1]
    cfg = LSeriesConfig(bundle.decomposition, cn, 3, chi=chi)
    cone = bundle.decomposition.cones[0]
    one = bundle.field.unit_element()

    cprint("=" * 60, "cyan")
    cprint(f"SUM EXPRESSION ON {bundle.field.name}, p = 3, q = {cfg.q}", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    cprint(f"  L_p,V,1(0) closed form: {interpolation_value0(cfg, cone, one)}", "yellow")
    for report in truncation_series(cfg, 0, 2):
        cprint(f"  S_{report.level} = {report.value}  (distance {report.distance}, {report.terms} terms)", "green")
    cprint("\n✅ Sum expression complete!", "green", attrs=["bold"])
