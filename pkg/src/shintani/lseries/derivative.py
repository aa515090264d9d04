#!/usr/bin/env python3
"""
Shintani - Derivatives at s = 0

The derivative of L_{p,V,x}(s, chi omega_F) at s = 0 through the multiple
Gamma function, its sum over cones and base points, and the Gamma side of
the Brumer-Stark formula.
"""

import itertools
from fractions import Fraction
from typing import Optional

from termcolor import cprint

from shintani.arith.cyclotomic import ONE, ZERO
from shintani.arith.padic import PadicNumber, iwasawa_log, padic_log
from shintani.errors import ParameterViolation, PNotInert
from shintani.field.cones import ConeContext, parallelotope_points
from shintani.field.characters import evaluate
from shintani.field.model import FieldElement, is_inert
from shintani.lseries.gamma import GammaQuery, gamma_multiple
from shintani.lseries.sums import LSeriesConfig, L_px_value0, require_assumption_op, summed_value0


class GammaLogCache:
    """log_p Gamma_V at points (x + d.v)/N to cfg.gamma_digits, computed once per point."""

    def __init__(self, cfg: LSeriesConfig):
        self.cfg = cfg
        self._values: dict[tuple[str, tuple[Fraction, ...]], PadicNumber] = {}

    def __call__(self, cone: ConeContext, y: FieldElement) -> PadicNumber:
        coords = tuple(c / self.cfg.N for c in cone.coordinates(y))
        key = (cone.label, coords)
        if key not in self._values:
            query = GammaQuery(coords, self.cfg.p, self.cfg.gamma_digits)
            gamma = gamma_multiple(query, cone, self.cfg.decomposition.ring)
            self._values[key] = padic_log(gamma)
        return self._values[key]


def _require_character(cfg: LSeriesConfig) -> None:
    if cfg.chi is None:
        raise ParameterViolation("derivatives need a character")


def gamma_term(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, logs: Optional[GammaLogCache] = None) -> PadicNumber:
    """(-1)^(k-1) sum over d in [0, N)^k of chi(x + d.v) log_p Gamma_V((x + d.v)/N)."""
    _require_character(cfg)
    assert cfg.chi is not None
    logs = logs or GammaLogCache(cfg)
    total = PadicNumber.zero(cfg.p, cfg.precision)
    for d in itertools.product(range(cfg.N), repeat=cone.k):
        y = cone.point(x, d)
        value = cfg.chi(y)
        if value == ZERO:
            continue
        total = total + cfg.embed(value) * logs(cone, y)
    return total * (-1) ** (cone.k - 1)


def derivative0(cfg: LSeriesConfig, cone: ConeContext, x: FieldElement, logs: Optional[GammaLogCache] = None) -> PadicNumber:
    """L'_{p,V,x}(0, chi omega_F) = Gamma term + k log_p(N) L_{p,V,x}(0, chi omega_F).

    Raises:
        AssumptionOpViolated: p divides [O : L_V]
        PNotInert: p is not inert in F
        InstanceTooLarge: cfg.gamma_digits is beyond Config.GAMMA_MAX_RESIDUES
        NotConverged: a Gamma value did not stabilize
    """
    _require_character(cfg)
    value0 = L_px_value0(cfg, cone, x)
    log_n = iwasawa_log(PadicNumber.from_rational(cfg.p, cfg.N, cfg.precision))
    return gamma_term(cfg, cone, x, logs) + log_n * value0 * cone.k


def global_derivative0(cfg: LSeriesConfig) -> PadicNumber:
    """L'_{F,p}(0, chi omega_F) summed over cones and base points.

    With chi(p) = 1 the values at 0 must sum to zero exactly; that is checked
    before the log_p(N) terms are dropped.
    """
    _require_character(cfg)
    assert cfg.chi is not None
    dec = cfg.decomposition
    logs = GammaLogCache(cfg)
    total = PadicNumber.zero(cfg.p, cfg.precision)
    if evaluate(cfg.chi, cfg.p) == ONE:
        if not is_inert(dec.field, cfg.p):
            raise PNotInert(cfg.p)
        vanishing = summed_value0(cfg)
        if vanishing != ZERO:
            raise ParameterViolation(f"values at s = 0 sum to {vanishing}, expected 0")
        for cone in dec.cones:
            require_assumption_op(cfg, cone)
            for x in parallelotope_points(cone, cfg.lattice):
                total = total + gamma_term(cfg, cone, x, logs)
        return total
    for cone in dec.cones:
        for x in parallelotope_points(cone, cfg.lattice):
            total = total + derivative0(cfg, cone, x, logs)
    return total


def brumer_stark_rhs(cfg: LSeriesConfig, y_residue: int) -> PadicNumber:
    """(-1)^k sum over V, x and d with x + d.v = y mod N of log_p Gamma_V((x + d.v)/N).

    Only the Gamma side is computed; an empty congruence class gives 0.
    """
    logs = GammaLogCache(cfg)
    N = cfg.N
    total = PadicNumber.zero(cfg.p, cfg.precision)
    for cone in cfg.decomposition.cones:
        require_assumption_op(cfg, cone)
        for x in parallelotope_points(cone, cfg.lattice):
            for d in itertools.product(range(N), repeat=cone.k):
                y = cone.point(x, d)
                if cfg.cn.apply(y) == y_residue % N:
                    total = total + logs(cone, y)
    return total * (-1) ** cfg.k


if __name__ == "__main__":
    from shintani.field.loader import load_field

    bundle = load_field("qsqrt5")
    cn = bundle.cn("p11")
    chi = bundle.characters(cn)[1]
    cfg = LSeriesConfig(bundle.decomposition, cn, 3, precision=3, chi=chi)
    cprint("=" * 60, "cyan")
    cprint("DERIVATIVE AT s = 0, Q(sqrt5), N over 11, p = 3", "cyan", attrs=["bold"])
    cprint("=" * 60, "cyan")
    cprint(f"  chi(3) = {evaluate(chi, 3)}", "yellow")
    cprint(f"  L'(0) = {global_derivative0(cfg)}", "green")
    cprint("\n✅ Derivative complete!", "green", attrs=["bold"])
