#!/usr/bin/env python3
"""
Shintani - Verification Suites

Each suite turns a manifest into a list of checks. Randomized instances come
from numpy generators seeded by (manifest seed, suite position), so a
manifest always produces the same checks. Suites run in a process pool when
SHINTANI_WORKERS > 1; the report lists them in name order.
"""

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Callable

import numpy as np
from termcolor import cprint

from shintani.arith.cyclotomic import ONE, ZERO
from shintani.arith.padic import PadicNumber
from shintani.cli.manifest import SUITES, InstanceSpec, RunManifest
from shintani.cli.reports import Check, Report
from shintani.config import Config
from shintani.errors import InstanceTooLarge, ShintaniError
from shintani.field.characters import evaluate
from shintani.field.cones import parallelotope_points
from shintani.field.loader import FieldBundle, load_field
from shintani.field.model import flat, is_inert
from shintani.lseries.derivative import brumer_stark_rhs, derivative0, global_derivative0
from shintani.lseries.gamma import GammaQuery, gamma_multiple, morita_angle
from shintani.lseries.identities import (
    curious_grid,
    curious_sum,
    fg_grid,
    fg_map,
    fg_product_check,
    fg_sets,
    lemma52_sums,
    zero_sum_identity,
)
from shintani.lseries.sums import (
    LSeriesConfig,
    L_px_sum,
    L_px_value0,
    interpolation_value0,
    special_value_complex0,
    truncation_series,
)
from shintani.measures.oracle import closed_form_xi, oracle_period, oracle_period_xi
from shintani.measures.periods import (
    MeasureSpec,
    PeriodQuery,
    children_sum,
    lemma33_check,
    omega_total,
    period,
    period_chi,
    period_chi_intermediate,
    period_zeta,
    period_zeta_expanded,
    telescoping_check,
)
from shintani.utils import parallel_map

SuiteFn = Callable[[RunManifest, np.random.Generator], list[Check]]


@lru_cache(maxsize=None)
def _bundle(name: str) -> FieldBundle:
    return load_field(name)


def _guarded(suite: str, name: str, fn: Callable[[], Check]) -> Check:
    """Run one check; a library error becomes a failed check instead of stopping the suite."""
    try:
        return fn()
    except ShintaniError as e:
        return Check.failure(suite, name, e)


def _pick(rng: np.random.Generator, items: list):
    return items[int(rng.integers(len(items)))]


def _setting(instance: InstanceSpec):
    bundle = _bundle(instance.field)
    cn = bundle.cn(instance.cn)
    return bundle, cn, bundle.characters(cn)


def _config(instance: InstanceSpec, index: int, precision: int) -> LSeriesConfig:
    bundle, cn, chars = _setting(instance)
    return LSeriesConfig(bundle.decomposition, cn, instance.p, precision=precision, chi=chars[index])


def _random_points(rng: np.random.Generator, instance: InstanceSpec, count: int):
    """(cone, x, l, n) draws with n in {0, 1}."""
    bundle, _, _ = _setting(instance)
    dec = bundle.decomposition
    out = []
    for _ in range(count):
        cone = _pick(rng, list(dec.cones))
        x = _pick(rng, parallelotope_points(cone, dec.ideals[0]))
        n = int(rng.integers(2))
        l = tuple(int(v) for v in rng.integers(instance.p ** n, size=cone.k))
        out.append((cone, x, l, n))
    return out


# =============================================================================
# MEASURES
# =============================================================================

def suite_periods(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    rationals = _bundle("rationals")
    line = rationals.decomposition.cones[0]
    zero = rationals.field.zero()
    for p in (3, 5, 7):
        for cn in rationals.cn_maps.values():
            N = cn.modulus
            if N % p == 0:
                continue

            def kubota_leopoldt(p=p, cn=cn, N=N) -> Check:
                spec = MeasureSpec.zeta(line, cn, zero, p)
                bad = [
                    (a, n)
                    for n in range(4)
                    for a in range(p ** n)
                    if period_zeta(spec, PeriodQuery((a,), n))
                    != -flat(Fraction(-a, p ** n), N) + Fraction(N - 1, 2)
                ]
                return Check.make("periods", f"kubota_leopoldt p={p} N={N}", not bad, mismatches=bad[:5])

            checks.append(_guarded("periods", f"kubota_leopoldt p={p} N={N}", kubota_leopoldt))

    for instance in manifest.instances:
        bundle, cn, chars = _setting(instance)
        for i, (cone, x, l, n) in enumerate(_random_points(rng, instance, 6)):
            q = PeriodQuery(l, n)
            name = f"{instance.name} zeta #{i}"

            def zeta_forms(cone=cone, x=x, q=q, name=name) -> Check:
                spec = MeasureSpec.zeta(cone, cn, x, instance.p)
                value = period_zeta(spec, q)
                ok = value == period_zeta_expanded(spec, q) and value == children_sum(spec, q)
                return Check.make("periods", name, ok, l=list(q.l), n=q.n, value=value)

            checks.append(_guarded("periods", name, zeta_forms))
            for index, chi in enumerate(chars):
                if not chi.nontrivial_narrow_modulus:
                    continue
                name_chi = f"{instance.name} chi{index} #{i}"

                def chi_forms(cone=cone, x=x, q=q, chi=chi, name=name_chi) -> Check:
                    spec = MeasureSpec.dirichlet(cone, chi, x, instance.p)
                    value = period_chi(spec, q)
                    ok = value == period_chi_intermediate(spec, q) and value == children_sum(spec, q)
                    return Check.make("periods", name, ok, l=list(q.l), n=q.n, value=value)

                checks.append(_guarded("periods", name_chi, chi_forms))

        cone = bundle.decomposition.cones[0]
        for x in parallelotope_points(cone, bundle.decomposition.ideals[0]):
            q_level = LSeriesConfig(bundle.decomposition, cn, instance.p).q
            name = f"{instance.name} telescoping x={x}"
            checks.append(_guarded(
                "periods", name,
                lambda x=x, q_level=q_level, name=name: Check.make(
                    "periods", name, telescoping_check(cone, cn, x, q_level), q=q_level
                ),
            ))
    return checks


def suite_oracles(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    """Closed-form periods against the Abel-limit oracle on random small instances."""
    settings = [("rationals", name) for name in ("mod3", "mod5", "mod7", "mod11")]
    settings += sorted({(i.field, i.cn) for i in manifest.instances})
    checks = []
    for sample in range(manifest.oracle_samples):
        field_name, cn_name = _pick(rng, settings)
        bundle = _bundle(field_name)
        cn = bundle.cn(cn_name)
        primes = [p for p in (3, 5) if cn.modulus % p]
        p = _pick(rng, primes)
        instance = InstanceSpec(name=field_name, field=field_name, cn=cn_name, p=p)
        cone, x, l, n = _random_points(rng, instance, 1)[0]
        q = PeriodQuery(l, n)
        specs = [MeasureSpec.zeta(cone, cn, x, p)]
        specs += [
            MeasureSpec.dirichlet(cone, chi, x, p)
            for chi in bundle.characters(cn)
            if chi.nontrivial_narrow_modulus
        ]
        for spec in specs:
            name = f"{field_name}/{cn_name} p={p} {spec.kind.value} #{sample}"

            def compare(spec=spec, q=q, name=name) -> Check:
                try:
                    expected = oracle_period(spec, q)
                except InstanceTooLarge as e:
                    return Check.make("oracles", name, True, detail=f"skipped: {e}")
                value = period(spec, q)
                return Check.make("oracles", name, value == expected, l=list(q.l), n=q.n, value=value)

            checks.append(_guarded("oracles", name, compare))

        zeta = specs[0]
        j = int(rng.integers(1, cn.modulus))
        name = f"{field_name}/{cn_name} p={p} xi{j} #{sample}"

        def xi(zeta=zeta, q=q, j=j, name=name) -> Check:
            closed = closed_form_xi(zeta, q, j)
            if closed is None:
                return Check.make("oracles", name, True, detail="pole at u = 1")
            return Check.make("oracles", name, oracle_period_xi(zeta, q, j) == closed, value=closed)

        checks.append(_guarded("oracles", name, xi))
    return checks


def suite_omega(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    """The subset pieces of a Dirichlet period add up to the period (k = 2)."""
    checks = []
    for instance in manifest.instances:
        bundle, _, chars = _setting(instance)
        if bundle.field.degree != 2:
            continue
        for i, (cone, x, l, n) in enumerate(_random_points(rng, instance, 6)):
            for index, chi in enumerate(chars):
                if not chi.nontrivial_narrow_modulus:
                    continue
                name = f"{instance.name} chi{index} #{i}"

                def stratified(cone=cone, x=x, l=l, n=n, chi=chi, name=name) -> Check:
                    spec = MeasureSpec.dirichlet(cone, chi, x, instance.p)
                    value = period_chi(spec, PeriodQuery(l, n))
                    return Check.make("omega", name, omega_total(spec, cone.point(x, l), n) == value, value=value)

                checks.append(_guarded("omega", name, stratified))
    return checks


def suite_lemma33(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    for k in range(1, manifest.lemma33_max_k + 1):
        for N in (3, 5, 7):
            units = [r for r in range(1, N)]
            residues = tuple(_pick(rng, units) for _ in range(k))
            name = f"k={k} N={N} residues={residues}"
            bad = [
                (i, y)
                for i in range(k + 1)
                for y in range(N)
                if not lemma33_check(i, k, N, residues, y)
            ]
            checks.append(Check.make("lemma33", name, not bad, mismatches=bad[:5]))
    return checks


# =============================================================================
# IDENTITIES
# =============================================================================

def suite_identities(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    records = curious_grid(manifest.curious_max_n)
    failed = [r["N"] for r in records if not r["passed"]]
    checks.append(Check.make("identities", f"curious N <= {manifest.curious_max_n}", not failed,
                             moduli=len(records), failed=failed))
    anchors = [(5, 4, Fraction(4)), (11, 5, Fraction(25)), (11, 9, Fraction(25))]
    for N, eps, expected in anchors:
        value = curious_sum(N, eps)
        checks.append(Check.make("identities", f"curious N={N} eps={eps}", value == expected, value=value))

    for instance in manifest.instances:
        bundle, cn, chars = _setting(instance)
        if bundle.field.degree > 1:
            name = f"{instance.name} zero_sum"

            def zero_sum(bundle=bundle, cn=cn, name=name) -> Check:
                value = zero_sum_identity(bundle.decomposition, cn)
                return Check.make("identities", name, value == 0, value=value)

            checks.append(_guarded("identities", name, zero_sum))
        for index in instance.characters:
            cfg = _config(instance, index, instance.precision)
            for cone in bundle.decomposition.cones:
                for x in parallelotope_points(cone, cfg.lattice):
                    name = f"{instance.name} chi{index} reindexed x={x}"

                    def reindexed(cone=cone, x=x, cfg=cfg, name=name) -> Check:
                        h = lcm(1, *(c.denominator for c in cone.coordinates(x)))
                        local = LSeriesConfig(cfg.decomposition, cfg.cn, cfg.p, chi=cfg.chi, denominator=h)
                        sums = lemma52_sums(local, cone, x, 1)
                        return Check.make("identities", name, sums.agree, direct=sums.direct,
                                          reindexed=sums.reindexed)

                    checks.append(_guarded("identities", name, reindexed))
    return checks


def suite_fg(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    records = fg_grid(manifest.fg_max_q)
    failed = [r for r in records if not r["passed"]]
    checks.append(Check.make("fg", f"grid q^n <= {manifest.fg_max_q}", not failed,
                             cases=len(records), failed=failed[:5]))
    phi, psi = fg_sets(5, 16, 1, 1, 3)
    anchor = (phi == [19, 20, 24, 25, 29, 30] and psi == list(range(4, 10))
              and [fg_map(m, 5, 16) for m in (19, 20, 24)] == [7, 4, 8])
    checks.append(Check.make("fg", "anchor q=16 N=5", anchor, phi=phi, psi=psi))

    for instance in manifest.instances:
        bundle, cn, _ = _setting(instance)
        if bundle.field.degree != 2:
            continue
        dec = bundle.decomposition
        for cone in dec.cones:
            for x in parallelotope_points(cone, dec.ideals[0]):
                coords = cone.coordinates(x)
                h = lcm(1, *(c.denominator for c in coords))
                cfg = LSeriesConfig(dec, cn, instance.p, denominator=h)
                if cfg.q > manifest.fg_max_q:
                    continue
                c = [int(t * h) for t in coords]
                name = f"{instance.name} product x={x}"
                checks.append(_guarded(
                    "fg", name,
                    lambda cone=cone, c=c, h=h, cfg=cfg, name=name: Check.make(
                        "fg", name, fg_product_check(cone, c, h, cfg.N, cfg.q, cfg.p), qn=cfg.q
                    ),
                ))
    return checks


# =============================================================================
# L-VALUES, DERIVATIVES, GAMMA
# =============================================================================

def _value0_target(cfg: LSeriesConfig) -> PadicNumber:
    total = PadicNumber.zero(cfg.p, cfg.precision)
    for cone in cfg.decomposition.cones:
        for x in parallelotope_points(cone, cfg.lattice):
            total = total + L_px_value0(cfg, cone, x)
    return total


def suite_lvalues(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    for instance in manifest.instances:
        bundle, _, _ = _setting(instance)
        for index in instance.characters:
            cfg = _config(instance, index, instance.precision)
            name = f"{instance.name} chi{index} s=0"

            def convergence(cfg=cfg, name=name) -> Check:
                reports = truncation_series(cfg, 0, instance.levels)
                distances = [r.distance for r in reports[1:]]
                monotone = all(a <= b for a, b in zip(distances, distances[1:]))
                # v_p(S_n - S_(n-1)) >= n - c
                cauchy = all(r.distance is not None and r.distance >= r.level - Config.CAUCHY_SLACK for r in reports[1:])
                ok = monotone and cauchy
                values = {"series": [r.to_json() for r in reports]}
                if is_inert(bundle.field, cfg.p):
                    target = _value0_target(cfg)
                    ok = ok and reports[-1].value.congruent(target, 2)
                    values["closed_form"] = target
                return Check.make("lvalues", name, ok, **values)

            checks.append(_guarded("lvalues", name, convergence))

            name_sum = f"{instance.name} chi{index} interpolation"

            def interpolation(cfg=cfg, name=name_sum) -> Check:
                assert cfg.chi is not None
                left, right = ZERO, ZERO
                for cone in cfg.decomposition.cones:
                    for x in parallelotope_points(cone, cfg.lattice):
                        left = left + interpolation_value0(cfg, cone, x)
                        right = right + special_value_complex0(cone, x, cfg.chi)
                right = right * (ONE - evaluate(cfg.chi, cfg.p))
                return Check.make("lvalues", name, left == right, value=left)

            checks.append(_guarded("lvalues", name_sum, interpolation))
    return checks


def suite_derivative(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    for instance in manifest.instances:
        if not instance.derivative:
            continue
        M = instance.derivative_precision
        for index in instance.characters:
            cfg = _config(instance, index, M)
            name = f"{instance.name} chi{index} global"

            def global_value(cfg=cfg, name=name) -> Check:
                first = global_derivative0(cfg)
                again = global_derivative0(_config(instance, index, M + 1))
                return Check.make("derivative", name, again.congruent(first, M), value=first)

            checks.append(_guarded("derivative", name, global_value))

            name_rhs = f"{instance.name} chi{index} brumer_stark"

            def rhs(cfg=cfg, name=name_rhs) -> Check:
                values = [brumer_stark_rhs(cfg, y) for y in range(cfg.N)]
                finer = [brumer_stark_rhs(_config(instance, index, M + 1), y) for y in range(cfg.N)]
                ok = all(b.congruent(a, M) for a, b in zip(values, finer))
                return Check.make("derivative", name, ok, values=values)

            checks.append(_guarded("derivative", name_rhs, rhs))

            if evaluate(cfg.chi, cfg.p) != ONE:
                name_fd = f"{instance.name} chi{index} finite_difference"

                def finite_difference(name=name_fd) -> Check:
                    wide = _config(instance, index, 7)
                    cone = wide.decomposition.cones[0]
                    x = parallelotope_points(cone, wide.lattice)[0]
                    s0 = instance.p ** 4
                    quotient = (L_px_sum(wide, cone, x, s0, 3).value - L_px_value0(wide, cone, x)) / s0
                    value = derivative0(_config(instance, index, M), cone, x)
                    return Check.make("derivative", name, quotient.congruent(value, 2),
                                      quotient=quotient, derivative=value)

                checks.append(_guarded("derivative", name_fd, finite_difference))
    return checks


def suite_gamma(manifest: RunManifest, rng: np.random.Generator) -> list[Check]:
    checks = []
    line = _bundle("rationals").decomposition.cones[0]
    precision = manifest.gamma_precision
    bad = []
    for _ in range(manifest.gamma_samples):
        p = _pick(rng, [3, 5, 7])
        y = Fraction(int(rng.integers(1, 10 ** 6)), _pick(rng, [1, 2, 4, 8, 10, 11]))
        if y.denominator % p == 0:
            y = Fraction(y.numerator)
        value = gamma_multiple(GammaQuery((y,), p, precision), line)
        if value != morita_angle(y, p, precision):
            bad.append((p, str(y)))
    checks.append(Check.make("gamma", f"morita {manifest.gamma_samples} samples mod p^{precision}", not bad,
                             mismatches=bad))

    for instance in manifest.instances:
        bundle, _, _ = _setting(instance)
        dec = bundle.decomposition
        cone = dec.cones[0]
        ones = tuple(Fraction(1) for _ in range(cone.k))
        name = f"{instance.name} empty box"
        checks.append(_guarded(
            "gamma", name,
            lambda cone=cone, ones=ones, name=name: Check.make(
                "gamma", name, gamma_multiple(GammaQuery(ones, instance.p, 3), cone, dec.ring) == 1
            ),
        ))
        y = tuple(Fraction(int(v), 5) for v in rng.integers(1, 50, size=cone.k))
        name = f"{instance.name} stability y={[str(c) for c in y]}"

        def stability(cone=cone, y=y, name=name) -> Check:
            coarse = gamma_multiple(GammaQuery(y, instance.p, 3), cone, dec.ring)
            fine = gamma_multiple(GammaQuery(y, instance.p, 4), cone, dec.ring)
            return Check.make("gamma", name, fine.congruent(coarse, 3), value=fine)

        checks.append(_guarded("gamma", name, stability))
    return checks


SUITE_FUNCTIONS: dict[str, SuiteFn] = {
    "derivative": suite_derivative,
    "fg": suite_fg,
    "gamma": suite_gamma,
    "identities": suite_identities,
    "lemma33": suite_lemma33,
    "lvalues": suite_lvalues,
    "omega": suite_omega,
    "oracles": suite_oracles,
    "periods": suite_periods,
}


def run_one(task: tuple[RunManifest, str]) -> list[Check]:
    """Run a single suite with its own seeded generator."""
    manifest, name = task
    rng = np.random.default_rng([manifest.seed, SUITES.index(name)])
    return SUITE_FUNCTIONS[name](manifest, rng)


def run_suite(manifest: RunManifest) -> Report:
    """Run the selected suites; failures are collected, never short-circuited."""
    names = sorted(manifest.suites)
    for name in names:
        cprint(f"  Queued suite {name}", "yellow")
    results = parallel_map(run_one, [(manifest, name) for name in names])
    checks = [check for batch in results for check in batch]
    return Report(manifest=manifest.name, seed=manifest.seed, suites=names, checks=checks)
