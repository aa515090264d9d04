#!/usr/bin/env python3
"""Tests for shintani.lseries.gamma and shintani.lseries.derivative modules."""

from fractions import Fraction

import numpy as np
import pytest

from shintani.arith.padic import PadicNumber
from shintani.errors import InstanceTooLarge, ParameterViolation, PNotInert
from shintani.lseries.derivative import (
    GammaLogCache,
    brumer_stark_rhs,
    derivative0,
    gamma_term,
    global_derivative0,
)
from shintani.lseries.gamma import GammaQuery, cone_norm_form, gamma_direct, gamma_multiple, morita_angle
from shintani.lseries.sums import LSeriesConfig


def derivative_config(bundle, cn_name: str, precision: int) -> LSeriesConfig:
    cn = bundle.cn(cn_name)
    return LSeriesConfig(bundle.decomposition, cn, 3, precision=precision, chi=bundle.character(cn, 1))


class TestMultipleGamma:
    """Tests for Gamma_V by block products."""

    def test_cone_norm_forms(self, flagship_cone, qsqrt2):
        """Nm(l0 + l1 eps) and Nm(l0 + l1 (3 + 2 sqrt2)) in cone coordinates."""
        assert cone_norm_form(flagship_cone).evaluate((1, 1)) == 5
        assert cone_norm_form(flagship_cone).evaluate((2, 1)) == 11
        assert cone_norm_form(qsqrt2.decomposition.cones[0]).evaluate((1, 1)) == 8

    def test_empty_box(self, flagship_cone):
        """Gamma_V(1, 1) is the empty product."""
        assert gamma_multiple(GammaQuery((Fraction(1), Fraction(1)), 3, 3), flagship_cone) == 1

    @pytest.mark.parametrize("y", [Fraction(1, 5), Fraction(2, 7), Fraction(3), Fraction(7), Fraction(5, 4)])
    def test_single_variable_is_morita(self, rationals, y):
        """Over Q the multiple Gamma is the angle of Morita's Gamma."""
        cone = rationals.decomposition.cones[0]
        value = gamma_multiple(GammaQuery((y,), 3, 3), cone, rationals.decomposition.ring)
        assert value == morita_angle(y, 3, 3)

    def test_blocks_match_direct_walk(self, qsqrt5, flagship_cone):
        """The block decomposition reproduces the walk over the whole box."""
        query = GammaQuery((Fraction(1, 5), Fraction(2, 5)), 3, 2)
        assert gamma_multiple(query, flagship_cone, qsqrt5.decomposition.ring) == gamma_direct(query, flagship_cone)

    def test_values_are_principal_units(self, flagship_cone):
        """Gamma_V takes values in 1 + 3 Z_3."""
        value = gamma_multiple(GammaQuery((Fraction(3), Fraction(7)), 3, 3), flagship_cone)
        assert value.residue() % 3 == 1

    def test_query_validation(self, flagship_cone):
        """Coordinates must be p-integral and match the cone dimension."""
        with pytest.raises(ParameterViolation):
            GammaQuery((Fraction(1, 3), Fraction(1)), 3)
        with pytest.raises(ParameterViolation):
            GammaQuery((Fraction(1), Fraction(1)), 3, 0)
        with pytest.raises(ParameterViolation):
            gamma_multiple(GammaQuery((Fraction(1),), 3, 2), flagship_cone)

    def test_query_from_element(self, qsqrt5, flagship_cone):
        """GammaQuery.at reads cone coordinates."""
        query = GammaQuery.at(flagship_cone, qsqrt5.field.element([2, 1]), 3, 2)
        assert query.y == (2, 1)
        assert query.approximant(2) == (2, 1)

    def test_default_exponent(self):
        """M' = M + max(2, M - 1): 4 at M = 2, 9 at M = 5, and an explicit extra wins."""
        y = (Fraction(1, 5), Fraction(2, 5))
        assert GammaQuery(y, 3, 2).exponent == 4
        assert GammaQuery(y, 3, 5).exponent == 9
        assert GammaQuery(y, 3, 5, extra=2).exponent == 7
        with pytest.raises(ParameterViolation):
            GammaQuery(y, 3, 2, extra=-1)

    def test_residue_sweep_is_capped(self, flagship_cone):
        """3^(13 * 2) residues are refused instead of swept."""
        query = GammaQuery((Fraction(1, 5), Fraction(2, 5)), 3, 13)
        with pytest.raises(InstanceTooLarge):
            gamma_multiple(query, flagship_cone)

    def test_direct_walk_is_capped(self, flagship_cone):
        """A box of about 88574^2 points is refused."""
        query = GammaQuery((Fraction(1, 2), Fraction(1, 2)), 3, 6)
        with pytest.raises(InstanceTooLarge):
            gamma_direct(query, flagship_cone)

    @pytest.mark.slow
    def test_single_variable_is_morita_at_p7(self, rationals):
        """Over Q, Gamma_V agrees with Morita's Gamma modulo 7^8 at random points."""
        cone = rationals.decomposition.cones[0]
        rng = np.random.default_rng(7)
        for _ in range(3):
            y = Fraction(int(rng.integers(1, 500)), int(rng.choice([1, 2, 3, 4, 5, 6, 8, 9])))
            value = gamma_multiple(GammaQuery((y,), 7, 8), cone, rationals.decomposition.ring)
            assert value == morita_angle(y, 7, 8)
            assert value.absolute_precision == 8


class TestDerivative:
    """Tests for the derivative at s = 0."""

    def test_log_cache_reuses_values(self, qsqrt5, flagship_cone):
        """A point is evaluated once per cache."""
        cfg = derivative_config(qsqrt5, "sqrt5", 2)
        logs = GammaLogCache(cfg)
        y = qsqrt5.field.element([2, 1])
        first = logs(flagship_cone, y)
        assert logs(flagship_cone, y) is first

    def test_gamma_digits(self, qsqrt5, sqrt5_cn, sqrt5_chi, flagship_chi_config):
        """Gamma_V runs at min(precision, 4) digits unless set explicitly."""
        assert flagship_chi_config.precision == 12
        assert flagship_chi_config.gamma_digits == 4
        assert derivative_config(qsqrt5, "sqrt5", 2).gamma_digits == 2
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, gamma_precision=3, chi=sqrt5_chi)
        assert cfg.gamma_digits == 3
        with pytest.raises(ParameterViolation):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, gamma_precision=0, chi=sqrt5_chi)

    def test_default_precision_returns(self, qsqrt5, flagship_chi_config):
        """The default configuration finishes with a value known to 3^4, matching a precision-4 run."""
        value = global_derivative0(flagship_chi_config)
        assert value.absolute_precision <= 4
        assert value == global_derivative0(derivative_config(qsqrt5, "sqrt5", 4))

    def test_gamma_precision_beyond_the_cap(self, qsqrt5, sqrt5_cn, sqrt5_chi):
        """Asking for 3^13 Gamma digits on a rank-two cone raises instead of hanging."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, precision=13, gamma_precision=13, chi=sqrt5_chi)
        with pytest.raises(InstanceTooLarge):
            global_derivative0(cfg)

    def test_brumer_stark_side_matches_gamma_term(self, qsqrt5, flagship_cone):
        """Pairing the per-class Gamma sums with chi gives minus the Gamma term."""
        cfg = derivative_config(qsqrt5, "sqrt5", 2)
        one = qsqrt5.field.unit_element()
        paired = PadicNumber.zero(3, 2)
        for y in range(1, 5):
            paired = paired + cfg.embed(cfg.chi.at_residue(y)) * brumer_stark_rhs(cfg, y)
        assert paired == -gamma_term(cfg, flagship_cone, one)

    def test_single_point_decomposition(self, qsqrt5, flagship_cone):
        """With one cone and one base point the global derivative is the local one."""
        cfg = derivative_config(qsqrt5, "sqrt5", 2)
        assert global_derivative0(cfg) == derivative0(cfg, flagship_cone, qsqrt5.field.unit_element())

    def test_precision_stability(self, qsqrt5):
        """Working at 3^3 and truncating agrees with working at 3^2."""
        low = global_derivative0(derivative_config(qsqrt5, "sqrt5", 2))
        high = global_derivative0(derivative_config(qsqrt5, "sqrt5", 3))
        assert high.congruent(low, 2)

    def test_trivial_zero_path(self, qsqrt5):
        """chi(3) = 1 mod the prime above 11: the values at zero cancel and the Gamma terms are stable."""
        low = global_derivative0(derivative_config(qsqrt5, "p11", 2))
        high = global_derivative0(derivative_config(qsqrt5, "p11", 3))
        assert high.congruent(low, 2)

    def test_requires_character(self, qsqrt5, flagship_cone, sqrt5_cn):
        """Zeta mode has no derivative formula here."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, precision=2)
        with pytest.raises(ParameterViolation):
            global_derivative0(cfg)
        with pytest.raises(ParameterViolation):
            gamma_term(cfg, flagship_cone, qsqrt5.field.unit_element())

    def test_split_prime(self, qsqrt5, flagship_cone, sqrt5_cn, sqrt5_chi):
        """The closed form at zero needs p inert."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 11, precision=2, chi=sqrt5_chi)
        with pytest.raises(PNotInert):
            derivative0(cfg, flagship_cone, qsqrt5.field.unit_element())
