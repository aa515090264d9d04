#!/usr/bin/env python3
"""Tests for shintani.lseries.sums module."""

import itertools
from fractions import Fraction

import pytest

from shintani.arith.cyclotomic import ZERO, CycloValue
from shintani.arith.padic import PadicNumber
from shintani.errors import (
    CharacterHasTrivialNarrowModulus,
    EvenPrimeUnsupported,
    ParameterViolation,
    PNotInert,
    PsiLevelUnsupported,
)
from shintani.field.characters import PsiCharacter
from shintani.lseries.sums import (
    LSeriesConfig,
    L_px_sum,
    L_px_value0,
    class_digits,
    interpolation_value0,
    lemma45_check,
    lemma45_sum,
    special_value_complex0,
    sum_expr_chi,
    sum_expr_zeta,
    summand_weight,
    summed_value0,
    truncation_series,
)


@pytest.fixture(scope="module")
def p11_config(qsqrt5):
    cn = qsqrt5.cn("p11")
    return LSeriesConfig(qsqrt5.decomposition, cn, 3, chi=qsqrt5.character(cn, 1))


class TestConfig:
    """Tests for LSeriesConfig validation."""

    def test_q_is_least_power_one_mod_n(self, qsqrt5, sqrt5_cn, flagship_chi_config, p11_config):
        """3 has order 4 mod 5 and order 5 mod 11."""
        assert flagship_chi_config.q == 81
        assert p11_config.q == 243
        assert LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, denominator=2).q == 3 ** 4

    def test_p_must_be_odd_and_prime_to_n(self, qsqrt5, sqrt5_cn):
        """p = 2 and p = 5 are rejected."""
        with pytest.raises(EvenPrimeUnsupported):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 2)
        with pytest.raises(ParameterViolation):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 5)

    def test_denominator_prime_to_np(self, qsqrt5, sqrt5_cn):
        """Base point denominators must avoid N p."""
        with pytest.raises(ParameterViolation):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, denominator=3)

    def test_psi_level(self, qsqrt5, sqrt5_cn):
        """psi must have p-power level within the working precision."""
        with pytest.raises(PsiLevelUnsupported):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, psi=PsiCharacter.from_norm(5, 1, (1,)))
        with pytest.raises(PsiLevelUnsupported):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, precision=2, psi=PsiCharacter.from_norm(3, 3, (1,)))

    def test_trivial_character(self, qsqrt5, sqrt5_cn):
        """Dirichlet mode needs a character of nontrivial narrow modulus."""
        with pytest.raises(CharacterHasTrivialNarrowModulus):
            LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, chi=qsqrt5.character(sqrt5_cn, 0))

    def test_class_digits(self, flagship_chi_config):
        """Weights at s = 9 and precision 12 depend on y mod 3^10."""
        assert class_digits(flagship_chi_config, 0) == 1
        assert class_digits(flagship_chi_config, 9) == 10
        assert class_digits(flagship_chi_config, 1) == 12


class TestSumExpressions:
    """Tests for the truncated sums S_n."""

    def test_flagship_zeta(self, qsqrt5, sqrt5_cn):
        """S_1 = -23328 over the 5832 points of [0, 81)^2 prime to 3."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, omega_power=0)
        report = sum_expr_zeta(cfg, 0, 1)
        assert report.value == -23328
        assert report.terms == 5832

    def test_rational_zeta_with_omega(self, rationals):
        """Over Q with N = 4 and p = 3, S_1 = -1 with the omega^-1 twist."""
        cfg = LSeriesConfig(rationals.decomposition, rationals.cn("mod4"), 3)
        assert cfg.q == 9
        assert sum_expr_zeta(cfg, 0, 1).value == -1

    def test_flagship_dirichlet(self, flagship_chi_config):
        """S_1 = 2258, congruent to L_p(0) = 4/5 modulo 27 but not 81."""
        report = sum_expr_chi(flagship_chi_config, 0, 1)
        assert report.value == 2258
        assert report.value.congruent(Fraction(4, 5), 3)
        assert not report.value.congruent(Fraction(4, 5), 4)

    def test_truncation_series(self, flagship_chi_config):
        """S_0 = 0 and S_1 is a unit, so the first distance is zero."""
        reports = truncation_series(flagship_chi_config, 0, 1)
        assert [r.level for r in reports] == [0, 1]
        assert reports[0].value.is_zero()
        assert reports[0].distance is None
        assert reports[1].distance == 0
        assert reports[1].to_json()["distance_to_previous"] == 0

    def test_mode_mismatch(self, qsqrt5, sqrt5_cn, flagship_chi_config):
        """Each mode insists on its own configuration and n >= 1."""
        with pytest.raises(ParameterViolation):
            sum_expr_zeta(flagship_chi_config, 0, 1)
        with pytest.raises(ParameterViolation):
            sum_expr_chi(LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3), 0, 1)
        with pytest.raises(ParameterViolation):
            sum_expr_chi(flagship_chi_config, 0, 0)

    def test_summand_weight(self, qsqrt5, flagship_chi_config):
        """Points divisible by 3 carry no weight; others have <Nm y>^0 = 1."""
        field = qsqrt5.field
        assert summand_weight(flagship_chi_config, field.from_rational(3), 0) is None
        assert summand_weight(flagship_chi_config, field.element([1, 1]), 0) == 1

    def test_bucketed_matches_direct(self, qsqrt5, flagship_cone, sqrt5_cn, sqrt5_chi):
        """Class-weighted L_px_sum at s = 9 agrees with a point-by-point sum."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3, precision=4, chi=sqrt5_chi)
        one = qsqrt5.field.unit_element()
        coefficients = {}
        for r in itertools.product(range(5), repeat=2):
            value = ZERO
            for d in itertools.product(range(r[0]), range(r[1])):
                value = value + sqrt5_chi(flagship_cone.point(one, d))
            coefficients[r] = cfg.embed(value)
        expected = PadicNumber.zero(3, 4)
        for l in itertools.product(range(cfg.q), repeat=2):
            weight = summand_weight(cfg, flagship_cone.point(one, l), 9)
            if weight is not None:
                expected = expected + coefficients[(l[0] % 5, l[1] % 5)] * weight
        assert L_px_sum(cfg, flagship_cone, one, 9, 1).value == expected


class TestValuesAtZero:
    """Tests for the exact values at s = 0."""

    def test_complex_value_over_q(self, rationals):
        """L(0, chi) for the order-4 character sending 2 to i is (3 + i)/5."""
        cn = rationals.cn("mod5")
        cone = rationals.decomposition.cones[0]
        one = rationals.field.unit_element()
        value = special_value_complex0(cone, one, rationals.character(cn, 2))
        assert value == CycloValue.from_dense(4, [Fraction(3, 5), Fraction(1, 5)])
        assert special_value_complex0(cone, one, rationals.character(cn, 1)) == ZERO

    def test_flagship_interpolation(self, qsqrt5, flagship_cone, flagship_chi_config):
        """L_V(0, chi) = 2/5 and chi(3) = -1 give 4/5."""
        one = qsqrt5.field.unit_element()
        assert special_value_complex0(flagship_cone, one, flagship_chi_config.chi) == Fraction(2, 5)
        assert interpolation_value0(flagship_chi_config, flagship_cone, one) == Fraction(4, 5)
        assert L_px_value0(flagship_chi_config, flagship_cone, one) == Fraction(4, 5)
        assert summed_value0(flagship_chi_config) == Fraction(4, 5)

    def test_split_euler_factor_vanishes(self, p11_config):
        """chi(3) = +1 mod the prime above 11 kills the value at zero."""
        assert summed_value0(p11_config) == ZERO

    def test_split_prime_rejected(self, qsqrt5, flagship_cone, sqrt5_cn, sqrt5_chi):
        """11 splits in Q(sqrt5)."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 11, chi=sqrt5_chi)
        with pytest.raises(PNotInert):
            interpolation_value0(cfg, flagship_cone, qsqrt5.field.unit_element())

    def test_zeta_mode_rejected(self, qsqrt5, flagship_cone, sqrt5_cn):
        """Values at zero are for Dirichlet mode."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3)
        with pytest.raises(ParameterViolation):
            interpolation_value0(cfg, flagship_cone, qsqrt5.field.unit_element())
        with pytest.raises(ParameterViolation):
            L_px_sum(cfg, flagship_cone, qsqrt5.field.unit_element(), 0, 1)


class TestLineSums:
    """Tests for sums along arithmetic progressions a + m v."""

    def test_count_at_s_zero(self, qsqrt5):
        """Nm(1 + m eps) = 1 + 3m + m^2 is never divisible by 3."""
        field = qsqrt5.field
        psi = PsiCharacter.trivial(3)
        total = lemma45_sum(field.unit_element(), field.basis_element(1), psi, 0, 2, 6)
        assert total == 9

    @pytest.mark.parametrize("s", [0, 1])
    def test_vanishing(self, qsqrt5, s):
        """The line sum over m < 27 vanishes modulo 9."""
        field = qsqrt5.field
        assert lemma45_check(field.unit_element(), field.basis_element(1), PsiCharacter.trivial(3), s, 3, 6)

    def test_level_below_conductor(self, qsqrt5):
        """n must reach the level of psi."""
        field = qsqrt5.field
        with pytest.raises(ParameterViolation):
            lemma45_check(field.unit_element(), field.basis_element(1), PsiCharacter.trivial(3), 0, 0)
