#!/usr/bin/env python3
"""Tests for shintani.lseries.identities module."""

import pytest

from shintani.errors import NoRootMod, ParameterViolation
from shintani.lseries.identities import (
    curious_grid,
    curious_identity,
    curious_sum,
    fg_check,
    fg_grid,
    fg_map,
    fg_product_check,
    fg_sets,
    golden_roots,
    lemma52_check,
    lemma52_sums,
    zero_sum_identity,
)
from shintani.lseries.sums import LSeriesConfig


class TestFerreroGreenberg:
    """Tests for the index map iota and its sets."""

    def test_sets_q16(self):
        """N = 5, q^n = 16, h = 1, s = 1, t = 3."""
        phi, psi = fg_sets(5, 16, 1, 1, 3)
        assert phi == [19, 20, 24, 25, 29, 30]
        assert psi == [4, 5, 6, 7, 8, 9]
        assert [fg_map(m, 5, 16) for m in (19, 20, 24)] == [7, 4, 8]

    def test_sets_with_denominator(self):
        """N = 3, q^n = 7, h = 2, s = 1, t = 1."""
        phi, psi = fg_sets(3, 7, 2, 1, 1)
        assert phi == [5, 6, 8, 9]
        assert psi == [2, 3, 4, 5]
        assert sorted(fg_map(m, 3, 7) for m in phi) == psi

    def test_check(self):
        """Bijective, parity preserving and N iota(m) = m mod 16."""
        assert fg_check(5, 16, 1, 1, 1, 3, 2)
        assert fg_check(3, 7, 1, 2, 1, 1, 7)

    def test_parameter_validation(self):
        """t, s and q^n are range checked."""
        with pytest.raises(ParameterViolation):
            fg_sets(5, 16, 1, 1, 6)
        with pytest.raises(ParameterViolation):
            fg_sets(5, 16, 1, 2, 3)
        with pytest.raises(ParameterViolation):
            fg_sets(5, 17, 1, 1, 3)
        with pytest.raises(ParameterViolation):
            fg_map(3, 5, 17)

    def test_grid(self):
        """Every admissible parameter set up to q^n = 64 passes."""
        records = fg_grid(64)
        assert records
        assert all(r["passed"] for r in records)
        assert {r["N"] for r in records} == {3, 5, 7}

    def test_product_on_flagship(self, flagship_cone):
        """Coordinate-wise iota preserves prime-to-3 norms on the cone {1, eps}."""
        assert fg_product_check(flagship_cone, (1, 0), 1, 5, 81, 3)

    @pytest.mark.slow
    def test_full_grid(self):
        """The grid up to q^n = 1024."""
        assert all(r["passed"] for r in fg_grid(1024))


class TestReindexedSum:
    """Tests for the two enumerations of the truncated Dirichlet sum."""

    def test_flagship(self, qsqrt5, flagship_cone, flagship_chi_config):
        """Direct and reindexed sums agree for x = 1, q = 81."""
        sums = lemma52_sums(flagship_chi_config, flagship_cone, qsqrt5.field.unit_element(), 1)
        assert sums.agree
        assert sums.denominator == 1
        assert sums.shift == (1, 81)

    def test_requires_character(self, qsqrt5, flagship_cone, sqrt5_cn):
        """Zeta mode has no reindexed sum."""
        cfg = LSeriesConfig(qsqrt5.decomposition, sqrt5_cn, 3)
        with pytest.raises(ParameterViolation):
            lemma52_check(cfg, flagship_cone, qsqrt5.field.unit_element())

    @pytest.mark.slow
    def test_half_integral_base_point(self, qsqrt2):
        """x = (1/2)(1 + eta) on Q(sqrt2) with q = 729."""
        cn = qsqrt2.cn("p7")
        cfg = LSeriesConfig(qsqrt2.decomposition, cn, 3, chi=qsqrt2.character(cn, 1))
        cone = qsqrt2.decomposition.cones[0]
        assert lemma52_check(cfg, cone, qsqrt2.field.element([2, 1]))


class TestCuriousIdentity:
    """Tests for sums over roots of X^2 - 3X + 1."""

    def test_roots(self):
        """Roots modulo 5, 11 and 19; none modulo 7."""
        assert golden_roots(5) == [4]
        assert golden_roots(11) == [5, 9]
        assert golden_roots(19) == [6, 16]
        with pytest.raises(NoRootMod):
            golden_roots(7)

    def test_values(self):
        """(N - 1)^2 / 4 for N = 5, 11 and 19."""
        assert curious_sum(5, 4) == 4
        assert curious_sum(11, 5) == curious_sum(11, 9) == 25
        assert curious_sum(19, 6) == curious_sum(19, 16) == 81
        assert curious_identity(19)

    def test_grid(self):
        """Every N <= 300 with a root satisfies the identity."""
        records = curious_grid(300)
        assert [r["N"] for r in records[:3]] == [5, 11, 19]
        assert all(r["passed"] for r in records)


class TestZeroSum:
    """Tests for the vanishing sum of zeta coefficients."""

    @pytest.mark.parametrize("name, cn", [("qsqrt5", "sqrt5"), ("qsqrt5", "p11"), ("qsqrt2", "p7")])
    def test_vanishes(self, request, name, cn):
        """The H_V sum over cones and base points cancels the constant term."""
        bundle = request.getfixturevalue(name)
        assert zero_sum_identity(bundle.decomposition, bundle.cn(cn)) == 0

    def test_needs_field_other_than_q(self, rationals):
        """Over Q the sum is a nonzero Bernoulli value."""
        with pytest.raises(ParameterViolation):
            zero_sum_identity(rationals.decomposition, rationals.cn("mod5"))
