#!/usr/bin/env python3
"""Tests for shintani.measures: closed-form periods and the Abel-limit oracle."""

import itertools

import pytest

from shintani.errors import (
    CharacterHasTrivialNarrowModulus,
    InstanceTooLarge,
    LevelNotOneModN,
    ParameterViolation,
)
from shintani.measures.oracle import closed_form_xi, oracle_period, oracle_period_xi, xi_sum
from shintani.measures.periods import (
    H_V,
    MeasureSpec,
    PeriodQuery,
    b_coefficients,
    children_sum,
    coeff_a_VN,
    h_table,
    lemma33_check,
    omega_total,
    p_value,
    period,
    period_chi,
    period_chi_intermediate,
    period_chi_q,
    period_zeta,
    period_zeta_expanded,
    telescoping_check,
)


@pytest.fixture(scope="module")
def rational_cone(rationals):
    return rationals.decomposition.cones[0]


@pytest.fixture(scope="module")
def zeta_spec(qsqrt5, flagship_cone, sqrt5_cn):
    return MeasureSpec.zeta(flagship_cone, sqrt5_cn, qsqrt5.field.unit_element(), 3)


@pytest.fixture(scope="module")
def chi_spec(qsqrt5, flagship_cone, sqrt5_chi):
    return MeasureSpec.dirichlet(flagship_cone, sqrt5_chi, qsqrt5.field.unit_element(), 3)


class TestCoefficients:
    """Tests for H_V, a_{V,N} and the expansion coefficients b_i."""

    def test_h_table(self):
        """Weighted counts of d in [1, 5)^2 with d0 + 4 d1 = -r mod 5."""
        assert h_table((1, 4), 5) == (30, 20, 15, 15, 20)

    def test_h_v_matches_table(self, qsqrt5, flagship_cone, sqrt5_cn):
        """H_V solves for the last coordinate instead of tabulating."""
        one = qsqrt5.field.unit_element()
        assert H_V(flagship_cone, sqrt5_cn, one) == 20
        for r in range(5):
            assert H_V(flagship_cone, sqrt5_cn, r) == h_table((1, 4), 5)[r]

    def test_coeff_a(self, qsqrt5, flagship_cone, sqrt5_cn):
        """a_{V,N}(1) = -H_V(1) / 5."""
        assert coeff_a_VN(flagship_cone, sqrt5_cn, qsqrt5.field.unit_element()) == -4

    def test_b_coefficients(self):
        """Taylor coefficients of N^k ((1-u)/(1-u^N))^k at u = 1."""
        assert b_coefficients(5, 1) == (1, -2)
        assert b_coefficients(5, 2) == (1, -4, 8)
        with pytest.raises(ParameterViolation):
            b_coefficients(1, 2)

    @pytest.mark.parametrize("i", [0, 1, 2])
    def test_residue_box_sums(self, i):
        """Binomial sums over R(y, N) are the polynomials P_i evaluated at N."""
        for y in range(5):
            assert lemma33_check(i, 2, 5, (1, 4), y)

    def test_p_values(self):
        """P_0(5) = 5, P_1(5) = 20 and P_2(5) = 20 for k = 2."""
        assert [p_value(i, 2, 5) for i in range(3)] == [5, 20, 20]
        with pytest.raises(ParameterViolation):
            p_value(3, 2, 5)

    def test_telescoping(self, qsqrt5, flagship_cone, sqrt5_cn):
        """The H_V sum over a box of side 81 closes up; 82 is not 1 mod 5."""
        one = qsqrt5.field.unit_element()
        assert telescoping_check(flagship_cone, sqrt5_cn, one, 81)
        with pytest.raises(LevelNotOneModN):
            telescoping_check(flagship_cone, sqrt5_cn, one, 82)


class TestZetaPeriods:
    """Tests for the zeta measure."""

    def test_rational_periods(self, rationals, rational_cone):
        """Over Q with N = 5 the periods are -(flat(-y, 5) - 2)."""
        spec = MeasureSpec.zeta(rational_cone, rationals.cn("mod5"), rationals.field.unit_element(), 3)
        assert period_zeta(spec, PeriodQuery((0,), 0)) == -2
        assert [period_zeta(spec, PeriodQuery((l,), 1)) for l in range(3)] == [-1, 1, -2]

    def test_flagship_total_mass(self, zeta_spec):
        """The whole of O_p has measure zero for x = 1."""
        assert period_zeta(zeta_spec, PeriodQuery((0, 0), 0)) == 0

    def test_expanded_form(self, zeta_spec):
        """The b_i expansion agrees with the H_V form."""
        for n in (0, 1):
            for l in itertools.product(range(3 ** n), repeat=2):
                q = PeriodQuery(l, n)
                assert period_zeta_expanded(zeta_spec, q) == period_zeta(zeta_spec, q)

    def test_additivity(self, zeta_spec):
        """Each cylinder's measure is the sum over its children."""
        for l in itertools.product(range(3), repeat=2):
            q = PeriodQuery(l, 1)
            assert children_sum(zeta_spec, q) == period(zeta_spec, q)
        assert children_sum(zeta_spec, PeriodQuery((0, 0), 0)) == 0

    def test_query_range(self, zeta_spec):
        """Offsets must lie in [0, p^n)."""
        with pytest.raises(ParameterViolation):
            period_zeta(zeta_spec, PeriodQuery((3, 0), 1))
        with pytest.raises(ParameterViolation):
            period_zeta(zeta_spec, PeriodQuery((0,), 1))


class TestDirichletPeriods:
    """Tests for the Dirichlet measure of the quadratic character mod (sqrt5)."""

    def test_rational_periods(self, rationals, rational_cone):
        """Over Q, p = 3, the quadratic character gives 1 and -1 at level one."""
        cn = rationals.cn("mod5")
        spec = MeasureSpec.dirichlet(rational_cone, rationals.character(cn, 1), rationals.field.unit_element(), 3)
        assert period_chi(spec, PeriodQuery((0,), 1)) == 1
        assert period_chi(spec, PeriodQuery((1,), 1)) == -1

    def test_intermediate_form(self, chi_spec):
        """Reindexing d by (d - l)/p^n mod N leaves the period unchanged."""
        for l in itertools.product(range(3), repeat=2):
            q = PeriodQuery(l, 1)
            assert period_chi_intermediate(chi_spec, q) == period_chi(chi_spec, q)

    def test_subset_form(self, qsqrt5, flagship_cone, sqrt5_chi):
        """With p = 11 = 1 mod 5 the subset form applies."""
        spec = MeasureSpec.dirichlet(flagship_cone, sqrt5_chi, qsqrt5.field.unit_element(), 11)
        for l in [(0, 0), (3, 7), (10, 1), (6, 6)]:
            q = PeriodQuery(l, 1)
            assert period_chi_q(spec, q) == period_chi(spec, q)

    def test_subset_form_needs_level_one(self, chi_spec):
        """3 is not 1 mod 5."""
        with pytest.raises(LevelNotOneModN):
            period_chi_q(chi_spec, PeriodQuery((0, 0), 1))

    def test_omega_decomposition(self, rationals, rational_cone, chi_spec, flagship_cone):
        """The subset pieces add up to the period."""
        cn = rationals.cn("mod5")
        one = rationals.field.unit_element()
        spec = MeasureSpec.dirichlet(rational_cone, rationals.character(cn, 1), one, 3)
        for l in range(3):
            assert omega_total(spec, one + l, 1) == period_chi(spec, PeriodQuery((l,), 1))
        for l in [(0, 0), (1, 2), (2, 1)]:
            a = flagship_cone.point(chi_spec.x, l)
            assert omega_total(chi_spec, a, 1) == period_chi(chi_spec, PeriodQuery(l, 1))

    def test_additivity(self, chi_spec):
        """The character periods form a measure as well."""
        for l in [(0, 0), (2, 1)]:
            q = PeriodQuery(l, 1)
            assert children_sum(chi_spec, q) == period(chi_spec, q)

    def test_trivial_character_rejected(self, qsqrt5, flagship_cone, sqrt5_cn):
        """The Dirichlet measure needs a nontrivial narrow modulus."""
        with pytest.raises(CharacterHasTrivialNarrowModulus):
            MeasureSpec.dirichlet(flagship_cone, qsqrt5.character(sqrt5_cn, 0), qsqrt5.field.unit_element(), 3)

    def test_p_must_not_divide_n(self, qsqrt5, flagship_cone, sqrt5_chi):
        """p = 5 divides N."""
        with pytest.raises(ParameterViolation):
            MeasureSpec.dirichlet(flagship_cone, sqrt5_chi, qsqrt5.field.unit_element(), 5)


class TestOracle:
    """Tests for the Abel-limit oracle against the closed forms."""

    def test_zeta_oracle(self, zeta_spec):
        """Oracle and closed form agree up to level two."""
        for n in (0, 1, 2):
            for l in [(0, 0), (1, 2), (3 ** n - 1, 0)]:
                if max(l) >= 3 ** n:
                    continue
                q = PeriodQuery(l, n)
                assert oracle_period(zeta_spec, q) == period_zeta(zeta_spec, q)

    def test_dirichlet_oracle(self, chi_spec):
        """The oracle reproduces the character periods."""
        for l in itertools.product(range(3), repeat=2):
            q = PeriodQuery(l, 1)
            assert oracle_period(chi_spec, q) == period_chi(chi_spec, q)

    def test_rational_oracle(self, rationals, rational_cone):
        """The k = 1 generating function gives -2 for the whole of Z_3."""
        spec = MeasureSpec.zeta(rational_cone, rationals.cn("mod5"), rationals.field.unit_element(), 3)
        assert oracle_period(spec, PeriodQuery((0,), 0)) == -2

    def test_guard_rails(self, zeta_spec):
        """p^n = 27 is beyond the oracle limits."""
        with pytest.raises(InstanceTooLarge):
            oracle_period(zeta_spec, PeriodQuery((0, 0), 3))

    def test_additive_characters(self, zeta_spec):
        """Per-xi Abel limits match xi(y) / prod(1 - xi(p^n v_i))."""
        for n, l in [(0, (0, 0)), (1, (1, 2)), (1, (2, 0))]:
            q = PeriodQuery(l, n)
            for j in range(1, 5):
                closed = closed_form_xi(zeta_spec, q, j)
                assert closed is not None
                assert oracle_period_xi(zeta_spec, q, j) == closed
            assert xi_sum(zeta_spec, q) is not None

    def test_additive_characters_need_zeta(self, chi_spec, zeta_spec):
        """xi must be nontrivial and belongs to the zeta measure."""
        with pytest.raises(ParameterViolation):
            closed_form_xi(chi_spec, PeriodQuery((0, 0), 0), 1)
        with pytest.raises(ParameterViolation):
            closed_form_xi(zeta_spec, PeriodQuery((0, 0), 0), 5)

    def test_dirichlet_periods_are_exact(self, chi_spec):
        """The quadratic character gives rational periods."""
        value = oracle_period(chi_spec, PeriodQuery((0, 0), 0))
        assert value.is_rational()
        assert value == period_chi(chi_spec, PeriodQuery((0, 0), 0))
