#!/usr/bin/env python3
"""Tests for shintani.arith.padic module."""

from fractions import Fraction

import numpy as np
import pytest

from shintani.arith.cyclotomic import CycloValue
from shintani.arith.padic import (
    PadicNumber,
    angle,
    as_exponent,
    embed_cyclo,
    iwasawa_log,
    morita_gamma,
    morita_gamma_batch,
    padic_exp,
    padic_log,
    power,
    teichmuller,
)
from shintani.errors import (
    DomainViolation,
    EmbeddingUnavailable,
    EvenPrimeUnsupported,
    NotAUnit,
    PrecisionExhausted,
)


class TestPadicNumber:
    """Tests for capped-precision p-adic numbers."""

    def test_from_rational(self):
        """Valuation, unit and relative precision of a rational."""
        x = PadicNumber.from_rational(5, 50, 6)
        assert (x.valuation, x.unit, x.precision) == (2, 2, 4)
        assert PadicNumber.from_rational(3, Fraction(1, 9), 4).valuation == -2

    def test_inverse_of_denominator(self):
        """1/3 times 3 is 1 in Q_5."""
        third = PadicNumber.from_rational(5, Fraction(1, 3), 4)
        assert third * 3 == 1

    def test_precision_is_the_minimum(self):
        """A sum is known only as far as its least precise term."""
        total = PadicNumber.from_rational(3, 1, 2) + PadicNumber.from_rational(3, 1, 5)
        assert total.absolute_precision == 2

    def test_digits(self):
        """5 = 2 + 1*3 in base 3."""
        x = PadicNumber.from_rational(3, 5, 3)
        assert x.digits() == [2, 1, 0]
        assert x.to_json() == {"p": 3, "valuation": 0, "digits": [2, 1, 0], "precision": 3}

    def test_congruent(self):
        """Congruences are decided up to the tracked precision."""
        a = PadicNumber.from_rational(3, 10, 6)
        assert a.congruent(1, 2)
        assert not a.congruent(1, 3)
        with pytest.raises(PrecisionExhausted):
            PadicNumber.from_rational(3, 1, 2).congruent(PadicNumber.from_rational(3, 1, 2), 5)

    def test_distance(self):
        """v_3(10 - 1) = 2."""
        assert PadicNumber.from_rational(3, 10, 6).distance(1) == 2


class TestTeichmullerAndAngle:
    """Tests for omega and <.>."""

    def test_teichmuller_is_a_root_of_unity(self):
        """omega(2)^4 = 1 in Z_5 and omega(2) = 2 mod 5."""
        w = teichmuller(2, 5, 6)
        assert w ** 4 == 1
        assert w.residue() % 5 == 2

    def test_angle_is_one_mod_p(self):
        """<y> is congruent to 1 mod p."""
        assert angle(PadicNumber.from_rational(5, 7, 6)).residue() % 5 == 1

    def test_teichmuller_errors(self):
        """Non-units and p = 2 are rejected."""
        with pytest.raises(NotAUnit):
            teichmuller(6, 3)
        with pytest.raises(EvenPrimeUnsupported):
            teichmuller(1, 2)


class TestLogExpPower:
    """Tests for log, exp and <y>^(-s)."""

    def test_log_is_additive(self):
        """log(ab) = log a + log b on 1 + 3Z_3."""
        a = PadicNumber.from_rational(3, 4, 8)
        b = PadicNumber.from_rational(3, 7, 8)
        assert padic_log(a * b) == padic_log(a) + padic_log(b)

    def test_exp_inverts_log(self):
        """exp(log u) = u for u = 1 mod p."""
        u = PadicNumber.from_rational(3, 10, 6)
        assert padic_exp(padic_log(u)) == u

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_exp_log_round_trips(self, p):
        """exp(log u) = u and log(exp z) = z on 200 random inputs."""
        rng = np.random.default_rng(1000 + p)
        M = 8
        for _ in range(200):
            u = PadicNumber.from_rational(p, 1 + p * int(rng.integers(0, 10 ** 9)), M)
            assert padic_exp(padic_log(u)) == u
            z = PadicNumber.from_rational(p, p * int(rng.integers(0, 10 ** 9)), M)
            assert padic_log(padic_exp(z)) == z

    @pytest.mark.parametrize("p", [3, 5, 7])
    def test_extra_digits_truncate_to_the_same_value(self, p):
        """Working at M + 4 and truncating to M reproduces the value computed at M."""
        rng = np.random.default_rng(2000 + p)
        M = 6
        for _ in range(200):
            a = 1 + p * int(rng.integers(0, 10 ** 9))
            low, high = padic_log(PadicNumber.from_rational(p, a, M)), padic_log(PadicNumber.from_rational(p, a, M + 4))
            assert high.truncate(M).absolute_precision == low.absolute_precision == M
            assert high.truncate(M).residue() == low.residue()
            b = p * int(rng.integers(0, 10 ** 9))
            low, high = padic_exp(PadicNumber.from_rational(p, b, M)), padic_exp(PadicNumber.from_rational(p, b, M + 4))
            assert high.truncate(M).residue() == low.residue()

    def test_log_domain(self):
        """log needs an argument congruent to 1."""
        with pytest.raises(DomainViolation):
            padic_log(PadicNumber.from_rational(3, 2, 5))

    def test_iwasawa_log_of_p(self):
        """log_p(p) = 0."""
        assert iwasawa_log(PadicNumber.from_rational(3, 3, 6)).is_zero()

    def test_power_conventions(self):
        """power(y, -1) = <y>, power(y, 1) = <y>^-1, power(y, 0) = 1."""
        y = PadicNumber.from_rational(5, 7, 6)
        assert power(y, -1) == angle(y)
        assert power(y, 1) * angle(y) == 1
        assert power(y, 0) == 1

    def test_exponent_must_be_integral(self):
        """s must lie in Z_p."""
        with pytest.raises(DomainViolation):
            as_exponent(Fraction(1, 3), 3, 5)
        with pytest.raises(DomainViolation):
            power(PadicNumber.from_rational(3, 4, 5), Fraction(1, 3))


class TestEmbedCyclo:
    """Tests for mapping character values into Q_p."""

    def test_fourth_root_of_unity_in_q5(self):
        """zeta_4 goes to a square root of -1."""
        i = embed_cyclo(CycloValue.root_of_unity(4), 5, 6)
        assert i * i == -1

    def test_rational_values(self):
        """Rational values embed as themselves."""
        assert embed_cyclo(CycloValue.rational(Fraction(2, 5)), 3, 6) == PadicNumber.from_rational(3, Fraction(2, 5), 6)

    def test_unavailable(self):
        """Q_5 has no cube roots of unity."""
        with pytest.raises(EmbeddingUnavailable):
            embed_cyclo(CycloValue.root_of_unity(3), 5, 4)


class TestMoritaGamma:
    """Tests for the classical Morita Gamma function."""

    def test_small_values(self):
        """Gamma_5(1..4) = -1, 1, -2, 6 and Gamma_5(0) = 1."""
        assert morita_gamma(1, 5, 4) == -1
        assert morita_gamma(2, 5, 4) == 1
        assert morita_gamma(3, 5, 4) == -2
        assert morita_gamma(4, 5, 4) == 6
        assert morita_gamma(0, 5, 3) == 1

    def test_functional_equation(self):
        """Gamma(x + 1) = -x Gamma(x) for p not dividing x, -Gamma(x) otherwise."""
        p, precision = 7, 3
        for x in range(1, 30):
            factor = -x if x % p else -1
            assert morita_gamma(x + 1, p, precision) == morita_gamma(x, p, precision) * factor

    def test_batch_keeps_order(self):
        """Batch evaluation returns values in input order."""
        assert morita_gamma_batch([4, 1, 3], 5, 4) == [6, -1, -2]
