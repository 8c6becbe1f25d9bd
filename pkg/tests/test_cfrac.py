"""Unit tests for continued fractions and perturbation schedules."""

import math
from fractions import Fraction

import numpy as np
import pytest

from src.cfrac import (
    RotationNumber,
    an_condition_report,
    an_rule,
    approximants,
    brjuno_divergence_witness,
    brjuno_sum,
    cf_eval,
    cf_expand,
    convergent,
    denominators,
    is_high_type,
    perturbed_rotation,
    shared_convergents,
    theta_schedule,
)
from src.cfrac.schedule import EXP_SQUARE_MAX_DIGITS
from src.core.errors import InvalidScheduleError, PrecisionExhaustedError


GOLDEN = (math.sqrt(5) - 1) / 2


class TestRotationNumber:
    """Tests for digit-stream rotation numbers."""

    def test_golden_value(self):
        """Golden mean digits evaluate to (sqrt 5 - 1) / 2."""
        g = RotationNumber.golden()
        assert g.digits(5) == [0, 1, 1, 1, 1, 1]
        assert abs(float(g) - GOLDEN) < 1e-15

    def test_prefix_then_period(self):
        """Digits run through the prefix and then repeat the period."""
        r = RotationNumber((0, 5, 7), (2, 3))
        assert r.digits(6) == [0, 5, 7, 2, 3, 2, 3]

    def test_finite_expansion(self):
        """A finite stream is the rational it spells."""
        r = RotationNumber((0, 2, 3))
        assert r.is_finite
        assert abs(float(r) - 3 / 7) < 1e-15
        with pytest.raises(IndexError):
            r.digit(3)

    def test_invalid_digits(self):
        """Digits after a0 must be positive."""
        with pytest.raises(ValueError):
            RotationNumber((0, 0, 1))
        with pytest.raises(ValueError):
            RotationNumber(())

    def test_repr(self):
        assert repr(RotationNumber.golden()) == "[0;(1)*]"
        assert repr(RotationNumber((0, 2), (3,))) == "[0;2,(3)*]"

    def test_dict_roundtrip(self):
        r = RotationNumber((0, 4), (1, 2))
        assert RotationNumber.from_dict(r.to_dict()) == r


class TestExpansion:
    """Tests for cf_expand and convergents."""

    def test_exact_fraction(self):
        """Fractions expand exactly and terminate."""
        assert cf_expand(Fraction(3, 7), 10) == [0, 2, 3]

    def test_float_terminates(self):
        """0.5 stops after one digit."""
        assert cf_expand(0.5, 5) == [0, 2]

    def test_string_golden(self):
        """A long decimal string of the golden mean gives ones."""
        digits = cf_expand("0.6180339887498948482045868343656381177203", 12)
        assert digits == [0] + [1] * 12

    def test_float_precision_exhausted(self):
        """Float input runs out of digits well before 60 terms."""
        try:
            digits = cf_expand(GOLDEN, 60)
        except PrecisionExhaustedError as e:
            assert e.details["digits_found"] < 60
        else:
            assert len(digits) < 61

    def test_low_precision_string(self):
        """A string at 64 bits cannot carry 200 digits."""
        with pytest.raises(PrecisionExhaustedError):
            cf_expand("0.41421356237309504880168872420969807856967187537694", 200, precision_bits=64)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            cf_expand(1.5, 5)
        with pytest.raises(ValueError):
            cf_expand(0.5, 0)

    def test_convergent_and_eval(self):
        assert convergent([0, 2, 3]) == (3, 7)
        assert abs(float(cf_eval([0, 2, 3])) - 3 / 7) < 1e-15

    def test_pi_minus_three(self):
        digits = cf_expand("0.14159265358979323846264338327950288419716939937510", 4, precision_bits=256)
        assert digits == [0, 7, 15, 1, 292]
        p, q = convergent(digits)
        assert (p, q) == (4687, 33102)
        assert abs((math.pi - 3) - p / q) < 1 / q ** 2

    def test_sqrt_two(self):
        """sqrt(2) - 1 = [0; 2, 2, 2, ...] with Pell denominators."""
        digits = cf_expand("0.41421356237309504880168872420969807856967187537694", 20)
        assert digits == [0] + [2] * 20
        assert denominators(RotationNumber.periodic((2,)), 4) == [2, 5, 12, 29]


class TestRandomDigits:
    """Convergent identities over random digit vectors."""

    @pytest.fixture(scope="class")
    def vectors(self):
        rng = np.random.default_rng(2024)
        return [
            [0] + [int(a) for a in rng.integers(1, 51, size=int(rng.integers(1, 13)))]
            for _ in range(1000)
        ]

    def test_recurrence(self, vectors):
        for digits in vectors:
            a = approximants(digits, len(digits) - 1)
            p = [1, 0] + [x.p for x in a]
            q = [0, 1] + [x.q for x in a]
            for k in range(1, len(digits)):
                assert p[k + 1] == digits[k] * p[k] + p[k - 1]
                assert q[k + 1] == digits[k] * q[k] + q[k - 1]
                assert abs(p[k + 1] * q[k] - p[k] * q[k + 1]) == 1

    def test_approximation_and_coprime(self, vectors):
        for digits in vectors:
            x = Fraction(*convergent(digits))
            for a in approximants(digits, len(digits) - 1):
                assert math.gcd(a.p, a.q) == 1
                assert abs(x - a.value) < Fraction(1, a.q ** 2)

    def test_exact_expansion_recovers_digits(self, vectors):
        """Expansions end in a digit >= 2, so those vectors expand back to themselves."""
        for digits in vectors:
            if digits[-1] > 1:
                assert cf_expand(Fraction(*convergent(digits)), len(digits)) == digits


class TestApproximants:
    """Tests for approximants, Brjuno sums and high type."""

    def test_golden_denominators(self):
        """Golden denominators are Fibonacci numbers."""
        assert denominators(RotationNumber.golden(), 6) == [1, 2, 3, 5, 8, 13]
        a = approximants(RotationNumber.golden(), 3)
        assert [(x.p, x.q) for x in a] == [(1, 1), (1, 2), (2, 3)]

    def test_approximation_quality(self):
        """Convergents satisfy |x - p/q| < 1/q^2."""
        g = RotationNumber.golden()
        for a in approximants(g, 15):
            assert abs(float(g) - a.p / a.q) < 1 / a.q ** 2

    def test_too_few_digits(self):
        with pytest.raises(ValueError):
            approximants([0, 2, 3], 5)

    def test_brjuno_first_term(self):
        """For golden digits the first term is log(2) / 1."""
        assert brjuno_sum(RotationNumber.golden(), 1) == pytest.approx(math.log(2))

    def test_brjuno_increasing(self):
        g = RotationNumber.golden()
        sums = [brjuno_sum(g, n) for n in range(1, 10)]
        assert all(b > a for a, b in zip(sums, sums[1:]))
        with pytest.raises(ValueError):
            brjuno_sum(g, 0)

    def test_high_type(self):
        assert is_high_type(RotationNumber.periodic((3,)), 3)
        assert not is_high_type(RotationNumber.periodic((3,)), 4)
        assert not is_high_type(RotationNumber((0, 5), (2,)), 3)
        assert is_high_type([0, 4, 7, 9], 4)


class TestPerturbedRotation:
    """Tests for alpha_n and A_n rules."""

    def test_digits_and_shared_convergents(self):
        """alpha_n keeps n digits, inserts A_n and continues with theta."""
        alpha = RotationNumber.golden()
        alpha_n = perturbed_rotation(alpha, 3, 10, RotationNumber.periodic((2,)))
        assert alpha_n.digits(6) == [0, 1, 1, 1, 10, 2, 2]
        assert shared_convergents(alpha, alpha_n, 3)
        assert not shared_convergents(alpha, alpha_n, 4)

    def test_invalid_A(self):
        with pytest.raises(ValueError):
            perturbed_rotation(RotationNumber.golden(), 2, 0, RotationNumber.golden())

    def test_rules(self):
        assert an_rule("linear", 3, 5, 2) == 6
        assert an_rule("power", 3, 5, 2) == 25
        assert an_rule("exp_square", 1, 2) == math.ceil(math.exp(4))
        assert an_rule("constant", 9, 100, 7) == 7

    def test_exp_square_cap(self):
        """Huge exponents are capped in digit count."""
        assert an_rule("exp_square", 5, 100) == 10 ** EXP_SQUARE_MAX_DIGITS
        assert an_rule("exp_square", 5, 100, max_digits=20) == 10 ** 20

    def test_unknown_rule(self):
        with pytest.raises(InvalidScheduleError):
            an_rule("cubic", 1, 1)

    def test_condition_report(self):
        """(log A_n)^(1/q_n) heads toward 1 for exp_square growth."""
        rows = an_condition_report(RotationNumber.periodic((3,)), [1, 2], "exp_square")
        assert [r["n"] for r in rows] == [1, 2]
        assert [r["q_n"] for r in rows] == [3, 10]
        assert rows[1]["log_root"] == pytest.approx(100 ** (1 / 10), rel=1e-6)
        assert rows[1]["log_bound"] == pytest.approx(11 ** (3 / 10))

    def test_exp_square_meets_both_conditions(self):
        """The digit cap still leaves A_n^(1/q_n) above log q_n through q_5 = 360."""
        rows = an_condition_report(RotationNumber.periodic((3,)), [1, 2, 3, 4, 5], "exp_square")
        assert rows[-1]["q_n"] == 360
        assert all(r["log_root_ok"] and r["root_ok"] for r in rows)

    def test_linear_growth_is_too_slow_for_area(self):
        rows = an_condition_report(RotationNumber.periodic((3,)), [1, 2, 3], "linear")
        assert all(r["log_root_ok"] for r in rows)
        assert not any(r["root_ok"] for r in rows)

    def test_fast_growth_violates_log_condition(self):
        rows = an_condition_report(RotationNumber.golden(), [1, 2], "exp_square", scale=50)
        assert [r["log_root_ok"] for r in rows] == [False, False]
        assert rows[0]["log_root"] == pytest.approx(50.0, rel=1e-9)
        loose = an_condition_report(RotationNumber.golden(), [1, 2], "exp_square", scale=50, log_degree=12)
        assert all(r["log_root_ok"] for r in loose)


class TestThetaSchedule:
    """Tests for the theta_l chain."""

    def test_table(self):
        """b_j follows theta0 up to m_1, then A_t at m_t + 1 and N elsewhere."""
        s = theta_schedule(RotationNumber.periodic((3,)), [2, 4], [40, 400], 3)
        assert s.b_table == [3, 3, 40, 3, 400]
        assert s.thetas[0].prefix == (0, 3, 3, 40)
        assert s.thetas[1].prefix == (0, 3, 3, 40, 3, 400)
        assert s.thetas[0].period == (3,)
        assert s.b(10) == 3
        assert s.limit == s.thetas[-1]

    def test_consecutive_levels_share_convergents(self):
        s = theta_schedule(RotationNumber.periodic((3,)), [2, 4, 6], [40, 400, 4000], 3)
        assert shared_convergents(s.thetas[0], s.thetas[1], 3)
        assert shared_convergents(s.thetas[1], s.thetas[2], 5)

    def test_invalid(self):
        with pytest.raises(InvalidScheduleError):
            theta_schedule([0, 3, 3], [2, 2], [5, 5], 3)
        with pytest.raises(InvalidScheduleError):
            theta_schedule([0, 3, 3], [2], [5, 6], 3)
        with pytest.raises(InvalidScheduleError):
            theta_schedule([0, 3], [2], [5], 3)

    def test_divergence_witness(self):
        s = theta_schedule(RotationNumber.periodic((3,)), [2, 4, 6], [40, 400, 4000], 3)
        low = brjuno_divergence_witness(s, 0.1)
        assert low["first_exceeding"] == 1
        assert len(low["level_terms"]) == 3
        assert brjuno_divergence_witness(s, 1e9)["first_exceeding"] is None
