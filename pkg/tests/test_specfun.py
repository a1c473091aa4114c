import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from qredux.specfun import (
    binomial,
    catalan,
    digamma,
    gauss_2f1_terminating,
    log_binomial,
    log_gamma,
    pochhammer,
    trigamma,
)

EULER_GAMMA = 0.5772156649015329


class TestLogGamma:
    def test_half(self):
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-14)
        assert log_gamma(0.5) == pytest.approx(0.5723649429, abs=1e-10)

    def test_one_and_two(self):
        assert abs(log_gamma(1.0)) <= 1e-13
        assert abs(log_gamma(2.0)) <= 1e-13

    def test_recurrence_to_seven_and_a_half(self):
        expected = log_gamma(0.5) + sum(math.log(0.5 + k) for k in range(7))
        assert log_gamma(7.5) == pytest.approx(expected, abs=1e-12)

    @pytest.mark.parametrize("x", [1e-3, 0.01, 0.3, 1.7, 9.99, 10.0, 47.25, 1e3, 1e5, 1e7])
    def test_against_math_lgamma(self, x):
        # absolute 1e-13 on small/moderate arguments; relative for large ones,
        # where |log Gamma| ~ 1e8 and one ulp already exceeds 1e-8
        ref = math.lgamma(x)
        assert abs(log_gamma(x) - ref) <= 1e-13 * max(1.0, abs(ref))

    def test_vectorized(self):
        xs = np.array([0.25, 1.5, 30.0])
        out = log_gamma(xs)
        assert out.shape == (3,)
        assert np.allclose(out, [math.lgamma(x) for x in xs], atol=1e-13)

    @pytest.mark.parametrize("bad", [0.0, -1.0, -0.5])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            log_gamma(bad)

    @settings(max_examples=1000, deadline=None)
    @given(st.floats(min_value=1e-6, max_value=100.0, allow_nan=False))
    def test_recurrence_property(self, x):
        assert abs(log_gamma(x + 1) - log_gamma(x) - math.log(x)) <= 1e-12 * max(1.0, abs(log_gamma(x + 1)))


class TestDigamma:
    def test_values(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)
        assert digamma(2.0) == pytest.approx(1 - EULER_GAMMA, abs=1e-14)

    def test_finite_difference_at_four_and_a_half(self):
        h = 1e-5
        fd = (log_gamma(4.5 + h) - log_gamma(4.5 - h)) / (2 * h)
        assert digamma(4.5) == pytest.approx(fd, abs=1e-8)

    @pytest.mark.parametrize("x", [1e-3, 0.1, 0.5, 3.3, 8.0, 12.5, 1e4, 1e7])
    def test_against_scipy(self, x):
        assert abs(digamma(x) - special.digamma(x)) <= 1e-12 * max(1.0, abs(special.digamma(x)))

    def test_domain(self):
        with pytest.raises(ValueError):
            digamma(0.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.1, max_value=50.0))
    def test_finite_difference_property(self, x):
        h = 1e-5
        fd = (log_gamma(x + h) - log_gamma(x - h)) / (2 * h)
        assert abs(digamma(x) - fd) <= 1e-7 * max(1.0, abs(fd))


class TestTrigamma:
    def test_values(self):
        assert trigamma(1.0) == pytest.approx(math.pi**2 / 6, abs=1e-14)
        assert trigamma(2.0) == pytest.approx(math.pi**2 / 6 - 1, abs=1e-14)
        assert trigamma(0.5) == pytest.approx(math.pi**2 / 2, abs=1e-13)

    @pytest.mark.parametrize("x", [1e-3, 0.2, 1.5, 7.9, 30.0, 1e4, 1e7])
    def test_against_scipy(self, x):
        ref = special.polygamma(1, x)
        assert abs(trigamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))

    def test_domain(self):
        with pytest.raises(ValueError):
            trigamma(-2.0)

    @settings(max_examples=200, deadline=None)
    @given(st.floats(min_value=0.1, max_value=50.0))
    def test_finite_difference_property(self, x):
        h = 1e-5
        fd = (digamma(x + h) - digamma(x - h)) / (2 * h)
        assert abs(trigamma(x) - fd) <= 1e-6 * max(1.0, abs(fd))


class TestCombinatorics:
    def test_binomial(self):
        assert binomial(5, 2) == 10
        assert binomial(5, 7) == 0
        assert binomial(5, -1) == 0
        assert isinstance(binomial(4100, 2050), int)

    def test_large_binomial_log_space(self):
        exact = binomial(2049, 1024)
        via_gamma = log_gamma(2050.0) - log_gamma(1025.0) - log_gamma(1026.0)
        assert math.log(exact) == pytest.approx(via_gamma, rel=1e-10)
        assert log_binomial(2049, 1024) == pytest.approx(math.log(exact), rel=1e-12)

    def test_catalan(self):
        assert catalan(0) == 1
        assert catalan(3) == 5
        c = [1]
        for m in range(10):
            c.append(sum(c[i] * c[m - i] for i in range(m + 1)))
        assert catalan(10) == c[10] == 16796

    @pytest.mark.parametrize("n", range(0, 31))
    def test_weighted_binomial_identity(self, n):
        total = sum(Fraction((n - 2 * h + 1) ** 2 * binomial(n + 1, h), n + 1) for h in range(n + 2))
        assert total == 2 ** (n + 1)

    def test_pochhammer(self):
        assert pochhammer(3.0, 0) == 1.0
        assert pochhammer(3.0, 2) == 12.0
        assert pochhammer(-2.0, 3) == 0.0


class TestGauss2F1:
    def test_examples(self):
        assert gauss_2f1_terminating(-2, 1, 2).direct == pytest.approx(1 / 3, abs=1e-15)
        assert gauss_2f1_terminating(0, 0.7, 3.1).direct == 1.0
        b, c = 0.7, 2.3
        res = gauss_2f1_terminating(-1, b, c)
        assert res.direct == pytest.approx(1 - b / c, abs=1e-15)
        assert res.closed_form == pytest.approx(1 - b / c, abs=1e-15)

    def test_non_terminating_rejected(self):
        with pytest.raises(ValueError):
            gauss_2f1_terminating(0.5, 0.5, 2.0)

    def test_degenerate_denominator_rejected(self):
        with pytest.raises(ValueError):
            gauss_2f1_terminating(-3, 1.0, -1.0)

    @settings(max_examples=1000, deadline=None)
    @given(
        st.integers(min_value=0, max_value=20),
        st.floats(min_value=-5.0, max_value=5.0),
        st.floats(min_value=0.5, max_value=30.0),
    )
    def test_closed_form_matches_series(self, m, b, c):
        res = gauss_2f1_terminating(-m, b, c)
        assert res.relative_gap <= 1e-9
