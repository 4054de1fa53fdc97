"""Tests for confidence-interval sizing and sample-size planning."""

import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hypertail import (
    FORMULA_B1,
    FORMULA_C1,
    FORMULA_C2,
    FORMULA_D1,
    FORMULA_D2,
    REGIME_S1,
    REGIME_S2,
    DomainError,
    b1_confidence_for_halfwidth,
    b1_halfwidth_for_confidence,
    confidence_for_halfwidth,
    halfwidth_for_confidence,
    required_sample_size,
    sample_size_lower_estimate,
)
from hypertail.inference import _s1_real, _s2_real

DELTA_STRAT = st.floats(min_value=0.01, max_value=0.99, allow_nan=False)


@st.composite
def partial_sample(draw, max_N=1000):
    """(N, n, i) with 1 <= n < N so both directions stay invertible."""
    N = draw(st.integers(min_value=2, max_value=max_N))
    n = draw(st.integers(min_value=1, max_value=N - 1))
    i = draw(st.integers(min_value=0, max_value=n))
    return N, n, i


class TestHalfwidthForConfidence:
    def test_voter_poll_scale(self):
        res = halfwidth_for_confidence(17_793_691, 100_000, 5720, 0.05)
        assert res.formula == FORMULA_C1
        assert not res.legacy
        assert res.halfwidth == pytest.approx(76203.42435859634, rel=1e-12)
        assert res.estimate == Fraction(5720 * 17_793_691, 100_000)
        assert res.lower == pytest.approx(941595.7008414037, rel=1e-12)
        assert res.upper == pytest.approx(1094002.5495585965, rel=1e-12)

    def test_majority_sample_uses_complement_formula(self):
        res = halfwidth_for_confidence(100, 80, 40, 0.05)
        assert res.formula == FORMULA_C2
        assert res.halfwidth == pytest.approx(6.832816446468433, rel=1e-12)

    def test_census_gives_zero_width(self):
        res = halfwidth_for_confidence(10, 10, 7, 0.05)
        assert res.formula == FORMULA_C2
        assert res.halfwidth == 0.0
        assert res.lower == res.upper == 7.0
        assert res.contains(7)
        assert not res.contains(6)

    def test_legacy_comparison_value(self):
        res = b1_halfwidth_for_confidence(17_793_691, 100_000, 5720, 0.05)
        assert res.legacy
        assert res.formula == FORMULA_B1
        assert res.halfwidth == pytest.approx(76418.45946074669, rel=1e-12)

    @given(Nni=partial_sample(), delta=DELTA_STRAT)
    def test_formula_switches_at_half_census(self, Nni, delta):
        N, n, i = Nni
        res = halfwidth_for_confidence(N, n, i, delta)
        assert res.formula == (FORMULA_C1 if 2 * n <= N else FORMULA_C2)

    @given(Nni=partial_sample(), delta=DELTA_STRAT)
    def test_never_wider_than_legacy(self, Nni, delta):
        N, n, i = Nni
        primary = halfwidth_for_confidence(N, n, i, delta)
        legacy = b1_halfwidth_for_confidence(N, n, i, delta)
        assert primary.halfwidth <= legacy.halfwidth * (1 + 1e-12)

    @given(Nni=partial_sample(), delta=DELTA_STRAT)
    def test_interval_geometry(self, Nni, delta):
        N, n, i = Nni
        res = halfwidth_for_confidence(N, n, i, delta)
        assert res.estimate == Fraction(i * N, n)
        width = Fraction(res.halfwidth)
        assert res.lower == float(res.estimate - width)
        assert res.upper == float(res.estimate + width)
        assert 0.0 <= res.clamped_lower <= res.clamped_upper <= float(N)
        assert res.delta == delta


class TestConfidenceForHalfwidth:
    def test_voter_poll_scale(self):
        res = confidence_for_halfwidth(17_793_691, 100_000, 5720, 62278)
        assert res.formula == FORMULA_D1
        assert not res.vacuous
        assert res.delta == pytest.approx(0.17021279791623378, rel=1e-12)
        assert res.lower == pytest.approx(955521.1252, rel=1e-12)
        assert res.upper == pytest.approx(1080077.1252, rel=1e-12)

    def test_legacy_comparison_value(self):
        res = b1_confidence_for_halfwidth(17_793_691, 100_000, 5720, 62278)
        assert res.legacy
        assert res.delta == pytest.approx(0.17258606630613932, rel=1e-12)

    def test_census_has_zero_miscoverage(self):
        res = confidence_for_halfwidth(10, 10, 7, 2.5)
        assert res.formula == FORMULA_D2
        assert res.delta == 0.0
        assert not res.vacuous

    def test_vacuous_when_sample_is_too_small(self):
        res = confidence_for_halfwidth(1000, 2, 1, 0.5)
        assert res.vacuous
        assert res.delta == 1.0
        legacy = b1_confidence_for_halfwidth(1000, 2, 1, 0.5)
        assert legacy.vacuous and legacy.delta == 1.0

    @given(Nni=partial_sample(), c=st.floats(min_value=0.01, max_value=50.0))
    def test_formula_switches_at_half_census(self, Nni, c):
        N, n, i = Nni
        res = confidence_for_halfwidth(N, n, i, c)
        assert res.formula == (FORMULA_D1 if 2 * n <= N else FORMULA_D2)

    @given(Nni=partial_sample(), c=st.floats(min_value=0.01, max_value=50.0))
    def test_never_more_confident_than_legacy(self, Nni, c):
        N, n, i = Nni
        primary = confidence_for_halfwidth(N, n, i, c)
        legacy = b1_confidence_for_halfwidth(N, n, i, c)
        assert primary.delta <= legacy.delta * (1 + 1e-12)

    @given(Nni=partial_sample(), delta=DELTA_STRAT)
    def test_round_trip_recovers_delta(self, Nni, delta):
        N, n, i = Nni
        sized = halfwidth_for_confidence(N, n, i, delta)
        back = confidence_for_halfwidth(N, n, i, sized.halfwidth)
        assert back.delta == pytest.approx(delta, rel=1e-9)
        assert back.formula == {FORMULA_C1: FORMULA_D1, FORMULA_C2: FORMULA_D2}[
            sized.formula
        ]


class TestMembership:
    def test_contains_is_exact_at_the_boundary(self):
        res = halfwidth_for_confidence(10, 5, 3, 0.1)
        width = Fraction(res.halfwidth)
        inside = res.estimate + width
        assert res.contains(inside)
        assert not res.contains(inside + Fraction(1, 10**30))

    def test_contains_integer_counts(self):
        res = confidence_for_halfwidth(100, 20, 5, 10)
        for M in range(101):
            expected = abs(M - res.estimate) <= Fraction(res.halfwidth)
            assert res.contains(M) == expected


class TestSampleSizePlanning:
    def test_large_population_plan(self):
        N = 17_793_691
        res = required_sample_size(N, 0.05, N / 400)
        assert res.regime == REGIME_S1
        assert res.x == 160000.0
        assert res.y == pytest.approx(1.8444397270569681, rel=1e-12)
        assert res.n_real == pytest.approx(290295.78483890014, rel=1e-12)
        assert res.n_required == 290296

    def test_integer_halfwidth_variant(self):
        res = required_sample_size(17_793_691, 0.05, 44484)
        assert res.regime == REGIME_S1
        assert res.n_real == pytest.approx(290298.7056642377, rel=1e-12)
        assert res.n_required == 290299

    def test_small_population_plan(self):
        res = required_sample_size(100, 0.05, 5)
        assert res.regime == REGIME_S2
        assert res.regime_boundary == pytest.approx(11.55425153409084, rel=1e-12)
        assert res.n_real == pytest.approx(88.18165882397176, rel=1e-12)
        assert res.n_required == 89

    def test_lower_estimate_values(self):
        est = sample_size_lower_estimate(17_793_691, 0.05, 44484)
        assert est == pytest.approx(290298.68934954004, rel=1e-12)
        assert est <= 290298.7056642377
        small = sample_size_lower_estimate(100, 0.05, 5)
        assert small == pytest.approx(88.06363359277513, rel=1e-12)

    def test_tiny_halfwidth_demands_census(self):
        res = required_sample_size(1000, 0.05, 1e-150)
        assert res.n_required == 1000

    def test_regimes_agree_on_their_shared_boundary(self):
        # c = sqrt(y (N + 2)) makes N sit exactly on the regime
        # boundary, where both closed forms solve to n = N/2.
        for N in (10, 100, 1000, 10**6):
            for delta in (0.2, 0.05):
                y = -0.5 * (math.log(delta) - math.log(2.0))
                c = math.sqrt(y * (N + 2))
                xy = (N / c) ** 2 * y
                s1 = _s1_real(N, xy)
                s2 = _s2_real(N, xy)
                assert s1 == pytest.approx(N / 2, rel=1e-9)
                assert s2 == pytest.approx(N / 2, rel=1e-9)

    @pytest.mark.parametrize("N", [50, 200, 1000])
    @pytest.mark.parametrize("delta", [0.2, 0.05])
    @pytest.mark.parametrize("c_fraction", [0.02, 0.05, 0.2, 0.5])
    def test_result_is_sufficient_and_minimal(self, N, delta, c_fraction):
        c = c_fraction * N
        res = required_sample_size(N, delta, c)
        n = res.n_required
        assert 1 <= n <= N
        achieved = halfwidth_for_confidence(N, n, 0, delta).halfwidth
        assert achieved <= c * (1 + 1e-9)
        if n > 1:
            shorter = halfwidth_for_confidence(N, n - 1, 0, delta).halfwidth
            assert shorter > c * (1 - 1e-9)

    @given(
        N=st.integers(min_value=2, max_value=10**6),
        delta=DELTA_STRAT,
        c_fraction=st.floats(min_value=1e-4, max_value=0.999),
    )
    def test_lower_estimate_never_exceeds_solution(self, N, delta, c_fraction):
        c = c_fraction * N
        res = required_sample_size(N, delta, c)
        est = sample_size_lower_estimate(N, delta, c)
        assert est <= res.n_real * (1 + 1e-12)
        assert res.regime == (REGIME_S1 if N <= res.regime_boundary else REGIME_S2)


class TestValidation:
    @pytest.mark.parametrize(
        "call",
        [
            lambda: halfwidth_for_confidence(0, 1, 0, 0.1),
            lambda: halfwidth_for_confidence(10, 0, 0, 0.1),
            lambda: halfwidth_for_confidence(10, 11, 0, 0.1),
            lambda: halfwidth_for_confidence(10, 5, 6, 0.1),
            lambda: halfwidth_for_confidence(10, 5, -1, 0.1),
            lambda: halfwidth_for_confidence(10, 5, 3, 0.0),
            lambda: halfwidth_for_confidence(10, 5, 3, 1.0),
            lambda: halfwidth_for_confidence(10, 5, 3, float("nan")),
            lambda: confidence_for_halfwidth(10, 5, 3, 0.0),
            lambda: confidence_for_halfwidth(10, 5, 3, -2.0),
            lambda: b1_halfwidth_for_confidence(10, 5, 3, 1.5),
            lambda: b1_confidence_for_halfwidth(10, 5, 3, -1.0),
            lambda: required_sample_size(10, 0.0, 1.0),
            lambda: required_sample_size(10, 0.1, 0.0),
            lambda: required_sample_size(0, 0.1, 1.0),
        ],
    )
    def test_domain_errors(self, call):
        with pytest.raises(DomainError):
            call()

    def test_oversized_halfwidth_needs_no_samples(self):
        with pytest.raises(DomainError, match="n = 0 samples"):
            required_sample_size(10, 0.1, 10)
