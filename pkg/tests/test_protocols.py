import cmath
import math

import numpy as np
import pytest

from pathfisher import (
    EffectiveChannelParams,
    FisherReport,
    OutcomeDistribution,
    ProtocolSpec,
    effective_channel_params,
    fisher_bound,
    fisher_exact,
    ghz_coherence,
    outcome_probabilities,
    outcome_probability_grid,
    phase_kick,
)


def make_spec(lam, N, theta2=0.0, mode="parallel"):
    params = EffectiveChannelParams(lam=lam, theta2=theta2, M=1, theta0=0.0, theta1=0.0)
    return ProtocolSpec(params, N=N, mode=mode)


def fisher_finite_difference(spec, theta, h=1e-5):
    p = outcome_probabilities(spec, theta).as_array()
    dp = (
        outcome_probabilities(spec, theta + h).as_array()
        - outcome_probabilities(spec, theta - h).as_array()
    ) / (2 * h)
    mask = p > 1e-8
    return float(np.sum(dp[mask] ** 2 / p[mask]))


class TestProtocolSpec:
    def test_requires_positive_n(self):
        with pytest.raises(ValueError):
            make_spec(0.5, 0)

    def test_rejects_unknown_mode(self):
        with pytest.raises(ValueError):
            make_spec(0.5, 2, mode="adaptive")


class TestGhzCoherence:
    def test_noiseless(self):
        assert ghz_coherence(make_spec(1.0, 3), 0.0) == pytest.approx(1.0, abs=1e-15)

    def test_decay_power(self):
        assert ghz_coherence(make_spec(0.9, 10), 0.0) == pytest.approx(
            0.3486784401, abs=1e-10
        )

    def test_phase_winding(self):
        value = ghz_coherence(make_spec(0.5, 2), math.pi / 4)
        assert value == pytest.approx(0.25 * cmath.exp(-1j * math.pi / 2), abs=1e-14)

    def test_modes_agree(self):
        for theta in (0.0, 0.4, 2.2):
            par = ghz_coherence(make_spec(0.7, 5, theta2=0.1, mode="parallel"), theta)
            seq = ghz_coherence(make_spec(0.7, 5, theta2=0.1, mode="sequential"), theta)
            assert par == seq


class TestOutcomeProbabilities:
    def test_zero_phase(self):
        dist = outcome_probabilities(make_spec(0.8, 3), 0.0)
        v = 0.8**3
        assert dist.pP_plus == pytest.approx((1 + v) / 4, abs=1e-14)
        assert dist.pP_minus == pytest.approx((1 - v) / 4, abs=1e-14)
        assert dist.pQ_plus == pytest.approx(0.25, abs=1e-14)
        assert dist.pQ_minus == pytest.approx(0.25, abs=1e-14)

    def test_quarter_turn_noiseless(self):
        dist = outcome_probabilities(make_spec(1.0, 1), math.pi / 2)
        assert dist.pP_plus == pytest.approx(0.25, abs=1e-14)
        assert dist.pP_minus == pytest.approx(0.25, abs=1e-14)
        assert dist.pQ_plus == pytest.approx(0.5, abs=1e-14)
        assert dist.pQ_minus == pytest.approx(0.0, abs=1e-14)

    def test_eighth_turn_value(self):
        dist = outcome_probabilities(make_spec(0.5, 2), math.pi / 8)
        assert dist.pP_plus == pytest.approx(0.29419417382415924, abs=1e-12)

    def test_probabilities_stay_in_range_and_normalised(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            spec = make_spec(float(rng.uniform(0, 1)), int(rng.integers(1, 40)),
                             theta2=float(rng.uniform(-3, 3)))
            p = outcome_probabilities(spec, float(rng.uniform(-7, 7))).as_array()
            assert np.all(p >= -1e-15) and np.all(p <= 0.5 + 1e-15)
            assert p.sum() == pytest.approx(1.0, abs=1e-12)

    def test_grid_matches_scalar(self):
        spec = make_spec(0.6, 4, theta2=0.2)
        thetas = np.linspace(-1.0, 1.0, 17)
        grid = outcome_probability_grid(spec, thetas)
        for j, theta in enumerate(thetas):
            assert np.max(
                np.abs(grid[:, j] - outcome_probabilities(spec, float(theta)).as_array())
            ) <= 1e-15

    def test_invalid_distribution_rejected(self):
        with pytest.raises(ValueError):
            OutcomeDistribution(0.6, 0.2, 0.1, 0.1)


class TestFisher:
    def test_noiseless_is_n_squared_everywhere(self):
        for n in (1, 2, 7, 20):
            spec = make_spec(1.0, n)
            for theta in np.linspace(0.0, 2 * math.pi, 25):
                assert fisher_exact(spec, float(theta)).exact == pytest.approx(
                    n * n, rel=1e-12
                )

    def test_sin_zero_phase_equals_bound(self):
        spec = make_spec(0.9, 10)
        report = fisher_exact(spec, 0.0)
        assert report.exact == pytest.approx(report.bound, rel=1e-12)
        assert report.bound == pytest.approx(6.078832729528467, abs=1e-10)

    def test_bound_examples(self):
        assert fisher_bound(make_spec(1.0, 6)) == pytest.approx(18.0, abs=1e-12)
        assert fisher_bound(make_spec(0.9, 10)) == pytest.approx(6.078832729528467, abs=1e-10)

    def test_bound_limit_with_linear_paths(self):
        # M = N with the half-pi kick: bound / N^2 -> e^-2 / 2.
        limit = math.exp(-2) / 2
        gaps = []
        for n in (16, 64, 256):
            params = effective_channel_params(phase_kick(0.5, math.pi), n)
            spec = ProtocolSpec(params, N=n)
            gaps.append(abs(fisher_bound(spec) / n**2 - limit))
        assert gaps[-1] < 0.0005
        assert gaps[0] > gaps[1] > gaps[2]

    def test_exact_never_undercuts_bound(self):
        rng = np.random.default_rng(21)
        for _ in range(60):
            spec = make_spec(float(rng.uniform(0.05, 1.0)), int(rng.integers(1, 65)),
                             theta2=float(rng.uniform(-3, 3)))
            for theta in rng.uniform(-7, 7, size=16):
                report = fisher_exact(spec, float(theta))
                assert report.exact >= report.bound - 1e-9

    def test_matches_finite_differences(self):
        rng = np.random.default_rng(22)
        for _ in range(40):
            lam = float(rng.uniform(0.2, 0.999))
            n = int(rng.integers(1, 30))
            theta2 = float(rng.uniform(-2, 2))
            theta = float(rng.uniform(-3, 3))
            spec = make_spec(lam, n, theta2=theta2)
            exact = fisher_exact(spec, theta).exact
            approx = fisher_finite_difference(spec, theta)
            assert exact == pytest.approx(approx, rel=1e-5)

    def test_parallel_and_sequential_reports_identical(self):
        params = effective_channel_params(phase_kick(0.5, math.pi / 2), 3)
        for theta in (0.0, 0.3, 1.7):
            par = fisher_exact(ProtocolSpec(params, N=6, mode="parallel"), theta)
            seq = fisher_exact(ProtocolSpec(params, N=6, mode="sequential"), theta)
            assert par.exact == seq.exact
            assert par.bound == seq.bound

    def test_heisenberg_slope_of_bound(self):
        # After dividing out the convergent ((N-1)/N)^{2N} factor the
        # log-log slope is exactly 2.
        ns = np.array([8, 16, 32, 64], dtype=float)
        values = []
        for n in ns.astype(int):
            params = effective_channel_params(phase_kick(0.5, math.pi), n)
            spec = ProtocolSpec(params, N=n)
            values.append(fisher_bound(spec) / ((n - 1) / n) ** (2 * n))
        slope = np.polyfit(np.log(ns), np.log(values), 1)[0]
        assert slope == pytest.approx(2.0, abs=0.02)

    def test_report_invariant_guard(self):
        with pytest.raises(ValueError):
            FisherReport(theta=0.0, exact=1.0, bound=2.0)
