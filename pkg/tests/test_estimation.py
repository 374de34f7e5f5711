import math

import numpy as np
import pytest

from pathfisher import (
    EffectiveChannelParams,
    ExperimentConfig,
    OutcomeCounts,
    ProtocolSpec,
    default_window,
    effective_channel_params,
    log_likelihood,
    log_likelihood_grid,
    mle_estimate,
    outcome_probabilities,
    phase_kick,
    result_to_dict,
    rmse_trials,
    sample_outcomes,
)


def make_spec(lam, N, theta2=0.0):
    params = EffectiveChannelParams(lam=lam, theta2=theta2, M=1, theta0=0.0, theta1=0.0)
    return ProtocolSpec(params, N=N)


def expected_counts(spec, theta, nu):
    return nu * outcome_probabilities(spec, theta).as_array()


class TestExperimentConfig:
    def test_rejects_wide_window(self):
        spec = make_spec(0.9, 8)
        with pytest.raises(ValueError):
            ExperimentConfig(spec=spec, theta_true=0.0, nu=10, seed=1, window=(-1.0, 1.0))

    def test_rejects_theta_outside_window(self):
        spec = make_spec(0.9, 8)
        with pytest.raises(ValueError):
            ExperimentConfig(spec=spec, theta_true=0.5, nu=10, seed=1, window=(-0.1, 0.1))

    def test_rejects_bad_seed(self):
        spec = make_spec(0.9, 8)
        with pytest.raises(ValueError):
            ExperimentConfig(spec=spec, theta_true=0.0, nu=10, seed=-1, window=(-0.1, 0.1))

    def test_default_window_width(self):
        lo, hi = default_window(0.3, 8)
        assert hi - lo == pytest.approx(math.pi / 8, abs=1e-15)
        assert (lo + hi) / 2 == pytest.approx(0.3, abs=1e-15)


class TestSampleOutcomes:
    def test_deterministic_given_seed(self):
        spec = make_spec(0.8, 4)
        a = sample_outcomes(spec, 0.05, 5000, seed=42)
        b = sample_outcomes(spec, 0.05, 5000, seed=42)
        assert a == b
        c = sample_outcomes(spec, 0.05, 5000, seed=43)
        assert a != c

    def test_impossible_outcome_never_drawn(self):
        # lambda = 1 at zero phase: p(P-) = 0 exactly.
        counts = sample_outcomes(make_spec(1.0, 1), 0.0, 20_000, seed=7)
        assert counts.p_minus == 0
        assert counts.total == 20_000

    def test_law_of_large_numbers(self):
        nu = 1_000_000
        counts = sample_outcomes(make_spec(1.0, 1), 0.0, nu, seed=11)
        # expected (1/2, 0, 1/4, 1/4); 4 sigma bands
        for observed, p in zip(counts.as_array(), [0.5, 0.0, 0.25, 0.25]):
            sigma = math.sqrt(nu * p * (1 - p)) if p > 0 else 0.0
            assert abs(observed - nu * p) <= 4.0 * sigma + 1e-9

    def test_counts_validation(self):
        with pytest.raises(ValueError):
            OutcomeCounts(-1, 2, 3, 4)


class TestLogLikelihood:
    def test_all_mass_on_half_probability_outcome(self):
        spec = make_spec(1.0, 1)
        # at zero phase p(P+) = 1/2
        counts = OutcomeCounts(100, 0, 0, 0)
        assert log_likelihood(counts, spec, 0.0) == pytest.approx(100 * math.log(0.5))

    def test_impossible_observation_is_minus_infinity(self):
        spec = make_spec(1.0, 1)
        counts = OutcomeCounts(0, 5, 0, 0)  # p(P-) = 0 at zero phase
        assert log_likelihood(counts, spec, 0.0) == float("-inf")

    def test_finite_everywhere_for_noisy_protocol(self):
        spec = make_spec(0.5, 3)
        counts = OutcomeCounts(25, 25, 25, 25)
        for theta in np.linspace(-1, 1, 41):
            assert math.isfinite(log_likelihood(counts, spec, float(theta)))

    def test_grid_matches_scalar(self):
        spec = make_spec(0.7, 5, theta2=0.1)
        counts = OutcomeCounts(40, 30, 20, 10)
        thetas = np.linspace(-0.5, 0.5, 21)
        grid = log_likelihood_grid(counts, spec, thetas)
        for j, theta in enumerate(thetas):
            assert grid[j] == pytest.approx(log_likelihood(counts, spec, float(theta)))

    def test_true_phase_is_stationary_for_expected_counts(self):
        spec = make_spec(0.85, 6)
        theta_true = 0.07
        nu = 10_000
        counts = expected_counts(spec, theta_true, nu)
        h = 1e-6
        derivative = (
            log_likelihood(counts, spec, theta_true + h)
            - log_likelihood(counts, spec, theta_true - h)
        ) / (2 * h)
        assert abs(derivative) <= 1e-6 * nu

    def test_population_likelihood_locally_concave(self):
        spec = make_spec(0.85, 6)
        theta_true = 0.07
        counts = expected_counts(spec, theta_true, 10_000)
        h = 1e-4
        second = (
            log_likelihood(counts, spec, theta_true + h)
            - 2 * log_likelihood(counts, spec, theta_true)
            + log_likelihood(counts, spec, theta_true - h)
        ) / h**2
        assert second < 0.0


class TestMleEstimate:
    def test_recovers_population_optimum(self):
        spec = make_spec(0.8, 8, theta2=0.03)
        theta_true = 0.11
        counts = expected_counts(spec, theta_true, 50_000)
        window = default_window(theta_true, 8)
        assert mle_estimate(counts, spec, window) == pytest.approx(theta_true, abs=1e-8)

    def test_noiseless_single_probe_peak(self):
        # All mass on P+ maximises cos(theta + theta2), i.e. theta = -theta2.
        spec = make_spec(1.0, 1, theta2=0.2)
        counts = OutcomeCounts(1000, 0, 0, 0)
        estimate = mle_estimate(counts, spec, (-1.0, 1.0))
        assert estimate == pytest.approx(-0.2, abs=1e-6)

    def test_estimate_stays_in_window(self):
        spec = make_spec(0.6, 4)
        rng = np.random.default_rng(3)
        window = (-0.3, 0.3)
        for _ in range(25):
            counts = OutcomeCounts(*(int(v) for v in rng.integers(0, 50, size=4)))
            estimate = mle_estimate(counts, spec, window)
            assert window[0] <= estimate <= window[1]

    def test_tiny_window_returns_interior_point(self):
        spec = make_spec(0.8, 4)
        counts = OutcomeCounts(10, 10, 10, 10)
        estimate = mle_estimate(counts, spec, (0.1, 0.1 + 1e-6))
        assert 0.1 <= estimate <= 0.1 + 1e-6

    def test_rejects_wide_window(self):
        spec = make_spec(0.8, 8)
        with pytest.raises(ValueError):
            mle_estimate(OutcomeCounts(1, 1, 1, 1), spec, (-1.0, 1.0))


class TestRmseTrials:
    def config(self, lam=0.8, N=8, nu=2000, seed=5):
        spec = make_spec(lam, N)
        return ExperimentConfig(
            spec=spec, theta_true=0.0, nu=nu, seed=seed, window=default_window(0.0, N)
        )

    def test_bit_identical_given_config(self):
        a = rmse_trials(self.config(), trials=20)
        b = rmse_trials(self.config(), trials=20)
        assert a.theta_hats == b.theta_hats
        assert a.rmse == b.rmse
        assert a.cramer_rao == b.cramer_rao

    def test_single_trial_rmse_is_absolute_error(self):
        result = rmse_trials(self.config(nu=50), trials=1)
        assert result.rmse == pytest.approx(abs(result.theta_hat - 0.0), abs=1e-15)

    def test_cramer_rao_value(self):
        config = self.config()
        result = rmse_trials(config, trials=2)
        from pathfisher import fisher_exact

        info = fisher_exact(config.spec, 0.0).exact
        assert result.cramer_rao == pytest.approx(1 / math.sqrt(config.nu * info), rel=1e-12)

    def test_asymptotic_efficiency_band(self):
        config = self.config(lam=0.9, N=8, nu=10_000, seed=12)
        result = rmse_trials(config, trials=100)
        assert 0.8 <= result.rmse / result.cramer_rao <= 1.3

    def test_counts_recorded_on_request(self):
        result = rmse_trials(self.config(), trials=3, keep_counts=True)
        assert result.counts is not None and len(result.counts) == 3
        assert all(c.total == 2000 for c in result.counts)

    def test_result_to_dict_round_trip(self):
        config = self.config()
        result = rmse_trials(config, trials=3, keep_counts=True)
        payload = result_to_dict(config, result, include_counts=True)
        assert payload["trials"] == 3
        assert len(payload["theta_hats"]) == 3
        assert len(payload["counts_per_trial"]) == 3
        assert payload["config"]["nu"] == 2000

    def test_include_counts_requires_recording(self):
        config = self.config()
        result = rmse_trials(config, trials=2)
        with pytest.raises(ValueError):
            result_to_dict(config, result, include_counts=True)


class TestEndToEndScaling:
    def test_rmse_tracks_heisenberg_slope_quickly(self):
        # Small version of the statistical scaling run: nu=2000, 60 trials.
        rmses = []
        ns = [4, 8, 16]
        for n in ns:
            params = effective_channel_params(phase_kick(0.5, math.pi), n)
            spec = ProtocolSpec(params, N=n)
            config = ExperimentConfig(
                spec=spec, theta_true=0.0, nu=2000, seed=99, window=default_window(0.0, n)
            )
            rmses.append(rmse_trials(config, trials=60).rmse)
        slope = np.polyfit(np.log(ns), np.log(rmses), 1)[0]
        assert -1.25 <= slope <= -0.75
