"""Monte-Carlo measurement records and maximum-likelihood phase estimation.

Sampling is fully deterministic given the 64-bit seed; repeated trials use
derived seeds ``seed + trial_index`` so results are independent of execution
order.  The estimation window must not exceed the fringe period 2*pi/N, the
identifiability interval of the protocol.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .protocols import (
    ProtocolSpec,
    fisher_exact,
    outcome_probabilities,
    outcome_probability_grid,
)

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: Coarse-grid size used before golden-section refinement.
MLE_GRID_POINTS = 512

#: Window-fraction tolerance of the refinement stage.
MLE_REFINE_TOL = 1e-10


@dataclass(frozen=True)
class OutcomeCounts:
    """Counts of the four fringe outcomes, in (P+, P-, Q+, Q-) order."""

    p_plus: int
    p_minus: int
    q_plus: int
    q_minus: int

    def __post_init__(self) -> None:
        if min(self.p_plus, self.p_minus, self.q_plus, self.q_minus) < 0:
            raise ValueError("counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.p_plus + self.p_minus + self.q_plus + self.q_minus

    def as_array(self) -> np.ndarray:
        return np.array([self.p_plus, self.p_minus, self.q_plus, self.q_minus])


@dataclass(frozen=True)
class ExperimentConfig:
    """Declarative description of one simulated estimation experiment."""

    spec: ProtocolSpec
    theta_true: float
    nu: int
    seed: int
    window: tuple[float, float]

    def __post_init__(self) -> None:
        if self.nu < 1:
            raise ValueError("nu must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        lo, hi = self.window
        if not hi > lo:
            raise ValueError("window must be a nonempty interval")
        if hi - lo > 2.0 * math.pi / self.spec.N + 1e-9:
            raise ValueError(
                "window wider than 2*pi/N is not identifiable from the fringes"
            )
        if not lo <= self.theta_true <= hi:
            raise ValueError("theta_true must lie inside the window")


@dataclass(frozen=True)
class EstimationResult:
    """Aggregate of repeated sample -> MLE cycles.

    ``theta_hat`` and ``log_likelihood_at_hat`` refer to the first trial;
    ``theta_hats`` carries every trial estimate.  ``counts`` is populated
    only when the trials were run with ``keep_counts=True``.
    """

    theta_hat: float
    log_likelihood_at_hat: float
    rmse: float
    cramer_rao: float
    trials: int
    theta_hats: tuple[float, ...]
    counts: tuple[OutcomeCounts, ...] | None = None

    def __post_init__(self) -> None:
        if self.rmse < 0.0:
            raise ValueError("rmse is nonnegative")
        if self.trials != len(self.theta_hats):
            raise ValueError("one estimate per trial expected")


def default_window(theta_true: float, N: int) -> tuple[float, float]:
    """Identifiable window of half-period width centred on the true phase."""
    half = 0.5 * math.pi / N
    return (theta_true - half, theta_true + half)


def sample_outcomes(
    spec: ProtocolSpec, theta_true: float, nu: int, seed: int
) -> OutcomeCounts:
    """Draw ``nu`` independent fringe outcomes with a seeded generator."""
    if nu < 1:
        raise ValueError("nu must be >= 1")
    probs = outcome_probabilities(spec, theta_true).as_array()
    probs = np.clip(probs, 0.0, None)
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    counts = rng.multinomial(nu, probs)
    return OutcomeCounts(*(int(c) for c in counts))


def _counts_array(counts) -> np.ndarray:
    if isinstance(counts, OutcomeCounts):
        return counts.as_array().astype(float)
    arr = np.asarray(counts, dtype=float)
    if arr.shape != (4,):
        raise ValueError("expected four outcome counts")
    return arr


def log_likelihood(counts, spec: ProtocolSpec, theta: float) -> float:
    """Multinomial log-likelihood of the counts at phase ``theta``.

    Accepts OutcomeCounts or any length-4 array-like (real-valued counts are
    allowed, e.g. expected counts as an infinite-sample surrogate).  Returns
    ``-inf`` when an observed outcome has probability zero.
    """
    c = _counts_array(counts)
    p = outcome_probabilities(spec, theta).as_array()
    if np.any((c > 0) & (p <= 0.0)):
        return float("-inf")
    with np.errstate(divide="ignore"):
        terms = np.where(c > 0, c * np.log(np.where(p > 0, p, 1.0)), 0.0)
    return float(terms.sum())


def log_likelihood_grid(counts, spec: ProtocolSpec, thetas) -> np.ndarray:
    """Vectorised log-likelihood over an array of phases."""
    c = _counts_array(counts)
    p = outcome_probability_grid(spec, thetas)
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = np.where(p > 0.0, np.log(np.where(p > 0.0, p, 1.0)), -np.inf)
        terms = np.where(c[:, None] > 0, c[:, None] * logp, 0.0)
    return terms.sum(axis=0)


def _golden_section_max(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section search for the maximiser of a unimodal f on [lo, hi]."""
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = f(x1), f(x2)
    while b - a > tol:
        if f1 < f2:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = f(x2)
        else:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = f(x1)
    return 0.5 * (a + b)


def mle_estimate(
    counts,
    spec: ProtocolSpec,
    window: tuple[float, float],
    grid_points: int = MLE_GRID_POINTS,
) -> float:
    """Maximum-likelihood phase estimate over the window.

    A coarse grid (>= 512 points) locates the global maximum, guarding
    against the multimodality of finite-sample likelihoods; golden-section
    refinement then narrows the bracket to 1e-10 of the window width.  Grid
    ties resolve to the lower phase.
    """
    lo, hi = window
    if not hi > lo:
        raise ValueError("window must be a nonempty interval")
    if hi - lo > 2.0 * math.pi / spec.N + 1e-9:
        raise ValueError(
            "window wider than 2*pi/N is not identifiable from the fringes"
        )
    grid_points = max(int(grid_points), 2)
    grid = np.linspace(lo, hi, grid_points)
    values = log_likelihood_grid(counts, spec, grid)
    best = int(np.argmax(values))
    a = grid[max(best - 1, 0)]
    b = grid[min(best + 1, grid_points - 1)]
    tol = MLE_REFINE_TOL * (hi - lo)
    theta_hat = _golden_section_max(
        lambda th: log_likelihood(counts, spec, th), a, b, tol
    )
    return float(min(max(theta_hat, lo), hi))


def rmse_trials(
    config: ExperimentConfig, trials: int, keep_counts: bool = False
) -> EstimationResult:
    """Run repeated sample -> MLE cycles and aggregate the error.

    Trial ``k`` samples with seed ``config.seed + k``; identical configs give
    bit-identical results.  ``cramer_rao`` is the single-experiment bound
    ``1 / sqrt(nu * F(theta_true))``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    estimates: list[float] = []
    recorded: list[OutcomeCounts] = []
    first_counts: OutcomeCounts | None = None
    for k in range(trials):
        counts = sample_outcomes(
            config.spec, config.theta_true, config.nu, config.seed + k
        )
        if first_counts is None:
            first_counts = counts
        if keep_counts:
            recorded.append(counts)
        estimates.append(mle_estimate(counts, config.spec, config.window))
    errors = np.asarray(estimates) - config.theta_true
    rmse = float(np.sqrt(np.mean(errors**2)))
    info = fisher_exact(config.spec, config.theta_true).exact
    cramer_rao = 1.0 / math.sqrt(config.nu * info) if info > 0.0 else float("inf")
    return EstimationResult(
        theta_hat=estimates[0],
        log_likelihood_at_hat=log_likelihood(first_counts, config.spec, estimates[0]),
        rmse=rmse,
        cramer_rao=cramer_rao,
        trials=trials,
        theta_hats=tuple(estimates),
        counts=tuple(recorded) if keep_counts else None,
    )


def result_to_dict(
    config: ExperimentConfig, result: EstimationResult, include_counts: bool = False
) -> dict:
    """JSON-ready summary of an estimation run."""
    payload = {
        "config": {
            "N": config.spec.N,
            "M": config.spec.params.M,
            "mode": config.spec.mode,
            "lambda": config.spec.params.lam,
            "theta2": config.spec.params.theta2,
            "theta_true": config.theta_true,
            "nu": config.nu,
            "seed": config.seed,
            "window": list(config.window),
        },
        "trials": result.trials,
        "theta_hat": result.theta_hat,
        "log_likelihood_at_hat": result.log_likelihood_at_hat,
        "theta_hats": list(result.theta_hats),
        "rmse": result.rmse,
        "cramer_rao": result.cramer_rao,
    }
    if include_counts:
        if result.counts is None:
            raise ValueError("counts were not recorded; rerun with keep_counts=True")
        payload["counts_per_trial"] = [list(map(int, c.as_array())) for c in result.counts]
    return payload
