"""Closed-form outputs of the N-probe parallel protocol and the N-step
sequential protocol built from corrected M-path rounds.

Both protocols leave the probe coherence in a two-dimensional subspace
whose off-diagonal coefficient is ``lambda**N * exp(-1j*N*(theta+theta2))``,
so every quantity below is O(1) in N: the GHZ register is never
materialised.  The four measurement outcomes are the conjugate interference
fringes

    p(P+-) = [1 +- lambda**N cos(N(theta+theta2))] / 4,
    p(Q+-) = [1 +- lambda**N sin(N(theta+theta2))] / 4,

and the resulting Fisher information is

    F = N^2 V^2/2 * (1 - V^2 + V^2 s/2) / (1 - V^2 + V^4 s/4),

with visibility V = lambda**N and s = sin^2(2N(theta+theta2)).  The
theta-independent lower bound is N^2 lambda^(2N) / 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .channel import EffectiveChannelParams

#: Outcome labels in the canonical order used by every array/CSV interface.
OUTCOME_LABELS = ("P+", "P-", "Q+", "Q-")

#: Above this squared visibility the Fisher formula is an indeterminate 0/0
#: at the fringe extremes; the analytic limit (1 per unit phase) is used.
_SATURATED = 1.0 - 1e-12

MODES = ("parallel", "sequential")


@dataclass(frozen=True)
class ProtocolSpec:
    """One protocol instance: effective-round parameters, resource count N,
    and whether rounds run on N entangled probes or N sequential steps.

    The two modes produce identical coherence, outcome statistics and Fisher
    information; the mode is kept for bookkeeping and interface clarity.
    """

    params: EffectiveChannelParams
    N: int
    mode: str = "parallel"

    def __post_init__(self) -> None:
        if self.N < 1:
            raise ValueError("N must be >= 1")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")


@dataclass(frozen=True)
class OutcomeDistribution:
    pP_plus: float
    pP_minus: float
    pQ_plus: float
    pQ_minus: float

    def __post_init__(self) -> None:
        probs = self.as_array()
        if np.any(probs < -1e-12) or np.any(probs > 0.5 + 1e-12):
            raise ValueError("each outcome probability must lie in [0, 1/2]")
        if abs(float(probs.sum()) - 1.0) > 1e-12:
            raise ValueError("outcome probabilities must sum to 1")

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.pP_plus, self.pP_minus, self.pQ_plus, self.pQ_minus]
        )


@dataclass(frozen=True)
class FisherReport:
    theta: float
    exact: float
    bound: float

    def __post_init__(self) -> None:
        if self.exact < self.bound - 1e-9:
            raise ValueError("exact Fisher information cannot undercut its bound")


def phase_fisher(visibility: float, phi: float) -> float:
    """Fisher information of the fringe pair (1 +- V cos phi)/4,
    (1 +- V sin phi)/4 per unit of d(phi)/d(parameter).

    Continuously extended to 1 when V^2 is within 1e-12 of 1.
    """
    v2 = visibility * visibility
    if v2 >= _SATURATED:
        return 1.0
    s = math.sin(2.0 * phi) ** 2
    return 0.5 * v2 * (1.0 - v2 + 0.5 * v2 * s) / (1.0 - v2 + 0.25 * v2 * v2 * s)


def ghz_coherence(spec: ProtocolSpec, theta: float) -> complex:
    """Off-diagonal coefficient of the protocol output,
    ``lambda**N * exp(-1j*N*(theta+theta2))`` in either mode."""
    n = spec.N
    return spec.params.lam**n * cmath.exp(-1j * n * (theta + spec.params.theta2))


def outcome_probabilities(spec: ProtocolSpec, theta: float) -> OutcomeDistribution:
    """Probabilities of the four fringe outcomes at the given phase."""
    visibility = spec.params.lam**spec.N
    phi = spec.N * (theta + spec.params.theta2)
    c = visibility * math.cos(phi)
    s = visibility * math.sin(phi)
    return OutcomeDistribution(
        pP_plus=0.25 * (1.0 + c),
        pP_minus=0.25 * (1.0 - c),
        pQ_plus=0.25 * (1.0 + s),
        pQ_minus=0.25 * (1.0 - s),
    )


def outcome_probability_grid(spec: ProtocolSpec, thetas) -> np.ndarray:
    """Outcome probabilities over an array of phases, shape (4, len(thetas)),
    rows in OUTCOME_LABELS order."""
    thetas = np.asarray(thetas, dtype=float)
    visibility = spec.params.lam**spec.N
    phi = spec.N * (thetas + spec.params.theta2)
    c = visibility * np.cos(phi)
    s = visibility * np.sin(phi)
    return 0.25 * np.stack([1.0 + c, 1.0 - c, 1.0 + s, 1.0 - s])


def fisher_bound(spec: ProtocolSpec) -> float:
    """Phase-independent lower bound N^2 lambda^(2N) / 2."""
    return 0.5 * spec.N**2 * spec.params.lam ** (2 * spec.N)


def fisher_exact(spec: ProtocolSpec, theta: float) -> FisherReport:
    """Exact Fisher information of the fringe measurement at ``theta``.

    For lambda within 1e-12 of 1 the noiseless value N^2 is returned (the
    generic expression degenerates to 0/0 at the fringe extremes).
    """
    n = spec.N
    if spec.params.lam >= _SATURATED:
        exact = float(n * n)
    else:
        visibility = spec.params.lam**n
        phi = n * (theta + spec.params.theta2)
        exact = n * n * phase_fisher(visibility, phi)
    return FisherReport(theta=theta, exact=exact, bound=fisher_bound(spec))
