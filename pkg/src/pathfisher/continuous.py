"""Continuous-time Markovian dephasing with fast path control.

The free evolution of the polarization qubit at frequency ``omega`` under
dephasing rate ``gamma`` multiplies the HV coherence by
``exp(-gamma*t - 1j*omega*t)`` over an interval ``t``; on the three-level
space {H, V, vac} every matrix element decays by its own factor, with the
single-photon/vacuum coherences evolving as ``exp(-gamma*t/2) *
U((omega+gamma)*t)``.

Routing the photon over M paths for an interval ``t``, measuring the path
in the Fourier basis and shifting the polarization by ``-theta1`` on the
incoherent outcomes compresses one control step into a dephasing channel
with complex coherence

    lambda_t = e^{-g}/M + (M-1)/M e^{-g(1+i)}
             + (M-1)/M e^{-g + i*theta1} - (M-1)/M e^{-g(1+i) + i*theta1},

with g = gamma*t.  Choosing theta1 to align the two contributions maximises
|lambda_t| = 1 - O(t^2), so N = T/t steps retain a visibility
|lambda_t|^(T/t) -> 1 and the frequency Fisher information approaches the
fast-control ceiling T^2 / 2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .channel import QubitState
from .protocols import phase_fisher

_SATURATED = 1.0 - 1e-12


@dataclass(frozen=True)
class ContinuousModel:
    """Frequency-estimation scenario: evolve for total time T in control
    steps of length t, with M paths per step.

    ``theta1`` is the correction applied on incoherent path outcomes; use
    ``fisher_omega(..., use_optimal_theta1=True)`` to override it with the
    argmax of |lambda_t|.
    """

    omega: float
    gamma: float
    t: float
    T: float
    M: int
    theta1: float = 0.0

    def __post_init__(self) -> None:
        if self.gamma < 0.0:
            raise ValueError("gamma must be >= 0")
        if not 0.0 < self.t <= self.T:
            raise ValueError("need 0 < t <= T")
        if self.M < 1:
            raise ValueError("path count M must be >= 1")
        if self.steps < 1:
            raise ValueError("T/t must round to at least one step")

    @property
    def steps(self) -> int:
        return int(round(self.T / self.t))


@dataclass(frozen=True, eq=False)
class ElementwiseFactors:
    """Per-entry decay factors on {H, V, vac} for one free-evolution
    interval; diagonal entries are 1 and the matrix is Hermitian under
    conjugate transposition of the indices."""

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (3, 3):
            raise ValueError("expected a 3x3 factor matrix")
        if np.max(np.abs(np.diag(m) - 1.0)) > 1e-12:
            raise ValueError("diagonal factors must be 1")
        if np.max(np.abs(m - m.conj().T)) > 1e-12:
            raise ValueError("factor matrix must be conjugate-symmetric")
        if np.max(np.abs(m)) > 1.0 + 1e-12:
            raise ValueError("factors are contractions, |factor| <= 1")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


def qubit_solution(
    omega: float, gamma: float, t: float, rho: QubitState
) -> QubitState:
    """Free evolution over time ``t``: mixture of U(omega*t) and
    U(omega*t + pi) with weights (1 +- exp(-gamma*t)) / 2."""
    if t < 0.0:
        raise ValueError("t must be >= 0")
    m = np.array(rho.matrix, dtype=complex)
    factor = cmath.exp(-(gamma + 1j * omega) * t)
    m[0, 1] *= factor
    m[1, 0] *= factor.conjugate()
    return QubitState(m)


def elementwise_factors(omega: float, gamma: float, t: float) -> ElementwiseFactors:
    """Decay factors over {H, V, vac} for one interval of free evolution."""
    if t < 0.0:
        raise ValueError("t must be >= 0")
    q = cmath.exp(-(gamma + 1j * omega) * t)
    g_h = cmath.exp(-0.5 * (1 + 1j) * gamma * t - 0.5j * omega * t)
    g_v = cmath.exp(-0.5 * (1 - 1j) * gamma * t + 0.5j * omega * t)
    m = np.array(
        [
            [1.0, q, g_h],
            [q.conjugate(), 1.0, g_v],
            [g_h.conjugate(), g_v.conjugate(), 1.0],
        ],
        dtype=complex,
    )
    return ElementwiseFactors(m)


def lambda_t(gamma: float, t: float, M: int, theta1: float) -> complex:
    """Complex coherence factor of one corrected M-path control step."""
    if t < 0.0:
        raise ValueError("t must be >= 0")
    if M < 1:
        raise ValueError("path count M must be >= 1")
    g = gamma * t
    keep = cmath.exp(-g)
    cross = cmath.exp(-g * (1 + 1j))
    frac = (M - 1) / M
    rot = cmath.exp(1j * theta1)
    return keep / M + frac * cross + frac * rot * (keep - cross)


def optimal_theta1(gamma: float, t: float, M: int) -> float:
    """Correction angle maximising |lambda_t|.

    Aligns the corrected incoherent contribution with the uncorrected one:
    theta1 = arg[(e^{-g}/M + (M-1)/M e^{-g(1+i)}) /
                 ((M-1)/M (e^{-g} - e^{-g(1+i)}))].
    Degenerate cases (M = 1, no incoherent branch; or gamma*t = 0, nothing
    to correct) return 0.
    """
    if M < 1:
        raise ValueError("path count M must be >= 1")
    if M == 1 or gamma * t == 0.0:
        return 0.0
    g = gamma * t
    keep = cmath.exp(-g)
    cross = cmath.exp(-g * (1 + 1j))
    frac = (M - 1) / M
    fixed = keep / M + frac * cross
    steerable = frac * (keep - cross)
    return cmath.phase(fixed / steerable)


def _step_coherence(model: ContinuousModel, theta1: float) -> complex:
    return lambda_t(model.gamma, model.t, model.M, theta1)


def fisher_omega(model: ContinuousModel, use_optimal_theta1: bool = True) -> float:
    """Fisher information about omega carried by the fringe measurement
    after T/t corrected control steps.

    The visibility is |lambda_t|^(T/t) and the fringe phase is
    omega*T - (T/t)*arg(lambda_t).  When the squared visibility is within
    1e-12 of 1 the noiseless value T^2 is returned.
    """
    th1 = (
        optimal_theta1(model.gamma, model.t, model.M)
        if use_optimal_theta1
        else model.theta1
    )
    lt = _step_coherence(model, th1)
    steps = model.T / model.t
    visibility = abs(lt) ** steps
    if visibility * visibility >= _SATURATED:
        return model.T * model.T
    phi = model.omega * model.T - steps * cmath.phase(lt)
    return model.T * model.T * phase_fisher(visibility, phi)


def fisher_envelope(model: ContinuousModel, use_optimal_theta1: bool = True) -> float:
    """Phase-independent lower envelope T^2 |lambda_t|^(2T/t) / 2."""
    th1 = (
        optimal_theta1(model.gamma, model.t, model.M)
        if use_optimal_theta1
        else model.theta1
    )
    lt = _step_coherence(model, th1)
    return 0.5 * model.T**2 * abs(lt) ** (2.0 * model.T / model.t)


@dataclass(frozen=True)
class SweepRow:
    t: float
    T: float
    M: int
    abs_lambda_t: float
    theta_t: float
    fisher_omega: float
    envelope: float
    bound_half_T_sq: float


@dataclass(frozen=True)
class SkippedRow:
    t: float
    T: float
    reason: str


def figure3_sweep(
    gamma: float,
    omega: float,
    t_values,
    T_grid,
) -> tuple[list[SweepRow], list[SkippedRow]]:
    """Frequency Fisher information over a (t, T) grid with M = round(T/t)
    paths and the optimal theta1 per cell.

    ``theta_t`` is the fringe-phase offset per step, ``-arg(lambda_t)``.
    Cells with T/t < 1 are reported in the skipped list instead of a row.
    """
    rows: list[SweepRow] = []
    skipped: list[SkippedRow] = []
    for t in t_values:
        for T in T_grid:
            if T / t < 1.0:
                skipped.append(SkippedRow(t=t, T=T, reason="T/t < 1: no room for a control step"))
                continue
            m = int(round(T / t))
            model = ContinuousModel(omega=omega, gamma=gamma, t=t, T=T, M=m)
            lt = _step_coherence(model, optimal_theta1(gamma, t, m))
            rows.append(
                SweepRow(
                    t=t,
                    T=T,
                    M=m,
                    abs_lambda_t=abs(lt),
                    theta_t=-cmath.phase(lt),
                    fisher_omega=fisher_omega(model),
                    envelope=fisher_envelope(model),
                    bound_half_T_sq=0.5 * T * T,
                )
            )
    return rows, skipped
