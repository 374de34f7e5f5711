"""Ground-truth simulation on the full polarization (x) path space.

The discrete oracle enumerates every joint noise realisation over the M
paths (refusing beyond a fixed budget) and applies the exact diagonal
unitaries on the 2M-dimensional single-photon sector; phase kicks act
trivially on unoccupied paths, so that sector is closed and the vacuum never
needs to be materialised.  The continuous oracle applies the per-entry decay
factors, with the vacuum entering only through the (pol, vac) coherence
factors.  Everything here is deliberately independent of the closed-form
channel expressions it is used to validate.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .channel import QubitState, phase_rotation
from .continuous import elementwise_factors
from .noise import NoiseDistribution, offset_theta0, offset_theta1

#: Hard cap on the number of enumerated noise realisations K**M.
ENUMERATION_BUDGET = 10_000_000

_PSD_TOL = 1e-10
_ZERO_PROB = 1e-14


class ResourceLimitError(RuntimeError):
    """Exact enumeration would exceed the budget; the oracle refuses rather
    than fall back to sampling."""


@dataclass(frozen=True, eq=False)
class MultiPathState:
    """Density matrix on polarization (x) path, index = pol * M + path."""

    matrix: np.ndarray
    M: int

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        d = 2 * self.M
        if m.shape != (d, d):
            raise ValueError(f"expected a {d}x{d} matrix for M={self.M}")
        if np.max(np.abs(m - m.conj().T)) > _PSD_TOL:
            raise ValueError("state must be Hermitian")
        if abs(m.trace() - 1.0) > _PSD_TOL:
            raise ValueError("state must have unit trace")
        if np.linalg.eigvalsh(m).min() < -_PSD_TOL:
            raise ValueError("state must be positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)


@dataclass(frozen=True)
class OracleComparison:
    max_abs_entry_diff: float
    branch_weight_diff: float
    passed: bool

    def __post_init__(self) -> None:
        if self.max_abs_entry_diff < 0.0 or self.branch_weight_diff < 0.0:
            raise ValueError("comparison metrics are nonnegative")


def prepare_superposed(rho_pol: QubitState, M: int) -> MultiPathState:
    """rho_pol tensored with the uniform path superposition projector."""
    if M < 1:
        raise ValueError("path count M must be >= 1")
    e0 = np.full((M,), 1.0 / math.sqrt(M), dtype=complex)
    return MultiPathState(np.kron(rho_pol.matrix, np.outer(e0, e0.conj())), M)


def oracle_apply_discrete(
    dist: NoiseDistribution, theta: float, state: MultiPathState
) -> MultiPathState:
    """Average over all K**M joint kick assignments of the exact path-local
    phase unitaries."""
    M = state.M
    K = len(dist)
    if K**M > ENUMERATION_BUDGET:
        raise ResourceLimitError(
            f"{K}**{M} noise realisations exceed the budget of {ENUMERATION_BUDGET}"
        )
    deltas = dist.deltas
    weights = dist.weights
    acc = np.zeros_like(state.matrix)
    for combo in itertools.product(range(K), repeat=M):
        idx = np.fromiter(combo, dtype=int, count=M)
        w = float(np.prod(weights[idx]))
        half = 0.5 * (theta + deltas[idx])
        v = np.concatenate([np.exp(-1j * half), np.exp(1j * half)])
        acc = acc + w * (v[:, None] * state.matrix * v.conj()[None, :])
    return MultiPathState(acc, M)


def fourier_branch(state: MultiPathState, m: int) -> tuple[float, QubitState | None]:
    """Probability and conditional polarization state of path outcome m.

    The path register is projected on the Fourier vector with amplitudes
    exp(2j*pi*j*m/M)/sqrt(M); a zero-probability branch returns (0, None).
    """
    M = state.M
    if not 0 <= m < M:
        raise ValueError(f"outcome m must lie in [0, {M})")
    e = np.exp(2j * math.pi * np.arange(M) * m / M) / math.sqrt(M)
    cond = np.empty((2, 2), dtype=complex)
    for a in range(2):
        for b in range(2):
            block = state.matrix[a * M : (a + 1) * M, b * M : (b + 1) * M]
            cond[a, b] = e.conj() @ block @ e
    prob = float(cond.trace().real)
    if prob < _ZERO_PROB:
        return max(prob, 0.0), None
    return prob, QubitState(cond / prob)


def oracle_effective_round(
    dist: NoiseDistribution, theta: float, M: int, rho: QubitState
) -> QubitState:
    """One full round by brute force: prepare, enumerate the noise, measure
    the path, apply -theta0 / -theta1 corrections, and mix the branches."""
    theta0 = offset_theta0(dist)
    theta1 = offset_theta1(dist)
    state = oracle_apply_discrete(dist, theta, prepare_superposed(rho, M))
    out = np.zeros((2, 2), dtype=complex)
    for m in range(M):
        prob, cond = fourier_branch(state, m)
        if cond is None:
            continue
        u = phase_rotation(-theta0 if m == 0 else -theta1)
        out += prob * (u @ cond.matrix @ u.conj().T)
    return QubitState(out)


def oracle_apply_continuous(
    omega: float, gamma: float, t: float, state: MultiPathState
) -> MultiPathState:
    """Free evolution of every path for time t via per-entry decay factors.

    An entry ((pol, j), (pol', k)) picks up the (pol, pol') qubit factor when
    j == k, and the product of the (pol, vac) and (vac, pol') coherence
    factors when j != k; unoccupied paths contribute 1.
    """
    M = state.M
    f = elementwise_factors(omega, gamma, t).matrix
    factor = np.empty_like(state.matrix)
    for a in range(2):
        for b in range(2):
            block = np.full((M, M), f[a, 2] * f[2, b], dtype=complex)
            np.fill_diagonal(block, f[a, b])
            factor[a * M : (a + 1) * M, b * M : (b + 1) * M] = block
    return MultiPathState(factor * state.matrix, M)


def oracle_continuous_round(
    omega: float, gamma: float, t: float, M: int, theta1: float, rho: QubitState
) -> QubitState:
    """One fast-control step by brute force: free evolution on M superposed
    paths, Fourier measurement, -theta1 shift on incoherent outcomes."""
    state = oracle_apply_continuous(omega, gamma, t, prepare_superposed(rho, M))
    out = np.zeros((2, 2), dtype=complex)
    for m in range(M):
        prob, cond = fourier_branch(state, m)
        if cond is None:
            continue
        if m == 0:
            out += prob * cond.matrix
        else:
            u = phase_rotation(-theta1)
            out += prob * (u @ cond.matrix @ u.conj().T)
    return QubitState(out)


def compare(
    analytic: QubitState,
    oracle: QubitState,
    tol: float,
    analytic_weight: float | None = None,
    oracle_weight: float | None = None,
) -> OracleComparison:
    """Entrywise comparison, optionally including a pair of branch weights."""
    entry_diff = float(np.max(np.abs(analytic.matrix - oracle.matrix)))
    if analytic_weight is None and oracle_weight is None:
        weight_diff = 0.0
    else:
        weight_diff = abs(float(analytic_weight or 0.0) - float(oracle_weight or 0.0))
    return OracleComparison(
        max_abs_entry_diff=entry_diff,
        branch_weight_diff=weight_diff,
        passed=entry_diff <= tol and weight_diff <= tol,
    )
