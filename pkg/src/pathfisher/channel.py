"""Single-use probing round: dephasing channel, M-path superposed output,
and the effective qubit channel after the path measurement.

Conventions: the qubit basis is (H, V); a phase shift by ``theta`` is
``U(theta) = diag(exp(-1j*theta/2), exp(+1j*theta/2))``, which multiplies the
HV coherence by ``exp(-1j*theta)``.  Routing one photon through M paths in
the uniform path superposition and dephasing each path independently leaves
a block-diagonal state over the path Fourier basis: the m = 0 branch carries
``C(rho) + (M-1) F rho F^dag`` and each of the other M - 1 branches carries
``C(rho) - F rho F^dag``, all divided by M.  Measuring the path and applying
the conditional corrections (-theta0 for m = 0, -theta1 otherwise) turns the
round into a plain dephasing channel with coherence ``lambda`` and offset
``theta2``.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .noise import (
    ConditionViolationError,
    DEFAULT_CONDITION_TOL,
    NoiseDistribution,
    check_condition,
    fourier_coefficient,
    offset_theta0,
    offset_theta1,
)

#: Branch weights below this are reported with a ``None`` state instead of
#: a normalised (0/0) one.
ZERO_WEIGHT = 1e-14

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-12
_EIG_TOL = 1e-12


def phase_rotation(theta: float) -> np.ndarray:
    """U(theta) = exp(-1j * theta * Z / 2) as a 2x2 array."""
    return np.array(
        [[cmath.exp(-0.5j * theta), 0.0], [0.0, cmath.exp(0.5j * theta)]],
        dtype=complex,
    )


@dataclass(frozen=True, eq=False)
class QubitState:
    """2x2 density matrix in the (H, V) basis.

    Validates hermiticity, unit trace and positivity (to 1e-12) on
    construction; the stored array is read-only.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex)
        if m.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T)) > _HERM_TOL:
            raise ValueError("density matrix must be Hermitian")
        if abs(m.trace().real - 1.0) > _TRACE_TOL or abs(m.trace().imag) > _TRACE_TOL:
            raise ValueError("density matrix must have unit trace")
        if np.linalg.eigvalsh(m).min() < -_EIG_TOL:
            raise ValueError("density matrix must be positive semidefinite")
        m.flags.writeable = False
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_ket(cls, ket) -> "QubitState":
        v = np.asarray(ket, dtype=complex).reshape(2)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()))

    def to_json(self) -> str:
        """Row-major list of [re, im] pairs."""
        flat = self.matrix.reshape(-1)
        return json.dumps([[z.real, z.imag] for z in flat])

    @classmethod
    def from_json(cls, text: str) -> "QubitState":
        pairs = json.loads(text)
        flat = np.array([complex(re, im) for re, im in pairs])
        return cls(flat.reshape(2, 2))


def state_h() -> QubitState:
    return QubitState.from_ket([1.0, 0.0])


def state_v() -> QubitState:
    return QubitState.from_ket([0.0, 1.0])


def state_plus() -> QubitState:
    return QubitState.from_ket([1.0, 1.0])


def state_plus_i() -> QubitState:
    return QubitState.from_ket([1.0, 1.0j])


def random_state(rng: np.random.Generator) -> QubitState:
    """Haar-ish random mixed state: G G^dag / tr for Gaussian G."""
    g = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = g @ g.conj().T
    return QubitState(m / m.trace())


@dataclass(frozen=True)
class SuperposedOutput:
    """Path-resolved output of one M-path round.

    ``branch0_state`` is the conditional polarization state on the coherent
    (m = 0) path outcome; ``branch_other_state`` is the common conditional
    state of the M - 1 remaining outcomes.  States with negligible weight
    are ``None``.
    """

    branch0_weight: float
    branch0_state: QubitState | None
    branch_other_weight_each: float
    branch_other_state: QubitState | None
    M: int

    def __post_init__(self) -> None:
        total = self.branch0_weight + (self.M - 1) * self.branch_other_weight_each
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch weights must sum to 1, got {total!r}")
        for w, s in (
            (self.branch0_weight, self.branch0_state),
            (self.branch_other_weight_each, self.branch_other_state),
        ):
            if w > ZERO_WEIGHT and s is None:
                raise ValueError("branch with positive weight must carry a state")


@dataclass(frozen=True)
class EffectiveChannelParams:
    """Parameters (lambda, theta2) of the effective dephasing channel for one
    corrected M-path round, together with the correction angles used."""

    lam: float
    theta2: float
    M: int
    theta0: float
    theta1: float

    def __post_init__(self) -> None:
        if not 0.0 <= self.lam <= 1.0 + 1e-12:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lam!r}")
        if self.M < 1:
            raise ValueError("path count M must be >= 1")


def _average_rotation(dist: NoiseDistribution, theta: float) -> np.ndarray:
    """F(theta) = sum_j w_j U(theta + delta_j); diagonal."""
    f1 = fourier_coefficient(dist, 1)
    return np.array(
        [
            [cmath.exp(-0.5j * theta) * f1, 0.0],
            [0.0, cmath.exp(0.5j * theta) * f1.conjugate()],
        ],
        dtype=complex,
    )


def _dephasing_matrix(dist: NoiseDistribution, theta: float, rho: np.ndarray) -> np.ndarray:
    # Mixture of diagonal conjugations collapses to an entrywise factor.
    phases = np.exp(-0.5j * (theta + dist.deltas))
    u = np.stack([phases, phases.conjugate()], axis=1)  # (K, 2)
    factor = np.einsum("k,ki,kj->ij", dist.weights, u, u.conjugate())
    return factor * rho


def apply_dephasing(dist: NoiseDistribution, theta: float, rho: QubitState) -> QubitState:
    """Dephasing channel: mixture of U(theta + delta) conjugations.

    Populations are untouched; the HV coherence picks up f(2) * exp(-1j*theta).
    """
    return QubitState(_dephasing_matrix(dist, theta, rho.matrix))


def superposed_output(
    dist: NoiseDistribution, theta: float, M: int, rho: QubitState
) -> SuperposedOutput:
    """Branch weights and conditional states after one M-path round.

    The m = 0 branch is ``(C(rho) + (M-1) F rho F^dag) / M``; each other
    branch is ``(C(rho) - F rho F^dag) / M``.  Weights are the traces of the
    unnormalised blocks.
    """
    if M < 1:
        raise ValueError("path count M must be >= 1")
    c = _dephasing_matrix(dist, theta, rho.matrix)
    favg = _average_rotation(dist, theta)
    frho = favg @ rho.matrix @ favg.conj().T
    block0 = (c + (M - 1) * frho) / M
    w0 = float(block0.trace().real)
    state0 = QubitState(block0 / w0) if w0 > ZERO_WEIGHT else None
    if M == 1:
        return SuperposedOutput(w0, state0, 0.0, None, M)
    block_other = (c - frho) / M
    w_other = float(block_other.trace().real)
    state_other = (
        QubitState(block_other / w_other) if w_other > ZERO_WEIGHT else None
    )
    return SuperposedOutput(w0, state0, w_other, state_other, M)


def effective_channel_params(
    dist: NoiseDistribution, M: int, tol: float = DEFAULT_CONDITION_TOL
) -> EffectiveChannelParams:
    """Coherence factor and offset of the corrected M-path round.

    ``lambda * exp(-1j*theta2) = exp(1j*theta0) f(2) / M + (M-1) / M``.
    Raises ConditionViolationError when the noise does not admit the
    phase-shift form of the incoherent branch.
    """
    if M < 1:
        raise ValueError("path count M must be >= 1")
    satisfied, residual = check_condition(dist, tol)
    if not satisfied:
        raise ConditionViolationError(
            f"unitarity condition fails with residual {residual:.3e} > tol {tol:.3e}"
        )
    theta0 = offset_theta0(dist)
    theta1 = offset_theta1(dist, tol)
    f2 = fourier_coefficient(dist, 2)
    z = (cmath.exp(1j * theta0) * f2 + (M - 1)) / M
    lam = abs(z)
    if lam > 1.0 + 1e-9:
        raise ValueError(f"coherence factor {lam!r} exceeds 1")
    theta2 = -cmath.phase(z) if lam > 0.0 else 0.0
    return EffectiveChannelParams(
        lam=min(lam, 1.0), theta2=theta2, M=M, theta0=theta0, theta1=theta1
    )


def apply_effective_channel(
    params: EffectiveChannelParams, theta: float, rho: QubitState
) -> QubitState:
    """Dephasing by the effective round: coherence times
    ``lambda * exp(-1j * (theta + theta2))``, populations unchanged."""
    m = np.array(rho.matrix, dtype=complex)
    factor = params.lam * cmath.exp(-1j * (theta + params.theta2))
    m[0, 1] *= factor
    m[1, 0] *= factor.conjugate()
    return QubitState(m)
