"""Dephasing noise distributions and their Fourier structure.

A dephasing process is a probabilistic mixture of phase rotations
``U(delta) = exp(-i * delta * Z / 2)``.  Everything the superposed-path
machinery needs from the noise is carried by the first two Fourier
coefficients of the kick distribution,

    f(k) = sum_j w_j * exp(-1j * k * delta_j / 2),

namely:

* the averaged rotation operator is proportional to a unitary,
  ``|f(1)| * U(theta + theta0)`` with ``theta0 = -2 * arg f(1)``;
* the orthogonal remainder of the channel is itself proportional to a
  unitary phase shift if and only if ``|f(2) - f(1)**2| == 1 - |f(1)|**2``,
  in which case its angle offset is ``theta1 = -arg(f(2) - f(1)**2)``.

Random phase kicks (two-atom distributions) satisfy the condition for every
``(p, delta0)``; smooth distributions such as a discretised Gaussian do not,
which is what makes them useful as negative tests.
"""

from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass, field

import numpy as np

TWO_PI = 2.0 * math.pi

#: Absolute tolerance used by default when testing the unitarity condition.
#: Sized for double-precision accumulation over <= 1e4 atoms.
DEFAULT_CONDITION_TOL = 1e-9

_WEIGHT_SUM_TOL = 1e-12
_NO_NOISE_TOL = 1e-12


class DegenerateNoiseError(ValueError):
    """The distribution averages to zero coherence (f(1) = 0), so the
    rotation offset theta0 is undefined."""


class ConditionViolationError(ValueError):
    """The distribution does not satisfy |f(2) - f(1)^2| = 1 - |f(1)|^2,
    so the incoherent branch is not a pure phase shift."""


@dataclass(frozen=True, eq=False)
class NoiseDistribution:
    """Discrete probability distribution over phase kicks.

    Args:
        atoms: iterable of ``(delta, weight)`` pairs with ``delta`` in
            ``[0, 2*pi)`` radians.  Weights must be nonnegative, sum to one
            within 1e-12, and the deltas must be distinct.
    """

    deltas: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    def __init__(self, atoms) -> None:
        pairs = [(float(d), float(w)) for d, w in atoms]
        if not pairs:
            raise ValueError("noise distribution needs at least one atom")
        deltas = np.array([d for d, _ in pairs], dtype=float)
        weights = np.array([w for _, w in pairs], dtype=float)
        if np.any(deltas < 0.0) or np.any(deltas >= TWO_PI):
            raise ValueError("kick angles must lie in [0, 2*pi)")
        if np.any(weights < 0.0):
            raise ValueError("weights must be nonnegative")
        if abs(float(weights.sum()) - 1.0) > _WEIGHT_SUM_TOL:
            raise ValueError(
                f"weights must sum to 1 within {_WEIGHT_SUM_TOL}, "
                f"got {weights.sum()!r}"
            )
        if np.unique(deltas).size != deltas.size:
            raise ValueError("kick angles must be distinct")
        deltas.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "weights", weights)

    @property
    def atoms(self) -> tuple[tuple[float, float], ...]:
        return tuple(zip(self.deltas.tolist(), self.weights.tolist()))

    def __len__(self) -> int:
        return int(self.deltas.size)

    def to_dict(self) -> dict:
        return {"atoms": [[d, w] for d, w in self.atoms]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, data: dict) -> "NoiseDistribution":
        return cls(data["atoms"])

    @classmethod
    def from_json(cls, text: str) -> "NoiseDistribution":
        return cls.from_dict(json.loads(text))


@dataclass(frozen=True)
class NoiseProfile:
    """Fourier data of a distribution plus the derived correction angles.

    ``theta1`` is ``None`` when the unitarity condition fails (the offset is
    then not defined by a phase-shift identity).
    """

    f1: complex
    f2: complex
    theta0: float
    theta1: float | None
    condition_residual: float

    def __post_init__(self) -> None:
        if abs(self.f1) > 1.0 + 1e-12 or abs(self.f2) > 1.0 + 1e-12:
            raise ValueError("Fourier coefficients of a distribution have modulus <= 1")
        if self.condition_residual < 0.0:
            raise ValueError("condition residual is nonnegative by definition")


def phase_kick(p: float, delta0: float) -> NoiseDistribution:
    """Two-outcome kick: no shift with probability ``p``, shift ``delta0``
    with probability ``1 - p``.

    Degenerate parameters (``p`` in {0, 1} or ``delta0 == 0``) collapse to a
    single atom.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    if not 0.0 <= delta0 < TWO_PI:
        raise ValueError(f"delta0 must lie in [0, 2*pi), got {delta0!r}")
    if p == 1.0 or delta0 == 0.0:
        return NoiseDistribution([(0.0, 1.0)])
    if p == 0.0:
        return NoiseDistribution([(delta0, 1.0)])
    return NoiseDistribution([(0.0, p), (delta0, 1.0 - p)])


def gaussian_grid(
    sigma: float,
    n_atoms: int = 101,
    center: float = math.pi,
    half_width_sigmas: float = 4.0,
) -> NoiseDistribution:
    """Gaussian kick distribution discretised on a uniform grid.

    The grid spans ``center +- half_width_sigmas * sigma`` and must stay
    inside ``[0, 2*pi)``; weights are the Gaussian density renormalised to
    sum to one.  Useful as a condition-violating counterexample.
    """
    if sigma <= 0.0:
        raise ValueError("sigma must be positive")
    if n_atoms < 2:
        raise ValueError("need at least two atoms to resolve a Gaussian")
    half = half_width_sigmas * sigma
    if center - half < 0.0 or center + half >= TWO_PI:
        raise ValueError("grid would leave [0, 2*pi); shrink sigma or recenter")
    deltas = np.linspace(center - half, center + half, n_atoms)
    weights = np.exp(-0.5 * ((deltas - center) / sigma) ** 2)
    weights /= weights.sum()
    return NoiseDistribution(zip(deltas, weights))


def fourier_coefficient(dist: NoiseDistribution, k: int) -> complex:
    """f(k) = sum_j w_j exp(-1j * k * delta_j / 2)."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return complex(np.sum(dist.weights * np.exp(-0.5j * k * dist.deltas)))


def check_condition(
    dist: NoiseDistribution, tol: float = DEFAULT_CONDITION_TOL
) -> tuple[bool, float]:
    """Test |f(2) - f(1)^2| = 1 - |f(1)|^2.

    Returns ``(satisfied, residual)`` where the residual is the absolute
    mismatch between the two sides.
    """
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    f1 = fourier_coefficient(dist, 1)
    f2 = fourier_coefficient(dist, 2)
    residual = abs(abs(f2 - f1 * f1) - (1.0 - abs(f1) ** 2))
    return residual <= tol, residual


def offset_theta0(dist: NoiseDistribution) -> float:
    """Rotation offset of the averaged kick operator.

    Returns the full-quadrant angle ``-2 * atan2(Im f(1), Re f(1))``, chosen
    so that ``exp(1j * theta0 / 2) * f(1)`` is real and positive (the value
    therefore lives in ``(-2*pi, 2*pi]``; downstream uses consume it modulo
    ``2*pi``).
    """
    f1 = fourier_coefficient(dist, 1)
    if abs(f1) <= _NO_NOISE_TOL:
        raise DegenerateNoiseError("f(1) = 0: averaged rotation carries no phase")
    return -2.0 * math.atan2(f1.imag, f1.real)


def offset_theta1(
    dist: NoiseDistribution, tol: float = DEFAULT_CONDITION_TOL
) -> float:
    """Phase-shift angle of the incoherent branch, ``-arg(f(2) - f(1)^2)``.

    Requires the unitarity condition; the branch then acts on a state as
    ``(1 - |f(1)|^2) * U(theta1) rho U(theta1)^dag`` (up to the common
    rotation by theta).  For a noiseless distribution (``|f(1)| = 1``) the
    branch has zero weight and the angle is defined as 0.
    """
    f1 = fourier_coefficient(dist, 1)
    if abs(abs(f1) - 1.0) <= _NO_NOISE_TOL:
        return 0.0
    satisfied, residual = check_condition(dist, tol)
    if not satisfied:
        raise ConditionViolationError(
            f"unitarity condition fails with residual {residual:.3e} > tol {tol:.3e}"
        )
    remainder = fourier_coefficient(dist, 2) - f1 * f1
    return -cmath.phase(remainder)


def decomposition_matrix(dist: NoiseDistribution) -> np.ndarray:
    """Coefficient matrix of the incoherent branch on the (I, Z) operator
    basis; it is rank-deficient exactly when the unitarity condition holds.
    """
    f1 = fourier_coefficient(dist, 1)
    f2 = fourier_coefficient(dist, 2)
    a00 = 0.5 * (1.0 + f2.real - 2.0 * f1.real**2)
    a11 = 0.5 * (1.0 - f2.real - 2.0 * f1.imag**2)
    a01 = 0.5j * (f2.imag - 2.0 * f1.real * f1.imag)
    return np.array([[a00, a01], [-a01, a11]], dtype=complex)


def noise_profile(
    dist: NoiseDistribution, tol: float = DEFAULT_CONDITION_TOL
) -> NoiseProfile:
    """Bundle f(1), f(2), theta0, theta1 and the condition residual."""
    f1 = fourier_coefficient(dist, 1)
    f2 = fourier_coefficient(dist, 2)
    satisfied, residual = check_condition(dist, tol)
    theta0 = offset_theta0(dist)
    theta1 = offset_theta1(dist, tol) if satisfied else None
    return NoiseProfile(
        f1=f1, f2=f2, theta0=theta0, theta1=theta1, condition_residual=residual
    )
