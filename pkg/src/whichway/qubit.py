"""Two-level algebra for the which-way detector.

The recoiling slit is modelled as a qubit: its two momentum-pointer states
span the state space, and every which-way question is a dichotomic (+1/-1)
observable on it.  This module provides normalized two-component states, the
correlated detector-state pair used throughout the toolkit, Bloch-vector
observables with their variances, the mutually unbiased (eraser) basis, and
the qubit sum-uncertainty relation.

All values are immutable after construction and all functions are pure, so
everything here is safe to share across threads or processes.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

#: Normalization / orthogonality tolerance used by every constructor.
NORM_TOL = 1e-12

_SQRT_HALF = math.sqrt(0.5)


def _as_complex(value) -> complex:
    z = complex(value)
    if not (cmath.isfinite(z)):
        raise ValidationError(f"amplitude must be finite, got {value!r}")
    return z


@dataclass(frozen=True)
class DetectorState:
    """Pure state of the which-way detector, components in the pointer basis.

    Invariant: |c1|^2 + |c2|^2 = 1 within NORM_TOL.  Construction rejects
    non-normalized input instead of silently renormalizing, so caller bugs
    surface immediately.
    """

    c1: complex
    c2: complex

    def __post_init__(self):
        object.__setattr__(self, "c1", _as_complex(self.c1))
        object.__setattr__(self, "c2", _as_complex(self.c2))
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(
                f"state not normalized: |c1|^2+|c2|^2 = {norm!r} (tolerance {NORM_TOL})"
            )


def inner_product(a: DetectorState, b: DetectorState) -> complex:
    """Hermitian inner product <a|b> = conj(a1) b1 + conj(a2) b2."""
    return a.c1.conjugate() * b.c1 + a.c2.conjugate() * b.c2


@dataclass(frozen=True)
class DetectorPair:
    """The two correlated detector states, one per slit.

    d2 carries the conjugate-swapped components of d1, which covers every
    possible mutual overlap of two normalized states.  overlap_mag is
    |<d1|d2>| and overlap_phase is arg<d2|d1>; both are checked against the
    stored states at construction.
    """

    d1: DetectorState
    d2: DetectorState
    overlap_mag: float
    overlap_phase: float

    def __post_init__(self):
        if abs(self.d2.c1 - self.d1.c2.conjugate()) > NORM_TOL or abs(
            self.d2.c2 - self.d1.c1.conjugate()
        ) > NORM_TOL:
            raise ValidationError(
                "d2 must hold the conjugate-swapped components of d1"
            )
        ip = inner_product(self.d1, self.d2)
        if abs(abs(ip) - self.overlap_mag) > NORM_TOL:
            raise ValidationError(
                f"overlap_mag {self.overlap_mag!r} inconsistent with |<d1|d2>| = {abs(ip)!r}"
            )
        if self.overlap_mag > 1e-9:
            # phase of <d2|d1> = -phase of <d1|d2>; compare modulo 2*pi
            delta = math.remainder(-cmath.phase(ip) - self.overlap_phase, math.tau)
            if abs(delta) > 1e-9:
                raise ValidationError(
                    f"overlap_phase {self.overlap_phase!r} inconsistent with arg<d2|d1>"
                )


def make_detector_pair(s: float, theta: float = 0.0) -> DetectorPair:
    """Build the detector pair with overlap magnitude ``s`` and phase ``theta``.

    The component magnitudes follow from |<d1|d2>| = 2|c1||c2| = s together
    with normalization; the phase is split evenly, arg(c1) = arg(c2) =
    theta/2, which fixes arg<d2|d1> = theta.  ``theta`` is wrapped into
    [-pi, pi] before use.

    Raises ValidationError unless 0 <= s <= 1.
    """
    if not (math.isfinite(s) and 0.0 <= s <= 1.0):
        raise ValidationError(f"overlap magnitude must be in [0, 1], got {s!r}")
    if not math.isfinite(theta):
        raise ValidationError(f"overlap phase must be finite, got {theta!r}")
    theta = math.remainder(theta, math.tau)
    root = math.sqrt(max(1.0 - s * s, 0.0))
    mag1 = math.sqrt((1.0 + root) / 2.0)
    mag2 = math.sqrt((1.0 - root) / 2.0)
    phase = cmath.exp(0.5j * theta)
    c1 = mag1 * phase
    c2 = mag2 * phase
    d1 = DetectorState(c1, c2)
    d2 = DetectorState(c2.conjugate(), c1.conjugate())
    return DetectorPair(d1=d1, d2=d2, overlap_mag=s, overlap_phase=theta)


@dataclass(frozen=True)
class DichotomicObservable:
    """A +1/-1 observable on the detector qubit, W = n . sigma.

    Storing the unit Bloch vector n instead of a matrix makes W^2 = 1 and the
    eigenvalue pair +1/-1 true by construction.
    """

    bloch: tuple[float, float, float]

    def __post_init__(self):
        n = tuple(float(v) for v in self.bloch)
        if len(n) != 3 or not all(math.isfinite(v) for v in n):
            raise ValidationError(f"bloch must be a finite 3-vector, got {self.bloch!r}")
        norm = math.sqrt(n[0] ** 2 + n[1] ** 2 + n[2] ** 2)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValidationError(f"bloch vector must be unit length, |n| = {norm!r}")
        object.__setattr__(self, "bloch", n)

    def expectation(self, state: DetectorState) -> float:
        """<state| n.sigma |state>."""
        z = state.c1.conjugate() * state.c2
        n1, n2, n3 = self.bloch
        return (
            2.0 * n1 * z.real
            + 2.0 * n2 * z.imag
            + n3 * (abs(state.c1) ** 2 - abs(state.c2) ** 2)
        )


PAULI_X = DichotomicObservable((1.0, 0.0, 0.0))
PAULI_Y = DichotomicObservable((0.0, 1.0, 0.0))
PAULI_Z = DichotomicObservable((0.0, 0.0, 1.0))

#: The pointer observable whose eigenstates label the two slits.
WHICH_WAY_OBSERVABLE = PAULI_Z


def variance(state: DetectorState, obs: DichotomicObservable) -> float:
    """Variance of a dichotomic observable in a pure state: 1 - <n.sigma>^2.

    Always in [0, 1]; tiny negative rounding residue is clamped to 0.
    """
    e = obs.expectation(state)
    return max(1.0 - e * e, 0.0)


def sum_uncertainty(state: DetectorState) -> tuple[float, float, float]:
    """Variances of sigma_y and sigma_z and their sum.

    For any pure qubit state the sum is >= 1, with equality exactly when
    <sigma_x> = 0.
    """
    dq2 = variance(state, PAULI_Y)
    dp2 = variance(state, PAULI_Z)
    return dq2, dp2, dq2 + dp2


@dataclass(frozen=True)
class MeasurementBasis:
    """An orthonormal basis of the detector qubit (a dichotomic measurement)."""

    b1: DetectorState
    b2: DetectorState

    def __post_init__(self):
        if abs(inner_product(self.b1, self.b2)) > NORM_TOL:
            raise ValidationError("basis states must be orthogonal")


def mub_basis() -> MeasurementBasis:
    """The basis mutually unbiased with the pointer basis: (|1>+|2>)/sqrt2, (|1>-|2>)/sqrt2.

    Conditioning screen hits on its outcomes is the quantum eraser; each basis
    state assigns probability 1/2 to either slit, so no which-way information
    is collected.
    """
    return MeasurementBasis(
        b1=DetectorState(_SQRT_HALF, _SQRT_HALF),
        b2=DetectorState(_SQRT_HALF, -_SQRT_HALF),
    )


def rotated_basis(angle: float) -> MeasurementBasis:
    """Detector basis rotated by ``angle`` from the pointer basis.

    angle = 0 reproduces the pointer basis; angle = pi/4 is unbiased with it
    (same measurement as :func:`mub_basis`, up to a sign on the second state).
    """
    if not math.isfinite(angle):
        raise ValidationError(f"angle must be finite, got {angle!r}")
    c, s = math.cos(angle), math.sin(angle)
    return MeasurementBasis(
        b1=DetectorState(c, s),
        b2=DetectorState(-s, c),
    )


def bloch_sphere_lattice(n: int) -> np.ndarray:
    """Deterministic, seedless n-point lattice on the Bloch sphere.

    Fibonacci spiral with the z endpoints pinned to the poles, so the pointer
    eigenstates (the sum-uncertainty saturation points) are always included.
    Returns an (n, 3) array of unit vectors.
    """
    if n < 1:
        raise ValidationError(f"lattice needs at least one point, got {n}")
    if n == 1:
        return np.array([[0.0, 0.0, 1.0]])
    i = np.arange(n, dtype=float)
    z = 1.0 - 2.0 * i / (n - 1)
    azimuth = math.pi * (3.0 - math.sqrt(5.0)) * i
    r = np.sqrt(np.clip(1.0 - z * z, 0.0, 1.0))
    return np.column_stack((r * np.cos(azimuth), r * np.sin(azimuth), z))


def state_from_bloch(n1: float, n2: float, n3: float) -> DetectorState:
    """Pure state with Bloch vector (n1, n2, n3)."""
    norm = math.sqrt(n1 * n1 + n2 * n2 + n3 * n3)
    if abs(norm - 1.0) > 1e-9:
        raise ValidationError(f"bloch vector must be unit length, |n| = {norm!r}")
    polar = math.acos(min(1.0, max(-1.0, n3)))
    azimuth = math.atan2(n2, n1)
    return DetectorState(
        math.cos(polar / 2.0),
        math.sin(polar / 2.0) * cmath.exp(1j * azimuth),
    )
