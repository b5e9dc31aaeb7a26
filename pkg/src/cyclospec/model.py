"""Parameterisation of a driven cyclic three-level emitter.

Three upper levels |a>, |b>, |c> are pairwise coupled by classical drives
(Rabi frequencies, detunings, and a single gauge-invariant loop phase) and
decay at rates gamma_a, gamma_b, gamma_c into either one common lower level
or three distinct lower levels.  Every frequency-like quantity is expressed
in units of a single reference rate; times are in inverse units of it.  The
reference rate itself never appears as a number anywhere in the library.

In the rotating frame, with three-photon resonance enforced by construction
(delta_cb = delta_ca + delta_ab), the amplitude vector Psi = (A, B, C) obeys

    dPsi/dt = -K Psi

with a constant complex 3x3 matrix K assembled by
:func:`build_coefficient_matrix`.  The Laplace-side matrix M(s) = s*I + K is
available as :meth:`CoefficientMatrix.m`.

All types here are immutable value objects; they can be shared freely
between threads.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class NumericsError(RuntimeError):
    """A numerical operation failed (singular system, non-convergence)."""


class Topology(enum.Enum):
    """Lower-level topology: one shared lower level or three distinct ones."""

    COMMON_LOWER = "common"
    DISTINCT_LOWER = "distinct"


_RATE_FIELDS = ("gamma_a", "gamma_b", "gamma_c",
                "omega_ab_rabi", "omega_bc_rabi", "omega_ca_rabi")


@dataclass(frozen=True)
class SystemParams:
    """Physical parameters of the driven three-level emitter.

    Attributes
    ----------
    gamma_a, gamma_b, gamma_c:
        Decay rates of |a>, |b>, |c> to the lower level(s), >= 0.
    omega_ab_rabi, omega_bc_rabi, omega_ca_rabi:
        Rabi frequencies of the three drives, >= 0.
    delta_ab, delta_ca:
        Drive detunings.  The third detuning is never stored; three-photon
        resonance fixes it to ``delta_cb = delta_ca + delta_ab``.
    phi:
        Total loop phase of the three drives, radians.
    omega_ab_split, omega_ca_split:
        Level splittings E_a - E_b and E_c - E_a, strictly positive.  The
        b-c splitting is derived: ``omega_cb_split = omega_ab_split +
        omega_ca_split``.
    topology:
        Lower-level topology used by the spectrum operations.
    p_ab, p_cb, p_ca:
        Dipole alignment factors in [-1, 1].  Only the full (lab-frame)
        propagation model uses them.
    """

    gamma_a: float = 1.0
    gamma_b: float = 1.0
    gamma_c: float = 1.0
    omega_ab_rabi: float = 0.0
    omega_bc_rabi: float = 0.0
    omega_ca_rabi: float = 0.0
    delta_ab: float = 0.0
    delta_ca: float = 0.0
    phi: float = 0.0
    omega_ab_split: float = 1.0e3
    omega_ca_split: float = 1.0e3
    topology: Topology = Topology.COMMON_LOWER
    p_ab: float = 1.0
    p_cb: float = 1.0
    p_ca: float = 1.0

    def __post_init__(self):
        for name in _RATE_FIELDS:
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"{name} must be finite and >= 0, got {value}")
        for name in ("delta_ab", "delta_ca", "phi"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        for name in ("omega_ab_split", "omega_ca_split"):
            value = getattr(self, name)
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be finite and > 0, got {value}")
        for name in ("p_ab", "p_cb", "p_ca"):
            value = getattr(self, name)
            if not math.isfinite(value) or abs(value) > 1:
                raise ValueError(f"{name} must lie in [-1, 1], got {value}")
        if not isinstance(self.topology, Topology):
            raise ValueError(f"topology must be a Topology, got {self.topology!r}")

    @property
    def delta_cb(self) -> float:
        """Derived detuning enforcing three-photon resonance."""
        return self.delta_ca + self.delta_ab

    @property
    def omega_cb_split(self) -> float:
        """Derived b-c splitting (c sits above a, a above b)."""
        return self.omega_ab_split + self.omega_ca_split

    @property
    def gammas(self) -> tuple[float, float, float]:
        return (self.gamma_a, self.gamma_b, self.gamma_c)


@dataclass(frozen=True)
class AmplitudeVector:
    """Complex rotating-frame amplitudes (A, B, C) of the upper levels."""

    a: complex = 0.0
    b: complex = 0.0
    c: complex = 0.0

    @classmethod
    def basis(cls, level: str) -> "AmplitudeVector":
        """Unit amplitude in one bare level, 'a', 'b' or 'c'."""
        try:
            return {"a": cls(1, 0, 0), "b": cls(0, 1, 0), "c": cls(0, 0, 1)}[level]
        except KeyError:
            raise ValueError(f"unknown level {level!r}, expected 'a', 'b' or 'c'") from None

    @classmethod
    def from_array(cls, arr) -> "AmplitudeVector":
        a, b, c = np.asarray(arr, dtype=complex)
        return cls(a, b, c)

    def as_array(self) -> np.ndarray:
        return np.array([self.a, self.b, self.c], dtype=complex)

    def norm(self) -> float:
        return float(np.linalg.norm(self.as_array()))

    def populations(self) -> tuple[float, float, float]:
        return (abs(self.a) ** 2, abs(self.b) ** 2, abs(self.c) ** 2)


@dataclass(frozen=True, eq=False)
class CoefficientMatrix:
    """The constant matrix K with dPsi/dt = -K Psi.

    The Hermitian part of K is diag(gamma_a, gamma_b, gamma_c)/2, so the
    total upper-level population never grows while all rates are
    non-negative.
    """

    k: np.ndarray

    def m(self, s: complex) -> np.ndarray:
        """Laplace-side matrix M(s) = s*I + K."""
        return s * np.eye(3, dtype=complex) + self.k

    def hermitian_part(self) -> np.ndarray:
        return (self.k + self.k.conj().T) / 2

    def max_entry(self) -> float:
        """Largest entry magnitude; its inverse is the shortest timescale."""
        return float(np.max(np.abs(self.k)))


def build_coefficient_matrix(params: SystemParams) -> CoefficientMatrix:
    """Assemble the rotating-frame coefficient matrix K from the parameters.

    Row by row (drive phase sits on the a-b bond in this gauge):

        [ gamma_a/2              i W_ab e^{+i phi}     i W_ca            ]
        [ i W_ab e^{-i phi}      gamma_b/2 - i d_ab    i W_bc            ]
        [ i W_ca                 i W_bc                gamma_c/2 + i d_ca]
    """
    w_ab = params.omega_ab_rabi
    w_bc = params.omega_bc_rabi
    w_ca = params.omega_ca_rabi
    phase = np.exp(1j * params.phi)
    k = np.array([
        [params.gamma_a / 2, 1j * w_ab * phase, 1j * w_ca],
        [1j * w_ab / phase, params.gamma_b / 2 - 1j * params.delta_ab, 1j * w_bc],
        [1j * w_ca, 1j * w_bc, params.gamma_c / 2 + 1j * params.delta_ca],
    ], dtype=complex)
    return CoefficientMatrix(k)


@dataclass(frozen=True)
class RegimeReport:
    """Outcome of the separation-of-scales check for the simplified model."""

    ratio: float
    threshold: float
    ok: bool


def validate_regime(params: SystemParams, threshold: float = 0.2) -> RegimeReport:
    """Check that rates and detunings are small against the level splittings.

    The simplified constant-coefficient model drops terms oscillating at the
    splitting frequencies; that is justified when

        max(gamma_a, gamma_b, gamma_c, |d_ab|, |d_ca|, |d_cb|)
            << min(omega_ab, omega_ca, omega_cb).

    Returns the ratio of those two scales and a flag ``ratio < threshold``.
    The flag is advisory; no operation refuses to run on a failing ratio.
    """
    numer = max(params.gamma_a, params.gamma_b, params.gamma_c,
                abs(params.delta_ab), abs(params.delta_ca), abs(params.delta_cb))
    denom = min(params.omega_ab_split, params.omega_ca_split, params.omega_cb_split)
    ratio = numer / denom
    return RegimeReport(ratio=ratio, threshold=threshold, ok=ratio < threshold)
