"""Time propagation of the upper-level amplitudes.

Three propagators with distinct roles:

- :func:`evolve_exact`: matrix-exponential solution of the rotating-frame
  constant-coefficient model, the workhorse.
- :func:`evolve_rk`: fixed-step RK4 on the same model, kept as an
  independent cross-check of evolve_exact.
- :func:`evolve_full`: fixed-step RK4 on the lab-frame model that retains
  the decay-induced cross couplings (dipole-alignment terms oscillating at
  the level splittings) and the explicitly time-dependent drive phases.
  This is the oracle for the claim that those terms are negligible when the
  splittings dominate every other scale.

All propagators are pure functions of immutable inputs; independent
trajectories may run concurrently.
"""

from __future__ import annotations

import warnings
from cmath import exp as cexp
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .model import AmplitudeVector, SystemParams, build_coefficient_matrix, validate_regime

#: eigenvector condition number above which evolve_exact abandons the
#: eigendecomposition and uses a scaling-and-squaring exponential instead
COND_THRESHOLD = 1.0e8


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Sampled amplitudes Psi(t) = (A, B, C) on an ordered time grid.

    ``method`` records which propagation path produced the samples.  The
    rotating-frame phase factors are pure phases, so the population columns
    equal the lab-frame populations.
    """

    times: np.ndarray
    states: np.ndarray
    method: str

    @property
    def populations(self) -> np.ndarray:
        """(n, 3) array of |A|^2, |B|^2, |C|^2 per sample."""
        return np.abs(self.states) ** 2

    @property
    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.states, axis=1)

    def state_at(self, index: int) -> AmplitudeVector:
        return AmplitudeVector.from_array(self.states[index])


def _check_initial(initial: AmplitudeVector) -> np.ndarray:
    psi0 = initial.as_array()
    if not np.all(np.isfinite(psi0.view(float))):
        raise ValueError("initial amplitudes must be finite")
    if np.linalg.norm(psi0) > 1 + 1e-9:
        raise ValueError("initial state norm exceeds 1")
    return psi0


def evolve_exact(params: SystemParams, initial: AmplitudeVector, times,
                 cond_threshold: float = COND_THRESHOLD) -> Trajectory:
    """Propagate Psi(t) = exp(-K t) Psi(0) on the given time grid.

    Parameters
    ----------
    params:
        System parameters; K is built from them.
    initial:
        Initial amplitudes, norm at most 1.
    times:
        Sorted, non-negative sample times.
    cond_threshold:
        When the eigenvector matrix of K is conditioned worse than this
        (repeated eigenvalues occur at symmetric parameter points), the
        propagator silently switches to a scaling-and-squaring matrix
        exponential per sample and records that in ``Trajectory.method``.
    """
    times = np.asarray(times, dtype=float)
    if times.ndim != 1 or times.size == 0:
        raise ValueError("times must be a non-empty 1-d array")
    if np.any(np.diff(times) < 0) or times[0] < 0:
        raise ValueError("times must be sorted and non-negative")
    psi0 = _check_initial(initial)
    k = build_coefficient_matrix(params).k

    lam, vec = np.linalg.eig(k)
    cond = np.linalg.cond(vec)
    if np.isfinite(cond) and cond <= cond_threshold:
        coeff = np.linalg.solve(vec, psi0)
        states = (np.exp(-np.outer(times, lam)) * coeff) @ vec.T
        method = "eigendecomposition"
    else:
        states = np.empty((times.size, 3), dtype=complex)
        for i, t in enumerate(times):
            states[i] = scipy.linalg.expm(-k * t) @ psi0
        method = "scaling-squaring"
    return Trajectory(times=times, states=states, method=method)


def evolve_rk(params: SystemParams, initial: AmplitudeVector,
              t_end: float, dt: float) -> Trajectory:
    """Classic fixed-step RK4 integration of dPsi/dt = -K Psi.

    Fixed step keeps the baseline deterministic and trivially reproducible.
    Rejects dt larger than a tenth of the shortest system timescale
    1/max|K_ij|, which would risk instability.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    k = build_coefficient_matrix(params).k
    k_max = float(np.max(np.abs(k)))
    if k_max > 0 and dt > 0.1 / k_max:
        raise ValueError(f"dt={dt} exceeds 0.1/max|K|={0.1 / k_max:.3e}, "
                         "reduce the step")
    psi0 = _check_initial(initial)
    n = int(round(t_end / dt))
    # For a constant linear system the RK4 update is exactly the quartic
    # Taylor polynomial of exp(-K dt); precomputing it turns each step into
    # one 3x3 matvec without changing the numbers RK4 would produce.
    a = -k * dt
    eye = np.eye(3, dtype=complex)
    step = eye + a @ (eye + a @ (eye / 2 + a @ (eye / 6 + a / 24)))
    states = np.empty((n + 1, 3), dtype=complex)
    states[0] = psi0
    for i in range(n):
        states[i + 1] = step @ states[i]
    times = np.arange(n + 1) * dt
    return Trajectory(times=times, states=states, method="rk4")


def evolve_full(params: SystemParams, initial: AmplitudeVector,
                t_end: float, dt: float, sample_stride: int = 1) -> Trajectory:
    """RK4 integration of the lab-frame model with decay cross couplings.

    Integrates the amplitude equations that keep (i) the cross-decay terms
    p_xy * sqrt(gamma_x gamma_y)/2 oscillating at the level splittings,
    which exist only when the upper levels share one lower level, and
    (ii) the drive terms with their explicit detuning phases.  The returned
    amplitudes are converted to the rotating frame so they compare directly
    with :func:`evolve_exact`.

    The step must resolve the fastest oscillation: dt <= 0.05 / omega_cb.
    A failing separation-of-scales check warns but still produces results.
    """
    if dt <= 0 or t_end <= 0:
        raise ValueError("dt and t_end must be positive")
    if sample_stride < 1:
        raise ValueError("sample_stride must be >= 1")
    w_cb = params.omega_cb_split
    if dt > 0.05 / w_cb:
        raise ValueError(f"dt={dt} does not resolve the fastest oscillation; "
                         f"need dt <= {0.05 / w_cb:.3e}")
    k_max = build_coefficient_matrix(params).max_entry()
    if k_max > 0 and dt > 0.1 / k_max:
        raise ValueError(f"dt={dt} exceeds 0.1/max|K|={0.1 / k_max:.3e}")
    report = validate_regime(params)
    if not report.ok:
        warnings.warn(f"separation of scales is weak (ratio {report.ratio:.3g} "
                      f">= {report.threshold}); the simplified model may not apply",
                      stacklevel=2)
    psi0 = _check_initial(initial)

    ga, gb, gc = params.gammas
    w_ab, w_bc, w_ca = params.omega_ab_rabi, params.omega_bc_rabi, params.omega_ca_rabi
    d_ab, d_ca, d_cb = params.delta_ab, params.delta_ca, params.delta_cb
    s_ab, s_ca = params.omega_ab_split, params.omega_ca_split
    s_cb = params.omega_cb_split
    q_ab = params.p_ab * np.sqrt(ga * gb) / 2
    q_ca = params.p_ca * np.sqrt(ga * gc) / 2
    q_cb = params.p_cb * np.sqrt(gb * gc) / 2
    fwd = 1j * w_ab * cexp(1j * params.phi)   # multiplies B in dA/dt
    rev = 1j * w_ab * cexp(-1j * params.phi)  # multiplies A in dB/dt

    def rhs(t, y):
        a_, b_, c_ = y
        e_ab = cexp(1j * s_ab * t)
        e_ca = cexp(1j * s_ca * t)
        e_cb = cexp(1j * s_cb * t)
        f_ab = cexp(1j * d_ab * t)
        f_ca = cexp(1j * d_ca * t)
        f_cb = cexp(1j * d_cb * t)
        da = (-ga / 2 * a_ - q_ab * e_ab * b_ - q_ca * c_ / e_ca
              - fwd * f_ab * b_ - 1j * w_ca * c_ / f_ca)
        db = (-gb / 2 * b_ - q_ab * a_ / e_ab - q_cb * c_ / e_cb
              - 1j * w_bc * c_ / f_cb - rev * a_ / f_ab)
        dc = (-gc / 2 * c_ - q_ca * e_ca * a_ - q_cb * e_cb * b_
              - 1j * w_ca * f_ca * a_ - 1j * w_bc * f_cb * b_)
        return da, db, dc

    n = int(round(t_end / dt))
    ya, yb, yc = complex(psi0[0]), complex(psi0[1]), complex(psi0[2])
    times = [0.0]
    samples = [(ya, yb, yc)]
    half = dt / 2
    for i in range(n):
        t = i * dt
        k1 = rhs(t, (ya, yb, yc))
        k2 = rhs(t + half, (ya + half * k1[0], yb + half * k1[1], yc + half * k1[2]))
        k3 = rhs(t + half, (ya + half * k2[0], yb + half * k2[1], yc + half * k2[2]))
        k4 = rhs(t + dt, (ya + dt * k3[0], yb + dt * k3[1], yc + dt * k3[2]))
        ya += dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        yb += dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        yc += dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        if (i + 1) % sample_stride == 0 or i == n - 1:
            times.append((i + 1) * dt)
            samples.append((ya, yb, yc))

    times = np.asarray(times)
    states = np.asarray(samples, dtype=complex)
    # rotating-frame conversion: B -> e^{+i d_ab t} B, C -> e^{-i d_ca t} C
    states[:, 1] *= np.exp(1j * d_ab * times)
    states[:, 2] *= np.exp(-1j * d_ca * times)
    return Trajectory(times=times, states=states, method="rk4-lab-frame")
