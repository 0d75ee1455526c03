"""Unitary time evolution with controlled accuracy.

Two propagation routes:

* :func:`evolve_static` / :class:`StaticPropagator` - exact (to
  eigendecomposition rounding) evolution under a constant Hermitian
  Hamiltonian, reusing one ``eigh`` for arbitrarily many times.
* :func:`evolve_timedep` - adaptive embedded Runge-Kutta 4(5) integration of
  ``i dpsi/dt = H(t) psi`` for time-periodic Hamiltonians.  Norm drift is a
  diagnostic of integrator health and is logged per sample, never silently
  corrected.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .hilbert import Operator, StateVector

_HERMITIAN_RTOL = 1e-12


class StiffnessError(RuntimeError):
    """The adaptive integrator could not meet the tolerance (step underflow)."""


@dataclass(frozen=True)
class HarmonicHamiltonian:
    """``H(t) = h_plus e^{+i w t} + h_plus^dag e^{-i w t}`` with ``w = freq``."""

    h_plus: np.ndarray
    freq: float

    @property
    def h_minus(self) -> np.ndarray:
        return self.h_plus.conj().T

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.freq

    def matrix_at(self, t: float) -> np.ndarray:
        phase = np.exp(1j * self.freq * t)
        return self.h_plus * phase + self.h_minus * np.conj(phase)

    def apply(self, t: float, vec: np.ndarray) -> np.ndarray:
        phase = np.exp(1j * self.freq * t)
        return phase * (self.h_plus @ vec) + np.conj(phase) * (self.h_minus @ vec)


@dataclass(frozen=True)
class Trajectory:
    """Sampled propagation record: times, states, and per-sample norm error."""

    times: np.ndarray
    states: list[StateVector]
    norm_errors: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or len(self.states) != t.shape[0]:
            raise ValueError("times and states must have matching lengths")
        if t.shape[0] >= 2 and not np.all(np.diff(t) > 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "norm_errors",
                           np.asarray(self.norm_errors, dtype=float))


def _require_hermitian(h: Operator):
    mat = h.entries
    scale = max(np.abs(mat).max(), 1.0)
    dev = np.abs(mat - mat.conj().T).max()
    if dev > _HERMITIAN_RTOL * scale:
        raise ValueError(
            f"propagation requires a Hermitian generator; max|H - H^dag| = {dev:.3e}"
        )


class StaticPropagator:
    """Eigendecomposition-backed propagator for a constant Hamiltonian."""

    def __init__(self, h: Operator):
        _require_hermitian(h)
        self._eigvals, self._eigvecs = np.linalg.eigh(h.entries)
        self.dim = h.dim

    @property
    def spectral_norm(self) -> float:
        return float(np.abs(self._eigvals).max())

    def at(self, psi0: StateVector, t: float) -> StateVector:
        if psi0.dim != self.dim:
            raise ValueError(f"dimension mismatch: state {psi0.dim} vs H {self.dim}")
        coeffs = self._eigvecs.conj().T @ psi0.amplitudes
        out = self._eigvecs @ (np.exp(-1j * self._eigvals * t) * coeffs)
        return StateVector(out, validate=False)

    def trajectory(self, psi0: StateVector, times: np.ndarray) -> Trajectory:
        states = [self.at(psi0, t) for t in times]
        return Trajectory(times=np.asarray(times, dtype=float), states=states,
                          norm_errors=np.array([s.norm_error for s in states]))


def evolve_static(h: Operator, psi0: StateVector, t: float) -> StateVector:
    """``psi(t) = V exp(-i Lambda t) V^dag psi(0)`` for Hermitian ``h``."""
    return StaticPropagator(h).at(psi0, t)


def evolve_timedep(h_of_t, psi0: StateVector, t_final: float, tol: float, *,
                   t_samples: np.ndarray | None = None,
                   max_step: float | None = None) -> Trajectory:
    """Adaptive RK45 integration of ``i dpsi/dt = H(t) psi``.

    Parameters
    ----------
    h_of_t
        Either a :class:`HarmonicHamiltonian` or a callable ``t -> ndarray``
        returning the (Hermitian) Hamiltonian matrix.
    t_samples
        Sampling grid (must start at 0 and end at ``t_final``); defaults to
        the two endpoints.
    tol
        Local error tolerance per step (used for both rtol and atol).

    Raises
    ------
    StiffnessError
        If the integrator fails (step-size underflow or non-finite values).
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if t_final <= 0:
        raise ValueError("t_final must be > 0")
    if isinstance(h_of_t, HarmonicHamiltonian):
        apply = h_of_t.apply
        if max_step is None:
            max_step = h_of_t.period / 8.0  # always resolve the drive harmonic
    else:
        def apply(t, vec, _h=h_of_t):
            return np.asarray(_h(t)) @ vec

    def rhs(t, y):
        return -1j * apply(t, y)

    if t_samples is None:
        t_eval = np.array([0.0, t_final])
    else:
        t_eval = np.asarray(t_samples, dtype=float)

    kwargs = {}
    if max_step is not None:
        kwargs["max_step"] = max_step
    sol = solve_ivp(rhs, (0.0, t_final), psi0.amplitudes.astype(complex),
                    method="RK45", t_eval=t_eval, rtol=tol, atol=tol,
                    dense_output=False, **kwargs)
    if not sol.success:
        raise StiffnessError(f"RK45 integration failed: {sol.message}")

    states, norm_errors = [], []
    for k in range(sol.t.shape[0]):
        vec = sol.y[:, k]
        states.append(StateVector(vec, validate=False))
        norm_errors.append(abs(float(np.linalg.norm(vec)) - 1.0))
    return Trajectory(times=sol.t, states=states,
                      norm_errors=np.asarray(norm_errors))


def check_unitarity(traj: Trajectory) -> float:
    """Largest norm error along a trajectory."""
    if traj.norm_errors.size == 0:
        raise ValueError("empty trajectory")
    return float(traj.norm_errors.max())
