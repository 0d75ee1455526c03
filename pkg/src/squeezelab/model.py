"""Physical parameters and the three Hamiltonian layers of the scheme.

A three-level Lambda atom (ground states ``|1>``, ``|2>``, excited ``|3>``)
is driven resonantly on both legs with Rabi frequencies ``Omega_1``,
``Omega_2`` and sits in a two-mode cavity whose modes couple the
``|2> <-> |3>`` transition with strengths ``g_1``, ``g_2``.  Everything is
expressed in the frame rotating with the drives (hbar = 1, all frequencies
dimensionless).

Three layers of description are built here, each an approximation of the
previous one:

* :func:`build_lab_hamiltonian` - the full driven model.  The two modes sit
  on opposite drive-dressed sidebands, ``delta_1 = 2*Omega_e - d`` above and
  ``delta_2 = -(2*Omega_e - d)`` below the drive, so that emitting one
  photon into each mode while the atom cycles ``|+> -> |-> -> |+>`` is a
  resonant second-order process detuned only through the intermediate step
  (by ``d``).
* :func:`build_interaction_hamiltonian` - the slow part that survives in
  the interaction picture once every term oscillating at ``Omega_e`` or
  ``2*Omega_e`` is dropped: a single harmonic ``H(+) e^{i d t} + h.c.``.
* :func:`build_effective_hamiltonian` - the time average of that harmonic,
  ``(1/d)[H(+), H(-)]``: a nondegenerate pair-creation (two-mode squeezing)
  interaction between the modes, conditioned on the dressed atomic
  population, plus light-shift corrections.

Dressed eigenvectors are always obtained numerically from the 3x3 drive
Hamiltonian with a fixed phase convention; no transcribed coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .hilbert import (
    ATOM_DIM,
    Operator,
    SpaceDescriptor,
    StateVector,
    atomic_matrix_op,
    product_state,
    _kron3,
    _mode_matrix,
)
from .propagate import HarmonicHamiltonian


class DegenerateSpectrumError(ValueError):
    """The drive Hamiltonian has no resolved dressed splitting (Omega_e = 0)."""


@dataclass(frozen=True)
class ModelParams:
    """Physical inputs of the scheme.

    ``delta1_cap`` / ``delta2_cap`` store the atomic drive detunings; the
    drives are resonant throughout, so they never enter the dynamics.
    """

    omega1: float
    omega2: float
    g1: complex
    g2: complex
    d: float
    delta1_cap: float = 0.0
    delta2_cap: float = 0.0

    def __post_init__(self):
        if self.omega1 < 0 or self.omega2 < 0:
            raise ValueError("Rabi frequencies must be >= 0")
        if self.d <= 0:
            raise ValueError(f"detuning offset d must be > 0, got {self.d}")

    @property
    def omega_e(self) -> float:
        return math.hypot(self.omega1, self.omega2)

    @property
    def sin_theta(self) -> float:
        """Mixing ratio Omega_1 / Omega_e of the dressed manifold."""
        oe = self.omega_e
        if oe == 0.0:
            raise DegenerateSpectrumError("Omega_1 = Omega_2 = 0: mixing angle undefined")
        return self.omega1 / oe

    @property
    def delta1(self) -> float:
        """Mode-1 detuning from the drive: upper dressed sideband."""
        return 2.0 * self.omega_e - self.d

    @property
    def delta2(self) -> float:
        """Mode-2 detuning from the drive: lower dressed sideband (mirror of mode 1)."""
        return -(2.0 * self.omega_e - self.d)


@dataclass(frozen=True)
class DressedBasis:
    """Eigensystem of the 3x3 drive Hamiltonian.

    ``eigenvalues`` are sorted ascending, ``(-Omega_e, 0, +Omega_e)``.
    ``eigenvectors`` holds the columns ``(|0>, |+>, |->)`` in the bare basis
    ``(|1>, |2>, |3>)``.  Phase convention: ``|+>`` and ``|->`` have positive
    real amplitude on ``|3>``; the dark column's largest-magnitude component
    is positive real.
    """

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    theta: float

    @property
    def dark(self) -> np.ndarray:
        return self.eigenvectors[:, 0]

    @property
    def plus(self) -> np.ndarray:
        return self.eigenvectors[:, 1]

    @property
    def minus(self) -> np.ndarray:
        return self.eigenvectors[:, 2]


@dataclass(frozen=True)
class EffectiveParams:
    """Derived couplings of the averaged layer."""

    G1: complex
    G2: complex
    lam: complex
    lambda_pp: float
    lambda_mm: float


def drive_hamiltonian_matrix(params: ModelParams) -> np.ndarray:
    """The bare 3x3 drive Hamiltonian -sum_j Omega_j (|3><j| + |j><3|)."""
    h = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    h[2, 0] = h[0, 2] = -params.omega1
    h[2, 1] = h[1, 2] = -params.omega2
    return h


@lru_cache(maxsize=64)
def dressed_basis(params: ModelParams) -> DressedBasis:
    """Numerically diagonalize the drive Hamiltonian.

    Raises
    ------
    DegenerateSpectrumError
        If both Rabi frequencies vanish (fully degenerate spectrum).
    """
    oe = params.omega_e
    if oe == 0.0:
        raise DegenerateSpectrumError("Omega_1 = Omega_2 = 0: dressed basis undefined")
    w, v = np.linalg.eigh(drive_hamiltonian_matrix(params))
    # ascending order is (-Oe, 0, +Oe); reorder columns to (dark, plus, minus)
    cols = [v[:, 1].copy(), v[:, 2].copy(), v[:, 0].copy()]
    for i in (1, 2):  # bright states: positive real amplitude on |3>
        if cols[i][2].real < 0:
            cols[i] = -cols[i]
    anchor = int(np.argmax(np.abs(cols[0])))
    if cols[0][anchor].real < 0:
        cols[0] = -cols[0]
    vectors = np.column_stack(cols)
    return DressedBasis(eigenvalues=w.copy(), eigenvectors=vectors,
                        theta=math.asin(params.sin_theta))


def effective_params(params: ModelParams) -> EffectiveParams:
    """Bright-transition couplings and the averaged pair-coupling strength.

    ``G_j = g_j * sin(theta) / 2`` with ``sin(theta) = Omega_1 / Omega_e``,
    ``lam = G_1 G_2 / d`` and the light shifts ``|G_j|^2 / d``.
    """
    if params.d <= 0:
        raise ValueError("d must be > 0")
    s = params.sin_theta
    g1 = complex(params.g1) * s / 2.0
    g2 = complex(params.g2) * s / 2.0
    return EffectiveParams(
        G1=g1,
        G2=g2,
        lam=g1 * g2 / params.d,
        lambda_pp=abs(g1) ** 2 / params.d,
        lambda_mm=abs(g2) ** 2 / params.d,
    )


# ---------------------------------------------------------------------------
# Hamiltonian builders


def build_lab_hamiltonian(params: ModelParams, space: SpaceDescriptor) -> Operator:
    """Full model: drive + sideband photon energies + bright-transition coupling.

    ``H = -sum_j Omega_j (|3><j| + h.c.) + delta_1 n_1 + delta_2 n_2
    + sum_n (g_n a_n |3><2| + h.c.)`` with the two modes on mirrored
    sidebands ``delta_1 = 2*Omega_e - d``, ``delta_2 = -(2*Omega_e - d)``.
    """
    a1 = _mode_matrix(space, 1, with_atom=True)
    a2 = _mode_matrix(space, 2, with_atom=True)
    n1 = a1.conj().T @ a1
    n2 = a2.conj().T @ a2
    ident1, ident2 = np.eye(space.dim1), np.eye(space.dim2)

    s32 = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    s32[2, 1] = 1.0
    big_s32 = _kron3(s32, ident1, ident2)
    big_s23 = _kron3(s32.conj().T, ident1, ident2)

    h = _kron3(drive_hamiltonian_matrix(params), ident1, ident2)
    h = h + params.delta1 * n1 + params.delta2 * n2
    h = h + params.g1 * (a1 @ big_s32) + np.conj(params.g1) * (a1.conj().T @ big_s23)
    h = h + params.g2 * (a2 @ big_s32) + np.conj(params.g2) * (a2.conj().T @ big_s23)
    return Operator(h, hermitian_hint=True)


def dressed_projector(space: SpaceDescriptor, bra: np.ndarray, ket: np.ndarray) -> Operator:
    """Embed ``|bra><ket|`` built from two dressed columns in the composite space."""
    return atomic_matrix_op(space, np.outer(bra, ket.conj()))


def interaction_harmonics(params: ModelParams, space: SpaceDescriptor) -> HarmonicHamiltonian:
    """Slow interaction-picture Hamiltonian as a single-harmonic pair.

    Returns the ``H(+)`` of ``H(t) = H(+) e^{i d t} + H(-) e^{-i d t}`` with
    ``H(+) = (G_1 a_1 - G_2^* a_2^dag) |+><-|`` wrapped together with the
    harmonic frequency ``d``.
    """
    eff = effective_params(params)
    basis = dressed_basis(params)
    spm = dressed_projector(space, basis.plus, basis.minus)
    a1 = _mode_matrix(space, 1, with_atom=True)
    a2 = _mode_matrix(space, 2, with_atom=True)
    h_plus = (eff.G1 * a1 - np.conj(eff.G2) * a2.conj().T) @ spm.entries
    return HarmonicHamiltonian(h_plus=h_plus, freq=params.d)


def build_interaction_hamiltonian(params: ModelParams, space: SpaceDescriptor,
                                  t: float) -> Operator:
    """Interaction-picture Hamiltonian evaluated at time ``t`` (period 2*pi/d)."""
    return Operator(interaction_harmonics(params, space).matrix_at(t),
                    hermitian_hint=True)


def build_effective_hamiltonian(eff: EffectiveParams, basis: DressedBasis,
                                space: SpaceDescriptor, *,
                                include_stark: bool = True,
                                include_photon_shifts: bool = False) -> Operator:
    """Time average of the slow interaction layer.

    ``H_eff = -(lam a_1 a_2 + lam^* a_1^dag a_2^dag)(P_+ - P_-)`` plus,
    optionally, the photon-number light shifts
    ``(|G_1|^2 n_1 + |G_2|^2 n_2)/d (P_+ - P_-)`` and the constant shifts
    ``lambda_pp P_+ - lambda_mm P_-``.  The minus sign on the pair term is
    what ``(1/d)[H(+), H(-)]`` actually produces for the harmonic pair of
    :func:`interaction_harmonics`; a unit test pins this equality element
    by element.
    """
    a1 = _mode_matrix(space, 1, with_atom=True)
    a2 = _mode_matrix(space, 2, with_atom=True)
    ppop = dressed_projector(space, basis.plus, basis.plus).entries
    pmop = dressed_projector(space, basis.minus, basis.minus).entries
    pop_diff = ppop - pmop

    pair = eff.lam * (a1 @ a2) + np.conj(eff.lam) * (a1.conj().T @ a2.conj().T)
    h = -pair @ pop_diff
    if include_photon_shifts:
        n1 = a1.conj().T @ a1
        n2 = a2.conj().T @ a2
        shift = eff.lambda_pp * n1 + eff.lambda_mm * n2  # |G_j|^2 / d per photon
        h = h + shift @ pop_diff
    if include_stark:
        h = h + eff.lambda_pp * ppop - eff.lambda_mm * pmop
    return Operator(h, hermitian_hint=True)


def time_averaged_interaction(params: ModelParams, space: SpaceDescriptor) -> Operator:
    """Brute-force second-order average ``(1/d)[H(+), H(-)]`` of the slow layer."""
    harm = interaction_harmonics(params, space)
    hp, hm = harm.h_plus, harm.h_minus
    return Operator((hp @ hm - hm @ hp) / params.d)


# ---------------------------------------------------------------------------
# states and frames


def initial_plus_state(params: ModelParams, space: SpaceDescriptor) -> StateVector:
    """The scheme's initial state: upper dressed state, both modes in vacuum."""
    return product_state(space, dressed_basis(params).plus, 0, 0)


def to_interaction_frame(params: ModelParams, space: SpaceDescriptor,
                         state: StateVector, t: float) -> StateVector:
    """Rotate a full-model state into the frame of the slow interaction layer.

    Applies ``exp(+i H_0 t)`` with ``H_0`` the drive Hamiltonian plus the
    sideband photon energies, factor by factor (exact, no integration).
    """
    basis = dressed_basis(params)
    phases = np.exp(1j * basis.eigenvalues * t)
    # eigh order is (-Oe, 0, +Oe) = (minus, dark, plus)
    cols = np.column_stack([basis.minus, basis.dark, basis.plus])
    u_atom = (cols * phases) @ cols.conj().T
    u1 = np.diag(np.exp(1j * params.delta1 * np.arange(space.dim1) * t))
    u2 = np.diag(np.exp(1j * params.delta2 * np.arange(space.dim2) * t))
    rotated = _kron3(u_atom, u1, u2) @ state.amplitudes
    return StateVector(rotated, validate=False)
