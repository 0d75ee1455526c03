"""Composite Hilbert-space bookkeeping and dense operator algebra.

The simulator works on the tensor product of one three-level atom and two
number-truncated bosonic modes.  The factor ordering is fixed once and for
all as ``atom (x) mode1 (x) mode2`` with the atom index slowest, i.e. the
flat index of the basis state ``|a, n1, n2>`` is::

    index = a * (n1_max + 1) * (n2_max + 1) + n1 * (n2_max + 1) + n2

which is exactly the row-major ordering produced by
``np.kron(atom_op, np.kron(mode1_op, mode2_op))``.  Every operator builder
in the package goes through this module so the convention cannot drift.

Truncated ladder operators simply drop amplitude above the cutoff
(``a_dag |n_max> = 0``); convergence of results against the cutoff is the
caller's responsibility and is monitored through the top-level population
reported by :mod:`squeezelab.observables`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

ATOM_DIM = 3

# tolerances enforced on construction
_HERMITIAN_RTOL = 1e-12
_STATE_NORM_ATOL = 1e-6
_DM_HERM_ATOL = 1e-10
_DM_TRACE_ATOL = 1e-9
_DM_EIG_FLOOR = -1e-9


class PreconditionError(ValueError):
    """A documented precondition of an operation was violated."""


def _readonly(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=complex)
    out.flags.writeable = False
    return out


@dataclass(frozen=True)
class SpaceDescriptor:
    """Shape and index arithmetic of the composite space.

    Parameters
    ----------
    n1_max, n2_max
        Fock cutoffs; mode ``j`` keeps the number states ``0..nj_max``.
    """

    n1_max: int
    n2_max: int
    atom_dim: int = ATOM_DIM

    def __post_init__(self):
        if self.n1_max < 1 or self.n2_max < 1:
            raise ValueError(
                f"Fock cutoffs must be >= 1, got ({self.n1_max}, {self.n2_max})"
            )
        if self.atom_dim != ATOM_DIM:
            raise ValueError("the atomic factor is a fixed three-level system")

    @property
    def dim1(self) -> int:
        return self.n1_max + 1

    @property
    def dim2(self) -> int:
        return self.n2_max + 1

    @property
    def cavity_dim(self) -> int:
        return self.dim1 * self.dim2

    @property
    def total_dim(self) -> int:
        return self.atom_dim * self.cavity_dim

    def encode(self, atom: int, n1: int, n2: int) -> int:
        """Flat index of the basis state ``|atom, n1, n2>`` (atom is 0-based)."""
        if not (0 <= atom < self.atom_dim):
            raise ValueError(f"atom index {atom} outside 0..{self.atom_dim - 1}")
        if not (0 <= n1 <= self.n1_max) or not (0 <= n2 <= self.n2_max):
            raise ValueError(f"Fock labels ({n1}, {n2}) outside the cutoffs")
        return (atom * self.dim1 + n1) * self.dim2 + n2

    def decode(self, index: int) -> tuple[int, int, int]:
        """Inverse of :meth:`encode`."""
        if not (0 <= index < self.total_dim):
            raise ValueError(f"flat index {index} outside 0..{self.total_dim - 1}")
        index, n2 = divmod(index, self.dim2)
        atom, n1 = divmod(index, self.dim1)
        return atom, n1, n2


def make_space(n1_max: int, n2_max: int) -> SpaceDescriptor:
    """Create a :class:`SpaceDescriptor`; cutoffs below 1 are rejected."""
    return SpaceDescriptor(n1_max=n1_max, n2_max=n2_max)


@dataclass(frozen=True)
class Operator:
    """Dense complex square matrix on a fixed-dimension space.

    ``hermitian_hint`` is a promise checked at construction:
    ``max|A - A^dag| <= 1e-12 * max|A|``.
    """

    entries: np.ndarray
    hermitian_hint: bool = False

    def __post_init__(self):
        mat = _readonly(self.entries)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"operator must be square, got shape {mat.shape}")
        object.__setattr__(self, "entries", mat)
        if self.hermitian_hint:
            scale = np.abs(mat).max()
            dev = np.abs(mat - mat.conj().T).max()
            if dev > _HERMITIAN_RTOL * max(scale, 1.0):
                raise ValueError(
                    f"hermitian_hint set but max|A - A^dag| = {dev:.3e} "
                    f"exceeds {_HERMITIAN_RTOL:.0e} * max|A|"
                )

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def _check_dim(self, other: "Operator"):
        if self.dim != other.dim:
            raise ValueError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.entries + other.entries,
                        hermitian_hint=self.hermitian_hint and other.hermitian_hint)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.entries - other.entries,
                        hermitian_hint=self.hermitian_hint and other.hermitian_hint)

    def scale(self, factor: complex) -> "Operator":
        keep = self.hermitian_hint and abs(complex(factor).imag) == 0.0
        return Operator(self.entries * factor, hermitian_hint=keep)

    def __mul__(self, factor: complex) -> "Operator":
        return self.scale(factor)

    __rmul__ = __mul__

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check_dim(other)
        return Operator(self.entries @ other.entries)

    def dagger(self) -> "Operator":
        return Operator(self.entries.conj().T, hermitian_hint=self.hermitian_hint)

    def apply(self, vec: np.ndarray) -> np.ndarray:
        return self.entries @ vec


def commutator(a: Operator, b: Operator) -> Operator:
    """``[A, B] = AB - BA``."""
    a._check_dim(b)
    return Operator(a.entries @ b.entries - b.entries @ a.entries)


@dataclass(frozen=True)
class StateVector:
    """Normalized pure state as a flat complex amplitude vector."""

    amplitudes: np.ndarray
    validate: bool = field(default=True, repr=False)

    def __post_init__(self):
        amp = _readonly(np.asarray(self.amplitudes, dtype=complex).ravel())
        object.__setattr__(self, "amplitudes", amp)
        if self.validate:
            err = abs(np.linalg.norm(amp) - 1.0)
            if err > _STATE_NORM_ATOL:
                raise ValueError(f"state not normalized: | ||psi|| - 1 | = {err:.3e}")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    @property
    def norm_error(self) -> float:
        return abs(float(np.linalg.norm(self.amplitudes)) - 1.0)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, unit-trace, (numerically) positive matrix."""

    entries: np.ndarray

    def __post_init__(self):
        mat = _readonly(self.entries)
        if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
            raise ValueError(f"density matrix must be square, got {mat.shape}")
        object.__setattr__(self, "entries", mat)
        herm = np.abs(mat - mat.conj().T).max()
        if herm > _DM_HERM_ATOL:
            raise ValueError(f"density matrix not Hermitian: max dev {herm:.3e}")
        tr = mat.trace()
        if abs(tr - 1.0) > _DM_TRACE_ATOL:
            raise ValueError(f"density matrix trace {tr:.12g} differs from 1")
        w = np.linalg.eigvalsh((mat + mat.conj().T) / 2.0)
        if w.min() < _DM_EIG_FLOOR:
            raise ValueError(f"density matrix has eigenvalue {w.min():.3e} < {_DM_EIG_FLOOR}")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


# ---------------------------------------------------------------------------
# operator builders


def _fock_annihilation(dim: int) -> np.ndarray:
    a = np.zeros((dim, dim), dtype=complex)
    for n in range(dim - 1):
        a[n, n + 1] = np.sqrt(n + 1.0)  # a|n> = sqrt(n)|n-1>
    return a


def _kron3(atom: np.ndarray, m1: np.ndarray, m2: np.ndarray) -> np.ndarray:
    return np.kron(atom, np.kron(m1, m2))


def _mode_matrix(space: SpaceDescriptor, mode: int, with_atom: bool) -> np.ndarray:
    if mode == 1:
        m1, m2 = _fock_annihilation(space.dim1), np.eye(space.dim2)
    elif mode == 2:
        m1, m2 = np.eye(space.dim1), _fock_annihilation(space.dim2)
    else:
        raise ValueError(f"mode must be 1 or 2, got {mode}")
    cav = np.kron(m1, m2)
    if with_atom:
        return np.kron(np.eye(space.atom_dim), cav)
    return cav


def annihilation(space: SpaceDescriptor, mode: int) -> Operator:
    """Annihilation operator of ``mode`` embedded in the composite space."""
    return Operator(_mode_matrix(space, mode, with_atom=True))


def creation(space: SpaceDescriptor, mode: int) -> Operator:
    return annihilation(space, mode).dagger()


def number_op(space: SpaceDescriptor, mode: int) -> Operator:
    a = _mode_matrix(space, mode, with_atom=True)
    return Operator(a.conj().T @ a, hermitian_hint=True)


def cavity_annihilation(space: SpaceDescriptor, mode: int) -> Operator:
    """Annihilation operator of ``mode`` on the cavity-only space (no atom factor)."""
    return Operator(_mode_matrix(space, mode, with_atom=False))


def atomic_op(space: SpaceDescriptor, j: int, k: int) -> Operator:
    """``|j><k|`` on the atomic factor (1-based bare levels), identity on the modes."""
    if j not in (1, 2, 3) or k not in (1, 2, 3):
        raise ValueError(f"atomic level indices must be in 1..3, got ({j}, {k})")
    m = np.zeros((ATOM_DIM, ATOM_DIM), dtype=complex)
    m[j - 1, k - 1] = 1.0
    return atomic_matrix_op(space, m)


def atomic_matrix_op(space: SpaceDescriptor, matrix: np.ndarray) -> Operator:
    """Embed an arbitrary 3x3 atomic operator in the composite space."""
    m = np.asarray(matrix, dtype=complex)
    if m.shape != (ATOM_DIM, ATOM_DIM):
        raise ValueError(f"atomic operator must be 3x3, got {m.shape}")
    herm = np.abs(m - m.conj().T).max() <= _HERMITIAN_RTOL * max(np.abs(m).max(), 1.0)
    return Operator(_kron3(m, np.eye(space.dim1), np.eye(space.dim2)),
                    hermitian_hint=bool(herm))


def identity(space: SpaceDescriptor) -> Operator:
    return Operator(np.eye(space.total_dim, dtype=complex), hermitian_hint=True)


# ---------------------------------------------------------------------------
# states


def basis_state(space: SpaceDescriptor, atom: int, n1: int, n2: int) -> StateVector:
    """Basis ket ``|atom, n1, n2>`` (atom 0-based bare level)."""
    amp = np.zeros(space.total_dim, dtype=complex)
    amp[space.encode(atom, n1, n2)] = 1.0
    return StateVector(amp)


def product_state(space: SpaceDescriptor, atom_vec: np.ndarray,
                  n1: int = 0, n2: int = 0) -> StateVector:
    """Product of an arbitrary atomic vector with the Fock state ``|n1, n2>``."""
    av = np.asarray(atom_vec, dtype=complex).ravel()
    if av.shape != (ATOM_DIM,):
        raise ValueError(f"atomic vector must have length 3, got {av.shape}")
    nrm = np.linalg.norm(av)
    if nrm == 0:
        raise ValueError("atomic vector must be nonzero")
    amp = np.zeros(space.total_dim, dtype=complex)
    for a in range(ATOM_DIM):
        amp[space.encode(a, n1, n2)] = av[a] / nrm
    return StateVector(amp)


def cavity_basis_state(space: SpaceDescriptor, n1: int, n2: int) -> StateVector:
    """Fock ket ``|n1, n2>`` on the cavity-only space."""
    amp = np.zeros(space.cavity_dim, dtype=complex)
    amp[n1 * space.dim2 + n2] = 1.0
    return StateVector(amp)


# ---------------------------------------------------------------------------
# expectations and reduction


def expectation(state: StateVector, op: Operator) -> complex:
    """``<psi|A|psi>``; real to 1e-10 whenever ``A`` carries ``hermitian_hint``."""
    if state.dim != op.dim:
        raise ValueError(f"dimension mismatch: state {state.dim} vs operator {op.dim}")
    return complex(np.vdot(state.amplitudes, op.entries @ state.amplitudes))


def partial_trace_cavity(state: StateVector, space: SpaceDescriptor) -> DensityMatrix:
    """Reduced density matrix of the two modes (atom traced out).

    Raises
    ------
    PreconditionError
        If the input norm deviates from 1 by more than 1e-6.
    """
    if state.dim != space.total_dim:
        raise ValueError(f"state dim {state.dim} does not match space {space.total_dim}")
    if state.norm_error > 1e-6:
        raise PreconditionError(
            f"partial trace requires a normalized state, | ||psi|| - 1 | = {state.norm_error:.3e}"
        )
    psi = state.amplitudes.reshape(space.atom_dim, space.cavity_dim)
    rho = psi.T @ psi.conj()  # rho[i, j] = sum_a psi[a, i] conj(psi[a, j])
    rho = (rho + rho.conj().T) / 2.0  # scrub rounding asymmetry
    return DensityMatrix(rho)
