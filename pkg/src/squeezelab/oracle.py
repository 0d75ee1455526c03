"""Closed-form two-mode squeezed vacuum, the independent reference for all
numerical propagation.

The averaged layer acts on the ``|+>`` sector as
``-(lam a1 a2 + lam^* a1^dag a2^dag)`` (plus a global phase), so the cavity
state after time ``t`` is ``S(xi)|0,0>`` with the standard squeeze operator
``S(xi) = exp(xi^* a1 a2 - xi a1^dag a2^dag)`` and

    xi = -i lam^* t,   r = |xi| = |lam| t.

The convention is pinned against the propagated generator by a unit test.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .hilbert import SpaceDescriptor, StateVector


@dataclass(frozen=True)
class TMSVSpec:
    """Squeeze magnitude/phase implied by the pair coupling ``lam`` after time ``t``."""

    lam: complex
    t: float

    def __post_init__(self):
        if self.t < 0:
            raise ValueError("t must be >= 0")

    @property
    def r(self) -> float:
        return abs(self.lam) * self.t

    @property
    def xi(self) -> complex:
        return -1j * complex(self.lam).conjugate() * self.t

    @property
    def squeeze_phase(self) -> float:
        if self.r == 0.0:
            return 0.0
        return cmath.phase(self.xi)


class TmsvMoments(NamedTuple):
    n_mean: float
    a1a2: complex
    m_min: float


def tmsv_amplitudes(spec: TMSVSpec, n_max: int) -> np.ndarray:
    """Pair-basis amplitudes ``c_n`` on ``|n, n>`` for ``n = 0..n_max``.

    ``c_n = (-e^{i phase} tanh r)^n / cosh r``; every ``|n1 != n2>``
    amplitude of the state is identically zero.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    r = spec.r
    if r == 0.0:
        c = np.zeros(n_max + 1, dtype=complex)
        c[0] = 1.0
        return c
    base = -cmath.exp(1j * spec.squeeze_phase) * math.tanh(r)
    return np.array([base ** n for n in range(n_max + 1)], dtype=complex) / math.cosh(r)


def tmsv_tail_weight(spec: TMSVSpec, n_max: int) -> float:
    """Probability weight beyond the cutoff: ``tanh(r)^{2(n_max+1)}``."""
    return math.tanh(spec.r) ** (2 * (n_max + 1))


def tmsv_moments(spec: TMSVSpec) -> TmsvMoments:
    """Exact photon number, pair correlation, and best-case pair-quadrature sum.

    ``n_mean = sinh^2 r``, ``<a1 a2> = -e^{i phase} cosh r sinh r``,
    and the phase-optimized witness value ``2 e^{-2r}``.
    """
    r = spec.r
    sh, ch = math.sinh(r), math.cosh(r)
    a1a2 = 0.0j if r == 0.0 else -cmath.exp(1j * spec.squeeze_phase) * ch * sh
    return TmsvMoments(n_mean=sh * sh, a1a2=a1a2, m_min=2.0 * math.exp(-2.0 * r))


def tmsv_cavity_state(spec: TMSVSpec, space: SpaceDescriptor) -> StateVector:
    """Truncated, renormalized reference state on the cavity-only space.

    The pair structure only reaches ``min(n1_max, n2_max)``; the discarded
    tail is ``tmsv_tail_weight`` at that depth.
    """
    depth = min(space.n1_max, space.n2_max)
    c = tmsv_amplitudes(spec, depth)
    amp = np.zeros(space.cavity_dim, dtype=complex)
    for n in range(depth + 1):
        amp[n * space.dim2 + n] = c[n]
    amp /= np.linalg.norm(amp)
    return StateVector(amp)
