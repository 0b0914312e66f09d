#!/usr/bin/env python3
"""
Resolvent Oracle
Rebuilds the commutator spectra directly from the Fourier-domain Langevin equations
and the diffusion matrices of the noise sources, without the closed-form kernels
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Tuple

import numpy as np

from .contour import DEFAULT_TOL, ScaleLike, scale_value
from .errors import SingularResolvent
from .model import DriveParams, SteadyState, steady_state
from .quadrature import SUBDIVISION_LIMIT, WINDOW_FACTOR, plemelj_integral, window_half_width
from .spectra import Component
from .triplet import triplet_roots

# Configure logging
logger = logging.getLogger(__name__)

SINGULAR_TOL = 1e-13

# Noise forcing phases on the right-hand sides of the Fourier-domain equations
MAIN_FORCING = (-1j, 1j, 1j)
SATELLITE_FORCING = (-1j, -1j)
SATELLITE_CONJUGATE_FORCING = (1j, 1j)


class Channel(Enum):
    MAIN_Z = "main-z"
    SATELLITE_X = "satellite-x"


MAIN_INDICES = ("+", "-", "Z")
SATELLITE_INDICES = ("+x", "-x", "xb", "bx")
ADJOINT = {"+": "-", "-": "+", "Z": "Z", "+x": "-x", "-x": "+x", "xb": "bx", "bx": "xb"}


@dataclass(frozen=True)
class DiffusionMatrix:
    """2D coefficients of <F_q^dagger(t) F_q'(t')> = 2 D_qq' delta(t - t')"""
    entries: np.ndarray
    indices: Tuple[str, ...]

    def position(self, q: str) -> int:
        return self.indices.index(q)

    def adjoint(self, q: str) -> str:
        return ADJOINT[q]

    def dagger_moment(self, q: str, q_prime: str) -> complex:
        """<F_q^dagger F_q'> coefficient, 2 D_qq'"""
        return 2.0 * complex(self.entries[self.position(q), self.position(q_prime)])

    def moment(self, q: str, q_prime: str) -> complex:
        """<F_q F_q'> coefficient, 2 D with q replaced by its adjoint index"""
        return self.dagger_moment(self.adjoint(q), q_prime)

    def commutator(self, q: str, q_prime: str) -> complex:
        """Coefficient of <[F_q, F_q']> for sources at opposite frequencies"""
        return self.moment(q, q_prime) - self.moment(q_prime, q)


def drift_matrix(channel: Channel, p: DriveParams, omega: complex) -> np.ndarray:
    """
    Coefficient matrix of the Fourier-domain Langevin equations

    MAIN_Z acts on (d sigma_+, d sigma_-, d sigma_Z) at omega; SATELLITE_X acts on
    (sigma_+^(x), |x><b|) at -omega.
    """
    g, d, r = p.gamma, p.delta, p.rabi
    if channel is Channel.MAIN_Z:
        return np.array([
            [d - omega - 0.5j * g, 0.0, -r],
            [0.0, d + omega + 0.5j * g, -r],
            [0.5 * r, -0.5 * r, omega + 1j * g],
        ], dtype=complex)
    return np.array([
        [d + omega - 0.5j * g, -0.5 * r],
        [-0.5 * r, omega - 1j * g],
    ], dtype=complex)


def conjugate_satellite_matrix(p: DriveParams, omega: complex) -> np.ndarray:
    """Hermitian-conjugate satellite system acting on (sigma_-^(x), |b><x|) at omega"""
    return np.conj(drift_matrix(Channel.SATELLITE_X, p, np.conj(omega)))


def diffusion_matrix(channel: Channel, steady: SteadyState, gamma: float) -> DiffusionMatrix:
    """Diffusion coefficients parameterized by the steady-state Bloch values"""
    if channel is Channel.MAIN_Z:
        entries = 0.5 * gamma * np.array([
            [1.0, 0.0, steady.sigma_minus],
            [0.0, 0.0, 0.0],
            [steady.sigma_plus, 0.0, 0.5 + steady.sigma_z],
        ], dtype=complex)
        return DiffusionMatrix(entries=entries, indices=MAIN_INDICES)
    entries = 0.5 * gamma * np.array([
        [1.0, 0.0, steady.sigma_minus, 0.0],
        [0.0, 0.0, 0.0, 0.0],
        [steady.sigma_plus, 0.0, 0.5 + steady.sigma_z, 0.0],
        [0.0, 0.0, 0.0, 0.0],
    ], dtype=complex)
    return DiffusionMatrix(entries=entries, indices=SATELLITE_INDICES)


def _det(a: List[List[complex]]) -> complex:
    if len(a) == 1:
        return a[0][0]
    if len(a) == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


def determinant(matrix: np.ndarray) -> complex:
    """Closed-form determinant of a 2x2 or 3x3 matrix"""
    return complex(_det(np.asarray(matrix, dtype=complex).tolist()))


def resolvent_row(matrix: np.ndarray, row: int) -> np.ndarray:
    """One row of the inverse from the cofactor formula"""
    a = np.asarray(matrix, dtype=complex).tolist()
    det = _det(a)
    if abs(det) < SINGULAR_TOL:
        raise SingularResolvent(f"drift matrix determinant {det} is singular")
    n = len(a)
    out = np.empty(n, dtype=complex)
    for col in range(n):
        # (A^-1)_{row,col} = C_{col,row} / det
        minor = [[a[i][j] for j in range(n) if j != row] for i in range(n) if i != col]
        out[col] = (-1) ** (row + col) * _det(minor) / det
    return out


def _pair_commutator(u: np.ndarray, u_indices: Tuple[str, ...],
                     v: np.ndarray, v_indices: Tuple[str, ...],
                     diffusion: DiffusionMatrix) -> complex:
    total = 0j
    for ui, q in zip(u, u_indices):
        for vj, q_prime in zip(v, v_indices):
            total += ui * vj * diffusion.commutator(q, q_prime)
    return total


def commutator_spectrum(component: Component, p: DriveParams, omega_prime: float,
                        steady: Optional[SteadyState] = None) -> complex:
    """
    Commutator spectral density lim (1/T) <[X(w), Y(-w)]> from two resolvent solves

    Args:
        component: KERR_Z pairs (d sigma_-, d sigma_+), PARAMETRIC_Z pairs
            (d sigma_-, d sigma_-), TRANSVERSE pairs (sigma_-^(x), sigma_+^(x))
        p: Drive parameters
        omega_prime: Spectral frequency

    Returns:
        Value of the spectrum at omega_prime
    """
    st = steady if steady is not None else steady_state(p)

    if component is Component.TRANSVERSE:
        diffusion = diffusion_matrix(Channel.SATELLITE_X, st, p.gamma)
        lowering = resolvent_row(conjugate_satellite_matrix(p, omega_prime), 0) * SATELLITE_CONJUGATE_FORCING
        raising = resolvent_row(drift_matrix(Channel.SATELLITE_X, p, omega_prime), 0) * SATELLITE_FORCING
        return _pair_commutator(lowering, ("-x", "bx"), raising, ("+x", "xb"), diffusion)

    diffusion = diffusion_matrix(Channel.MAIN_Z, st, p.gamma)
    forward = drift_matrix(Channel.MAIN_Z, p, omega_prime)
    backward = drift_matrix(Channel.MAIN_Z, p, -omega_prime)
    lowering = resolvent_row(forward, 1) * MAIN_FORCING
    partner_row = 0 if component is Component.KERR_Z else 1
    partner = resolvent_row(backward, partner_row) * MAIN_FORCING
    return _pair_commutator(lowering, MAIN_INDICES, partner, MAIN_INDICES, diffusion)


def _breakpoints(p: DriveParams) -> Tuple[float, ...]:
    roots = triplet_roots(p).roots
    half_split = 0.5 * p.rabi
    return tuple(root.real for root in roots) + tuple(-root.real for root in roots) + (
        -p.delta, p.delta, half_split - 0.5 * p.delta, -half_split - 0.5 * p.delta,
    )


def chi_oracle(component: Component, p: DriveParams, omega: float, scale: ScaleLike = 1.0,
               tol: float = DEFAULT_TOL, window_factor: float = WINDOW_FACTOR,
               limit: int = SUBDIVISION_LIMIT) -> complex:
    """Susceptibility from the oracle spectrum through the same Plemelj quadrature"""
    factor = scale_value(scale)
    st = steady_state(p)
    a = component.sign * omega
    half_width = window_half_width(p.rabi, p.gamma, p.delta, omega, window_factor)
    integral = plemelj_integral(
        lambda w: commutator_spectrum(component, p, w, st), a, half_width, _breakpoints(p), tol, limit,
    )
    return -factor * integral


def diffusion_table(channel: Channel, steady: SteadyState, gamma: float) -> Dict[str, complex]:
    """Nonzero diffusion entries keyed 'q,q_prime'"""
    diffusion = diffusion_matrix(channel, steady, gamma)
    table = {}
    for q in diffusion.indices:
        for q_prime in diffusion.indices:
            value = complex(diffusion.entries[diffusion.position(q), diffusion.position(q_prime)])
            if value != 0:
                table[f"{q},{q_prime}"] = value
    return table
