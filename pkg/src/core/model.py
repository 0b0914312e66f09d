#!/usr/bin/env python3
"""
Drive Model
Control-field parameters, steady-state Bloch solution, saturation algebra,
density scaling and the dense-medium decay renormalization
"""

import logging
import math
from dataclasses import dataclass, replace

from .errors import DomainError

# Configure logging
logger = logging.getLogger(__name__)

# n0 d0^2 / (hbar gamma) = (3/4) n0 lambdabar^3
DENSITY_FACTOR = 0.75


@dataclass(frozen=True)
class DriveParams:
    """Decay rate, control detuning delta = w_c - w_0 and Rabi frequency"""
    gamma: float = 1.0
    delta: float = 0.0
    rabi: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.gamma) or self.gamma <= 0:
            raise DomainError(f"gamma must be positive, got {self.gamma}")
        if not math.isfinite(self.delta):
            raise DomainError(f"delta must be finite, got {self.delta}")
        if not math.isfinite(self.rabi) or self.rabi < 0:
            raise DomainError(f"rabi must be non-negative, got {self.rabi}")

    @property
    def frequency_scale(self) -> float:
        """Largest frequency in the parameter set"""
        return max(self.gamma, self.rabi, abs(self.delta))


@dataclass(frozen=True)
class SteadyState:
    """Mean pseudospin values of the driven transition"""
    sigma_minus: complex
    sigma_plus: complex
    sigma_z: float
    s: float


@dataclass(frozen=True)
class DensityScale:
    """Dimensionless prefactor n0 d0^2 / (hbar gamma)"""
    scale: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.scale) or self.scale < 0:
            raise DomainError(f"density scale must be non-negative, got {self.scale}")


def saturation(p: DriveParams) -> float:
    """Saturation parameter s = (rabi^2 / 2) / (delta^2 + gamma^2 / 4)"""
    return 0.5 * p.rabi ** 2 / (p.delta ** 2 + 0.25 * p.gamma ** 2)


def rabi_from_saturation(s: float, gamma: float, delta: float) -> float:
    """Invert the saturation parameter for the Rabi frequency"""
    if not math.isfinite(s) or s < 0:
        raise DomainError(f"saturation must be non-negative, got {s}")
    if gamma <= 0:
        raise DomainError(f"gamma must be positive, got {gamma}")
    return math.sqrt(2.0 * s * (delta ** 2 + 0.25 * gamma ** 2))


def drive_params_from_saturation(gamma: float, delta: float, s: float) -> DriveParams:
    """Build drive parameters with the Rabi frequency derived from s"""
    return DriveParams(gamma=gamma, delta=delta, rabi=rabi_from_saturation(s, gamma, delta))


def steady_state(p: DriveParams) -> SteadyState:
    """
    Steady-state solution of the optical Bloch equations

    Args:
        p: Drive parameters

    Returns:
        SteadyState with sigma_plus the conjugate of sigma_minus
    """
    s = saturation(p)
    sigma_z = -0.5 / (s + 1.0)
    if p.rabi == 0:
        # s/(s+1) vanishes quadratically while 1/rabi diverges linearly
        return SteadyState(sigma_minus=0j, sigma_plus=0j, sigma_z=sigma_z, s=s)

    sigma_minus = -complex(p.delta, -0.5 * p.gamma) / p.rabi * (s / (s + 1.0))
    return SteadyState(
        sigma_minus=sigma_minus,
        sigma_plus=sigma_minus.conjugate(),
        sigma_z=sigma_z,
        s=s,
    )


def renormalize_dense(p: DriveParams, epsilon: float) -> DriveParams:
    """Replace gamma by sqrt(epsilon) * gamma for a transparent dense medium"""
    if not math.isfinite(epsilon) or epsilon < 1:
        raise DomainError(f"epsilon must be >= 1 in the transparency domain, got {epsilon}")
    renormalized = replace(p, gamma=math.sqrt(epsilon) * p.gamma)
    logger.debug(f"Renormalized gamma {p.gamma} -> {renormalized.gamma} (epsilon={epsilon})")
    return renormalized


def density_scale(n0_lambda3: float) -> DensityScale:
    """Scale factor (3/4) n0 lambdabar^3 from the reduced-wavelength density"""
    if not math.isfinite(n0_lambda3) or n0_lambda3 < 0:
        raise DomainError(f"density must be non-negative, got {n0_lambda3}")
    return DensityScale(scale=DENSITY_FACTOR * n0_lambda3)
