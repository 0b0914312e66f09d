#!/usr/bin/env python3
"""
Asymptotic Susceptibilities
Closed-form weak-field and saturation limits used as regression anchors for the
exact evaluators
"""

import logging
from enum import Enum
from typing import Tuple

from .contour import ScaleLike, scale_value
from .errors import DomainError
from .model import DriveParams
from .spectra import Component

# Configure logging
logger = logging.getLogger(__name__)

# Denominator of the weak-field corrections per component
WEAK_FIELD_ORDER = {Component.KERR_Z: 2.0, Component.TRANSVERSE: 4.0}


class Sideband(Enum):
    BLUE = "blue"
    RED = "red"


def _require(component: Component, allowed: Tuple[Component, ...], operation: str):
    if component not in allowed:
        names = ", ".join(c.value for c in allowed)
        raise DomainError(f"{operation} is defined for {names}, not {component.value}")


def weak_field_corrections(component: Component, p: DriveParams) -> Tuple[float, complex]:
    """
    First-order weak-field corrections of the Kerr-type and transverse responses

    Returns:
        (depletion, level_shift): the population factor 1 - rabi^2/(k(delta^2 + gamma^2/4))
        and the complex shift rabi^2/(k(delta - i gamma/2)), k = 2 or 4
    """
    _require(component, (Component.KERR_Z, Component.TRANSVERSE), "weak_field_corrections")
    k = WEAK_FIELD_ORDER[component]
    depletion = 1.0 - p.rabi ** 2 / (k * (p.delta ** 2 + 0.25 * p.gamma ** 2))
    level_shift = p.rabi ** 2 / (k * complex(p.delta, -0.5 * p.gamma))
    return depletion, level_shift


def chi_weak(component: Component, p: DriveParams, omega: float, scale: ScaleLike = 1.0) -> complex:
    """Weak-field susceptibility, intended for s below about 0.1"""
    factor = scale_value(scale)
    g, d, r = p.gamma, p.delta, p.rabi

    if component is Component.PARAMETRIC_Z:
        return -0.5 * factor * r ** 2 / ((complex(omega, -0.5 * g) ** 2 - d ** 2) * complex(d, 0.5 * g))

    depletion, level_shift = weak_field_corrections(component, p)
    return -factor * depletion / (complex(omega + d, 0.5 * g) + level_shift)


def chi_saturation_center(component: Component, p: DriveParams, omega: float,
                          scale: ScaleLike = 1.0) -> complex:
    """Central-feature limit for s >> 1, tested for |omega| <= gamma"""
    _require(component, (Component.KERR_Z, Component.PARAMETRIC_Z), "chi_saturation_center")
    factor = scale_value(scale)
    g, d, r = p.gamma, p.delta, p.rabi
    if r == 0:
        raise DomainError("saturation limit needs a nonzero rabi frequency")

    if component is Component.KERR_Z:
        return 0.5 * factor * 1j * g * complex(d, 0.5 * g) / (r ** 2 * complex(omega, 0.5 * g))
    return 0.5 * factor * 1j * g * complex(d, -0.5 * g) / (r ** 2 * complex(-omega, 0.5 * g))


def sideband_pole(p: DriveParams, sideband: Sideband = Sideband.BLUE) -> complex:
    """Saturated sideband quasi-energy rabi - 3i gamma/4, mirrored as -conj for red"""
    blue = complex(p.rabi, -0.75 * p.gamma)
    return blue if sideband is Sideband.BLUE else -blue.conjugate()


def chi_saturation_sideband(component: Component, p: DriveParams, omega: float,
                            scale: ScaleLike = 1.0, sideband: Sideband = Sideband.BLUE) -> complex:
    """Single-pole response near one Mollow sideband for s >> 1"""
    _require(component, (Component.KERR_Z, Component.PARAMETRIC_Z), "chi_saturation_sideband")
    factor = scale_value(scale)
    g, d, r = p.gamma, p.delta, p.rabi
    if r == 0:
        raise DomainError("saturation limit needs a nonzero rabi frequency")

    lam = sideband_pole(p, sideband)
    if component is Component.KERR_Z:
        return 0.5 * factor * complex(d, 0.5 * g) / (r * (omega - lam))
    return -0.5 * factor * complex(d, -0.5 * g) / (r * (-omega - lam))


def chi_saturation_transverse(p: DriveParams, omega: float, scale: ScaleLike = 1.0) -> complex:
    """
    Autler-Townes doublet of the transverse response for s >> 1

    Two equally weighted poles at omega = +-rabi/2 - delta/2, each 3 gamma/4 wide.
    """
    factor = scale_value(scale)
    center = omega + 0.5 * p.delta
    width = 0.75j * p.gamma
    return -0.25 * factor * (
        1.0 / (center - 0.5 * p.rabi + width) + 1.0 / (center + 0.5 * p.rabi + width)
    )


def doublet_peaks(p: DriveParams) -> Tuple[float, float]:
    """Doublet peak positions, lower first"""
    return (-0.5 * p.rabi - 0.5 * p.delta, 0.5 * p.rabi - 0.5 * p.delta)
