#!/usr/bin/env python3
"""
Mollow Triplet
Builds the Mollow cubic M(omega), finds and classifies its three complex roots
(the quasi-energies of the dressed transition) and gives the saturation asymptote
"""

import cmath
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from .model import DriveParams

# Configure logging
logger = logging.getLogger(__name__)

CENTER_TOL = 1e-9
DISCRIMINANT_TOL = 1e-14
NEWTON_STEPS = 3


class Regime(Enum):
    SUB_THRESHOLD = "SubThreshold"
    TRIPLET = "Triplet"


@dataclass(frozen=True)
class CubicPoly:
    """M(omega) = c3 omega^3 + c2 omega^2 + c1 omega + c0"""
    c3: complex
    c2: complex
    c1: complex
    c0: complex

    def __call__(self, omega: complex) -> complex:
        return ((self.c3 * omega + self.c2) * omega + self.c1) * omega + self.c0

    @property
    def coefficients(self) -> Tuple[complex, complex, complex, complex]:
        """Coefficients in ascending order"""
        return (self.c0, self.c1, self.c2, self.c3)

    def as_polynomial(self) -> Polynomial:
        return Polynomial(np.array(self.coefficients, dtype=complex))

    def conjugate(self) -> "CubicPoly":
        """Coefficient-conjugated cubic, equal to conj(M) on the real axis"""
        return CubicPoly(*(complex(c).conjugate() for c in (self.c3, self.c2, self.c1, self.c0)))


@dataclass(frozen=True)
class TripletRoots:
    """Quasi-energy poles Lambda_m = Omega_m - i Gamma_m, ordered by real part"""
    lambda1: complex
    lambda2: complex
    lambda3: complex
    regime: Regime

    @property
    def roots(self) -> Tuple[complex, complex, complex]:
        return (self.lambda1, self.lambda2, self.lambda3)


def mollow_poly(p: DriveParams) -> CubicPoly:
    """
    Expanded Mollow cubic

    M = i(gamma/2)[delta^2 - z^2] + z[delta^2 - z^2 + rabi^2] with z = omega + i gamma/2
    """
    half = 0.5j * p.gamma
    z = Polynomial([half, 1.0])
    detuning = p.delta ** 2
    cubic = half * (detuning - z ** 2) + z * (detuning - z ** 2 + p.rabi ** 2)
    c0, c1, c2, _ = (complex(c) for c in cubic.coef)
    return CubicPoly(c3=-1.0 + 0j, c2=c2, c1=c1, c0=c0)


def center_tolerance(p: DriveParams, center_tol: float = CENTER_TOL) -> float:
    """Absolute tolerance below which a root counts as purely imaginary"""
    return center_tol * p.frequency_scale


def classify_regime(roots: Tuple[complex, ...], tol: float) -> Regime:
    """Triplet iff at least two roots carry a resolvable real part"""
    split = sum(1 for root in roots if abs(root.real) > tol)
    return Regime.TRIPLET if split >= 2 else Regime.SUB_THRESHOLD


def _order(roots: List[complex]) -> List[complex]:
    return sorted(roots, key=lambda root: (root.real, root.imag))


def _newton(coeffs: Tuple[float, float, float], w: complex, steps: int) -> complex:
    """Polish a root of the monic cubic w^3 + a2 w^2 + a1 w + a0"""
    a2, a1, a0 = coeffs
    for _ in range(steps):
        value = ((w + a2) * w + a1) * w + a0
        slope = (3.0 * w + 2.0 * a2) * w + a1
        if value == 0 or slope == 0:
            break
        candidate = w - value / slope
        if abs(((candidate + a2) * candidate + a1) * candidate + a0) >= abs(value):
            break
        w = candidate
    return w


def _solve_monic_real_cubic(a2: float, a1: float, a0: float, scale: float,
                            discriminant_tol: float, newton_steps: int) -> List[complex]:
    """
    Roots of w^3 + a2 w^2 + a1 w + a0 with real coefficients

    Real roots come back with an exactly zero imaginary part.
    """
    shift = a2 / 3.0
    p = a1 - a2 * shift
    q = 2.0 * shift ** 3 - shift * a1 + a0
    disc = (0.5 * q) ** 2 + (p / 3.0) ** 3

    if abs(disc) <= discriminant_tol * scale ** 6:
        logger.debug(f"Degenerate cubic discriminant {disc:.3e}, using companion matrix")
        eigen = np.roots([1.0, a2, a1, a0])
        roots = []
        for root in eigen:
            root = complex(root)
            if abs(root.imag) <= math.sqrt(discriminant_tol) * scale:
                roots.append(complex(_newton((a2, a1, a0), root.real, newton_steps).real, 0.0))
            else:
                roots.append(_newton((a2, a1, a0), root, newton_steps))
        return roots

    if disc > 0:
        sd = math.sqrt(disc)
        u = float(np.cbrt(-0.5 * q - math.copysign(sd, q)))
        v = -p / (3.0 * u) if u != 0 else 0.0
        real_root = _newton((a2, a1, a0), u + v - shift, newton_steps).real
        pair = complex(-0.5 * (u + v) - shift, 0.5 * math.sqrt(3.0) * (u - v))
        pair = _newton((a2, a1, a0), pair, newton_steps)
        return [complex(real_root, 0.0), pair, pair.conjugate()]

    radius = 2.0 * math.sqrt(-p / 3.0)
    cos_arg = max(-1.0, min(1.0, (3.0 * q / (2.0 * p)) * math.sqrt(-3.0 / p)))
    theta = math.acos(cos_arg)
    roots = []
    for k in range(3):
        t = radius * math.cos(theta / 3.0 - 2.0 * math.pi * k / 3.0)
        roots.append(complex(_newton((a2, a1, a0), t - shift, newton_steps).real, 0.0))
    return roots


def triplet_roots(p: DriveParams,
                  center_tol: float = CENTER_TOL,
                  discriminant_tol: float = DISCRIMINANT_TOL,
                  newton_steps: int = NEWTON_STEPS) -> TripletRoots:
    """
    Three roots of the Mollow cubic, ordered and classified

    Substituting omega = i(w - gamma/2) turns M into i times a real monic cubic
    in w, so every real w maps onto a purely imaginary quasi-energy.

    Args:
        p: Drive parameters
        center_tol: Relative tolerance for the purely imaginary classification

    Returns:
        TripletRoots ordered by real part, ties by imaginary part
    """
    gamma, delta, rabi = p.gamma, p.delta, p.rabi

    if delta == 0:
        # M = -z (z^2 + i(gamma/2) z - rabi^2)
        split = cmath.sqrt(rabi ** 2 - gamma ** 2 / 16.0)
        sideband = complex(0.0, -0.75 * gamma)
        if split.imag != 0:
            split = complex(0.0, split.imag)
        roots = [complex(0.0, -0.5 * gamma), sideband - split, sideband + split]
    else:
        ws = _solve_monic_real_cubic(
            0.5 * gamma, delta ** 2 + rabi ** 2, 0.5 * gamma * delta ** 2,
            p.frequency_scale, discriminant_tol, newton_steps,
        )
        # 0.0 - imag keeps purely imaginary roots free of a negative zero
        roots = [complex(0.0 - w.imag, w.real - 0.5 * gamma) for w in ws]

    ordered = _order(roots)
    tol = center_tolerance(p, center_tol)
    regime = classify_regime(tuple(ordered), tol)

    if regime is Regime.TRIPLET:
        central = [root for root in ordered if abs(root.real) <= tol]
        if len(central) != 1:
            logger.warning(f"Expected one purely imaginary central root at {p}, got {len(central)}: {ordered}")

    return TripletRoots(lambda1=ordered[0], lambda2=ordered[1], lambda3=ordered[2], regime=regime)


def triplet_roots_saturation(p: DriveParams, center_tol: float = CENTER_TOL) -> TripletRoots:
    """Saturation-limit roots -rabi - 3i gamma/4, -i gamma/2, +rabi - 3i gamma/4"""
    sideband = complex(p.rabi, -0.75 * p.gamma)
    roots = _order([-sideband.conjugate(), complex(0.0, -0.5 * p.gamma), sideband])
    regime = classify_regime(tuple(roots), center_tolerance(p, center_tol))
    return TripletRoots(lambda1=roots[0], lambda2=roots[1], lambda3=roots[2], regime=regime)


def reconstruct_poly(roots: TripletRoots) -> CubicPoly:
    """-(omega - L1)(omega - L2)(omega - L3) expanded"""
    l1, l2, l3 = roots.roots
    return CubicPoly(
        c3=-1.0 + 0j,
        c2=l1 + l2 + l3,
        c1=-(l1 * l2 + l1 * l3 + l2 * l3),
        c0=l1 * l2 * l3,
    )


def asymptote_deviation(exact: TripletRoots, asymptotic: TripletRoots) -> float:
    """Largest real-part distance between matching roots"""
    return max(abs(a.real - b.real) for a, b in zip(exact.roots, asymptotic.roots))
