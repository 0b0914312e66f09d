#!/usr/bin/env python3
"""
Spectral Kernels
Rational commutator spectra N(w)/D(w) of the Kerr-type, parametric and transverse
susceptibility components, analytic in complex w for residue or quadrature use
"""

import cmath
import logging
from dataclasses import dataclass
from enum import Enum
from typing import List, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as P

from .errors import EvaluationAtPole
from .model import DriveParams, SteadyState, steady_state
from .triplet import mollow_poly, triplet_roots

# Configure logging
logger = logging.getLogger(__name__)

POLE_MERGE_TOL = 1e-10
POLE_EVAL_TOL = 1e-13

Pole = Tuple[complex, int]


class Component(Enum):
    KERR_Z = "kerr-z"
    PARAMETRIC_Z = "parametric-z"
    TRANSVERSE = "transverse"

    @property
    def sign(self) -> int:
        """Sign of omega in the retarded prefactor 1/(sign*omega - w + i0)"""
        return -1 if self is Component.PARAMETRIC_Z else 1


@dataclass(frozen=True)
class SpectralKernel:
    """Numerator polynomial over a factored denominator constant * prod (w - r)^m"""
    component: Component
    params: DriveParams
    steady: SteadyState
    numerator: Polynomial
    poles: Tuple[Pole, ...]
    constant: complex

    @property
    def denominator_degree(self) -> int:
        return sum(multiplicity for _, multiplicity in self.poles)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.numerator.coef)


def merge_poles(roots: Sequence[Pole], tol: float) -> List[Pole]:
    """
    Merge roots closer than tol into single poles with summed multiplicity

    Clusters are formed by single linkage and placed at their weighted mean.
    """
    clusters: List[List[Pole]] = []
    for root, multiplicity in roots:
        joined = [c for c in clusters if any(abs(root - other) <= tol for other, _ in c)]
        merged = [(root, multiplicity)]
        for cluster in joined:
            merged.extend(cluster)
            clusters.remove(cluster)
        clusters.append(merged)

    poles = []
    for cluster in clusters:
        order = sum(m for _, m in cluster)
        center = sum(r * m for r, m in cluster) / order
        poles.append((complex(center), order))
    return sorted(poles, key=lambda pole: (pole[0].imag, pole[0].real))


def _conjugate(poly: Polynomial) -> Polynomial:
    return Polynomial(np.conj(poly.coef))


def _quadratic_roots(b: complex, c: complex) -> Tuple[complex, complex]:
    """Roots of w^2 + b w + c without cancellation"""
    sq = cmath.sqrt(b * b - 4.0 * c)
    if (b.conjugate() * sq).real < 0:
        sq = -sq
    first = -0.5 * (b + sq)
    second = c / first if first != 0 else -b - first
    return first, second


def _kerr_numerator(p: DriveParams, st: SteadyState, m: Polynomial, mb: Polynomial) -> Polynomial:
    g, d, r = p.gamma, p.delta, p.rabi
    h = 0.5j * g
    w = Polynomial([0.0, 1.0])
    terms = [
        g * m * mb,
        -g * r ** 4 * d * w,
        0.5 * g * r ** 2 * (d - w - h) * mb,
        0.5 * g * r ** 2 * (d - w + h) * m,
        g * st.sigma_minus * r * (d + w - h) * ((d - w + h) * m - r ** 2 * w * (d - w - h)),
        g * st.sigma_plus * r * (d + w + h) * ((d - w - h) * mb - r ** 2 * w * (d - w + h)),
    ]
    return sum(terms[1:], terms[0])


def _parametric_numerator(p: DriveParams, st: SteadyState, m: Polynomial, mb: Polynomial) -> Polynomial:
    g, d, r = p.gamma, p.delta, p.rabi
    h = 0.5j * g
    w = Polynomial([0.0, 1.0])
    terms = [
        0.5 * g * r ** 2 * (d - w + h) * m,
        0.5 * g * r ** 2 * (d + w + h) * mb,
        -g * r ** 4 * d * w,
        g * st.sigma_minus * r * (d + w - h) * (d - w + h) * m,
        g * st.sigma_minus * r * (d - w - h) * (d + w + h) * mb,
        -g * st.sigma_minus * r ** 3 * w * (d + w - h) * (d - w - h),
        -g * st.sigma_plus * r ** 3 * w * (d + w + h) * (d - w + h),
    ]
    return sum(terms[1:], terms[0])


def _transverse_numerator(p: DriveParams, st: SteadyState) -> Polynomial:
    g, r = p.gamma, p.rabi
    w = Polynomial([0.0, 1.0])
    terms = [
        16.0 * g * (w ** 2 + g ** 2),
        Polynomial([4.0 * r ** 2 * g * (0.5 + st.sigma_z)]),
        8.0 * r * g * (w + 1j * g) * st.sigma_minus,
        8.0 * r * g * (w - 1j * g) * st.sigma_plus,
    ]
    return sum(terms[1:], terms[0])


def transverse_quadratic(p: DriveParams) -> Polynomial:
    """4(delta + w + i gamma/2)(w + i gamma) - rabi^2"""
    w = Polynomial([0.0, 1.0])
    return 4.0 * (p.delta + w + 0.5j * p.gamma) * (w + 1j * p.gamma) - p.rabi ** 2


def build_kernel(component: Component, p: DriveParams,
                 pole_merge_tol: float = POLE_MERGE_TOL) -> SpectralKernel:
    """
    Build the spectral kernel of one susceptibility component

    Args:
        component: Which susceptibility component
        p: Drive parameters
        pole_merge_tol: Relative distance under which poles are merged

    Returns:
        SpectralKernel with numerator assembled term by term
    """
    st = steady_state(p)
    g, d = p.gamma, p.delta

    if component is Component.TRANSVERSE:
        c, b, _ = (complex(coef) for coef in transverse_quadratic(p).coef / 4.0)
        first, second = _quadratic_roots(b, c)
        raw = [(first, 1), (second, 1), (first.conjugate(), 1), (second.conjugate(), 1)]
        numerator = _transverse_numerator(p, st)
        constant = 16.0 + 0j
    else:
        cubic = mollow_poly(p)
        m = cubic.as_polynomial()
        mb = cubic.conjugate().as_polynomial()
        lambdas = triplet_roots(p).roots
        raw = [(lam, 1) for lam in lambdas] + [(lam.conjugate(), 1) for lam in lambdas]
        if component is Component.KERR_Z:
            raw += [(complex(-d, 0.5 * g), 1), (complex(-d, -0.5 * g), 1)]
            numerator = _kerr_numerator(p, st, m, mb)
            constant = 1.0 + 0j
        else:
            raw += [(complex(-d, -0.5 * g), 1), (complex(d, 0.5 * g), 1)]
            numerator = _parametric_numerator(p, st, m, mb)
            constant = -1.0 + 0j

    poles = merge_poles(raw, pole_merge_tol * p.frequency_scale)
    if any(order > 1 for _, order in poles):
        logger.debug(f"{component.value} kernel has repeated poles at {p}: {poles}")

    return SpectralKernel(
        component=component,
        params=p,
        steady=st,
        numerator=Polynomial(np.asarray(numerator.coef, dtype=complex)),
        poles=tuple(poles),
        constant=constant,
    )


def eval_kernel(k: SpectralKernel, omega_prime: complex,
                pole_eval_tol: float = POLE_EVAL_TOL) -> complex:
    """Evaluate N/D with the factored denominator"""
    denominator = k.constant
    for root, multiplicity in k.poles:
        gap = omega_prime - root
        if abs(gap) < pole_eval_tol:
            raise EvaluationAtPole(f"{k.component.value} kernel evaluated at pole {root} (w={omega_prime})")
        denominator *= gap ** multiplicity
    return complex(P.polyval(omega_prime, k.numerator.coef)) / denominator


def kernel_poles(k: SpectralKernel) -> List[Pole]:
    """Denominator roots with multiplicities"""
    return list(k.poles)


def expanded_denominator(k: SpectralKernel) -> Polynomial:
    """Multiply the factored denominator back out"""
    roots = []
    for root, multiplicity in k.poles:
        roots.extend([root] * multiplicity)
    return Polynomial(k.constant * P.polyfromroots(roots))
