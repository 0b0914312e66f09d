#!/usr/bin/env python3
"""
Contour Evaluation
Susceptibility integrals by residue calculus (primary) and by Plemelj-split
adaptive quadrature (cross-check), pole expansions and frequency sweeps
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import DegenerateContour, DomainError, SweepError
from .model import DensityScale, DriveParams
from .quadrature import SUBDIVISION_LIMIT, WINDOW_FACTOR, plemelj_integral, window_half_width
from .spectra import Component, Pole, SpectralKernel, build_kernel, eval_kernel, merge_poles

# Configure logging
logger = logging.getLogger(__name__)

RESIDUE_CLUSTER_TOL = 1e-6
REAL_AXIS_TOL = 1e-12
DEFAULT_TOL = 1e-10

ScaleLike = Union[float, DensityScale]


class Method(Enum):
    RESIDUE = "residue"
    QUADRATURE = "quadrature"
    ORACLE = "oracle"


@dataclass(frozen=True)
class ChiSample:
    component: Component
    omega: float
    value: complex


@dataclass(frozen=True)
class SweepResult:
    component: Component
    params: DriveParams
    scale: float
    method: Method
    samples: Tuple[ChiSample, ...]

    @property
    def omegas(self) -> np.ndarray:
        return np.array([sample.omega for sample in self.samples])

    @property
    def values(self) -> np.ndarray:
        return np.array([sample.value for sample in self.samples], dtype=complex)


@dataclass(frozen=True)
class PoleTerm:
    """Contributes i * scale * weight / (sign*omega - position)^order"""
    position: complex
    order: int
    weight: complex


def scale_value(scale: ScaleLike) -> float:
    value = scale.scale if isinstance(scale, DensityScale) else float(scale)
    if not math.isfinite(value) or value < 0:
        raise DomainError(f"density scale must be non-negative, got {value}")
    return value


def _product_derivatives(numerator: np.ndarray, constant: complex, others: Sequence[Pole],
                         z: complex, order: int, anchor: Optional[complex] = None) -> List[complex]:
    """
    Derivatives 0..order of N(z) / (constant * prod (z - r)^m [* (anchor - z)])

    The rational factor is differentiated through its logarithmic derivative,
    so no numerical differencing is involved.
    """
    base = constant
    for root, multiplicity in others:
        base *= (z - root) ** multiplicity
    if anchor is not None:
        base *= anchor - z
    g = [1.0 / base]

    log_derivs = []
    for k in range(order):
        fact = math.factorial(k)
        term = -sum(m * (-1) ** k * fact / (z - r) ** (k + 1) for r, m in others)
        if anchor is not None:
            term += fact / (anchor - z) ** (k + 1)
        log_derivs.append(term)

    for n in range(order):
        g.append(sum(math.comb(n, k) * g[k] * log_derivs[n - k] for k in range(n + 1)))

    num = [complex(P.polyval(z, P.polyder(numerator, k) if k else numerator)) for k in range(order + 1)]
    return [sum(math.comb(n, k) * num[k] * g[n - k] for k in range(n + 1)) for n in range(order + 1)]


def _clusters(k: SpectralKernel, cluster_tol: float, real_axis_tol: float) -> List[Pole]:
    scale = k.params.frequency_scale
    clusters = merge_poles(k.poles, cluster_tol * scale)
    for root, _ in clusters:
        if abs(root.imag) <= real_axis_tol * scale:
            raise DegenerateContour(f"{k.component.value} kernel pole {root} on the real axis at {k.params}")
    return clusters


def upper_residue_sum(k: SpectralKernel, a: float,
                      cluster_tol: float = RESIDUE_CLUSTER_TOL,
                      real_axis_tol: float = REAL_AXIS_TOL) -> complex:
    """Sum of residues of kernel(w) / (a - w) over the kernel poles above the axis"""
    clusters = _clusters(k, cluster_tol, real_axis_tol)
    total = 0j
    for index, (root, multiplicity) in enumerate(clusters):
        if root.imag < 0:
            continue
        others = clusters[:index] + clusters[index + 1:]
        derivs = _product_derivatives(k.numerator.coef, k.constant, others, root, multiplicity - 1, anchor=a)
        total += derivs[-1] / math.factorial(multiplicity - 1)
    return total


def chi_residue(component: Component, p: DriveParams, omega: float, scale: ScaleLike = 1.0,
                cluster_tol: float = RESIDUE_CLUSTER_TOL,
                real_axis_tol: float = REAL_AXIS_TOL) -> complex:
    """
    Susceptibility by closing the retarded integral in the upper half-plane

    chi = -scale * int dw/2pi kernel(w) / (sign*omega - w + i0). The prefactor pole
    sits just above the axis and is enclosed together with every upper kernel pole.

    Args:
        component: Susceptibility component
        p: Drive parameters
        omega: Probe detuning from the control frequency
        scale: Density scale

    Returns:
        Complex susceptibility
    """
    factor = scale_value(scale)
    k = build_kernel(component, p)
    if k.is_zero:
        return 0j
    a = component.sign * omega
    residues = -eval_kernel(k, a) + upper_residue_sum(k, a, cluster_tol, real_axis_tol)
    return -factor * 1j * residues


def chi_quadrature(component: Component, p: DriveParams, omega: float, scale: ScaleLike = 1.0,
                   tol: float = DEFAULT_TOL, window_factor: float = WINDOW_FACTOR,
                   limit: int = SUBDIVISION_LIMIT) -> complex:
    """Susceptibility by Plemelj-split adaptive quadrature of the same kernel"""
    factor = scale_value(scale)
    k = build_kernel(component, p)
    if k.is_zero:
        return 0j
    a = component.sign * omega
    half_width = window_half_width(p.rabi, p.gamma, p.delta, omega, window_factor)
    breakpoints = [root.real for root, _ in k.poles]
    integral = plemelj_integral(lambda w: eval_kernel(k, w), a, half_width, breakpoints, tol, limit)
    return -factor * integral


def pole_expansion(component: Component, p: DriveParams, scale: ScaleLike = 1.0,
                   cluster_tol: float = RESIDUE_CLUSTER_TOL,
                   real_axis_tol: float = REAL_AXIS_TOL) -> List[PoleTerm]:
    """
    Susceptibility as a superposition of separated quasi-energy poles

    Closing the retarded integral below leaves the prefactor pole outside, so
    chi = i * scale * sum weight / (sign*omega - q)^order over the lower kernel poles q,
    with weights the Laurent coefficients of the kernel at q.
    """
    scale_value(scale)
    k = build_kernel(component, p)
    if k.is_zero:
        return []
    clusters = _clusters(k, cluster_tol, real_axis_tol)
    terms = []
    for index, (root, multiplicity) in enumerate(clusters):
        if root.imag > 0:
            continue
        others = clusters[:index] + clusters[index + 1:]
        derivs = _product_derivatives(k.numerator.coef, k.constant, others, root, multiplicity - 1)
        for order in range(1, multiplicity + 1):
            weight = derivs[multiplicity - order] / math.factorial(multiplicity - order)
            terms.append(PoleTerm(position=root, order=order, weight=weight))
    return terms


def eval_pole_expansion(terms: Sequence[PoleTerm], component: Component, omega: float,
                        scale: ScaleLike = 1.0) -> complex:
    a = component.sign * omega
    total = sum((term.weight / (a - term.position) ** term.order for term in terms), 0j)
    return 1j * scale_value(scale) * total


def evaluate(component: Component, p: DriveParams, omega: float, method: Method,
             scale: ScaleLike = 1.0, tol: float = DEFAULT_TOL) -> complex:
    """Dispatch one point to the chosen evaluation route"""
    if method is Method.RESIDUE:
        return chi_residue(component, p, omega, scale)
    if method is Method.QUADRATURE:
        return chi_quadrature(component, p, omega, scale, tol)
    from .oracle import chi_oracle
    return chi_oracle(component, p, omega, scale, tol)


def check_grid(omega_grid: Sequence[float]) -> List[float]:
    grid = [float(omega) for omega in omega_grid]
    if not grid:
        raise DomainError("omega grid is empty")
    if any(not math.isfinite(omega) for omega in grid):
        raise DomainError("omega grid contains non-finite values")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("omega grid must be strictly ascending")
    return grid


def sweep(component: Component, p: DriveParams, omega_grid: Sequence[float],
          method: Method = Method.RESIDUE, scale: ScaleLike = 1.0,
          tol: float = DEFAULT_TOL) -> SweepResult:
    """
    Evaluate one component on an ascending grid of probe detunings

    Args:
        component: Susceptibility component
        p: Drive parameters
        omega_grid: Strictly ascending probe detunings
        method: Evaluation route
        scale: Density scale
        tol: Quadrature tolerance, unused by the residue route

    Returns:
        SweepResult with one ChiSample per grid point
    """
    grid = check_grid(omega_grid)
    factor = scale_value(scale)
    logger.info(f"Sweeping {component.value} over {len(grid)} points ({method.value}) at {p}")

    samples = []
    for omega in grid:
        try:
            value = evaluate(component, p, omega, method, factor, tol)
        except Exception as e:
            logger.error(f"Error evaluating {component.value} at omega={omega}: {e}")
            raise SweepError(omega, e) from e
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise SweepError(omega, ValueError(f"non-finite susceptibility {value}"))
        samples.append(ChiSample(component=component, omega=omega, value=value))

    return SweepResult(component=component, params=p, scale=factor, method=method, samples=tuple(samples))
