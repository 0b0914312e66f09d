#!/usr/bin/env python3
"""
Plemelj Quadrature
Adaptive evaluation of the retarded convolution of a spectrum with 1/(a - w + i0)
"""

import logging
import math
import warnings
from functools import lru_cache
from typing import Callable, Iterable, List

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import DomainError, ToleranceNotReached

# Configure logging
logger = logging.getLogger(__name__)

SUBDIVISION_LIMIT = 2048
WINDOW_FACTOR = 10.0
MAX_TOL = 1e-3


def check_tolerance(tol: float):
    if not (0 < tol <= MAX_TOL):
        raise DomainError(f"quadrature tolerance must lie in (0, {MAX_TOL:g}], got {tol}")


def window_half_width(rabi: float, gamma: float, delta: float, omega: float,
                      window_factor: float = WINDOW_FACTOR) -> float:
    """Half width of the window integrated around the on-axis pole"""
    return window_factor * (rabi + gamma + abs(delta) + abs(omega))


def _quad_real(func: Callable[[float], float], lo: float, hi: float, tol: float,
               limit: int, points: List[float]) -> float:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", IntegrationWarning)
        kwargs = {"points": points} if points else {}
        value = quad(func, lo, hi, epsabs=tol * 1e-3, epsrel=tol, limit=limit, **kwargs)[0]
    for warning in caught:
        message = str(warning.message)
        if "maximum number of subdivisions" in message:
            raise ToleranceNotReached(f"quadrature on [{lo}, {hi}] exceeded {limit} subdivisions")
        logger.warning(f"Quadrature on [{lo}, {hi}] may have missed tol={tol}: {message.splitlines()[0]}")
    return value


def _quad_complex(func: Callable[[float], complex], lo: float, hi: float, tol: float,
                  limit: int, points: List[float]) -> complex:
    re = _quad_real(lambda w: func(w).real, lo, hi, tol, limit, points)
    im = _quad_real(lambda w: func(w).imag, lo, hi, tol, limit, points)
    return complex(re, im)


def plemelj_integral(spectrum: Callable[[float], complex], a: float, half_width: float,
                     breakpoints: Iterable[float] = (), tol: float = 1e-10,
                     limit: int = SUBDIVISION_LIMIT) -> complex:
    """
    Integral of spectrum(w) / (a - w + i0) dw / 2pi over the real line

    Uses 1/(x + i0) = PV(1/x) - i pi delta(x). The principal value is taken on
    [a - W, a + W] after subtracting spectrum(a), which integrates to zero there;
    the two tails are integrated to infinity without subtraction.

    Args:
        spectrum: Spectral density, analytic near the real axis
        a: Position of the on-axis pole
        half_width: W, must exceed every spectral feature
        breakpoints: Frequencies of sharp features inside the window
        tol: Relative tolerance handed to the adaptive quadrature

    Returns:
        Complex value of the convolution
    """
    check_tolerance(tol)
    cached = lru_cache(maxsize=None)(spectrum)
    at_pole = cached(a)

    def subtracted(w: float) -> complex:
        return (cached(w) - at_pole) / (a - w)

    def tail(w: float) -> complex:
        return cached(w) / (a - w)

    lo, hi = a - half_width, a + half_width
    inner = sorted({float(x) for x in breakpoints if np.isfinite(x)})
    left_points = [x for x in inner if lo < x < a - 1e-12 * half_width]
    right_points = [x for x in inner if a + 1e-12 * half_width < x < hi]

    principal = (
        _quad_complex(subtracted, lo, a, tol, limit, left_points)
        + _quad_complex(subtracted, a, hi, tol, limit, right_points)
        + _quad_complex(tail, hi, np.inf, tol, limit, [])
        + _quad_complex(tail, -np.inf, lo, tol, limit, [])
    )
    return principal / (2.0 * math.pi) - 0.5j * at_pole
