#!/usr/bin/env python3
"""
Test Mollow Triplet
Root finding, regime classification and the saturation asymptote
"""

import math
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.model import DriveParams
from core.triplet import (
    Regime,
    asymptote_deviation,
    mollow_poly,
    reconstruct_poly,
    triplet_roots,
    triplet_roots_saturation,
)


def test_resonant_roots_factorize():
    """delta=0: -i gamma/2 and -3i gamma/4 +- sqrt(rabi^2 - gamma^2/16)"""
    roots = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=1.0))
    split = math.sqrt(1.0 - 1.0 / 16.0)

    assert roots.regime is Regime.TRIPLET
    assert roots.lambda1 == pytest.approx(complex(-split, -0.75), abs=1e-14)
    assert roots.lambda2 == pytest.approx(-0.5j, abs=1e-14)
    assert roots.lambda3 == pytest.approx(complex(split, -0.75), abs=1e-14)


def test_threshold_at_quarter_gamma():
    below = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.25 - 1e-6))
    above = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.25 + 1e-6))

    assert below.regime is Regime.SUB_THRESHOLD
    assert all(root.real == 0 for root in below.roots)
    assert above.regime is Regime.TRIPLET


@pytest.mark.parametrize("delta,rabi", [(0.5, 1.0), (-2.0, 3.0), (1.0, 0.1), (4.0, 20.0)])
def test_roots_satisfy_cubic(delta, rabi):
    p = DriveParams(gamma=1.0, delta=delta, rabi=rabi)
    roots = triplet_roots(p)
    cubic = mollow_poly(p)

    for root in roots.roots:
        assert abs(cubic(root)) <= 1e-10 * p.frequency_scale ** 3
        assert root.imag < 0


@pytest.mark.parametrize("delta,rabi", [(0.5, 1.0), (-2.0, 3.0)])
def test_reconstructed_cubic_matches(delta, rabi):
    p = DriveParams(gamma=1.0, delta=delta, rabi=rabi)
    original = mollow_poly(p)
    rebuilt = reconstruct_poly(triplet_roots(p))

    for a, b in zip(original.coefficients, rebuilt.coefficients):
        assert a == pytest.approx(b, abs=1e-10 * p.frequency_scale ** 3)


def test_central_root_purely_imaginary_off_resonance():
    roots = triplet_roots(DriveParams(gamma=1.0, delta=0.7, rabi=5.0))

    assert roots.regime is Regime.TRIPLET
    assert roots.lambda2.real == 0
    assert roots.lambda1.real == pytest.approx(-roots.lambda3.real, rel=1e-12)


@pytest.mark.parametrize("delta, rabi", [(0.5, 3.0), (0.0, 1.0), (0.0, 0.2)])
def test_imaginary_roots_carry_positive_zero(delta, rabi):
    roots = triplet_roots(DriveParams(gamma=1.0, delta=delta, rabi=rabi)).roots
    imaginary = [root for root in roots if root.real == 0]

    assert imaginary
    assert all(math.copysign(1.0, root.real) == 1.0 for root in imaginary)


def test_zero_field_roots():
    roots = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.0))

    assert roots.regime is Regime.SUB_THRESHOLD
    assert sorted(root.imag for root in roots.roots) == pytest.approx([-1.0, -0.5, -0.5])


def test_saturation_asymptote_deviation():
    """Sidebands sit gamma^2/(32 rabi) inside +-rabi at leading order"""
    p = DriveParams(gamma=1.0, delta=0.0, rabi=10.0)
    exact, approx = triplet_roots(p), triplet_roots_saturation(p)

    assert approx.roots == (complex(-10.0, -0.75), complex(0.0, -0.5), complex(10.0, -0.75))
    assert asymptote_deviation(exact, approx) == pytest.approx(3.125e-3, rel=1e-3)
