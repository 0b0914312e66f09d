#!/usr/bin/env python3
"""
Test Spectral Kernels
Pinned kernel values, pole structure and pointwise evaluation errors
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.errors import EvaluationAtPole
from core.model import DriveParams
from core.spectra import (
    Component,
    build_kernel,
    eval_kernel,
    expanded_denominator,
    kernel_poles,
    merge_poles,
    transverse_quadratic,
)

RESONANT = DriveParams(gamma=1.0, delta=0.0, rabi=1.0)


def test_kerr_kernel_pinned_values():
    assert eval_kernel(build_kernel(Component.KERR_Z, RESONANT), 0.0) == pytest.approx(4.0 / 9.0, rel=1e-12)

    detuned = DriveParams(gamma=1.0, delta=1.0, rabi=1.0)
    value = eval_kernel(build_kernel(Component.KERR_Z, detuned), 1.0)
    assert value == pytest.approx(612.0 / 4879.0, rel=1e-12)


def test_transverse_kernel_pinned_value():
    assert eval_kernel(build_kernel(Component.TRANSVERSE, RESONANT), 0.0) == pytest.approx(4.0 / 3.0, rel=1e-12)


def test_parametric_kernel_pinned_values():
    k = build_kernel(Component.PARAMETRIC_Z, RESONANT)

    assert eval_kernel(k, 1.0) == pytest.approx(-8j / 15.0, rel=1e-12)
    assert abs(eval_kernel(k, 0.0)) < 1e-14


def test_kernels_vanish_or_reduce_without_drive():
    p = DriveParams(gamma=1.0, delta=0.0, rabi=0.0)

    assert build_kernel(Component.PARAMETRIC_Z, p).is_zero
    # gamma / |w + delta - i gamma/2|^2
    assert eval_kernel(build_kernel(Component.KERR_Z, p), 0.0) == pytest.approx(4.0, rel=1e-12)
    assert eval_kernel(build_kernel(Component.TRANSVERSE, p), 0.5) == pytest.approx(2.0, rel=1e-12)


@pytest.mark.parametrize("component", list(Component))
def test_kerr_and_transverse_kernels_real_on_axis(component):
    k = build_kernel(component, DriveParams(gamma=1.0, delta=0.4, rabi=2.0))
    values = [eval_kernel(k, w) for w in np.linspace(-5.0, 5.0, 11)]

    if component is Component.PARAMETRIC_Z:
        assert any(abs(v.imag) > 1e-6 for v in values)
    else:
        assert all(abs(v.imag) <= 1e-12 * max(1.0, abs(v)) for v in values)


@pytest.mark.parametrize("component,degree", [
    (Component.KERR_Z, 8),
    (Component.PARAMETRIC_Z, 8),
    (Component.TRANSVERSE, 4),
])
def test_pole_counts(component, degree):
    k = build_kernel(component, DriveParams(gamma=1.0, delta=0.3, rabi=1.7))

    assert k.denominator_degree == degree
    assert sum(1 for root, _ in k.poles if root.imag > 0) == degree // 2


def test_expanded_denominator_of_transverse_kernel():
    p = DriveParams(gamma=1.0, delta=0.3, rabi=1.7)
    k = build_kernel(Component.TRANSVERSE, p)
    q = transverse_quadratic(p)

    for w in (-1.0, 0.25, 2.0):
        assert expanded_denominator(k)(w) == pytest.approx(abs(q(w)) ** 2, rel=1e-10)


def test_transverse_poles_solve_the_quadratic():
    p = DriveParams(gamma=1.0, delta=0.3, rabi=1.7)
    q = transverse_quadratic(p)
    poles = kernel_poles(build_kernel(Component.TRANSVERSE, p))

    assert len(poles) == 4
    for root, _ in poles:
        assert min(abs(q(root)), abs(q(root.conjugate()))) < 1e-10


def test_kerr_kernel_double_poles_at_resonance():
    poles = kernel_poles(build_kernel(Component.KERR_Z, RESONANT))

    orders = {round(root.imag, 6): m for root, m in poles if abs(root.real) < 1e-9}
    assert orders == {0.5: 2, -0.5: 2}
    assert sum(m for _, m in poles) == 8


def test_merge_poles_sums_multiplicity():
    merged = merge_poles([(1j, 1), (1j + 1e-12, 1), (-1j, 1)], 1e-10)

    assert sorted(m for _, m in merged) == [1, 2]


def test_evaluation_on_pole_rejected():
    k = build_kernel(Component.KERR_Z, RESONANT)
    root, _ = k.poles[0]

    with pytest.raises(EvaluationAtPole):
        eval_kernel(k, root)
