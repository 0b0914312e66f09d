#!/usr/bin/env python3
"""
Test Resolvent Oracle
Drift determinants, diffusion coefficients and agreement of the rebuilt spectra
with the closed-form kernels
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.errors import SingularResolvent
from core.model import DriveParams, steady_state
from core.oracle import (
    Channel,
    chi_oracle,
    commutator_spectrum,
    determinant,
    diffusion_table,
    drift_matrix,
    resolvent_row,
)
from core.contour import chi_residue
from core.spectra import Component, build_kernel, eval_kernel
from core.triplet import mollow_poly


@pytest.mark.parametrize("delta,rabi,omega", [
    (0.0, 0.0, 0.0),
    (0.0, 1.0, 0.3),
    (0.8, 2.0, -1.2),
    (-1.5, 0.4, 2.5 + 0.3j),
])
def test_drift_determinant_is_mollow_cubic(delta, rabi, omega):
    p = DriveParams(gamma=1.0, delta=delta, rabi=rabi)

    det = determinant(drift_matrix(Channel.MAIN_Z, p, omega))
    assert det == pytest.approx(mollow_poly(p)(omega), rel=1e-12, abs=1e-14)


def test_resolvent_row_inverts():
    matrix = drift_matrix(Channel.MAIN_Z, DriveParams(gamma=1.0, delta=0.5, rabi=1.0), 0.7)
    inverse = np.linalg.inv(matrix)

    for row in range(3):
        assert np.allclose(resolvent_row(matrix, row), inverse[row], rtol=1e-12, atol=1e-14)


def test_singular_resolvent_rejected():
    with pytest.raises(SingularResolvent):
        resolvent_row(np.zeros((2, 2), dtype=complex), 0)


def test_diffusion_entries_without_drive():
    st = steady_state(DriveParams(gamma=1.0, delta=0.0, rabi=0.0))

    assert diffusion_table(Channel.MAIN_Z, st, 1.0) == {"+,+": 0.5}
    assert diffusion_table(Channel.SATELLITE_X, st, 2.0) == {"+x,+x": 1.0}


def test_diffusion_entries_with_drive():
    st = steady_state(DriveParams(gamma=1.0, delta=0.0, rabi=1.0))
    table = diffusion_table(Channel.MAIN_Z, st, 1.0)

    assert set(table) == {"+,+", "+,Z", "Z,+", "Z,Z"}
    assert table["+,Z"] == pytest.approx(0.5 * st.sigma_minus)
    assert table["Z,+"] == pytest.approx(0.5 * st.sigma_plus)
    assert table["Z,Z"] == pytest.approx(0.5 * (0.5 + st.sigma_z))


def test_zero_field_spectrum():
    p = DriveParams(gamma=1.0, delta=0.0, rabi=0.0)

    assert commutator_spectrum(Component.KERR_Z, p, 0.0) == pytest.approx(4.0, rel=1e-12)


@pytest.mark.parametrize("component", list(Component))
@pytest.mark.parametrize("omega_prime", [-2.0, 0.1, 1.7])
def test_spectrum_matches_kernel(component, omega_prime):
    p = DriveParams(gamma=1.0, delta=0.6, rabi=1.4)
    kernel = eval_kernel(build_kernel(component, p), omega_prime)

    assert commutator_spectrum(component, p, omega_prime) == pytest.approx(kernel, rel=1e-9, abs=1e-12)


def test_oracle_route_agrees_with_residue():
    p = DriveParams(gamma=1.0, delta=0.6, rabi=1.4)

    oracle = chi_oracle(Component.TRANSVERSE, p, 0.4)
    assert oracle == pytest.approx(chi_residue(Component.TRANSVERSE, p, 0.4), rel=1e-6)
