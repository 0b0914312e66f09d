#!/usr/bin/env python3
"""
Test Drive Model
Steady state, saturation algebra, density scale and dense-medium renormalization
"""

import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.errors import DomainError
from core.model import (
    DriveParams,
    density_scale,
    drive_params_from_saturation,
    rabi_from_saturation,
    renormalize_dense,
    saturation,
    steady_state,
)


def test_steady_state_resonant_example():
    """gamma=1, delta=0, rabi=1 gives s=2, sigma_z=-1/6, sigma_-=i/3"""
    st = steady_state(DriveParams(gamma=1.0, delta=0.0, rabi=1.0))

    assert st.s == pytest.approx(2.0, abs=1e-15)
    assert st.sigma_z == pytest.approx(-1.0 / 6.0, abs=1e-15)
    assert st.sigma_minus == pytest.approx(1j / 3.0, abs=1e-15)
    assert st.sigma_plus == st.sigma_minus.conjugate()


def test_steady_state_zero_field_branch():
    st = steady_state(DriveParams(gamma=1.0, delta=2.0, rabi=0.0))

    assert st.sigma_minus == 0j
    assert st.sigma_plus == 0j
    assert st.sigma_z == -0.5
    assert st.s == 0.0


@pytest.mark.parametrize("delta,s", [(0.0, 1e-3), (1.5, 0.3), (-3.0, 10.0), (0.2, 1e3)])
def test_steady_state_bloch_ball(delta, s):
    st = steady_state(drive_params_from_saturation(1.0, delta, s))

    assert abs(st.sigma_minus) ** 2 + st.sigma_z ** 2 <= 0.25 + 1e-15
    assert -0.5 <= st.sigma_z <= 0.0


def test_saturation_round_trip():
    rabi = rabi_from_saturation(4.0, 1.0, 0.5)
    p = DriveParams(gamma=1.0, delta=0.5, rabi=rabi)

    assert saturation(p) == pytest.approx(4.0, rel=1e-14)


def test_invalid_parameters_rejected():
    with pytest.raises(DomainError):
        DriveParams(gamma=0.0, delta=0.0, rabi=1.0)
    with pytest.raises(DomainError):
        DriveParams(gamma=1.0, delta=0.0, rabi=-1.0)
    with pytest.raises(DomainError):
        DriveParams(gamma=1.0, delta=float("nan"), rabi=1.0)
    with pytest.raises(DomainError):
        rabi_from_saturation(-1.0, 1.0, 0.0)


def test_density_scale():
    assert density_scale(2.0).scale == pytest.approx(1.5)
    with pytest.raises(DomainError):
        density_scale(-1.0)


def test_renormalize_dense():
    p = renormalize_dense(DriveParams(gamma=1.0, delta=0.5, rabi=1.0), 4.0)

    assert p.gamma == 2.0
    assert p.delta == 0.5
    assert p.rabi == 1.0
    with pytest.raises(DomainError):
        renormalize_dense(p, 0.5)
