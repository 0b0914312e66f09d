#!/usr/bin/env python3
"""
Test Self-Check Suite
Selected properties on reduced sample sizes and report determinism
"""

import json
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.validation import PROPERTIES, SelfCheck, agreement, local_maxima, write_report

SMALL = {'steady_state_points': 100, 'determinant_points': 20, 'agreement_points': 3, 'expansion_points': 5}


@pytest.fixture
def suite():
    return SelfCheck(overrides=SMALL)


def _by_name(report):
    return {entry['name']: entry for entry in report['properties']}


def test_structural_properties_pass(suite):
    report = suite.run(seed=42, only=["steady_state", "triplet", "linear_response", "renormalization"])

    assert report['passed'], [p for p in report['properties'] if not p['passed']]
    names = _by_name(report)
    assert "triplet[saturation asymptote]" in names
    assert "linear_response[parametric-z]" in names


def test_saturation_properties_pass(suite):
    report = suite.run(seed=42, only=["saturation_slopes"])

    assert report['passed'], report['properties']
    names = _by_name(report)
    assert len(names) == 3
    kerr_center = names["saturation_slope[kerr-z,center]"]
    assert kerr_center['gated'] is False
    assert kerr_center['worst_point']['slope'] == pytest.approx(-2.0, abs=0.05)
    for name in ("saturation_slope[parametric-z,center]", "saturation_slope[kerr-z,sideband]"):
        assert names[name]['gated'] and names[name]['passed']


def test_center_anchors_reported_without_gating(suite):
    report = suite.run(seed=42, only=["saturation_anchors"])

    assert report['passed'], report['properties']
    names = _by_name(report)
    for component in ("kerr-z", "parametric-z"):
        entry = names[f"saturation_center[{component}]"]
        assert entry['gated'] is False
        assert not entry['passed']
    assert names["saturation_center[kerr-z]"]['worst_deviation'] == pytest.approx(5000.0, rel=0.01)
    assert names["saturation_center[parametric-z]"]['worst_deviation'] == pytest.approx(0.5, abs=2e-3)
    assert names["saturation_sideband[kerr-z]"]['passed']
    assert names["saturation_transverse"]['passed']


def test_weak_field_properties_pass(suite):
    report = suite.run(seed=42, only=["weak_field"])

    assert report['passed'], report['properties']
    assert len(report['properties']) == 3


def test_resonant_points_join_triple_agreement():
    report = SelfCheck(overrides={'agreement_points': 0}).run(seed=42, only=["triple_agreement"])

    assert report['passed'], report['properties']
    assert all(entry['worst_point']['delta'] == 0.0 for entry in report['properties'])


def test_report_is_deterministic(suite):
    first = write_report(suite.run(seed=3, only=["steady_state", "triplet"]))
    second = write_report(SelfCheck(overrides=SMALL).run(seed=3, only=["steady_state", "triplet"]))

    assert first == second
    assert json.loads(first)['seed'] == 3


def test_unknown_property_rejected(suite):
    with pytest.raises(ValueError):
        suite.run(only=["no_such_property"])


def test_report_written_to_file(suite, tmp_path):
    path = tmp_path / "report.json"
    text = write_report(suite.run(seed=1, only=["steady_state"]), str(path))

    assert path.read_text(encoding="utf-8") == text
    assert set(json.loads(text)) == {"seed", "version", "passed", "properties"}


def test_agreement_switches_to_absolute():
    assert agreement(1e-5, 2e-5, 1e-6, 1e-9) == (pytest.approx(1e-5), 1e-9)
    assert agreement(1.0, 1.0 + 1e-7, 1e-6, 1e-9)[1] == 1e-6


def test_local_maxima():
    assert local_maxima([0.0, 1.0, 0.0, 2.0, 2.0, 1.0]) == [1, 3]


def test_property_names_are_stable():
    assert PROPERTIES[0] == "triple_agreement"
    assert "figure_shapes" in PROPERTIES
