#!/usr/bin/env python3
"""
Test Equation Map
Coverage gate and rendering of the equation reference
"""

import sys
from pathlib import Path

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.equation_map import (
    IN_SCOPE_TAGS,
    REGISTRY,
    EquationEntry,
    coverage_gaps,
    equation_map,
    unresolved_targets,
    write_equation_map,
)


def test_every_tag_is_mapped():
    assert coverage_gaps() == []


def test_every_target_resolves():
    assert unresolved_targets() == []


def test_rendered_rows():
    text = equation_map()

    assert "| (b.10) | triplet.mollow_poly |" in text
    assert "| (5.1) | model.density_scale |" in text
    assert "## Sign convention" in text
    for tag in IN_SCOPE_TAGS:
        assert f"| ({tag}) |" in text


def test_gate_reports_missing_tag(tmp_path):
    registry = [entry for entry in REGISTRY if entry.tag != "b.13"]
    registry.append(EquationEntry("b.99", "spectra.no_such_operation"))

    problems = write_equation_map(str(tmp_path / "map.md"), registry)

    assert "unmapped (b.13)" in problems
    assert "unresolved spectra.no_such_operation" in problems
    assert (tmp_path / "map.md").exists()


def test_written_map_is_clean(tmp_path):
    output = tmp_path / "docs" / "equation_map.md"

    assert write_equation_map(str(output)) == []
    assert output.read_text(encoding="utf-8").startswith("# Equation map")
