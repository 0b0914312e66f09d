#!/usr/bin/env python3
"""
Test Susceptibility Pipeline
Sweeps, figure presets, roots reports and the command-line surface
"""

import json
import sys
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

# Add src to path
sys.path.append(str(Path(__file__).parent.parent / "src"))

from core.asymptotics import Sideband
from core.errors import UsageError
from core.model import DriveParams
from core.spectra import Component
from core.susceptibility_pipeline import RunConfig, SusceptibilityPipeline, principal_arg
from run_susceptibility import main, parse_config


@pytest.fixture
def pipeline():
    return SusceptibilityPipeline()


def test_sweep_csv_without_drive(pipeline, tmp_path):
    output = tmp_path / "sweep.csv"
    cfg = RunConfig(rabi=0.0, omega_min=-1.0, omega_max=1.0, points=3, output=str(output))

    result = pipeline.run_sweep(cfg)

    lines = output.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "omega,re,im,abs,arg"
    assert len(lines) == 4
    frame = pd.read_csv(output)
    assert frame.loc[1, "re"] == pytest.approx(0.0, abs=1e-12)
    assert frame.loc[1, "im"] == pytest.approx(2.0, rel=1e-10)
    assert result.meta["s"] == 0.0


def test_parametric_sweep_is_zero_without_drive(pipeline, tmp_path):
    output = tmp_path / "pp.json"
    cfg = RunConfig(component=Component.PARAMETRIC_Z, rabi=0.0, delta=0.5, points=5,
                    format="json", output=str(output))

    pipeline.run_sweep(cfg)

    document = json.loads(output.read_text(encoding="utf-8"))
    assert document["meta"]["component"] == "parametric-z"
    assert all(sample["abs"] == 0.0 and sample["arg"] == 0.0 for sample in document["samples"])


def test_sweep_is_deterministic(pipeline, tmp_path):
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    for path in (first, second):
        pipeline.run_sweep(RunConfig(saturation=3.0, delta=0.4, points=41, output=str(path)))

    assert first.read_bytes() == second.read_bytes()


def test_asymptotic_sweep_methods(pipeline, tmp_path):
    cfg = RunConfig(component=Component.KERR_Z, rabi=10.0, method="sat-sideband", sideband=Sideband.RED,
                    omega_min=-11.0, omega_max=-9.0, points=3, output=str(tmp_path / "red.csv"))

    result = pipeline.run_sweep(cfg)

    assert result.meta["sideband"] == "red"
    assert len(result.frame) == 3


def test_run_config_validation():
    with pytest.raises(UsageError, match="--rabi"):
        RunConfig(rabi=1.0, saturation=2.0)
    with pytest.raises(UsageError, match="--points"):
        RunConfig(rabi=1.0, points=1)
    with pytest.raises(UsageError, match="--omega-min"):
        RunConfig(rabi=1.0, omega_min=1.0, omega_max=-1.0)
    with pytest.raises(UsageError, match="--method"):
        RunConfig(component=Component.KERR_Z, rabi=1.0, method="sat-transverse")


@pytest.mark.parametrize("kwargs, flag", [
    ({"rabi": -1.0}, "--rabi"),
    ({"saturation": -1.0}, "--saturation"),
    ({"rabi": 1.0, "epsilon": 0.5}, "--epsilon"),
    ({"rabi": 1.0, "tol": 0.1}, "--tol"),
    ({"rabi": 1.0, "tol": 0.1, "method": "residue"}, "--tol"),
    ({"rabi": 1.0, "gamma": 0.0}, "--gamma"),
    ({"rabi": 1.0, "density_lambda3": -2.0}, "--density-lambda3"),
])
def test_run_config_rejects_out_of_domain_values(kwargs, flag):
    with pytest.raises(UsageError, match=flag):
        RunConfig(**kwargs)


def test_drive_params_from_saturation_and_epsilon():
    p = RunConfig(saturation=2.0, epsilon=4.0).drive_params()

    assert p.rabi == pytest.approx(1.0)
    assert p.gamma == 2.0


def test_principal_arg_range():
    values = principal_arg(np.array([complex(-1.0, 0.0), complex(-1.0, -0.0), 1j]))

    assert values[0] == pytest.approx(np.pi)
    assert values[1] == pytest.approx(np.pi)
    assert values[2] == pytest.approx(np.pi / 2)


def test_roots_report_in_saturation(pipeline):
    report = pipeline.run_roots(DriveParams(gamma=1.0, delta=0.0, rabi=10.0))

    assert report["regime"] == "Triplet"
    assert report["asymptote_deviation"] == pytest.approx(3.125e-3, rel=1e-3)
    text = pipeline.format_roots(report, "csv")
    assert text.splitlines()[0] == "root,re,im,regime,asymptote_re,asymptote_im,deviation"


def test_roots_report_below_saturation(pipeline):
    report = pipeline.run_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.1))

    assert report["regime"] == "SubThreshold"
    assert "asymptote" not in report


def test_figure_preset_files(pipeline, tmp_path):
    paths = pipeline.run_figure("fig4", saturations=[1.0], output_dir=str(tmp_path))

    assert [Path(path).name for path in paths] == ["fig4_s1.csv", "fig4_meta.json"]
    manifest = json.loads((tmp_path / "fig4_meta.json").read_text(encoding="utf-8"))
    assert manifest["component"] == "transverse"
    assert manifest["saturations"] == [1.0]


def test_unknown_figure_preset(pipeline):
    with pytest.raises(UsageError):
        pipeline.run_figure("fig9")


def test_parse_config_layers(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"saturation": 1.0, "points": 5, "component": "transverse"}), encoding="utf-8")

    cfg = parse_config(["sweep", "--config", str(config), "--rabi", "2"])

    assert cfg.rabi == 2.0
    assert cfg.saturation is None
    assert cfg.points == 5
    assert cfg.component is Component.TRANSVERSE


def test_parse_config_rejects_unknown_keys(tmp_path):
    config = tmp_path / "run.json"
    config.write_text(json.dumps({"rabi": 1.0, "omega-min": -2.0}), encoding="utf-8")

    with pytest.raises(UsageError, match="--config"):
        parse_config(["sweep", "--config", str(config)])


def test_parse_config_rejects_conflicting_flags():
    with pytest.raises(UsageError):
        parse_config(["sweep", "--rabi", "1", "--saturation", "2"])
    with pytest.raises(UsageError):
        parse_config(["sweep", "--rabi", "1", "--scale", "2", "--density-lambda3", "1"])


def test_cli_exit_codes(tmp_path):
    output = tmp_path / "out.csv"

    assert main(["sweep", "--rabi", "0", "--points", "3", "--output", str(output)]) == 0
    assert output.exists()
    assert main(["sweep", "--rabi", "1", "--saturation", "2"]) == 2
    assert main(["sweep", "--rabi", "1", "--points", "1"]) == 2
    assert main(["sweep", "--rabi", "-1"]) == 2
    assert main(["sweep", "--saturation", "-1"]) == 2
    assert main(["sweep", "--rabi", "1", "--epsilon", "0.5"]) == 2
    assert main(["sweep", "--rabi", "1", "--tol", "0.1"]) == 2
    assert main(["roots", "--rabi", "-1"]) == 2
    with pytest.raises(SystemExit) as excinfo:
        main(["sweep", "--component", "bogus"])
    assert excinfo.value.code == 2


def test_cli_roots_to_stdout(capsys):
    assert main(["roots", "--delta", "0", "--rabi", "10", "--format", "json"]) == 0

    report = json.loads(capsys.readouterr().out)
    assert report["regime"] == "Triplet"
    assert len(report["roots"]) == 3


def test_cli_docs_and_check(tmp_path):
    assert main(["docs", "--output", str(tmp_path / "equation_map.md")]) == 0

    report_path = tmp_path / "report.json"
    assert main(["check", "--only", "steady_state", "--seed", "7", "--output", str(report_path)]) == 0
    report = json.loads(report_path.read_text(encoding="utf-8"))
    assert report["seed"] == 7
    assert report["passed"] is True


def test_json_meta_keys_are_stable(pipeline, tmp_path):
    output = tmp_path / "meta.json"
    pipeline.run_sweep(RunConfig(rabi=1.0, points=2, format="json", output=str(output)))

    document = json.loads(output.read_text(encoding="utf-8"))
    assert list(document) == ["meta", "samples"]
    assert set(document["meta"]) == {
        "component", "method", "gamma", "delta", "rabi", "s", "scale", "epsilon",
        "density_lambda3", "tol", "omega_min", "omega_max", "points", "version",
    }
    assert list(document["samples"][0]) == ["omega", "re", "im", "abs", "arg"]
