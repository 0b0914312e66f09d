#!/usr/bin/env python3
"""
Susceptibility Pipeline
Main orchestrator for parameter sweeps, figure presets, triplet root reports and the
parametric optimum scan, with CSV/JSON emission
"""

import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from . import __version__
from .asymptotics import (
    Sideband,
    chi_saturation_center,
    chi_saturation_sideband,
    chi_saturation_transverse,
    chi_weak,
)
from .contour import DEFAULT_TOL, Method, check_grid, sweep
from .quadrature import MAX_TOL
from .errors import SweepError, UsageError
from .model import (
    DriveParams,
    density_scale,
    rabi_from_saturation,
    renormalize_dense,
    saturation,
)
from .settings import DEFAULT_CONFIG_PATH, load_settings
from .spectra import Component
from .triplet import asymptote_deviation, triplet_roots, triplet_roots_saturation

# Configure logging
logger = logging.getLogger(__name__)

SAMPLE_COLUMNS = ["omega", "re", "im", "abs", "arg"]
EXACT_METHODS = tuple(method.value for method in Method)
ASYMPTOTIC_METHODS = ("weak", "sat-center", "sat-sideband", "sat-transverse")
FORMATS = ("csv", "json")
FIGURE_PRESETS = ("fig3", "fig4", "fig5")
# Saturation above which the roots report adds the asymptotic comparison
ROOTS_ASYMPTOTE_S = 10.0


def validate_drive_flags(gamma: Optional[float] = None, rabi: Optional[float] = None,
                         saturation: Optional[float] = None, epsilon: Optional[float] = None,
                         tol: Optional[float] = None, scale: Optional[float] = None,
                         density_lambda3: Optional[float] = None):
    """Reject out-of-domain flag values with a usage error naming the flag"""
    if gamma is not None and not (math.isfinite(gamma) and gamma > 0):
        raise UsageError(f"gamma must be positive, got {gamma}", "gamma")
    if rabi is not None and not (math.isfinite(rabi) and rabi >= 0):
        raise UsageError(f"rabi must be non-negative, got {rabi}", "rabi")
    if saturation is not None and not (math.isfinite(saturation) and saturation >= 0):
        raise UsageError(f"saturation must be non-negative, got {saturation}", "saturation")
    if epsilon is not None and not (math.isfinite(epsilon) and epsilon >= 1):
        raise UsageError(f"epsilon must be >= 1, got {epsilon}", "epsilon")
    if tol is not None and not (math.isfinite(tol) and 0 < tol <= MAX_TOL):
        raise UsageError(f"tol must lie in (0, {MAX_TOL:g}], got {tol}", "tol")
    if scale is not None and not (math.isfinite(scale) and scale >= 0):
        raise UsageError(f"scale must be non-negative, got {scale}", "scale")
    if density_lambda3 is not None and not (math.isfinite(density_lambda3) and density_lambda3 >= 0):
        raise UsageError(f"density must be non-negative, got {density_lambda3}", "density_lambda3")


@dataclass(frozen=True)
class RunConfig:
    """Resolved settings of one sweep run"""
    component: Component = Component.KERR_Z
    gamma: float = 1.0
    delta: float = 0.0
    rabi: Optional[float] = None
    saturation: Optional[float] = None
    omega_min: float = -8.0
    omega_max: float = 8.0
    points: int = 801
    method: str = "residue"
    sideband: Sideband = Sideband.BLUE
    scale: float = 1.0
    density_lambda3: Optional[float] = None
    epsilon: Optional[float] = None
    tol: float = DEFAULT_TOL
    format: str = "csv"
    output: str = "output/sweep.csv"

    def __post_init__(self):
        if (self.rabi is None) == (self.saturation is None):
            raise UsageError("exactly one of --rabi and --saturation is required", "rabi")
        validate_drive_flags(self.gamma, self.rabi, self.saturation, self.epsilon, self.tol,
                             self.scale, self.density_lambda3)
        if self.points < 2:
            raise UsageError(f"need at least 2 points, got {self.points}", "points")
        if not self.omega_min < self.omega_max:
            raise UsageError(f"omega_min {self.omega_min} must be below omega_max {self.omega_max}", "omega_min")
        if self.method not in EXACT_METHODS + ASYMPTOTIC_METHODS:
            raise UsageError(f"unknown method {self.method!r}", "method")
        if self.format not in FORMATS:
            raise UsageError(f"unknown format {self.format!r}", "format")
        if self.method == "sat-transverse" and self.component is not Component.TRANSVERSE:
            raise UsageError("sat-transverse applies to the transverse component only", "method")
        if self.method in ("sat-center", "sat-sideband") and self.component is Component.TRANSVERSE:
            raise UsageError(f"{self.method} applies to kerr-z and parametric-z only", "method")

    @property
    def omega_grid(self) -> np.ndarray:
        return np.linspace(self.omega_min, self.omega_max, self.points)

    @property
    def resolved_scale(self) -> float:
        if self.density_lambda3 is not None:
            return density_scale(self.density_lambda3).scale
        return self.scale

    def drive_params(self) -> DriveParams:
        """Drive parameters with rabi derived from s and gamma renormalized by epsilon"""
        rabi = self.rabi if self.rabi is not None else rabi_from_saturation(self.saturation, self.gamma, self.delta)
        p = DriveParams(gamma=self.gamma, delta=self.delta, rabi=rabi)
        if self.epsilon is not None:
            p = renormalize_dense(p, self.epsilon)
        return p


@dataclass
class SweepOutput:
    path: str
    params: DriveParams
    frame: pd.DataFrame
    meta: Dict[str, Any] = field(default_factory=dict)


def principal_arg(values: np.ndarray) -> np.ndarray:
    """Argument in radians folded into (-pi, pi]"""
    arg = np.angle(values)
    return np.where(arg <= -np.pi, arg + 2.0 * np.pi, arg)


def samples_frame(omegas: Sequence[float], values: Sequence[complex]) -> pd.DataFrame:
    values = np.asarray(values, dtype=complex)
    return pd.DataFrame({
        "omega": np.asarray(omegas, dtype=float),
        "re": values.real,
        "im": values.imag,
        "abs": np.abs(values),
        "arg": principal_arg(values),
    }, columns=SAMPLE_COLUMNS)


def asymptotic_values(method: str, component: Component, p: DriveParams, grid: Sequence[float],
                      scale: float, sideband: Sideband = Sideband.BLUE) -> np.ndarray:
    """Evaluate one of the closed-form limits on a grid"""
    if method == "weak":
        values = [chi_weak(component, p, omega, scale) for omega in grid]
    elif method == "sat-center":
        values = [chi_saturation_center(component, p, omega, scale) for omega in grid]
    elif method == "sat-sideband":
        values = [chi_saturation_sideband(component, p, omega, scale, sideband) for omega in grid]
    elif method == "sat-transverse":
        values = [chi_saturation_transverse(p, omega, scale) for omega in grid]
    else:
        raise UsageError(f"unknown method {method!r}", "method")
    return np.array(values, dtype=complex)


def evaluate_grid(method: str, component: Component, p: DriveParams, grid: Sequence[float],
                  scale: float, tol: float = DEFAULT_TOL,
                  sideband: Sideband = Sideband.BLUE) -> np.ndarray:
    """Susceptibility values on a grid by an exact route or an asymptotic formula"""
    grid = check_grid(grid)
    if method in ASYMPTOTIC_METHODS:
        return asymptotic_values(method, component, p, grid, scale, sideband)
    return sweep(component, p, grid, Method(method), scale, tol).values


def _write_frame(frame: pd.DataFrame, path: str, fmt: str, meta: Dict[str, Any]):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    if fmt == "csv":
        frame.to_csv(path, index=False, lineterminator='\n')
        return
    samples = [{column: float(row[column]) for column in SAMPLE_COLUMNS} for row in frame.to_dict('records')]
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump({"meta": meta, "samples": samples}, f, indent=2)
        f.write("\n")


def _write_json(document: Dict[str, Any], path: str):
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='\n') as f:
        json.dump(document, f, indent=2)
        f.write("\n")


class SusceptibilityPipeline:
    """
    Main pipeline for susceptibility sweeps and figure reproduction
    """

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH):
        """Initialize the pipeline"""
        self.config = load_settings(config_path)

    def default_run_config(self) -> Dict[str, Any]:
        """Sweep defaults from the YAML file, keyed like RunConfig fields"""
        sweep_cfg = self.config['sweep']
        model_cfg = self.config['model']
        return {
            'component': sweep_cfg.get('component', 'kerr-z'),
            'gamma': model_cfg.get('gamma', 1.0),
            'delta': sweep_cfg.get('delta', 0.0),
            'omega_min': sweep_cfg.get('omega_min', -8.0),
            'omega_max': sweep_cfg.get('omega_max', 8.0),
            'points': sweep_cfg.get('points', 801),
            'method': sweep_cfg.get('method', 'residue'),
            'scale': model_cfg.get('scale', 1.0),
            'tol': self.config['contour'].get('tol', DEFAULT_TOL),
            'format': sweep_cfg.get('format', 'csv'),
            'output': sweep_cfg.get('output', 'output/sweep.csv'),
        }

    def run_sweep(self, cfg: RunConfig) -> SweepOutput:
        """
        Run one sweep and write its output file

        Args:
            cfg: Resolved run configuration

        Returns:
            SweepOutput with the written path, parameters and sample frame
        """
        logger.info(f"Starting {cfg.component.value} sweep ({cfg.method})")

        # Step 1: Resolve drive parameters
        logger.info("Step 1: Resolving drive parameters")
        p = cfg.drive_params()
        scale = cfg.resolved_scale

        # Step 2: Evaluate the grid
        logger.info("Step 2: Evaluating susceptibility")
        try:
            values = evaluate_grid(cfg.method, cfg.component, p, cfg.omega_grid, scale, cfg.tol, cfg.sideband)
        except SweepError as e:
            logger.error(f"Error in sweep: {e}")
            raise
        frame = samples_frame(cfg.omega_grid, values)

        # Step 3: Save results
        logger.info("Step 3: Saving results")
        meta = self._sweep_meta(cfg, p, scale)
        self._save_results(frame, cfg.output, cfg.format, meta)

        logger.info("Sweep completed successfully")
        return SweepOutput(path=cfg.output, params=p, frame=frame, meta=meta)

    def _sweep_meta(self, cfg: RunConfig, p: DriveParams, scale: float) -> Dict[str, Any]:
        meta = {
            'component': cfg.component.value,
            'method': cfg.method,
            'gamma': p.gamma,
            'delta': p.delta,
            'rabi': p.rabi,
            's': saturation(p),
            'scale': scale,
            'epsilon': cfg.epsilon,
            'density_lambda3': cfg.density_lambda3,
            'tol': cfg.tol,
            'omega_min': cfg.omega_min,
            'omega_max': cfg.omega_max,
            'points': cfg.points,
            'version': __version__,
        }
        if cfg.method == "sat-sideband":
            meta['sideband'] = cfg.sideband.value
        return meta

    def _save_results(self, frame: pd.DataFrame, path: str, fmt: str, meta: Dict[str, Any]):
        try:
            _write_frame(frame, path, fmt, meta)
            logger.info(f"Results saved to {path}")
        except OSError as e:
            logger.error(f"Error saving results: {e}")
            raise

    def run_figure(self, preset: str, saturations: Optional[Sequence[float]] = None,
                   output_dir: Optional[str] = None, method: str = "residue",
                   gamma: Optional[float] = None, scale: Optional[float] = None,
                   epsilon: Optional[float] = None, fmt: str = "csv") -> List[str]:
        """
        Reproduce one figure preset as one data file per saturation value

        Args:
            preset: fig3, fig4 or fig5
            saturations: Overrides the configured s list
            output_dir: Overrides the configured output directory

        Returns:
            Paths of the written data files, manifest last
        """
        if preset not in FIGURE_PRESETS:
            raise UsageError(f"unknown preset {preset!r}", "preset")
        figures = self.config['figures']
        definition = figures[preset]
        component = Component(definition['component'])
        s_list = [float(s) for s in (saturations if saturations is not None else figures['saturations'])]
        directory = output_dir or figures.get('output_dir', 'output/figures')
        model_cfg = self.config['model']

        logger.info(f"Starting figure preset {preset} over s={s_list}")
        paths = []
        for s in s_list:
            cfg = RunConfig(
                component=component,
                gamma=gamma if gamma is not None else model_cfg.get('gamma', 1.0),
                delta=figures.get('delta', 0.0),
                saturation=s,
                omega_min=figures.get('omega_min', -8.0),
                omega_max=figures.get('omega_max', 8.0),
                points=figures.get('points', 801),
                method=method,
                scale=scale if scale is not None else model_cfg.get('scale', 1.0),
                epsilon=epsilon,
                tol=self.config['contour'].get('tol', DEFAULT_TOL),
                format=fmt,
                output=os.path.join(directory, f"{preset}_s{s:g}.{fmt}"),
            )
            paths.append(self.run_sweep(cfg).path)

        manifest = {
            'preset': preset,
            'caption': definition.get('caption', ''),
            'component': component.value,
            'columns': definition['columns'],
            'saturations': s_list,
            'saturations_note': "saturation values are a configurable choice, not taken from the figure",
            'files': [os.path.basename(path) for path in paths],
            'version': __version__,
        }
        manifest_path = os.path.join(directory, f"{preset}_meta.json")
        _write_json(manifest, manifest_path)
        paths.append(manifest_path)
        logger.info(f"Figure preset {preset} written to {directory}")
        return paths

    def run_roots(self, p: DriveParams) -> Dict[str, Any]:
        """Triplet roots, regime and, for s > 10, the saturation asymptote comparison"""
        exact = triplet_roots(
            p,
            center_tol=self.config.get('triplet', {}).get('center_tol', 1e-9),
        )
        s = saturation(p)
        report = {
            'gamma': p.gamma,
            'delta': p.delta,
            'rabi': p.rabi,
            's': s,
            'regime': exact.regime.value,
            'roots': [{'re': root.real, 'im': root.imag} for root in exact.roots],
        }
        if s > ROOTS_ASYMPTOTE_S:
            asymptotic = triplet_roots_saturation(p)
            report['asymptote'] = [{'re': root.real, 'im': root.imag} for root in asymptotic.roots]
            report['asymptote_deviation'] = asymptote_deviation(exact, asymptotic)
        logger.info(f"Roots at {p}: regime {exact.regime.value}")
        return report

    def format_roots(self, report: Dict[str, Any], fmt: str = "csv") -> str:
        """Render a roots report as CSV rows or a JSON document"""
        if fmt == "json":
            return json.dumps(report, indent=2) + "\n"
        rows = []
        for index, root in enumerate(report['roots'], start=1):
            row = {'root': index, 're': root['re'], 'im': root['im'], 'regime': report['regime']}
            if 'asymptote' in report:
                asym = report['asymptote'][index - 1]
                row.update({
                    'asymptote_re': asym['re'],
                    'asymptote_im': asym['im'],
                    'deviation': abs(root['re'] - asym['re']),
                })
            rows.append(row)
        return pd.DataFrame(rows).to_csv(index=False, lineterminator='\n')

    def run_optimum(self, delta: Optional[float] = None, saturations: Optional[Sequence[float]] = None,
                    gamma: float = 1.0, scale: float = 1.0, method: str = "residue",
                    output: Optional[str] = None) -> Dict[str, Any]:
        """
        Locate the saturation that maximizes the parametric coupling

        Returns:
            Report with the per-s maximum of |chi_pp| and the overall optimum
        """
        optimum_cfg = self.config.get('optimum', {})
        s_list = [float(s) for s in (saturations if saturations is not None
                                     else optimum_cfg.get('saturations', [0.1, 0.3, 1.0, 3.0, 10.0, 100.0]))]
        delta = delta if delta is not None else self.config['figures'].get('delta', 0.0)
        grid = np.linspace(optimum_cfg.get('omega_min', -8.0), optimum_cfg.get('omega_max', 8.0),
                           optimum_cfg.get('points', 801))

        validate_drive_flags(gamma=gamma, scale=scale)
        for s in s_list:
            validate_drive_flags(saturation=s)

        logger.info(f"Scanning parametric optimum over s={s_list}")
        scans = []
        for s in s_list:
            p = DriveParams(gamma=gamma, delta=delta, rabi=rabi_from_saturation(s, gamma, delta))
            magnitude = np.abs(evaluate_grid(method, Component.PARAMETRIC_Z, p, grid, scale))
            peak = int(np.argmax(magnitude))
            scans.append({'s': s, 'max_abs': float(magnitude[peak]), 'omega_at_max': float(grid[peak])})

        best = max(scans, key=lambda scan: scan['max_abs'])
        report = {
            'component': Component.PARAMETRIC_Z.value,
            'gamma': gamma,
            'delta': delta,
            'method': method,
            'scans': scans,
            'optimum': best,
            'version': __version__,
        }
        if output:
            _write_json(report, output)
            logger.info(f"Optimum report saved to {output}")
        logger.info(f"Parametric optimum at s={best['s']:g}, omega={best['omega_at_max']:g}")
        return report
