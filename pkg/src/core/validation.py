#!/usr/bin/env python3
"""
Self-Check Suite
Seeded cross-validation of the three evaluation routes and the analytic anchors,
reported as a deterministic JSON document
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .asymptotics import (
    Sideband,
    chi_saturation_center,
    chi_saturation_sideband,
    chi_saturation_transverse,
    chi_weak,
)
from .contour import chi_quadrature, chi_residue, eval_pole_expansion, pole_expansion, sweep
from .errors import SusceptibilityError
from .model import DriveParams, drive_params_from_saturation, renormalize_dense, steady_state
from .oracle import Channel, chi_oracle, determinant, drift_matrix
from .settings import DEFAULT_CONFIG_PATH, load_settings
from .spectra import Component
from .triplet import Regime, center_tolerance, mollow_poly, triplet_roots, triplet_roots_saturation

# Configure logging
logger = logging.getLogger(__name__)

# Below this magnitude agreement is judged in absolute terms
SMALL_CHI = 1e-3
# Resonant drives where the kernels carry repeated poles
RESONANT_RABI = (0.1, 1.0, 3.0, 10.0)
RESONANT_OMEGA = (-1.3, 0.0, 0.5, 2.0)

PROPERTIES = (
    "triple_agreement",
    "pole_expansion",
    "determinant_identity",
    "steady_state",
    "triplet",
    "linear_response",
    "weak_field",
    "saturation_slopes",
    "saturation_anchors",
    "figure_shapes",
    "renormalization",
)


@dataclass
class PropertyResult:
    name: str
    passed: bool
    worst_deviation: Optional[float]
    worst_point: Optional[Dict[str, Any]]
    detail: str = ""
    gated: bool = True


@dataclass
class _Worst:
    """Tracks the point with the largest deviation relative to its limit"""
    name: str
    ratio: float = -1.0
    deviation: Optional[float] = None
    point: Optional[Dict[str, Any]] = None
    failures: int = 0
    errors: List[str] = field(default_factory=list)

    def update(self, deviation: float, limit: float, point: Dict[str, Any]):
        ratio = deviation / limit if limit > 0 else (0.0 if deviation == 0 else math.inf)
        if not ratio <= 1.0:
            self.failures += 1
        if ratio > self.ratio or math.isnan(ratio):
            self.ratio = ratio
            self.deviation = float(deviation)
            self.point = point

    def error(self, message: str, point: Dict[str, Any]):
        self.failures += 1
        self.errors.append(message)
        if self.point is None:
            self.point = point

    def result(self, detail: str = "", gated: bool = True) -> PropertyResult:
        if self.errors:
            detail = "; ".join(filter(None, [detail, f"{len(self.errors)} evaluation errors, first: {self.errors[0]}"]))
        return PropertyResult(
            name=self.name,
            passed=self.failures == 0,
            worst_deviation=self.deviation if self.deviation is not None and math.isfinite(self.deviation) else None,
            worst_point=self.point,
            detail=detail,
            gated=gated,
        )


def _point(p: DriveParams, omega: Optional[float] = None, **extra) -> Dict[str, Any]:
    point = {'gamma': p.gamma, 'delta': p.delta, 'rabi': p.rabi}
    if omega is not None:
        point['omega'] = float(omega)
    point.update(extra)
    return point


def agreement(a: complex, b: complex, rtol: float, atol: float) -> Tuple[float, float]:
    """Deviation and its limit: relative, or absolute for |chi| below SMALL_CHI"""
    reference = max(abs(a), abs(b))
    if reference < SMALL_CHI:
        return abs(a - b), atol
    return abs(a - b) / reference, rtol


def local_maxima(values: np.ndarray) -> List[int]:
    return [i for i in range(1, len(values) - 1) if values[i] > values[i - 1] and values[i] >= values[i + 1]]


class SelfCheck:
    """
    Acceptance suite run by the `check` subcommand
    """

    def __init__(self, config_path: str = DEFAULT_CONFIG_PATH, overrides: Optional[Dict[str, Any]] = None):
        """Initialize the suite with the check section, optionally overridden"""
        self.config = load_settings(config_path)
        self.check_cfg = dict(self.config['check'])
        if overrides:
            self.check_cfg.update(overrides)
        figures = self.config['figures']
        self.figure_grid = np.linspace(figures.get('omega_min', -8.0), figures.get('omega_max', 8.0),
                                       figures.get('points', 801))

    def _rng(self, seed: int, name: str) -> np.random.Generator:
        return np.random.default_rng([seed, PROPERTIES.index(name)])

    def _random_params(self, rng: np.random.Generator) -> Tuple[DriveParams, float]:
        s = 10.0 ** rng.uniform(-3.0, 3.0)
        delta = rng.uniform(-5.0, 5.0)
        omega = rng.uniform(-10.0, 10.0)
        return drive_params_from_saturation(1.0, delta, s), omega

    def run(self, seed: Optional[int] = None, only: Optional[Sequence[str]] = None) -> Dict[str, Any]:
        """
        Run the selected properties

        Args:
            seed: Random seed, defaults to the configured one
            only: Property names to run, all when omitted

        Returns:
            Report with one entry per property and an overall verdict
        """
        seed = self.check_cfg.get('seed', 42) if seed is None else seed
        selected = list(only) if only else list(PROPERTIES)
        unknown = [name for name in selected if name not in PROPERTIES]
        if unknown:
            raise ValueError(f"unknown properties: {', '.join(unknown)}")

        checks: Dict[str, Callable[[np.random.Generator], List[PropertyResult]]] = {
            "triple_agreement": self._triple_agreement,
            "pole_expansion": self._pole_expansion,
            "determinant_identity": self._determinant_identity,
            "steady_state": self._steady_state,
            "triplet": self._triplet,
            "linear_response": self._linear_response,
            "weak_field": self._weak_field,
            "saturation_slopes": self._saturation_slopes,
            "saturation_anchors": self._saturation_anchors,
            "figure_shapes": self._figure_shapes,
            "renormalization": self._renormalization,
        }

        results: List[PropertyResult] = []
        for step, name in enumerate(selected, start=1):
            logger.info(f"Step {step}: Checking {name}")
            for result in checks[name](self._rng(seed, name)):
                if not result.gated:
                    logger.warning(f"Property {result.name} is a known discrepancy: worst deviation "
                                   f"{result.worst_deviation} ({result.detail})")
                elif not result.passed:
                    logger.warning(f"Property {result.name} failed: worst deviation "
                                   f"{result.worst_deviation} at {result.worst_point}")
                results.append(result)

        gated = [result for result in results if result.gated]
        passed = all(result.passed for result in gated)
        logger.info(f"Self-check {'passed' if passed else 'failed'}: "
                    f"{sum(r.passed for r in gated)}/{len(gated)} gated properties")
        return {
            'seed': seed,
            'version': __version__,
            'passed': passed,
            'properties': [asdict(result) for result in results],
        }

    # Properties

    def _triple_agreement(self, rng: np.random.Generator) -> List[PropertyResult]:
        rtol = self.check_cfg.get('agreement_rtol', 1e-6)
        atol = self.check_cfg.get('agreement_atol', 1e-9)
        points = [self._random_params(rng) for _ in range(self.check_cfg.get('agreement_points', 200))]
        points += [(DriveParams(gamma=1.0, delta=0.0, rabi=rabi), omega)
                   for rabi in RESONANT_RABI for omega in RESONANT_OMEGA]

        results = []
        for component in Component:
            worst = _Worst(f"triple_agreement[{component.value}]")
            for p, omega in points:
                point = _point(p, omega)
                try:
                    values = {
                        'residue': chi_residue(component, p, omega),
                        'quadrature': chi_quadrature(component, p, omega),
                        'oracle': chi_oracle(component, p, omega),
                    }
                except SusceptibilityError as e:
                    worst.error(str(e), point)
                    continue
                for first, second in (('residue', 'quadrature'), ('residue', 'oracle'), ('quadrature', 'oracle')):
                    deviation, limit = agreement(values[first], values[second], rtol, atol)
                    worst.update(deviation, limit, {**point, 'pair': f"{first}-{second}"})
            results.append(worst.result())
        return results

    def _pole_expansion(self, rng: np.random.Generator) -> List[PropertyResult]:
        rtol = self.check_cfg.get('expansion_rtol', 1e-8)
        atol = self.check_cfg.get('agreement_atol', 1e-9)
        worst = _Worst("pole_expansion")
        for _ in range(self.check_cfg.get('expansion_points', 50)):
            p, omega = self._random_params(rng)
            for component in Component:
                point = _point(p, omega, component=component.value)
                try:
                    expanded = eval_pole_expansion(pole_expansion(component, p), component, omega)
                    direct = chi_residue(component, p, omega)
                except SusceptibilityError as e:
                    worst.error(str(e), point)
                    continue
                worst.update(*agreement(expanded, direct, rtol, atol), point)
        return [worst.result()]

    def _determinant_identity(self, rng: np.random.Generator) -> List[PropertyResult]:
        rtol = self.check_cfg.get('determinant_rtol', 1e-10)
        worst = _Worst("determinant_identity")
        for _ in range(self.check_cfg.get('determinant_points', 100)):
            p, omega = self._random_params(rng)
            cubic = mollow_poly(p)(omega)
            det = determinant(drift_matrix(Channel.MAIN_Z, p, omega))
            worst.update(abs(det - cubic) / abs(cubic), rtol, _point(p, omega))
        return [worst.result()]

    def _steady_state(self, rng: np.random.Generator) -> List[PropertyResult]:
        worst = _Worst("steady_state")
        reference = steady_state(DriveParams(gamma=1.0, delta=0.0, rabi=1.0))
        example = max(abs(reference.s - 2.0), abs(reference.sigma_z + 1.0 / 6.0),
                      abs(reference.sigma_minus - 1j / 3.0))
        worst.update(example, 1e-15, {'gamma': 1.0, 'delta': 0.0, 'rabi': 1.0, 'case': 'example'})

        for _ in range(self.check_cfg.get('steady_state_points', 1000)):
            p, _ = self._random_params(rng)
            st = steady_state(p)
            conjugation = abs(st.sigma_plus - st.sigma_minus.conjugate())
            bloch_excess = max(0.0, abs(st.sigma_minus) ** 2 + st.sigma_z ** 2 - 0.25)
            range_excess = max(0.0, st.sigma_z, -0.5 - st.sigma_z)
            worst.update(max(conjugation, bloch_excess, range_excess), 1e-15, _point(p))
        return [worst.result()]

    def _triplet(self, rng: np.random.Generator) -> List[PropertyResult]:
        results = []

        factorization = _Worst("triplet[delta=0 factorization]")
        for rabi in np.linspace(0.3, 10.0, 25):
            p = DriveParams(gamma=1.0, delta=0.0, rabi=float(rabi))
            split = math.sqrt(rabi ** 2 - 1.0 / 16.0)
            expected = sorted([complex(-split, -0.75), complex(0.0, -0.5), complex(split, -0.75)],
                              key=lambda root: (root.real, root.imag))
            found = triplet_roots(p).roots
            deviation = max(abs(a - b) for a, b in zip(found, expected))
            factorization.update(deviation, 1e-12, _point(p))
        results.append(factorization.result())

        residual = _Worst("triplet[root residual]")
        for _ in range(self.check_cfg.get('determinant_points', 100)):
            p, _ = self._random_params(rng)
            roots = triplet_roots(p)
            scale = p.frequency_scale
            deviation = max(abs(mollow_poly(p)(root)) for root in roots.roots) / scale ** 3
            residual.update(deviation, 1e-10, _point(p))
            if roots.regime is Regime.TRIPLET:
                tol = center_tolerance(p)
                central = sum(1 for root in roots.roots if abs(root.real) <= tol)
                if central != 1:
                    residual.error(f"{central} purely imaginary roots in the triplet regime", _point(p))
        results.append(residual.result())

        threshold = _Worst("triplet[threshold]")
        below = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.25 - 1e-6)).regime
        above = triplet_roots(DriveParams(gamma=1.0, delta=0.0, rabi=0.25 + 1e-6)).regime
        flipped = below is Regime.SUB_THRESHOLD and above is Regime.TRIPLET
        threshold.update(0.0 if flipped else 1.0, 0.5, {'gamma': 1.0, 'delta': 0.0, 'rabi': 0.25})
        results.append(threshold.result(f"below={below.value}, above={above.value}"))

        # Sideband offsets from the asymptote are gamma^2/(32 rabi) at leading order
        asymptote = _Worst("triplet[saturation asymptote]")
        for rabi in (10.0, 20.0, 50.0):
            p = DriveParams(gamma=1.0, delta=0.0, rabi=rabi)
            exact, approx = triplet_roots(p), triplet_roots_saturation(p)
            deviation = max(abs(a.real - b.real) for a, b in zip(exact.roots, approx.roots))
            asymptote.update(deviation, p.gamma ** 2 / (16.0 * rabi), _point(p))
        results.append(asymptote.result())
        return results

    def _linear_response(self, rng: np.random.Generator) -> List[PropertyResult]:
        grid = np.linspace(-6.0, 6.0, 481)
        results = []
        for delta in (0.0, float(rng.uniform(-2.0, 2.0))):
            p = DriveParams(gamma=1.0, delta=delta, rabi=0.0)
            expected = -1.0 / (grid + delta + 0.5j)
            for component in (Component.KERR_Z, Component.TRANSVERSE):
                worst = _Worst(f"linear_response[{component.value}]")
                values = sweep(component, p, grid).values
                for omega, value, target in zip(grid, values, expected):
                    worst.update(abs(value - target) / abs(target), 1e-10, _point(p, omega))
                results.append(worst.result())
            parametric = sweep(Component.PARAMETRIC_Z, p, grid).values
            worst = _Worst("linear_response[parametric-z]")
            worst.update(float(np.max(np.abs(parametric))), 0.0, _point(p))
            results.append(worst.result())
        return results

    def _weak_field(self, rng: np.random.Generator) -> List[PropertyResult]:
        grid = np.linspace(-3.0, 3.0, 61)
        min_ratio = self.check_cfg.get('weak_field_min_ratio', 5.0)
        results = []
        for component in Component:
            deviations = {}
            for s in (1e-2, 1e-3):
                p = drive_params_from_saturation(1.0, 0.0, s)
                exact = sweep(component, p, grid).values
                approx = np.array([chi_weak(component, p, omega) for omega in grid])
                deviations[s] = float(np.max(np.abs(approx - exact) / np.abs(exact)))
            ratio = deviations[1e-2] / deviations[1e-3] if deviations[1e-3] > 0 else math.inf
            worst = _Worst(f"weak_field[{component.value}]")
            worst.update(deviations[1e-2], 0.2, {'gamma': 1.0, 'delta': 0.0, 's': 1e-2})
            # at least linear convergence in s; kerr-z and transverse converge quadratically
            if not ratio >= min_ratio:
                worst.failures += 1
            results.append(worst.result(f"deviation ratio over a decade of s: {ratio:.3f}"))
        return results

    def _saturation_slopes(self, rng: np.random.Generator) -> List[PropertyResult]:
        tol = self.check_cfg.get('slope_tol', 0.05)
        s_values = np.array([1e2, 1e3, 1e4])
        # the kerr-z centre falls as 1/s^2, one order faster than its closed-form limit
        cases = (
            (Component.KERR_Z, "center", -1.0, False),
            (Component.PARAMETRIC_Z, "center", -1.0, True),
            (Component.KERR_Z, "sideband", -0.5, True),
        )
        results = []
        for component, where, expected, gated in cases:
            magnitudes = []
            for s in s_values:
                p = drive_params_from_saturation(1.0, 0.0, float(s))
                omega = 0.0 if where == "center" else p.rabi
                magnitudes.append(abs(chi_residue(component, p, omega)))
            slope = float(np.polyfit(np.log(s_values), np.log(magnitudes), 1)[0])
            worst = _Worst(f"saturation_slope[{component.value},{where}]")
            worst.update(abs(slope - expected), tol, {'gamma': 1.0, 'delta': 0.0, 'slope': slope})
            detail = "" if gated else f"closed-form limit slope {expected:g}, exact slope {slope:.4f}"
            results.append(worst.result(detail, gated=gated))
        return results

    def _saturation_anchors(self, rng: np.random.Generator) -> List[PropertyResult]:
        results = []

        # Closed-form centre limits disagree with the exact response: kerr-z by a
        # growing factor, parametric-z by a constant factor of two. Reported only.
        for component in (Component.KERR_Z, Component.PARAMETRIC_Z):
            worst = _Worst(f"saturation_center[{component.value}]")
            deviations = []
            for s in (1e2, 1e3, 1e4):
                p = drive_params_from_saturation(1.0, 0.0, s)
                exact = chi_residue(component, p, 0.0)
                deviation = abs(chi_saturation_center(component, p, 0.0) - exact) / abs(exact)
                deviations.append(deviation)
                worst.update(deviation, self.check_cfg.get('center_anchor_rtol', 0.10),
                             {'gamma': 1.0, 'delta': 0.0, 's': s})
            results.append(worst.result(f"deviations at s=1e2,1e3,1e4: {', '.join(f'{d:.4g}' for d in deviations)}",
                                        gated=False))

        p = drive_params_from_saturation(1.0, 0.0, 1e4)
        sideband = _Worst("saturation_sideband[kerr-z]")
        exact = chi_residue(Component.KERR_Z, p, p.rabi)
        approx = chi_saturation_sideband(Component.KERR_Z, p, p.rabi, sideband=Sideband.BLUE)
        sideband.update(abs(approx - exact) / abs(exact), self.check_cfg.get('sideband_anchor_rtol', 0.10),
                        _point(p, p.rabi))
        results.append(sideband.result())

        transverse = _Worst("saturation_transverse")
        for omega in (-0.5 * p.rabi, 0.5 * p.rabi):
            exact = chi_residue(Component.TRANSVERSE, p, omega)
            approx = chi_saturation_transverse(p, omega)
            transverse.update(abs(approx - exact) / abs(exact),
                              self.check_cfg.get('transverse_anchor_rtol', 0.05), _point(p, omega))
        results.append(transverse.result())
        return results

    def _figure_shapes(self, rng: np.random.Generator) -> List[PropertyResult]:
        grid = self.figure_grid
        results = []

        gain = _Worst("figure_shape[kerr-z gain]")
        for s in (10.0, 100.0):
            p = drive_params_from_saturation(1.0, 0.0, s)
            minimum = float(np.min(sweep(Component.KERR_Z, p, grid).values.imag))
            # passes when the imaginary part dips below zero
            gain.update(max(minimum, 0.0), 0.0, {**_point(p), 'min_im': minimum})
        results.append(gain.result())

        doublet = _Worst("figure_shape[transverse doublet]")
        p = drive_params_from_saturation(1.0, 0.0, 100.0)
        magnitude = np.abs(sweep(Component.TRANSVERSE, p, grid).values.imag)
        peaks = sorted(local_maxima(magnitude), key=lambda i: magnitude[i], reverse=True)[:2]
        if len(peaks) < 2:
            doublet.error("fewer than two local maxima", _point(p))
        else:
            left, right = sorted(peaks, key=lambda i: grid[i])
            doublet.update(abs(grid[left] + 0.5 * p.rabi), 0.5, _point(p, grid[left]))
            doublet.update(abs(grid[right] - 0.5 * p.rabi), 0.5, _point(p, grid[right]))
            ratio = abs(magnitude[left] - magnitude[right]) / max(magnitude[left], magnitude[right])
            doublet.update(ratio, 0.05, {**_point(p), 'height_ratio': float(ratio)})
        results.append(doublet.result())

        optimum = _Worst("figure_shape[parametric optimum]")
        maxima = {}
        for s in (0.1, 0.3, 1.0, 3.0, 10.0, 100.0):
            p = drive_params_from_saturation(1.0, 0.0, s)
            magnitude = np.abs(sweep(Component.PARAMETRIC_Z, p, grid).values)
            maxima[s] = float(np.max(magnitude))
            if s == 100.0:
                positions = [grid[i] for i in local_maxima(magnitude)]
                for sideband in (-p.rabi, p.rabi):
                    nearest = min((abs(omega - sideband) for omega in positions), default=math.inf)
                    optimum.update(nearest, p.gamma, _point(p, sideband))
        best = max(maxima, key=maxima.get)
        optimum.update(0.0 if 0.3 <= best <= 3.0 else 1.0, 0.5, {'gamma': 1.0, 'delta': 0.0, 's': best})
        results.append(optimum.result(f"global maximum of |chi_pp| at s={best:g}"))
        return results

    def _renormalization(self, rng: np.random.Generator) -> List[PropertyResult]:
        worst = _Worst("renormalization")
        base = DriveParams(gamma=1.0, delta=0.5, rabi=1.0)
        renormalized = renormalize_dense(base, 4.0)
        worst.update(abs(renormalized.gamma - 2.0), 0.0, _point(renormalized))
        direct = DriveParams(gamma=2.0, delta=0.5, rabi=1.0)
        grid = np.linspace(-4.0, 4.0, 81)
        for component in Component:
            a = sweep(component, renormalized, grid).values
            b = sweep(component, direct, grid).values
            mismatches = int(np.count_nonzero(a != b))
            worst.update(float(mismatches), 0.0, {**_point(direct), 'component': component.value})
        return [worst.result()]


def write_report(report: Dict[str, Any], output_path: Optional[str] = None) -> str:
    """Serialize a report; written to output_path when given"""
    text = json.dumps(report, indent=2, allow_nan=False, default=_json_default) + "\n"
    if output_path:
        directory = os.path.dirname(output_path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        with open(output_path, 'w', encoding='utf-8', newline='\n') as f:
            f.write(text)
        logger.info(f"Check report saved to {output_path}")
    return text


def _json_default(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    raise TypeError(f"cannot serialize {type(value).__name__}")
