#!/usr/bin/env python3
"""
Susceptibility Runner
Command-line entry point for sweeps, figure presets, triplet roots, the self-check,
the equation map and the parametric optimum
"""

import argparse
import json
import logging
import sys
from typing import Any, Dict, Optional, Sequence

import colorlog

from core.asymptotics import Sideband
from core.equation_map import write_equation_map
from core.errors import ConfigError, SusceptibilityError, UsageError
from core.model import DriveParams, rabi_from_saturation
from core.settings import DEFAULT_CONFIG_PATH, load_settings
from core.spectra import Component
from core.susceptibility_pipeline import (
    ASYMPTOTIC_METHODS,
    EXACT_METHODS,
    FIGURE_PRESETS,
    FORMATS,
    RunConfig,
    SusceptibilityPipeline,
    validate_drive_flags,
)
from core.validation import PROPERTIES, SelfCheck, write_report

# Configure logging
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

LOG_FORMAT = "%(log_color)s%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# Keys accepted in a --config file, named after the sweep flags
SWEEP_KEYS = (
    'component', 'gamma', 'delta', 'rabi', 'saturation', 'omega_min', 'omega_max', 'points',
    'method', 'sideband', 'scale', 'density_lambda3', 'epsilon', 'tol', 'format', 'output',
)
FLOAT_KEYS = ('gamma', 'delta', 'rabi', 'saturation', 'omega_min', 'omega_max', 'scale',
              'density_lambda3', 'epsilon', 'tol')
EXCLUSIVE_PAIRS = (('rabi', 'saturation'), ('scale', 'density_lambda3'))


def setup_logging(level: str = "INFO", fmt: str = LOG_FORMAT):
    """Install a colored stderr handler on the root logger"""
    handler = logging.StreamHandler()
    handler.setFormatter(colorlog.ColoredFormatter(fmt))
    root = logging.getLogger()
    root.handlers[:] = [handler]
    root.setLevel(level.upper())


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--settings', default=DEFAULT_CONFIG_PATH, help='YAML defaults file')
    common.add_argument('--log-level', default=None,
                        choices=['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'],
                        help='Logging level (default from the YAML file)')
    return common


def _add_drive_flags(parser: argparse.ArgumentParser):
    parser.add_argument('--gamma', type=float, default=None, help='Decay rate')
    parser.add_argument('--delta', type=float, default=None, help='Control detuning')
    parser.add_argument('--rabi', type=float, default=None, help='Rabi frequency')
    parser.add_argument('--saturation', type=float, default=None, help='Saturation parameter s')


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(description='Nonlinear susceptibility of a strongly driven atomic ensemble')
    subparsers = parser.add_subparsers(dest='command', required=True)

    sweep = subparsers.add_parser('sweep', parents=[common], help='Evaluate one component on a grid')
    sweep.add_argument('--config', default=None, help='JSON file with flag-named keys')
    sweep.add_argument('--component', default=None, choices=[c.value for c in Component])
    _add_drive_flags(sweep)
    sweep.add_argument('--omega-min', type=float, default=None)
    sweep.add_argument('--omega-max', type=float, default=None)
    sweep.add_argument('--points', type=int, default=None)
    sweep.add_argument('--method', default=None, choices=list(EXACT_METHODS + ASYMPTOTIC_METHODS))
    sweep.add_argument('--sideband', default=None, choices=[s.value for s in Sideband])
    sweep.add_argument('--scale', type=float, default=None, help='Density scale factor')
    sweep.add_argument('--density-lambda3', type=float, default=None, help='n0 lambdabar^3, sets the scale')
    sweep.add_argument('--epsilon', type=float, default=None, help='Dense-medium permittivity')
    sweep.add_argument('--tol', type=float, default=None, help='Quadrature tolerance')
    sweep.add_argument('--format', default=None, choices=list(FORMATS))
    sweep.add_argument('--output', default=None)

    figure = subparsers.add_parser('figure', parents=[common], help='Reproduce a figure preset')
    figure.add_argument('preset', choices=list(FIGURE_PRESETS))
    figure.add_argument('--saturations', type=float, nargs='+', default=None)
    figure.add_argument('--output-dir', default=None)
    figure.add_argument('--method', default='residue', choices=list(EXACT_METHODS))
    figure.add_argument('--gamma', type=float, default=None)
    figure.add_argument('--scale', type=float, default=None)
    figure.add_argument('--epsilon', type=float, default=None)
    figure.add_argument('--format', default='csv', choices=list(FORMATS))

    roots = subparsers.add_parser('roots', parents=[common], help='Print the Mollow triplet roots')
    _add_drive_flags(roots)
    roots.add_argument('--format', default='csv', choices=list(FORMATS))

    check = subparsers.add_parser('check', parents=[common], help='Run the self-check suite')
    check.add_argument('--seed', type=int, default=None)
    check.add_argument('--agreement-points', type=int, default=None)
    check.add_argument('--only', nargs='+', default=None, choices=list(PROPERTIES))
    check.add_argument('--output', default=None, help='Report file (stdout when omitted)')

    docs = subparsers.add_parser('docs', parents=[common], help='Generate the equation map')
    docs.add_argument('--output', default='docs/equation_map.md')

    optimum = subparsers.add_parser('optimum', parents=[common], help='Scan the parametric optimum')
    optimum.add_argument('--delta', type=float, default=None)
    optimum.add_argument('--saturations', type=float, nargs='+', default=None)
    optimum.add_argument('--gamma', type=float, default=1.0)
    optimum.add_argument('--scale', type=float, default=1.0)
    optimum.add_argument('--method', default='residue', choices=list(EXACT_METHODS))
    optimum.add_argument('--output', default='output/optimum.json')
    return parser


def load_config_file(path: str) -> Dict[str, Any]:
    """Flat JSON document whose keys are sweep flag names"""
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        logger.error(f"Error loading config: {e}")
        raise UsageError(f"cannot read {path}: {e}", "config") from e
    if not isinstance(data, dict):
        raise UsageError(f"{path} must hold a JSON object", "config")
    unknown = sorted(set(data) - set(SWEEP_KEYS))
    if unknown:
        raise UsageError(f"unknown keys in {path}: {', '.join(unknown)}", "config")
    return data


def _merge_layer(merged: Dict[str, Any], layer: Dict[str, Any]):
    for first, second in EXCLUSIVE_PAIRS:
        if layer.get(first) is not None and layer.get(second) is not None:
            raise UsageError(f"cannot be combined with --{second.replace('_', '-')}", first)
        for given, dropped in ((first, second), (second, first)):
            if layer.get(given) is not None:
                merged.pop(dropped, None)
    merged.update({key: value for key, value in layer.items() if value is not None})


def _coerce(values: Dict[str, Any]) -> Dict[str, Any]:
    resolved = dict(values)
    for key in FLOAT_KEYS:
        if key in resolved:
            try:
                resolved[key] = float(resolved[key])
            except (TypeError, ValueError) as e:
                raise UsageError(f"expected a number, got {resolved[key]!r}", key) from e
    if 'points' in resolved:
        points = resolved['points']
        if isinstance(points, bool) or not float(points).is_integer():
            raise UsageError(f"expected an integer, got {points!r}", "points")
        resolved['points'] = int(points)
    try:
        resolved['component'] = Component(resolved.get('component', Component.KERR_Z.value))
    except ValueError as e:
        raise UsageError(f"unknown component {resolved.get('component')!r}", "component") from e
    try:
        resolved['sideband'] = Sideband(resolved.get('sideband', Sideband.BLUE.value))
    except ValueError as e:
        raise UsageError(f"unknown sideband {resolved.get('sideband')!r}", "sideband") from e
    return resolved


def resolve_run_config(args: argparse.Namespace, defaults: Dict[str, Any]) -> RunConfig:
    """Layer YAML defaults, the JSON config file and explicit flags"""
    merged = dict(defaults)
    if args.config:
        _merge_layer(merged, load_config_file(args.config))
    _merge_layer(merged, {key: getattr(args, key, None) for key in SWEEP_KEYS})
    return RunConfig(**_coerce(merged))


def parse_config(argv: Sequence[str], settings_path: Optional[str] = None) -> RunConfig:
    """
    Parse a sweep command line into a RunConfig

    Args:
        argv: Arguments starting with the sweep subcommand
        settings_path: YAML defaults, overrides --settings

    Returns:
        Validated RunConfig
    """
    args = build_parser().parse_args(list(argv))
    if args.command != 'sweep':
        raise UsageError(f"expected the sweep subcommand, got {args.command}")
    pipeline = SusceptibilityPipeline(settings_path or args.settings)
    return resolve_run_config(args, pipeline.default_run_config())


def _drive_params(args: argparse.Namespace, settings: Dict[str, Any]) -> DriveParams:
    gamma = args.gamma if args.gamma is not None else settings['model'].get('gamma', 1.0)
    delta = args.delta if args.delta is not None else 0.0
    if (args.rabi is None) == (args.saturation is None):
        raise UsageError("exactly one of --rabi and --saturation is required", "rabi")
    validate_drive_flags(gamma=gamma, rabi=args.rabi, saturation=args.saturation)
    rabi = args.rabi if args.rabi is not None else rabi_from_saturation(args.saturation, gamma, delta)
    return DriveParams(gamma=gamma, delta=delta, rabi=rabi)


def run_sweep(args: argparse.Namespace) -> int:
    pipeline = SusceptibilityPipeline(args.settings)
    cfg = resolve_run_config(args, pipeline.default_run_config())
    output = pipeline.run_sweep(cfg)
    logger.info(f"Wrote {len(output.frame)} samples to {output.path}")
    return EXIT_OK


def run_figure(args: argparse.Namespace) -> int:
    pipeline = SusceptibilityPipeline(args.settings)
    paths = pipeline.run_figure(
        args.preset,
        saturations=args.saturations,
        output_dir=args.output_dir,
        method=args.method,
        gamma=args.gamma,
        scale=args.scale,
        epsilon=args.epsilon,
        fmt=args.format,
    )
    for path in paths:
        print(path)
    return EXIT_OK


def run_roots(args: argparse.Namespace) -> int:
    pipeline = SusceptibilityPipeline(args.settings)
    report = pipeline.run_roots(_drive_params(args, pipeline.config))
    sys.stdout.write(pipeline.format_roots(report, args.format))
    return EXIT_OK


def run_check(args: argparse.Namespace) -> int:
    overrides = {}
    if args.agreement_points is not None:
        overrides['agreement_points'] = args.agreement_points
    report = SelfCheck(args.settings, overrides).run(seed=args.seed, only=args.only)
    text = write_report(report, args.output)
    if not args.output:
        sys.stdout.write(text)
    return EXIT_OK if report['passed'] else EXIT_FAILURE


def run_docs(args: argparse.Namespace) -> int:
    problems = write_equation_map(args.output)
    return EXIT_FAILURE if problems else EXIT_OK


def run_optimum(args: argparse.Namespace) -> int:
    pipeline = SusceptibilityPipeline(args.settings)
    report = pipeline.run_optimum(
        delta=args.delta,
        saturations=args.saturations,
        gamma=args.gamma,
        scale=args.scale,
        method=args.method,
        output=args.output,
    )
    print(json.dumps(report['optimum']))
    return EXIT_OK


COMMANDS = {
    'sweep': run_sweep,
    'figure': run_figure,
    'roots': run_roots,
    'check': run_check,
    'docs': run_docs,
    'optimum': run_optimum,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main function to run the susceptibility CLI"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level or "INFO")

    try:
        settings = load_settings(args.settings)
    except ConfigError as e:
        logger.error(f"Error loading settings: {e}")
        return EXIT_FAILURE
    logging_cfg = settings.get('logging', {})
    setup_logging(args.log_level or logging_cfg.get('level', 'INFO'), logging_cfg.get('format', LOG_FORMAT))

    try:
        return COMMANDS[args.command](args)
    except UsageError as e:
        logger.error(f"Usage error: {e}")
        return EXIT_USAGE
    except SusceptibilityError as e:
        logger.error(f"Error running {args.command}: {e}")
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
