#!/usr/bin/env python3
"""
Settings Loader
Reads the YAML defaults shared by the pipeline, the self-check and the CLI
"""

import logging
from pathlib import Path
from typing import Any, Dict

import yaml

from .errors import ConfigError

# Configure logging
logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = str(Path(__file__).resolve().parents[2] / "config" / "susceptibility_config.yaml")

REQUIRED_SECTIONS = ("model", "contour", "sweep", "figures", "check")


def load_settings(config_path: str = DEFAULT_CONFIG_PATH) -> Dict[str, Any]:
    """Load configuration from YAML file"""
    try:
        with open(config_path, 'r') as file:
            config = yaml.safe_load(file)
    except Exception as e:
        logger.error(f"Error loading config: {e}")
        raise ConfigError(f"cannot read {config_path}: {e}") from e

    if not isinstance(config, dict):
        raise ConfigError(f"{config_path} does not contain a mapping")
    missing = [section for section in REQUIRED_SECTIONS if section not in config]
    if missing:
        raise ConfigError(f"{config_path} is missing sections: {', '.join(missing)}")
    return config
