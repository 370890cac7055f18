"""
YAML configuration with defaults.

Missing keys fall back to DEFAULT_CONFIG; COSETSLE_SEED overrides the
simulation seed; explicit command-line values override both.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

from .sle.models import SimConfig

logger = logging.getLogger(__name__)

SEED_ENV = "COSETSLE_SEED"

DEFAULT_CONFIG: Dict[str, Any] = {
    "solver": {
        "model": "su2_u1",
        "level": 2,
        "mode": "semidirect",
        "normalization": "orthonormal",
    },
    "sim": {
        "kappa": 3.0,
        "tau": 0.0,
        "dt": 1e-3,
        "T": 0.5,
        "seed": 42,
        "samples": 10_000,
        "checkpoints": 5,
        "start": [1.0, 1.0],
        "scheme": "euler",
        "batch": 256,
    },
}


def _merge(base: Dict[str, Any], update: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in update.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Load configuration from a YAML file, filling in defaults.

    Args:
        config_path: Optional YAML file with "solver" and "sim" sections

    Returns:
        Resolved configuration dict

    Raises:
        ValueError: If the file is not a YAML mapping
    """
    config = copy.deepcopy(DEFAULT_CONFIG)
    if config_path is not None:
        with open(config_path, "r") as f:
            data = yaml.safe_load(f) or {}
        if not isinstance(data, dict):
            raise ValueError(f"{config_path}: configuration must be a mapping")
        config = _merge(config, data)
        logger.info(f"Loaded configuration from {config_path}")

    seed = os.environ.get(SEED_ENV)
    if seed:
        try:
            config["sim"]["seed"] = int(seed)
        except ValueError as e:
            raise ValueError(f"{SEED_ENV} must be an integer, got {seed!r}") from e
        logger.debug(f"Seed {seed} from {SEED_ENV}")
    return config


def sim_config(config: Dict[str, Any], **overrides: Any) -> SimConfig:
    """SimConfig from the "sim" section; None-valued overrides are ignored."""
    values = dict(config.get("sim", {}))
    values.update({k: v for k, v in overrides.items() if v is not None})
    if isinstance(values.get("start"), list):
        values["start"] = tuple(values["start"])
    return SimConfig(**values)
