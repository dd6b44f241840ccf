"""Two-scale thermo-poroelastic homogenization."""

import json

import numpy as np

from ._tphom import (
    RunConfig,
    TphomError,
    load_config,
    parse_config,
    parse_epsilon,
    run,
    selftest,
)
from . import _tphom

__all__ = [
    "RunConfig",
    "TphomError",
    "load_config",
    "parse_config",
    "parse_epsilon",
    "run",
    "selftest",
    "upscale",
    "macro_run",
]


def _as_arrays(obj):
    if isinstance(obj, dict):
        return {k: _as_arrays(v) for k, v in obj.items()}
    if isinstance(obj, list) and obj and isinstance(obj[0], (list, int, float)):
        return np.asarray(obj, dtype=float)
    if isinstance(obj, list):
        return [_as_arrays(v) for v in obj]
    return obj


def upscale(config):
    """Effective coefficients as a dict of floats and numpy arrays."""
    return _as_arrays(json.loads(_tphom.upscale(config)))


def macro_run(config, coefficients):
    """Homogenized run. `coefficients` is the JSON text from upscale or a path to coefficients.json."""
    text = coefficients
    if not coefficients.lstrip().startswith("{"):
        with open(coefficients) as f:
            text = f.read()
    return _tphom.macro_run(config, text)
