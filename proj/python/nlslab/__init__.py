"""Stability laboratory for a coupled cubic NLS system.

The numerical work happens in the compiled ``_core`` extension; this package
re-exports it and adds thin JSON conveniences.
"""

import json as _json

from ._core import *  # noqa: F401,F403
from ._core import expansion_check as _expansion_check
from ._core import run_single as _run_single
from ._core import run_sweep as _run_sweep

__version__ = "0.3.0"


def _as_json(config):
    return config if isinstance(config, str) else _json.dumps(config)


def run_single(config):
    """Evolve one configuration given as a dict or JSON text."""
    return _run_single(_as_json(config))


def run_sweep(config, workers=0):
    """Run a sweep given as a dict or JSON text; rows are sorted."""
    return _run_sweep(_as_json(config), workers)


def expansion_check(config):
    return _expansion_check(_as_json(config))
