"""Box-fragmentation processes and numerical Benford checks."""

import json as _json

from ._benfrag import *  # noqa: F401,F403
from ._benfrag import __version__, render_result, run_experiment, validate_config


def run(config: dict) -> dict:
    """Run an experiment given as a config dict; returns the manifest."""
    return _json.loads(run_experiment(_json.dumps(config)))


def render(config: dict) -> str:
    """Result document of an experiment without writing any files."""
    return render_result(_json.dumps(config))


def validate(config: dict) -> list:
    return validate_config(_json.dumps(config))
