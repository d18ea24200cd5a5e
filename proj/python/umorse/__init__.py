"""Python bindings for the umorse uniform-energy toolkit."""

from ._core import *  # noqa: F401,F403
from ._core import __version__, run_scenario

import json as _json


def run(scenario):
    """Run a scenario given as a dict; returns (exit_code, report dict)."""
    code, text = run_scenario(_json.dumps(scenario))
    return code, _json.loads(text)
