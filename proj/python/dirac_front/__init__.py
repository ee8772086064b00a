"""Free Dirac evolution lab."""

import json as _json

from ._dirac_front import *  # noqa: F401,F403
from ._dirac_front import __version__, run as _run


def run(config, out_dir):
    """Run a config file; the manifest is returned as a dict."""
    result = _run(str(config), str(out_dir))
    result["manifest"] = _json.loads(result["manifest"])
    return result
