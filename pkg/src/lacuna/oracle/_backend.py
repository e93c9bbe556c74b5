"""Selects the Monte Carlo kernel at import.

The compiled kernel is used when it was built; set ``LACUNA_PURE_PYTHON=1``
to force the numpy twin.
"""

import os

from . import _mc_py

try:
    from . import _mc_core
except ImportError:  # extension not built
    _mc_core = None

BACKENDS = {"python": _mc_py}
if _mc_core is not None:
    BACKENDS["compiled"] = _mc_core

if _mc_core is not None and not os.environ.get("LACUNA_PURE_PYTHON"):
    DEFAULT = "compiled"
else:
    DEFAULT = "python"


def get(name: str | None = None):
    name = name or DEFAULT
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"backend {name!r} unavailable; have {sorted(BACKENDS)}") from None
