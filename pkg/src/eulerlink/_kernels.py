"""Selects the compiled kernels when built, else the pure-Python ones.

Set ``EULERLINK_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _core_py

COMPILED = False
coface_sums = _core_py.coface_sums
link_sums = _core_py.link_sums
odd_subsets = _core_py.odd_subsets

if os.environ.get("EULERLINK_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core
    except ImportError:
        pass
    else:
        COMPILED = True
        coface_sums = _core.coface_sums
        link_sums = _core.link_sums
        odd_subsets = _core.odd_subsets
