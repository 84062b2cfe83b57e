"""Kernel dispatch: compiled extension if importable, numpy/python otherwise.

Set CREATURE_LAB_PURE=1 to force the fallback.
"""

import os

from . import _purepy

BACKEND = "python"
if os.environ.get("CREATURE_LAB_PURE") != "1":
    try:
        from . import _speedups as _impl
        BACKEND = "cython"
    except ImportError:  # no compiled build
        _impl = _purepy
else:
    _impl = _purepy

mono_subset = _impl.mono_subset
first_hits = _impl.first_hits
