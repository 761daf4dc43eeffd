"""Kernel selection: compiled extension when importable, NumPy otherwise.

Set ``RISNULL_PURE_PYTHON=1`` to force the NumPy path.
"""

import os

from . import _kernels_py

BACKEND = "python"
radiate = _kernels_py.radiate
anneal = _kernels_py.anneal

if os.environ.get("RISNULL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _ext
    except ImportError:
        _ext = None
    if _ext is not None:
        BACKEND = "compiled"
        radiate = _ext.radiate
        anneal = _ext.anneal


def backends():
    """Available ``{name: module}`` kernel implementations."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels as ext
        found["compiled"] = ext
    except ImportError:
        pass
    return found
