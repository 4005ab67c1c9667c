"""Kernel backend selection.

The compiled extension is preferred when present; otherwise the numpy
reference implementation is used. Both produce bit-identical output.
Set LDBKIT_KERNELS=python to force the fallback (e.g. for benchmarking).
"""

import os

from . import _ref

_choice = os.environ.get("LDBKIT_KERNELS", "auto").lower()

if _choice == "python":
    _impl = _ref
elif _choice == "compiled":
    from . import _fast as _impl
else:
    try:
        from . import _fast as _impl
    except ImportError:
        _impl = _ref

BACKEND = _impl.BACKEND
HAVE_COMPILED = BACKEND == "compiled"

wpt_level = _impl.wpt_level
cube_mask = _impl.cube_mask
split_counts = _impl.split_counts
