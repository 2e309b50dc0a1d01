"""Kernel backend selection.

The compiled extension is used when it was built; set ``TOTREAL_PURE_PYTHON=1``
to force the numpy implementations.
"""
import os

from . import _kernels_py

BACKEND = "python"
if os.environ.get("TOTREAL_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels_ext as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

ball_mass = _impl.ball_mass
cauchy_sum = _impl.cauchy_sum
