"""Backend selection for the integer matrix kernels.

The compiled module is used when it was built and imports cleanly; setting
``KUMLIFT_PURE_PYTHON=1`` forces the pure-Python routines.
"""

import os

from kumlift import _pykernels

if os.environ.get("KUMLIFT_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from kumlift import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

matmul = _impl.matmul
det = _impl.det
adjugate_solve = _impl.adjugate_solve
exterior_power = _impl.exterior_power


def available_backends():
    """Map of backend name to kernel module, for tests and benchmarks."""
    out = {"python": _pykernels}
    try:
        from kumlift import _ckernels
    except ImportError:
        pass
    else:
        out["cython"] = _ckernels
    return out
