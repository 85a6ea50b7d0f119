"""Backend selection for the series kernel.

The compiled extension is used when it was built; otherwise the NumPy
implementation is imported. Setting ``FLUOROSPEC_PURE_PYTHON=1`` forces the
fallback.
"""
import os

from fluorospec import _kernel_py

if os.environ.get("FLUOROSPEC_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernel_py
else:
    try:
        from fluorospec import _kernel as _impl
    except ImportError:
        _impl = _kernel_py

BACKEND = _impl.BACKEND
spectrum_grid = _impl.spectrum_grid


def available_backends() -> dict:
    """Map backend name to its ``spectrum_grid`` for every importable backend."""
    out = {"python": _kernel_py.spectrum_grid}
    try:
        from fluorospec import _kernel
    except ImportError:
        return out
    out["cython"] = _kernel.spectrum_grid
    return out
