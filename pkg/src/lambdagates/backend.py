"""Kernel backend selection.

The compiled extension (``lambdagates._core``) is preferred when it
imports cleanly; otherwise the numpy fallback is used. Setting the
environment variable ``LAMBDAGATES_FORCE_PYTHON=1`` skips the extension,
which is how the parity tests and the benchmark pin each side.
"""

from __future__ import annotations

import os

from . import _core_py

if os.environ.get("LAMBDAGATES_FORCE_PYTHON", "") not in ("", "0"):
    _impl = _core_py
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        _impl = _core_py

propagate_unitary_stack = _impl.propagate_unitary_stack
lindblad_rk4 = _impl.lindblad_rk4


def backend_name():
    """Name of the active kernel implementation ('compiled' or 'python')."""
    return _impl.BACKEND_NAME
