"""Kernel backend selection: compiled extension if available, else pure Python.

The environment variable ``BIPHASELAB_KERNELS`` overrides the default:
``auto`` (default) prefers the compiled extension, ``python`` forces the
fallback, ``compiled`` requires the extension and raises if it is missing.
"""

from __future__ import annotations

import os

_choice = os.environ.get("BIPHASELAB_KERNELS", "auto").lower()
if _choice not in ("auto", "compiled", "python"):
    raise ValueError(
        f"BIPHASELAB_KERNELS must be 'auto', 'compiled' or 'python', got {_choice!r}")

if _choice == "python":
    from . import _fallback as _impl
    BACKEND = "python"
else:
    try:
        from . import _compiled as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        if _choice == "compiled":
            raise
        from . import _fallback as _impl
        BACKEND = "python"

thomas_solve = _impl.thomas_solve
block_thomas_solve = _impl.block_thomas_solve


def backend() -> str:
    """Name of the active kernel backend ('compiled' or 'python')."""
    return BACKEND
