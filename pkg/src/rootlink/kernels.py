"""Integer kernel backend selection.

Prefers the compiled extension when it was built, falling back to the pure
Python twin.  Set ``ROOTLINK_KERNELS=python`` (or ``pure``) before import to
force the fallback, e.g. to compare the two in the benchmark suite.
"""

from __future__ import annotations

import os

from . import _kernels_py

__all__ = ["BACKEND", "inverse_scaled", "matmul_int"]

_forced = os.environ.get("ROOTLINK_KERNELS", "").strip().lower()

if _forced in {"python", "pure"}:
    _impl = _kernels_py
elif _forced in {"", "auto", "compiled", "c"}:
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
    except ImportError:
        if _forced in {"compiled", "c"}:
            raise
        _impl = _kernels_py
else:
    raise ValueError(
        f"ROOTLINK_KERNELS={_forced!r} not recognised; use 'python' or 'compiled'"
    )

BACKEND: str = _impl.BACKEND
inverse_scaled = _impl.inverse_scaled
matmul_int = _impl.matmul_int
