"""Hot per-cell kernels: compiled extension when available, pure Python
otherwise.

Set SIM_PURE_PYTHON=1 to force the fallback (used by the benchmark and the
backend-equivalence tests). Both backends are bit-identical by contract.
"""

from __future__ import annotations

import os

if os.environ.get("SIM_PURE_PYTHON"):
    from . import _ref as _impl
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _ref as _impl

BACKEND: str = _impl.BACKEND
life_next = _impl.life_next
pastoral_patch_update = _impl.pastoral_patch_update
fnv1a64_digest = _impl.fnv1a64_digest

__all__ = ["BACKEND", "life_next", "pastoral_patch_update", "fnv1a64_digest"]
