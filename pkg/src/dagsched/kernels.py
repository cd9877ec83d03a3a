"""Backend selection for the calendar-scan kernels.

Prefers the compiled extension, falls back to pure Python when it is not
built. Set ``DAGSCHED_PURE_PYTHON=1`` to force the fallback (used by the
benchmark and by tests that cross-check the two).
"""

import os

from . import _kernels_py

if os.environ.get("DAGSCHED_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

earliest_gap = _impl.earliest_gap
earliest_start_over_pes = _impl.earliest_start_over_pes
