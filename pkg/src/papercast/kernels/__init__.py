"""Hot numeric kernels with a compiled core and a pure-Python fallback.

The compiled extension (``papercast.kernels._fast``) is preferred when it
built successfully; set ``PAPERCAST_PURE_KERNELS=1`` to force the fallback.
``BACKEND`` reports which implementation is active.
"""

import os

if os.environ.get("PAPERCAST_PURE_KERNELS"):
    from . import pure as _impl

    BACKEND = "pure"
else:
    try:
        from . import _fast as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import pure as _impl

        BACKEND = "pure"

lcs_length = _impl.lcs_length
dbscan_labels = _impl.dbscan_labels

__all__ = ["BACKEND", "lcs_length", "dbscan_labels"]
