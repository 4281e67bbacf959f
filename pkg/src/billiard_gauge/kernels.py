"""Backend selection for the numeric kernels.

The compiled extension is used when it imports; set ``BILLIARD_GAUGE_PURE=1``
to force the pure-Python implementation.
"""

import os

if os.environ.get("BILLIARD_GAUGE_PURE", "") not in ("", "0"):
    from ._pykernels import *  # noqa: F401,F403
    from ._pykernels import BACKEND
else:
    try:
        from ._ckernels import *  # noqa: F401,F403
        from ._ckernels import BACKEND
    except ImportError:
        from ._pykernels import *  # noqa: F401,F403
        from ._pykernels import BACKEND

from . import _pykernels as python_backend  # noqa: E402

__all__ = [
    "BACKEND",
    "minidisk",
    "difference_points",
    "blocking_scale",
    "boundary_points",
    "residual3",
    "oracle_triples",
    "python_backend",
]
