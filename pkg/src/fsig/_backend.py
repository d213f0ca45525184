"""Select the elimination kernels at import time.

The compiled extension is used when it was built; setting
``FSIG_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

BACKEND = "python"

if os.environ.get("FSIG_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._kernels import rank_dense, rref_dense  # noqa: F401

        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._pykernels import rank_dense, rref_dense  # noqa: F401
