"""Hot kernels with a compiled (Cython) core and a numpy fallback.

The compiled extension is used when it imports; set ``JCRYD_PURE_PYTHON=1``
to force the fallback.
"""

import os

from ._rk4_py import rk4_affine as python_rk4_affine

try:
    from ._rk4 import rk4_affine as compiled_rk4_affine
except ImportError:
    compiled_rk4_affine = None

if compiled_rk4_affine is not None and not os.environ.get("JCRYD_PURE_PYTHON"):
    rk4_affine = compiled_rk4_affine
    BACKEND = "compiled"
else:
    rk4_affine = python_rk4_affine
    BACKEND = "python"

__all__ = ["rk4_affine", "BACKEND", "python_rk4_affine", "compiled_rk4_affine"]
