"""Kernel backend selection.

The compiled Cython kernels are preferred when importable; the pure-Python
twins are the fallback.  Set the environment variable ``CSTLAB_PURE=1`` to
force the pure backend (useful for benchmarking and differential tests).
Both backends implement identical integer recursions, so costs — and the
trees reconstructed from them — do not depend on the choice.
"""
from __future__ import annotations

import os

from . import _kernel_py

BACKEND = "pure"
GbstCostKernel = _kernel_py.GbstCostKernel
TwcstCostKernel = _kernel_py.TwcstCostKernel

if not os.environ.get("CSTLAB_PURE"):
    try:
        from . import _kernel_c  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "compiled"
        GbstCostKernel = _kernel_c.GbstCostKernel
        TwcstCostKernel = _kernel_c.TwcstCostKernel
