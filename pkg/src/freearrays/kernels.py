"""Interval kernels, compiled when available.

``BACKEND`` is ``"cython"`` when the extension imported and ``"python"``
otherwise. Set ``FREEARRAYS_PURE=1`` to force the fallback.
"""
import os

if os.environ.get("FREEARRAYS_PURE"):
    from . import _kernels_py as _impl
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl
        BACKEND = "python"

normalize = _impl.normalize
intersect = _impl.intersect
clamp = _impl.clamp
remove_value = _impl.remove_value
contains = _impl.contains
size = _impl.size

__all__ = ["BACKEND", "normalize", "intersect", "clamp", "remove_value", "contains", "size"]
