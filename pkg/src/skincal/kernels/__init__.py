"""Backend selection for the hot error kernels.

The compiled Cython core is used when available; SKINCAL_PURE_PYTHON=1
forces the numpy reference implementation.
"""
import os

from . import _ref

if os.environ.get("SKINCAL_PURE_PYTHON"):
    impl = _ref
else:
    try:
        from . import _core as impl
    except ImportError:
        impl = _ref

BACKEND = impl.BACKEND
su_pose = impl.su_pose
static_cost = impl.static_cost
dynamic_cost = impl.dynamic_cost

__all__ = ["BACKEND", "su_pose", "static_cost", "dynamic_cost", "impl", "_ref"]
