"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the numpy
fallback is used. ``BIPHOTON_BACKEND=python`` forces the fallback.
"""
import logging
import os

from . import _kernels_py

log = logging.getLogger(__name__)

_compiled = None
if os.environ.get("BIPHOTON_BACKEND", "").lower() != "python":
    try:
        from . import _kernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py
BACKEND = "cython" if _compiled is not None else "python"
log.debug("kernel backend: %s", BACKEND)


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


def get_backend(name=None):
    """Return the kernel module for ``name`` (default: the active one)."""
    if name is None:
        return _impl
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def jsa_fill(*args):
    return _impl.jsa_fill(*args)


def quad_dft(*args):
    return _impl.quad_dft(*args)


def rk4_three_level(*args):
    return _impl.rk4_three_level(*args)


def dsi_double_integral(*args):
    return _impl.dsi_double_integral(*args)
