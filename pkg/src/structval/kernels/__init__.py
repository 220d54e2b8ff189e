"""Hot table kernels with two interchangeable backends.

The backend is chosen once at import time from the ``STRUCTVAL_BACKEND``
environment variable (``numba`` or ``numpy``).  Without the variable numba is
used when it imports cleanly, otherwise numpy.
"""
import os

from . import _numpy

_NAMES = ("closure_mask", "extend_hom", "hom_witness", "right_action_witness", "orbit_labels")


def load_backend(name):
    """Return the kernel module for ``name`` ('numba' or 'numpy')."""
    if name == "numpy":
        return _numpy
    if name == "numba":
        from . import _numba
        return _numba
    raise ValueError(f"unknown kernel backend {name!r}")


def _select():
    requested = os.environ.get("STRUCTVAL_BACKEND", "").strip().lower()
    if requested:
        return requested, load_backend(requested)
    try:
        return "numba", load_backend("numba")
    except ImportError:
        return "numpy", _numpy


BACKEND, _impl = _select()

closure_mask = _impl.closure_mask
extend_hom = _impl.extend_hom
hom_witness = _impl.hom_witness
right_action_witness = _impl.right_action_witness
orbit_labels = _impl.orbit_labels

__all__ = ["BACKEND", "load_backend", *_NAMES]
