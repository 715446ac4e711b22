"""Selects the kernel-evaluation backend at import time.

The compiled extension (``prodkernel._core``) is preferred when present;
otherwise the NumPy implementation (``prodkernel._corepy``) is used.  Set
``PRODKERNEL_BACKEND=python`` or ``=compiled`` to force a choice, or call
:func:`set_backend`.  Both backends agree to floating-point roundoff.
"""

import os

from prodkernel import _corepy

try:
    from prodkernel import _core
except ImportError:
    _core = None

_BACKENDS = {"python": _corepy}
if _core is not None:
    _BACKENDS["compiled"] = _core

_active_name = None
_active = None


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    """Force the kernel-evaluation backend; returns the active name."""
    global _active_name, _active
    if name == "auto":
        name = "compiled" if "compiled" in _BACKENDS else "python"
    if name not in _BACKENDS:
        raise ValueError(
            f"backend {name!r} not available (have {available_backends()!r})"
        )
    _active_name = name
    _active = _BACKENDS[name]
    return _active_name


def active_backend():
    return _active_name


def cross_gram(family, p0, shape, X, Y):
    """Kernel cross matrix for one component kernel, via the active backend."""
    return _active.cross_gram(family, p0, shape, X, Y)


set_backend(os.environ.get("PRODKERNEL_BACKEND", "auto"))
