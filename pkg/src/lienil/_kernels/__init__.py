"""Kernel backend selection.

The compiled Cython kernel is preferred when built; the numpy kernel is the
fallback.  Set LIENIL_KERNEL=python or LIENIL_KERNEL=compiled to force one
(the benchmark and the cross-backend tests rely on this).
"""

import os

from ..errors import InputError


def _load(name):
    if name == "compiled":
        from . import cyk
        return cyk
    from . import pyk
    return pyk


_requested = os.environ.get("LIENIL_KERNEL", "").strip().lower()
if _requested in ("", "auto"):
    try:
        _impl = _load("compiled")
    except ImportError:
        _impl = _load("python")
elif _requested in ("compiled", "cy", "c"):
    _impl = _load("compiled")
elif _requested in ("python", "py", "numpy"):
    _impl = _load("python")
else:
    raise InputError(f"unknown LIENIL_KERNEL value: {_requested!r}")

SpanBuilder = _impl.SpanBuilder
reduce_rows = _impl.reduce_rows
backend_name = _impl.BACKEND


def available_backends():
    """Names of the kernel implementations importable in this environment."""
    names = ["python"]
    try:
        _load("compiled")
        names.insert(0, "compiled")
    except ImportError:
        pass
    return names


def get_backend(name):
    """Load a backend module by name ('python' or 'compiled')."""
    if name not in ("python", "compiled"):
        raise InputError(f"unknown kernel backend: {name!r}")
    return _load(name)
