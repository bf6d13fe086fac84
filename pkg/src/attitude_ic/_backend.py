"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when importable.  Set
``ATTITUDE_IC_BACKEND=python`` to force the pure-Python fallback, or call
:func:`set_backend` at runtime.
"""

import contextlib
import logging
import os

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels


def available():
    return sorted(_BACKENDS)


def _default():
    want = os.environ.get("ATTITUDE_IC_BACKEND", "").strip().lower()
    if want:
        if want not in _BACKENDS:
            raise RuntimeError(f"backend {want!r} unavailable; have {available()}")
        return _BACKENDS[want]
    if _ckernels is None:
        log.warning("compiled kernels not built; using the pure-Python fallback")
        return _pykernels
    return _ckernels


_active = _default()


def kernels():
    return _active


def name():
    return _active.NAME


def set_backend(backend):
    global _active
    if backend not in _BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; have {available()}")
    _active = _BACKENDS[backend]


@contextlib.contextmanager
def use_backend(backend):
    prev = _active.NAME
    set_backend(backend)
    try:
        yield
    finally:
        set_backend(prev)
