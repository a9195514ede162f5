"""Backend selection for the hot kernels.

The compiled ``_ckernels`` extension is used when importable, the numpy
implementation otherwise. Set ``TAKIFF_TODA_BACKEND=python`` to force the
fallback. Batched series calls (``ndim > 1``) always use numpy.
"""

import os

import numpy as np

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("TAKIFF_TODA_BACKEND", "").lower() not in ("python", "py", "numpy"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def _series(name):
    fast = getattr(_impl, name)
    slow = getattr(_pykernels, name)

    def call(a, *rest):
        if np.ndim(a) == 1 and all(np.ndim(r) == 1 for r in rest):
            return fast(a, *rest)
        return slow(a, *rest)

    call.__name__ = name
    return call


jet_mul = _series("jet_mul")
jet_exp = _series("jet_exp")
jet_log = _series("jet_log")
jet_inv = _series("jet_inv")
jet_sqrt = _series("jet_sqrt")

force = _impl.force
eom_rhs = _impl.eom_rhs
rk4 = _impl.rk4
leapfrog = _impl.leapfrog


def backends():
    """Map backend name to kernel module, for benchmarks and cross-checks."""
    out = {"python": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
