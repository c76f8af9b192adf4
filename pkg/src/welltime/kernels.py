"""Backend selection for the Gaussian-packet kernels.

The compiled ``_kernels`` extension is used when it imports; otherwise the
pure-Python ``_fallback`` module. Setting ``WELLTIME_PURE_PYTHON=1`` forces
the fallback. ``BACKEND`` names the active implementation.
"""

from __future__ import annotations

import os

from . import _fallback

_compiled = None
if os.environ.get("WELLTIME_PURE_PYTHON") != "1":
    try:
        from . import _kernels as _compiled
    except ImportError:
        _compiled = None

_impl = _compiled if _compiled is not None else _fallback
BACKEND = "compiled" if _compiled is not None else "python"

r_plus = _impl.r_plus
r_minus = _impl.r_minus
r_kappa_mantissa = _impl.r_kappa_mantissa
deep_z = _impl.deep_z
deep_gamma = _impl.deep_gamma
batch = _impl.batch

KERNEL_NAMES = ("r_plus", "r_minus", "r_kappa_mantissa", "deep_z", "deep_gamma")


def implementation(name: str):
    """Return the module implementing ``name`` ("compiled" or "python")."""
    if name == "python":
        return _fallback
    if name == "compiled":
        if _compiled is None:
            raise ImportError("compiled kernels are not available")
        return _compiled
    raise ValueError("unknown backend %r" % name)


def compiled_available() -> bool:
    return _compiled is not None
