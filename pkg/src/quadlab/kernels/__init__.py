"""Hot-kernel backend selection.

The compiled Cython backend is preferred when its extension module built
successfully; the pure numpy backend is the always-available fallback.
Set ``QUADLAB_FORCE_PURE=1`` to pin the fallback (useful for debugging
and for the backend benchmark).
"""

import os

from . import pure

BACKEND = "pure"
_impl = pure

if not os.environ.get("QUADLAB_FORCE_PURE"):
    try:
        from . import _native

        _impl = _native
        BACKEND = "native"
    except ImportError:
        pass

DEFAULT_SEPARATION = pure.DEFAULT_SEPARATION

project_mt = _impl.project_mt
xy_to_w = _impl.xy_to_w
w_to_xy = _impl.w_to_xy
quadric_residual = _impl.quadric_residual
abs_restricted_jacobian = _impl.abs_restricted_jacobian
disc_abs = _impl.disc_abs
partner_data = _impl.partner_data
objective_absj = _impl.objective_absj
objective_gap = _impl.objective_gap
objective_disc = _impl.objective_disc


def available_backends() -> dict:
    """Map of backend name to implementing module, for benchmarks/tests."""
    out = {"pure": pure}
    try:
        from . import _native

        out["native"] = _native
    except ImportError:
        pass
    return out
