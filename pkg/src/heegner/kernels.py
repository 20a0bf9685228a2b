"""Kernel selection: compiled Cython implementation with pure-Python fallback.

``HAVE_COMPILED`` reports which implementation is active; both expose the
same four functions and are cross-checked in the test suite.  Use
``implementations()`` to benchmark one against the other.
"""

from __future__ import annotations

from . import _kernels_py

try:
    from . import _kernels  # compiled extension, built by setup.py

    _impl = _kernels
    HAVE_COMPILED = True
except ImportError:
    _impl = _kernels_py
    HAVE_COMPILED = False

hasse_nonzero_fq = _impl.hasse_nonzero_fq
hasse_nonzero_fq2 = _impl.hasse_nonzero_fq2
count_points_fq = _impl.count_points_fq
supersingular_census_fq2 = _impl.supersingular_census_fq2


def implementations() -> dict[str, object]:
    """All available kernel implementations keyed by name."""
    out = {"pure": _kernels_py}
    if HAVE_COMPILED:
        out["compiled"] = _impl
    return out
