"""Matching kernels: greedy one-to-one selection and optimal assignment.

Two interchangeable lanes exist. The compiled extension (`_native`, Cython)
runs the data-dependent matching loops in C; the fallback lane uses numpy and
scipy. The compiled lane is selected at import when available, unless the
``SEMSHIFT_NO_NATIVE`` environment variable is set to a non-empty value.

Both lanes implement the same tie-breaking contract (smallest value first,
ties resolved in row-major order), so greedy results are identical bit for
bit across lanes.
"""
import os

from . import _fallback

if os.environ.get("SEMSHIFT_NO_NATIVE"):
    _impl = _fallback
    HAVE_NATIVE = False
else:
    try:
        from . import _native as _impl  # type: ignore[no-redef]

        HAVE_NATIVE = True
    except ImportError:
        _impl = _fallback
        HAVE_NATIVE = False

greedy_match = _impl.greedy_match
hungarian = _impl.hungarian

__all__ = ["greedy_match", "hungarian", "HAVE_NATIVE"]
