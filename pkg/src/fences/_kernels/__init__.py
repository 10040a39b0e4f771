"""Hot kernels with two interchangeable backends.

``FENCES_KERNELS`` selects the implementation: ``numba`` (jitted loops,
default when importable), ``numpy`` (pure vectorized fallback) or ``auto``.
Both backends are exact integer/bit computations and must agree bit for bit;
``tests/test_kernels.py`` and ``benchmarks/bench_kernels.py`` compare them.
"""

import os

from . import numpy_impl

_requested = os.environ.get("FENCES_KERNELS", "auto").lower()

if _requested in ("auto", "numba"):
    try:
        from . import numba_impl as _impl
        _backend = "numba"
    except ImportError:
        if _requested == "numba":
            raise
        _impl = numpy_impl
        _backend = "numpy"
elif _requested == "numpy":
    _impl = numpy_impl
    _backend = "numpy"
else:
    raise ValueError(f"FENCES_KERNELS must be auto, numba or numpy, got {_requested!r}")


def backend_name() -> str:
    return _backend


enumerate_ideal_masks = _impl.enumerate_ideal_masks
toggle_sweep = _impl.toggle_sweep
