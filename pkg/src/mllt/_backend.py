"""Kernel backend selection.

The hot inner loops exist twice: compiled with numba and as pure numpy.
``MLLT_BACKEND=numpy`` forces the fallback; ``MLLT_BACKEND=numba`` insists
on the compiled path (import error if numba is missing). By default numba
is used when importable.
"""

import os

_requested = os.environ.get("MLLT_BACKEND", "").strip().lower()

if _requested not in ("", "numba", "numpy"):
    raise ValueError(f"MLLT_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numpy":
    from . import _kernels_np as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _kernels_nb as _impl

    BACKEND = "numba"
else:
    try:
        from . import _kernels_nb as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _kernels_np as _impl

        BACKEND = "numpy"

log_pmf_batch = _impl.log_pmf_batch
sym_coeffs = _impl.sym_coeffs
raw_coeffs = _impl.raw_coeffs
abs_diff_cell_integrals = _impl.abs_diff_cell_integrals
