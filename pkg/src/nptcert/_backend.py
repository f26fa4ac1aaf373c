"""Kernel backend selection.

The hot numeric kernels (the cyclic Jacobi eigensolver sweeps in
``nptcert.linalg``) are JIT-compiled with numba when it is available.  The
environment variable ``NPTCERT_BACKEND`` overrides the choice:

* ``auto`` (default) -- numba if importable, NumPy fallback otherwise
* ``numba``          -- require numba, raise if it cannot be imported
* ``numpy``          -- force the vectorized NumPy fallback

``BACKEND`` holds the active choice ("numba" or "numpy").
"""

import os

_choice = os.environ.get("NPTCERT_BACKEND", "auto").strip().lower()
if _choice not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"NPTCERT_BACKEND must be 'auto', 'numba' or 'numpy', got {_choice!r}"
    )

if _choice == "numpy":
    _numba = None
else:
    try:
        import numba as _numba
    except ImportError:
        if _choice == "numba":
            raise
        _numba = None

BACKEND = "numpy" if _numba is None else "numba"


def jit(func):
    """Compile ``func`` with numba when that backend is active, else return it."""
    if _numba is not None:
        return _numba.njit(cache=True)(func)
    return func
