"""Sort kernel backend selection.

Two interchangeable kernels implement the same instrumented Quick Sort:

* ``ohhcsim._sortcore``: Cython extension, used when the package was built
  with a C compiler available.
* ``ohhcsim._sortcore_py``: pure-Python fallback, always available.

The compiled kernel is preferred at import time; set the environment variable
``OHHCSIM_PURE_PYTHON=1`` before import to force the fallback. Both kernels
are required to produce identical sorted output and identical counts, so the
backend choice affects wall-clock speed only.

Counting scheme (shared by both kernels)
----------------------------------------
The kernel sorts ascending, in place, using middle-element pivots and a
two-pointer exchange partition. Counters:

* ``recursion_calls``: segment visits, including the empty and one-element
  segments produced by partitioning. A zero-length input makes no visit.
* ``iterations``: scan-pointer advances taken inside the two partition scan
  loops. Pointer repositioning after an exchange is not a scan step.
* ``swaps``: element exchanges. When the scan pointers meet on the same slot
  no exchange happens and nothing is counted.
* ``comparisons``: every element-versus-pivot test in the scan loops,
  including the final failing test of each scan.
"""

from __future__ import annotations

import os

import numpy as np

from . import _sortcore_py

if os.environ.get("OHHCSIM_PURE_PYTHON") == "1":
    _sortcore = None
else:
    try:
        from . import _sortcore  # type: ignore[attr-defined]
    except ImportError:
        _sortcore = None

#: Name of the kernel chosen at import time: "compiled" or "python".
BACKEND = "compiled" if _sortcore is not None else "python"


def active_backend() -> str:
    return BACKEND


def sort_with_counts(values: np.ndarray) -> tuple[np.ndarray, tuple[int, int, int, int]]:
    """Return ``(sorted_copy, (recursion_calls, iterations, swaps, comparisons))``.

    ``values`` must be one-dimensional and integer-valued; it is not modified.
    """
    arr = np.ascontiguousarray(values, dtype=np.int64)
    if arr.ndim != 1:
        raise ValueError("expected a one-dimensional array")
    if _sortcore is not None:
        out = arr.copy()
        counts = _sortcore.sort_with_counts(out)
        return out, counts
    work = arr.tolist()
    counts = _sortcore_py.sort_with_counts(work)
    return np.asarray(work, dtype=np.int64), counts


def python_sort_with_counts(values: np.ndarray):
    """Run the pure-Python kernel regardless of the active backend."""
    work = np.ascontiguousarray(values, dtype=np.int64).tolist()
    counts = _sortcore_py.sort_with_counts(work)
    return np.asarray(work, dtype=np.int64), counts


def compiled_sort_with_counts(values: np.ndarray):
    """Run the compiled kernel; raises ``RuntimeError`` if it is not built."""
    if _sortcore is None:
        raise RuntimeError("compiled kernel is not available")
    out = np.ascontiguousarray(values, dtype=np.int64).copy()
    counts = _sortcore.sort_with_counts(out)
    return out, counts
