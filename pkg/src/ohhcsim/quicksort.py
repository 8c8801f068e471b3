"""Instrumented sequential Quick Sort.

Used both as the per-processor kernel of the simulated parallel sort and as
the whole-array sequential baseline. See :mod:`ohhcsim.kernels` for the exact
counting scheme.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from . import kernels


@dataclass(frozen=True)
class SortMetrics:
    recursion_calls: int = 0
    iterations: int = 0
    swaps: int = 0
    comparisons: int = 0

    def __add__(self, other: "SortMetrics") -> "SortMetrics":
        return SortMetrics(
            self.recursion_calls + other.recursion_calls,
            self.iterations + other.iterations,
            self.swaps + other.swaps,
            self.comparisons + other.comparisons,
        )

    @property
    def cost_units(self) -> int:
        """Deterministic cost proxy: comparisons plus swaps."""
        return self.comparisons + self.swaps

    def as_dict(self) -> dict[str, int]:
        return {
            "recursion_calls": self.recursion_calls,
            "iterations": self.iterations,
            "swaps": self.swaps,
            "comparisons": self.comparisons,
        }


ZERO_METRICS = SortMetrics()


def quicksort(array) -> tuple[np.ndarray, SortMetrics]:
    """Sort ``array`` ascending; returns the sorted copy and its metrics."""
    out, (calls, iters, swaps, comps) = kernels.sort_with_counts(np.asarray(array))
    return out, SortMetrics(calls, iters, swaps, comps)


@dataclass(frozen=True)
class BaselineResult:
    values: np.ndarray
    metrics: SortMetrics
    cost_units: int
    wall_seconds: float | None = None


def sequential_baseline(master, measure: bool = False) -> BaselineResult:
    """Sort the whole array sequentially, as the comparison baseline.

    ``cost_units`` is comparisons plus swaps. With ``measure=True`` the
    wall-clock time of the sort is recorded as well.
    """
    arr = np.asarray(master)
    if arr.size == 0:
        raise ValueError("baseline requires a non-empty array")
    t0 = time.perf_counter() if measure else None
    out, metrics = quicksort(arr)
    wall = time.perf_counter() - t0 if t0 is not None else None
    return BaselineResult(out, metrics, metrics.cost_units, wall)
