"""Closed-form cost models and measured speedup/efficiency ratios.

The models use base-2 logarithms throughout. ``speedup_model`` is defined as
``P * efficiency_model`` so the algebraic identity between the two holds
bit-exactly in floating point.

Note: the printed speedup and efficiency formulas exceed the classical
bounds (efficiency above 1 for P > 1); they are implemented as stated and
asserted as stated in the test suite.
"""

from __future__ import annotations

import math

from .simulator import SimReport


def parallel_time_model(n: int, p: int) -> float:
    """Average parallel sort time: (n/P) * log2(n/P); zero when n/P <= 1."""
    if p < 1 or n < p:
        raise ValueError("requires n >= P >= 1")
    t = n / p
    if t <= 1:
        return 0.0
    return t * math.log2(t)


def efficiency_model(n: int, p: int) -> float:
    """log2(n) / (log2(n) - log2(P)); requires P < n."""
    if p < 1 or p >= n:
        raise ValueError("model is undefined for P >= n")
    return math.log2(n) / (math.log2(n) - math.log2(p))


def speedup_model(n: int, p: int) -> float:
    """P * log2(n) / (log2(n) - log2(P)); requires P < n."""
    return p * efficiency_model(n, p)


def path_link_count(dimension: int) -> int:
    """Longest route of one payload: two group diameters plus the optical hop."""
    return 2 * dimension + 3


def message_delay_model(t: float, dimension: int, worst_case: bool = False, n: float | None = None) -> float:
    """Store-and-forward delay of one payload over the longest route.

    Average case charges the average chunk size ``t`` per link; the worst
    case charges the whole array size ``n`` per link.
    """
    if t < 0:
        raise ValueError("chunk size must be >= 0")
    links = path_link_count(dimension)
    if worst_case:
        if n is None:
            raise ValueError("worst case requires the total element count n")
        return n * links
    return t * links


def comm_steps_closed_form(group_count: int, dimension: int) -> int:
    """Total sequential communication steps: 12 * G * d - 2."""
    return 12 * group_count * dimension - 2


def measured_speedup(baseline_cost: float, parallel_cost: float) -> float:
    if parallel_cost <= 0:
        raise ValueError("parallel cost must be positive")
    return baseline_cost / parallel_cost


def measured_efficiency(speedup: float, p: int) -> float:
    if p < 1:
        raise ValueError("processor count must be >= 1")
    return speedup / p


def parallel_cost_units(report: SimReport, steps_weight: float = 0.0) -> float:
    """Parallel cost of a run in sort cost units.

    Default weighting counts sort work only (the bottleneck node); the
    sequential step count is reported separately and can be blended in via
    ``steps_weight``.
    """
    return report.max_node_cost_units + steps_weight * report.comm_steps_total
