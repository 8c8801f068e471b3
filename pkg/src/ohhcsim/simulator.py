"""Synchronous-round execution of the parallel sort on a simulated network.

A run has three stages: scatter (bucket payloads travel from the master to
their owners along the reversed gather forest), a per-node instrumented sort,
and the gather (each node waits for its subtree's unit count and then sends
its merged payload to its parent). Rounds are synchronous: messages sent in a
round are available to their receiver from the next round on. During scatter
each node forwards one pending bundle per round (single egress port); during
the gather every node sends exactly once.

Two communication accountings are reported side by side and must not be
conflated:

* ``comm_steps_total``: the sequential step sum of the closed-form edge
  accounting (scatter plus gather), independent of payload sizes.
* ``parallel_rounds``: the number of synchronous rounds the engine executed.

``modeled_makespan`` additionally charges store-and-forward transfer time,
one cost unit per element per hop, on top of per-node sort cost; it is the
engine's deterministic stand-in for elapsed parallel time.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import IO

import numpy as np

from .gather import PHASE_OPTICAL, GatherPlan, build_gather_plan
from .partition import split
from .quicksort import SortMetrics, quicksort
from .topology import OhhcTopology


@dataclass
class PayloadChunk:
    """A sorted run of values covering a contiguous bucket index range."""

    bucket_lo: int
    bucket_hi: int
    values: np.ndarray
    unit_count: int

    @property
    def element_count(self) -> int:
        return int(self.values.size)


@dataclass
class SimReport:
    comm_steps_total: int
    parallel_rounds: int
    scatter_rounds: int
    gather_rounds: int
    max_message_hops: int
    gather_units_at_master: int
    per_node_metrics: dict[int, SortMetrics]
    totals: SortMetrics
    max_node_cost_units: int
    modeled_makespan: int
    message_count: int
    bucket_elements: np.ndarray = field(repr=False)
    sorted_values: np.ndarray = field(repr=False)


def count_comm_steps(topo: OhhcTopology) -> int:
    """Sequential edge-traversal total for one scatter plus one gather.

    Inside every group: five steps per cell to reach all six nodes from the
    cell head, plus six steps per crossed hypercube dimension. Between
    groups: one optical step per non-zero group. The same amount is spent in
    each direction.
    """
    cfg = topo.config
    d = cfg.dimension
    g = cfg.group_count
    per_group_electronic = 5 + 6 * (d - 1)
    one_way = g * per_group_electronic + (g - 1)
    return 2 * one_way


def max_hops(report: SimReport) -> int:
    return report.max_message_hops


def _edge_kind(plan: GatherPlan, src: int) -> str:
    return "O" if plan.phase[src] == PHASE_OPTICAL else "E"


def _coalesce(chunks: list[PayloadChunk]) -> list[PayloadChunk]:
    """Merge adjacent-range chunks; asserts ascending order at every junction."""
    chunks = sorted(chunks, key=lambda c: c.bucket_lo)
    out: list[PayloadChunk] = []
    for c in chunks:
        if out and c.bucket_lo <= out[-1].bucket_hi:
            raise AssertionError("overlapping bucket ranges in payload")
        if out and c.bucket_lo == out[-1].bucket_hi + 1:
            prev = out[-1]
            if prev.values.size and c.values.size and prev.values[-1] > c.values[0]:
                raise AssertionError("bucket range ordering violated at merge")
            out[-1] = PayloadChunk(
                prev.bucket_lo,
                c.bucket_hi,
                np.concatenate((prev.values, c.values)),
                prev.unit_count + c.unit_count,
            )
        else:
            out.append(PayloadChunk(c.bucket_lo, c.bucket_hi, c.values, c.unit_count))
    return out


def run_parallel_sort(
    topo: OhhcTopology,
    master,
    *,
    plan: GatherPlan | None = None,
    trace: IO[str] | None = None,
    sort_workers: int | None = None,
) -> SimReport:
    """Execute one full simulated run and return its report.

    ``sort_workers`` enables the measure engine: bucket sorts run on a thread
    pool. The report is identical either way; only wall clock differs (see
    :func:`timed_bucket_sort_wall`).
    """
    arr = np.ascontiguousarray(master, dtype=np.int64)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("master array must be one-dimensional and non-empty")
    if plan is None:
        plan = build_gather_plan(topo)
    n_nodes = topo.node_count
    bset = split(arr, n_nodes)
    bucket_elems = np.array([b.size for b in bset.buckets], dtype=np.int64)

    subtree_elems = [0] * n_nodes
    order = sorted(range(n_nodes), key=lambda v: plan.depth[v], reverse=True)
    for v in order:
        subtree_elems[v] += int(bucket_elems[v])
        if v != 0:
            subtree_elems[plan.send_target[v]] += subtree_elems[v]

    # -- scatter: one pending child served per holder per round -------------
    pending = {v: plan.children_by_size(v) for v in range(n_nodes) if plan.children[v]}
    arrived_at = [None] * n_nodes
    arrived_at[0] = 0
    rnd = 0
    message_count = 0
    while pending:
        rnd += 1
        for v in sorted(pending):
            if arrived_at[v] is None or arrived_at[v] >= rnd:
                continue
            child = pending[v].pop(0)
            arrived_at[child] = rnd
            message_count += 1
            if trace is not None:
                trace.write(
                    f"{rnd},{v},{child},{_edge_kind(plan, child)},"
                    f"{plan.wait_units[child]},{subtree_elems[child]}\n"
                )
            if not pending[v]:
                del pending[v]
    scatter_rounds = rnd

    # -- per-node sort -------------------------------------------------------
    def sort_one(b: int):
        values, metrics = quicksort(bset.buckets[b])
        if values.size > 1 and np.any(np.diff(values) < 0):
            raise AssertionError("bucket sort produced unordered output")
        return values, metrics

    if sort_workers is not None and sort_workers > 1:
        with ThreadPoolExecutor(max_workers=sort_workers) as pool:
            results = list(pool.map(sort_one, range(n_nodes)))
    else:
        results = [sort_one(b) for b in range(n_nodes)]

    per_node_metrics = {b: results[b][1] for b in range(n_nodes)}
    totals = SortMetrics()
    for m in per_node_metrics.values():
        totals = totals + m
    max_node_cost = max(m.cost_units for m in per_node_metrics.values())

    # -- gather: send once when the subtree unit count is complete ----------
    held: list[list[PayloadChunk]] = [
        [PayloadChunk(b, b, results[b][0], 1)] for b in range(n_nodes)
    ]
    units_held = [1] * n_nodes
    unsent = set(range(1, n_nodes))
    while unsent:
        senders = [v for v in sorted(unsent) if units_held[v] == plan.wait_units[v]]
        if not senders:
            raise AssertionError("gather deadlock: no node can satisfy its wait")
        rnd += 1
        deliveries = []
        for v in senders:
            payload = _coalesce(held[v])
            units = sum(c.unit_count for c in payload)
            elements = sum(c.element_count for c in payload)
            target = plan.send_target[v]
            message_count += 1
            if trace is not None:
                trace.write(f"{rnd},{v},{target},{_edge_kind(plan, v)},{units},{elements}\n")
            deliveries.append((target, payload, units))
            held[v] = []
            units_held[v] = 0
            unsent.discard(v)
        for target, payload, units in deliveries:
            held[target].extend(payload)
            units_held[target] += units
        if sum(units_held) != n_nodes:
            raise AssertionError("unit conservation violated")
    gather_rounds = rnd - scatter_rounds

    final = _coalesce(held[0])
    if len(final) != 1 or final[0].bucket_lo != 0 or final[0].bucket_hi != n_nodes - 1:
        raise AssertionError("master did not assemble a single full-range payload")
    if final[0].unit_count != n_nodes:
        raise AssertionError("master unit count mismatch")

    makespan = _modeled_makespan(plan, subtree_elems, per_node_metrics, order)

    return SimReport(
        comm_steps_total=count_comm_steps(topo),
        parallel_rounds=rnd,
        scatter_rounds=scatter_rounds,
        gather_rounds=gather_rounds,
        max_message_hops=max(plan.depth),
        gather_units_at_master=final[0].unit_count,
        per_node_metrics=per_node_metrics,
        totals=totals,
        max_node_cost_units=int(max_node_cost),
        modeled_makespan=makespan,
        message_count=message_count,
        bucket_elements=bucket_elems,
        sorted_values=final[0].values,
    )


def _modeled_makespan(
    plan: GatherPlan,
    subtree_elems: list[int],
    metrics: dict[int, SortMetrics],
    depth_order: list[int],
) -> int:
    """Store-and-forward completion time of the whole run, in cost units.

    One element crossing one link costs one unit. Scatter transfers serialize
    per sender (single egress port, largest subtree first); a node starts
    sorting once its bundle has fully arrived; upward transfers start when a
    node's subtree payload is complete.
    """
    n = len(subtree_elems)
    bundle_done = [0] * n
    for v in sorted(range(n), key=lambda u: plan.depth[u]):
        t = bundle_done[v]
        for c in plan.children_by_size(v):
            t += subtree_elems[c]
            bundle_done[c] = t
    done = [0] * n
    for v in depth_order:  # deepest first
        ready = bundle_done[v] + metrics[v].cost_units
        arrivals = [done[c] + subtree_elems[c] for c in plan.children[v]]
        done[v] = max([ready] + arrivals)
    return int(done[0])


def timed_bucket_sort_wall(topo: OhhcTopology, master, workers: int) -> float:
    """Wall-clock seconds to sort all buckets on a thread pool.

    Measure-engine helper. With the compiled kernel the sort loop releases
    the GIL, so threads give real concurrency.
    """
    import time

    arr = np.ascontiguousarray(master, dtype=np.int64)
    bset = split(arr, topo.node_count)
    t0 = time.perf_counter()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        list(pool.map(lambda b: quicksort(b)[0], bset.buckets))
    return time.perf_counter() - t0
