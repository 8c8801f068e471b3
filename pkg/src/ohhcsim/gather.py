"""Wait-and-send plan for the gather phase.

Every node accumulates the payloads of its subtree and then sends the whole
batch to a single parent, so all sorted buckets funnel into the master node
(flat index 0, the head of group 0). The parent of a node is fixed by its
position in the architecture:

* cell interior: nodes 3, 4 and 5 send to 1, 2 and 0; nodes 1 and 2 forward
  to the cell head (node 0).
* hypercube: the head of cell ``h > 0`` sends to the cell whose index clears
  the lowest set bit of ``h``.
* optical: the head of group ``g > 0`` sends over its transpose link to the
  node of group 0 with within-group index ``g``.

Group 0 runs the same cell and hypercube reduction, but each of its nodes
first absorbs the optical payload of one whole group, which is why its wait
amounts are larger. All wait amounts are subtree unit sums; the closed-form
per-class amounts used by group 0 in full mode are exposed separately as a
cross-check (:func:`full_mode_group_zero_rules`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .topology import GroupMode, OhhcTopology

PHASE_CELL = "cell"
PHASE_CUBE = "cube"
PHASE_OPTICAL = "optical"

# Within a cell: 3 -> 1, 4 -> 2, 5 -> 0, then 1 -> 0 and 2 -> 0.
_CELL_PARENT = {1: 0, 2: 0, 3: 1, 4: 2, 5: 0}


@dataclass
class GatherPlan:
    topo: OhhcTopology
    send_target: list[int | None]
    phase: list[str | None]
    wait_units: list[int]
    children: list[list[int]]
    depth: list[int]
    #: Subtree bucket coverage as merged (lo, hi) index ranges, per node.
    subtree_ranges: list[tuple[tuple[int, int], ...]] = field(repr=False, default_factory=list)

    @property
    def root(self) -> int:
        return 0

    def children_by_size(self, flat: int) -> list[int]:
        """Children ordered largest subtree first (ties by flat index)."""
        return sorted(self.children[flat], key=lambda c: (-self.wait_units[c], c))


def _parent_of(flat: int, topo: OhhcTopology) -> tuple[int | None, str | None]:
    cfg = topo.config
    p = cfg.processors_per_group
    g, within = divmod(flat, p)
    h, k = divmod(within, 6)
    if k != 0:
        return g * p + 6 * h + _CELL_PARENT[k], PHASE_CELL
    if h > 0:
        return g * p + 6 * (h - (h & -h)), PHASE_CUBE
    if g > 0:
        # Transpose link of the group head lands on group 0, within-index g.
        return g, PHASE_OPTICAL
    return None, None


def build_gather_plan(topo: OhhcTopology) -> GatherPlan:
    n = topo.node_count
    send_target: list[int | None] = [None] * n
    phase: list[str | None] = [None] * n
    children: list[list[int]] = [[] for _ in range(n)]
    for v in range(1, n):
        parent, tag = _parent_of(v, topo)
        send_target[v] = parent
        phase[v] = tag
        children[parent].append(v)

    depth = [0] * n
    for v in range(1, n):
        d = 0
        u = v
        while u != 0:
            u = send_target[u]
            d += 1
        depth[v] = d

    order = sorted(range(n), key=lambda v: depth[v], reverse=True)
    wait_units = [1] * n
    for v in order:
        if v != 0:
            wait_units[send_target[v]] += wait_units[v]

    ranges: list[tuple[tuple[int, int], ...]] = [()] * n
    for v in order:
        ranges[v] = _merge_ranges([(v, v)] + [r for c in children[v] for r in ranges[c]])

    return GatherPlan(topo, send_target, phase, wait_units, children, depth, ranges)


def _merge_ranges(parts: list[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    parts.sort()
    merged: list[tuple[int, int]] = []
    for lo, hi in parts:
        if merged and lo == merged[-1][1] + 1:
            merged[-1] = (merged[-1][0], hi)
        else:
            merged.append((lo, hi))
    return tuple(merged)


def full_mode_group_zero_rules(topo: OhhcTopology) -> dict[str, int]:
    """Closed-form wait amounts for group 0 node classes in full mode.

    Every group-0 node starts with its own bucket plus the payload of one
    whole group received over its optical link, so the per-class amounts are
    multiples of that base:

    * ``normal``: nodes 3, 4, 5 (own bucket + optical payload)
    * ``aggregate``: nodes 1, 2 (their own base plus one normal payload)
    * ``cell_head``: a cell head absorbing its entire cell
    * ``master``: the cell head of cell 0, which has no optical inbound

    Useful only as a cross-check against the subtree sums of
    :func:`build_gather_plan`; half mode has no uniform per-class amounts.
    """
    if topo.config.group_mode is not GroupMode.FULL:
        raise ValueError("per-class wait amounts are defined for full mode only")
    base = 1 + topo.config.processors_per_group
    return {
        "normal": base,
        "aggregate": 2 * base,
        "cell_head": 6 * base,
        "master": 5 * base + 1,
    }


def group_zero_cube_wait(topo: OhhcTopology, subgroup: int) -> int:
    """Full-mode wait of group 0's cell head ``subgroup`` at its cube send."""
    if subgroup <= 0:
        raise ValueError("cube sends happen only for subgroup indices > 0")
    rules = full_mode_group_zero_rules(topo)
    return rules["cell_head"] * (subgroup & -subgroup)
