"""OTIS Hyper Hexa-Cell network construction and queries.

A network of dimension ``d`` consists of ``G`` groups, each group being a
``d``-dimensional hyper hexa-cell: a ``(d-1)``-dimensional hypercube whose
vertices are six-node cells (two fully connected triangles plus three facing
edges). Groups are wired to each other by optical transpose links; all links
inside a group are electronic.

Cell labeling: nodes 0,1,2 form one triangle, nodes 3,4,5 the other, and the
facing pairs are 0-5, 1-3 and 2-4. Hypercube links replicate per cell node:
cells whose indices differ in one bit are joined by six parallel links, one
per node id.

Transpose rule: the node with within-group index ``x`` in group ``y`` is
linked to the node with within-group index ``y`` in group ``x``. Fixed points
(``x == y``) carry no link. In half mode only within-group indices below the
group count participate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import IO, Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path


class GroupMode(enum.Enum):
    FULL = "full"  # G = P
    HALF = "half"  # G = P / 2


class LinkKind(enum.Enum):
    ELECTRONIC = "E"
    OPTICAL = "O"


# Intra-cell wiring: two triangles plus the three facing edges.
CELL_EDGES = ((0, 1), (0, 2), (1, 2), (3, 4), (3, 5), (4, 5), (0, 5), (1, 3), (2, 4))


@dataclass(frozen=True)
class OhhcConfig:
    dimension: int
    group_mode: GroupMode = GroupMode.FULL

    def __post_init__(self):
        if not isinstance(self.dimension, int) or self.dimension < 1:
            raise ValueError(f"dimension must be an integer >= 1, got {self.dimension!r}")

    @property
    def subgroups_per_group(self) -> int:
        """Hypercube vertices per group: 2^(d-1)."""
        return 1 << (self.dimension - 1)

    @property
    def processors_per_group(self) -> int:
        return 6 * self.subgroups_per_group

    @property
    def group_count(self) -> int:
        p = self.processors_per_group
        return p if self.group_mode is GroupMode.FULL else p // 2

    @property
    def node_count(self) -> int:
        return self.group_count * self.processors_per_group


@dataclass(frozen=True)
class NodeAddress:
    group_id: int
    hhc_subgroup_id: int
    hhc_node_id: int
    flat_index: int

    @property
    def within_group_index(self) -> int:
        return 6 * self.hhc_subgroup_id + self.hhc_node_id


@dataclass(frozen=True)
class Link:
    a: NodeAddress
    b: NodeAddress
    kind: LinkKind


def resolve(flat_index: int, config: OhhcConfig) -> NodeAddress:
    """Map a flat node index to its (group, subgroup, node) address."""
    n = config.node_count
    if not 0 <= flat_index < n:
        raise ValueError(f"flat index {flat_index} out of range [0, {n})")
    p = config.processors_per_group
    group, within = divmod(flat_index, p)
    subgroup, node = divmod(within, 6)
    return NodeAddress(group, subgroup, node, flat_index)


def flat_index_of(group_id: int, hhc_subgroup_id: int, hhc_node_id: int, config: OhhcConfig) -> int:
    """Inverse of :func:`resolve`."""
    if not 0 <= group_id < config.group_count:
        raise ValueError(f"group {group_id} out of range")
    if not 0 <= hhc_subgroup_id < config.subgroups_per_group:
        raise ValueError(f"subgroup {hhc_subgroup_id} out of range")
    if not 0 <= hhc_node_id < 6:
        raise ValueError(f"cell node {hhc_node_id} out of range")
    return group_id * config.processors_per_group + 6 * hhc_subgroup_id + hhc_node_id


class OhhcTopology:
    """Immutable network graph; safe for unrestricted concurrent reads."""

    def __init__(self, config: OhhcConfig):
        self.config = config
        self.nodes: tuple[NodeAddress, ...] = tuple(
            resolve(f, config) for f in range(config.node_count)
        )
        elec = self._build_electronic_flat()
        opt = self._build_optical_flat()
        self._elec_pairs: tuple[tuple[int, int], ...] = elec
        self._opt_pairs: tuple[tuple[int, int], ...] = opt
        self._adj_elec: list[list[int]] = [[] for _ in range(config.node_count)]
        for a, b in elec:
            self._adj_elec[a].append(b)
            self._adj_elec[b].append(a)
        for lst in self._adj_elec:
            lst.sort()
        self._optical_partner_flat: list[int | None] = [None] * config.node_count
        for a, b in opt:
            self._optical_partner_flat[a] = b
            self._optical_partner_flat[b] = a
        self.electronic_edges: frozenset[Link] = frozenset(
            Link(self.nodes[a], self.nodes[b], LinkKind.ELECTRONIC) for a, b in elec
        )
        self.optical_edges: frozenset[Link] = frozenset(
            Link(self.nodes[a], self.nodes[b], LinkKind.OPTICAL) for a, b in opt
        )

    # -- construction -----------------------------------------------------

    def _build_electronic_flat(self) -> tuple[tuple[int, int], ...]:
        cfg = self.config
        p = cfg.processors_per_group
        sub = cfg.subgroups_per_group
        pairs: list[tuple[int, int]] = []
        for g in range(cfg.group_count):
            base_g = g * p
            for h in range(sub):
                base = base_g + 6 * h
                for u, v in CELL_EDGES:
                    pairs.append((base + u, base + v))
            # Six parallel links per hypercube edge, one per cell node id.
            for h in range(sub):
                for bit in range(cfg.dimension - 1):
                    h2 = h ^ (1 << bit)
                    if h < h2:
                        for k in range(6):
                            pairs.append((base_g + 6 * h + k, base_g + 6 * h2 + k))
        return tuple(pairs)

    def _build_optical_flat(self) -> tuple[tuple[int, int], ...]:
        cfg = self.config
        p = cfg.processors_per_group
        g_count = cfg.group_count
        pairs: list[tuple[int, int]] = []
        for g in range(g_count):
            for w in range(p):
                if w == g or w >= g_count:
                    continue
                if g < w:
                    pairs.append((g * p + w, w * p + g))
        return tuple(pairs)

    # -- queries -----------------------------------------------------------

    @property
    def node_count(self) -> int:
        return self.config.node_count

    def _check(self, addr: NodeAddress) -> int:
        f = addr.flat_index
        if not 0 <= f < self.node_count or self.nodes[f] != addr:
            raise ValueError(f"address {addr} is not part of this topology")
        return f

    def electronic_neighbors(self, addr: NodeAddress) -> set[NodeAddress]:
        f = self._check(addr)
        return {self.nodes[n] for n in self._adj_elec[f]}

    def optical_partner(self, addr: NodeAddress) -> NodeAddress | None:
        f = self._check(addr)
        partner = self._optical_partner_flat[f]
        return None if partner is None else self.nodes[partner]

    def electronic_degree(self, addr: NodeAddress) -> int:
        return len(self._adj_elec[self._check(addr)])

    def diameter(self, group_only: bool = False) -> int:
        """Exact hop diameter by breadth-first search.

        With ``group_only`` the search is restricted to one group's
        electronic subgraph (all groups are isomorphic).
        """
        if group_only:
            p = self.config.processors_per_group
            dist = shortest_path(self._sparse_graph(limit=p), method="D", unweighted=True)
        else:
            dist = shortest_path(self._sparse_graph(), method="D", unweighted=True)
        if not np.isfinite(dist).all():
            raise RuntimeError("graph is not connected")
        return int(dist.max())

    def _sparse_graph(self, limit: int | None = None) -> csr_matrix:
        n = self.node_count if limit is None else limit
        rows: list[int] = []
        cols: list[int] = []
        for a, b in self._elec_pairs:
            if limit is None or (a < limit and b < limit):
                rows += (a, b)
                cols += (b, a)
        if limit is None:
            for a, b in self._opt_pairs:
                rows += (a, b)
                cols += (b, a)
        data = np.ones(len(rows), dtype=np.int8)
        return csr_matrix((data, (rows, cols)), shape=(n, n))

    def iter_links(self) -> Iterable[tuple[str, int, int]]:
        """Deterministic edge enumeration as (kind letter, flat_a, flat_b)."""
        for a, b in sorted(self._elec_pairs):
            yield "E", a, b
        for a, b in sorted(self._opt_pairs):
            yield "O", a, b


def build_ohhc(config: OhhcConfig) -> OhhcTopology:
    return OhhcTopology(config)


def write_edge_list(topo: OhhcTopology, out: IO[str]) -> None:
    """Write the topology as one ``E|O <flat_a> <flat_b>`` line per edge."""
    for kind, a, b in topo.iter_links():
        out.write(f"{kind} {a} {b}\n")
