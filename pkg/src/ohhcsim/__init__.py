"""Deterministic simulator of parallel Quick Sort on the OTIS Hyper Hexa-Cell network."""

from .analytics import (
    comm_steps_closed_form,
    efficiency_model,
    measured_efficiency,
    measured_speedup,
    message_delay_model,
    parallel_time_model,
    speedup_model,
)
from .gather import GatherPlan, build_gather_plan
from .kernels import active_backend
from .partition import BucketSet, DistributionKind, DistributionSpec, generate, split
from .quicksort import SortMetrics, quicksort, sequential_baseline
from .simulator import PayloadChunk, SimReport, count_comm_steps, max_hops, run_parallel_sort
from .topology import (
    GroupMode,
    Link,
    LinkKind,
    NodeAddress,
    OhhcConfig,
    OhhcTopology,
    build_ohhc,
    flat_index_of,
    resolve,
    write_edge_list,
)

__version__ = "0.1.0"

__all__ = [
    "BucketSet",
    "DistributionKind",
    "DistributionSpec",
    "GatherPlan",
    "GroupMode",
    "Link",
    "LinkKind",
    "NodeAddress",
    "OhhcConfig",
    "OhhcTopology",
    "PayloadChunk",
    "SimReport",
    "SortMetrics",
    "active_backend",
    "build_gather_plan",
    "build_ohhc",
    "comm_steps_closed_form",
    "count_comm_steps",
    "efficiency_model",
    "flat_index_of",
    "generate",
    "max_hops",
    "measured_efficiency",
    "measured_speedup",
    "message_delay_model",
    "parallel_time_model",
    "quicksort",
    "resolve",
    "run_parallel_sort",
    "sequential_baseline",
    "speedup_model",
    "split",
    "write_edge_list",
]
