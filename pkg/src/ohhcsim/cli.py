"""Experiment runner: single runs, sweeps over the experiment matrix, array
generation and topology export.

Commands:

* ``run``: one simulated run; emits a JSON or CSV report.
* ``sweep``: the full dimension x mode x distribution x size grid as CSV.
* ``gen``: write a generated input array to a file.
* ``topology``: export the network edge list.

Reports from the reference engine contain no timestamps and are byte-stable:
the same invocation always produces the same bytes. The measure engine adds
wall-clock fields, which naturally vary between runs.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

from . import analytics, kernels
from .partition import (
    DEFAULT_VALUE_RANGE,
    DistributionKind,
    DistributionSpec,
    generate,
    read_array,
    write_array,
)
from .quicksort import BaselineResult, sequential_baseline
from .simulator import run_parallel_sort, timed_bucket_sort_wall
from .topology import GroupMode, OhhcConfig, build_ohhc, write_edge_list

SCHEMA_VERSION = 1

#: Element counts of the "megabyte" size presets, at 4 bytes per element.
MB_ELEMENTS = 1024 * 1024 // 4

SWEEP_COLUMNS = [
    "dimension",
    "mode",
    "dist",
    "count",
    "seed",
    "groups",
    "processors_per_group",
    "nodes",
    "status",
    "comm_steps",
    "scatter_rounds",
    "gather_rounds",
    "parallel_rounds",
    "max_hops",
    "recursion_calls_total",
    "iterations_total",
    "swaps_total",
    "comparisons_total",
    "baseline_cost_units",
    "max_node_cost_units",
    "modeled_makespan",
    "measured_speedup",
    "measured_efficiency",
    "makespan_speedup",
    "makespan_efficiency",
    "speedup_model",
    "efficiency_model",
]


@dataclass(frozen=True)
class RunConfig:
    dimension: int
    group_mode: GroupMode
    dist: DistributionKind | None
    element_count: int | None
    seed: int
    value_range: tuple[int, int] = DEFAULT_VALUE_RANGE
    engine: str = "reference"
    input_path: str | None = None

    def distribution_spec(self) -> DistributionSpec | None:
        if self.input_path is not None:
            return None
        return DistributionSpec(self.dist, self.element_count, self.seed, self.value_range)


def load_master(cfg: RunConfig):
    if cfg.input_path is not None:
        return read_array(cfg.input_path)
    return generate(cfg.distribution_spec())


@lru_cache(maxsize=None)
def _cached_topology(dimension: int, mode: GroupMode):
    return build_ohhc(OhhcConfig(dimension, mode))


def execute_run(cfg: RunConfig, trace_path: str | None = None) -> dict:
    """Run one cell and return the result dictionary."""
    result, _ = _execute_cell(cfg, trace_path, None)
    return result


def _execute_cell(
    cfg: RunConfig,
    trace_path: str | None,
    baseline: BaselineResult | None,
) -> tuple[dict, BaselineResult]:
    """Run one cell; also returns the baseline so the sweep can reuse it for
    later cells that share the same input array."""
    topo = _cached_topology(cfg.dimension, cfg.group_mode)
    master = load_master(cfg)
    n = int(master.size)
    measure = cfg.engine == "measure"
    workers = os.cpu_count() or 1 if measure else None

    if baseline is None:
        baseline = sequential_baseline(master, measure=measure)

    trace_fh = open(trace_path, "w") if trace_path else None
    try:
        report = run_parallel_sort(topo, master, trace=trace_fh, sort_workers=workers)
    finally:
        if trace_fh:
            trace_fh.close()

    out = {
        "schema_version": SCHEMA_VERSION,
        "backend": kernels.active_backend(),
        "config": {
            "dimension": cfg.dimension,
            "mode": cfg.group_mode.value,
            "dist": cfg.dist.value if cfg.dist else None,
            "count": n,
            "seed": cfg.seed,
            "value_range": list(cfg.value_range),
            "engine": cfg.engine,
            "input_path": cfg.input_path,
        },
        "topology": {
            "groups": topo.config.group_count,
            "processors_per_group": topo.config.processors_per_group,
            "nodes": topo.config.node_count,
            "group_diameter": topo.diameter(group_only=True),
        },
        "simulation": {
            "comm_steps_total": report.comm_steps_total,
            "scatter_rounds": report.scatter_rounds,
            "gather_rounds": report.gather_rounds,
            "parallel_rounds": report.parallel_rounds,
            "max_message_hops": report.max_message_hops,
            "gather_units_at_master": report.gather_units_at_master,
            "message_count": report.message_count,
            "totals": report.totals.as_dict(),
            "max_node_cost_units": report.max_node_cost_units,
            "modeled_makespan": report.modeled_makespan,
            "bucket_elements_min": int(report.bucket_elements.min()),
            "bucket_elements_max": int(report.bucket_elements.max()),
        },
        "baseline": {
            "metrics": baseline.metrics.as_dict(),
            "cost_units": baseline.cost_units,
        },
        "measured": _measured_section(baseline, report, topo.config.node_count),
        "models": _model_section(n, topo),
        "checks": {
            "comm_steps_match_closed_form": report.comm_steps_total
            == analytics.comm_steps_closed_form(topo.config.group_count, cfg.dimension),
            "output_matches_baseline": report.sorted_values.tobytes()
            == baseline.values.tobytes(),
            "hops_within_bound": report.max_message_hops
            <= analytics.path_link_count(cfg.dimension),
            "units_conserved": report.gather_units_at_master == topo.config.node_count,
        },
    }
    if measure:
        wall = timed_bucket_sort_wall(topo, master, workers)
        out["wall_clock"] = {
            "workers": workers,
            "baseline_seconds": baseline.wall_seconds,
            "bucket_sort_seconds": wall,
            "speedup": (
                baseline.wall_seconds / wall
                if wall > 0 and baseline.wall_seconds is not None
                else None
            ),
        }
    return out, baseline


def _measured_section(baseline: BaselineResult, report, n_procs: int) -> dict:
    parallel_units = analytics.parallel_cost_units(report)
    section: dict = {
        "parallel_cost_units": parallel_units,
        "speedup": None,
        "efficiency": None,
        "makespan_speedup": None,
        "makespan_efficiency": None,
    }
    if parallel_units > 0 and baseline.cost_units > 0:
        s = analytics.measured_speedup(baseline.cost_units, parallel_units)
        section["speedup"] = s
        section["efficiency"] = analytics.measured_efficiency(s, n_procs)
    if report.modeled_makespan > 0 and baseline.cost_units > 0:
        s = analytics.measured_speedup(baseline.cost_units, report.modeled_makespan)
        section["makespan_speedup"] = s
        section["makespan_efficiency"] = analytics.measured_efficiency(s, n_procs)
    return section


def _model_section(n: int, topo) -> dict:
    n_procs = topo.config.node_count
    d = topo.config.dimension
    models: dict = {
        "comm_steps": analytics.comm_steps_closed_form(topo.config.group_count, d),
        "path_link_count": analytics.path_link_count(d),
        "parallel_time": None,
        "speedup": None,
        "efficiency": None,
        "message_delay_avg": None,
        "message_delay_worst": analytics.message_delay_model(0, d, worst_case=True, n=n),
    }
    if n >= n_procs:
        models["parallel_time"] = analytics.parallel_time_model(n, n_procs)
        models["message_delay_avg"] = analytics.message_delay_model(n / n_procs, d)
    if n_procs < n:
        models["speedup"] = analytics.speedup_model(n, n_procs)
        models["efficiency"] = analytics.efficiency_model(n, n_procs)
    return models


def run_to_row(result: dict) -> dict:
    """Flatten a run result into a sweep CSV row."""
    cfg = result["config"]
    sim = result["simulation"]
    meas = result["measured"]
    return {
        "dimension": cfg["dimension"],
        "mode": cfg["mode"],
        "dist": cfg["dist"],
        "count": cfg["count"],
        "seed": cfg["seed"],
        "groups": result["topology"]["groups"],
        "processors_per_group": result["topology"]["processors_per_group"],
        "nodes": result["topology"]["nodes"],
        "status": "ok",
        "comm_steps": sim["comm_steps_total"],
        "scatter_rounds": sim["scatter_rounds"],
        "gather_rounds": sim["gather_rounds"],
        "parallel_rounds": sim["parallel_rounds"],
        "max_hops": sim["max_message_hops"],
        "recursion_calls_total": sim["totals"]["recursion_calls"],
        "iterations_total": sim["totals"]["iterations"],
        "swaps_total": sim["totals"]["swaps"],
        "comparisons_total": sim["totals"]["comparisons"],
        "baseline_cost_units": result["baseline"]["cost_units"],
        "max_node_cost_units": sim["max_node_cost_units"],
        "modeled_makespan": sim["modeled_makespan"],
        "measured_speedup": meas["speedup"],
        "measured_efficiency": meas["efficiency"],
        "makespan_speedup": meas["makespan_speedup"],
        "makespan_efficiency": meas["makespan_efficiency"],
        "speedup_model": result["models"]["speedup"],
        "efficiency_model": result["models"]["efficiency"],
    }


def sweep_cells(dimensions, modes, dists, counts, seed):
    """Cell enumeration order: distribution, size, dimension, mode.

    Cells sharing an input array are adjacent so the sweep can reuse one
    sequential baseline across them.
    """
    for dist in dists:
        for count in counts:
            for dim in dimensions:
                for mode in modes:
                    yield RunConfig(dim, mode, dist, count, seed)


def execute_sweep(cells, out_fh) -> int:
    """Run every cell, one CSV row each; returns the number of failed cells.

    A failing cell is marked in its status column and the sweep continues.
    """
    writer = csv.DictWriter(out_fh, fieldnames=SWEEP_COLUMNS)
    writer.writeheader()
    failures = 0
    last_key = None
    baseline = None
    for cfg in cells:
        key = (cfg.dist, cfg.element_count, cfg.seed, cfg.value_range, cfg.input_path)
        if key != last_key:
            baseline = None
        try:
            result, baseline = _execute_cell(cfg, None, baseline)
            last_key = key
            row = run_to_row(result)
        except Exception as exc:  # noqa: BLE001 - report and continue
            failures += 1
            last_key = None
            baseline = None
            row = {c: "" for c in SWEEP_COLUMNS}
            row.update(
                {
                    "dimension": cfg.dimension,
                    "mode": cfg.group_mode.value,
                    "dist": cfg.dist.value if cfg.dist else None,
                    "count": cfg.element_count,
                    "seed": cfg.seed,
                    "status": f"error: {exc}",
                }
            )
        writer.writerow(row)
    return failures


# -- argument parsing --------------------------------------------------------


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {text}")
    return value


def _mode(text: str) -> GroupMode:
    try:
        return GroupMode(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown mode {text!r} (full or half)") from None


def _dist(text: str) -> DistributionKind:
    try:
        return DistributionKind(text)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"unknown distribution {text!r} (random, sorted, reversed, local)"
        ) from None


def _int_list(text: str) -> list[int]:
    return [int(part) for part in text.split(",") if part]


def _out_path(raw: str | None) -> Path | None:
    """Resolve an output path against OHHCSIM_OUT_DIR for relative names."""
    if raw is None:
        return None
    path = Path(raw)
    base = os.environ.get("OHHCSIM_OUT_DIR")
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ohhcsim",
        description="Simulate parallel Quick Sort on an OTIS Hyper Hexa-Cell network.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="execute one simulated run")
    run_p.add_argument("--dimension", type=_positive_int, required=True)
    run_p.add_argument("--mode", type=_mode, default=GroupMode.FULL)
    run_p.add_argument("--dist", type=_dist, default=DistributionKind.RANDOM)
    run_p.add_argument("--count", type=_positive_int)
    run_p.add_argument("--seed", type=int, default=0)
    run_p.add_argument("--value-lo", type=int, default=DEFAULT_VALUE_RANGE[0])
    run_p.add_argument("--value-hi", type=int, default=DEFAULT_VALUE_RANGE[1])
    run_p.add_argument("--engine", choices=["reference", "measure"], default="reference")
    run_p.add_argument("--format", choices=["json", "csv"], default="json")
    run_p.add_argument("--trace", metavar="PATH", help="write one line per message")
    run_p.add_argument("--out", metavar="PATH", help="report file (default: stdout)")
    run_p.add_argument("--input", metavar="PATH", help="read the array from a file instead")

    sweep_p = sub.add_parser(
        "sweep",
        help="run the experiment grid and emit a CSV table",
        description=(
            "Default grid: dimensions 1-4, both group modes, all four "
            "distributions and the 10..60 megabyte size presets (at 4 bytes "
            "per element). That is 192 parallel cells plus 24 distinct "
            "sequential baselines, 216 runs in total. The 216-run composition "
            "is a documented convention of this tool, not a fixed standard; "
            "override any axis with the flags below."
        ),
    )
    sweep_p.add_argument("--dimensions", type=_int_list, default=[1, 2, 3, 4])
    sweep_p.add_argument(
        "--modes", type=lambda s: [_mode(p) for p in s.split(",") if p],
        default=[GroupMode.FULL, GroupMode.HALF],
    )
    sweep_p.add_argument(
        "--dists", type=lambda s: [_dist(p) for p in s.split(",") if p],
        default=list(DistributionKind),
    )
    sweep_p.add_argument("--counts", type=_int_list, help="element counts, comma separated")
    sweep_p.add_argument(
        "--sizes-mb", type=_int_list, default=[10, 20, 30, 40, 50, 60],
        help="size presets in megabytes, used when --counts is not given",
    )
    sweep_p.add_argument("--seed", type=int, default=0)
    sweep_p.add_argument("--engine", choices=["reference", "measure"], default="reference")
    sweep_p.add_argument("--out", metavar="PATH", help="CSV file (default: stdout)")

    gen_p = sub.add_parser("gen", help="generate an input array file")
    gen_p.add_argument("--dist", type=_dist, default=DistributionKind.RANDOM)
    gen_p.add_argument("--count", type=_positive_int, required=True)
    gen_p.add_argument("--seed", type=int, default=0)
    gen_p.add_argument("--value-lo", type=int, default=DEFAULT_VALUE_RANGE[0])
    gen_p.add_argument("--value-hi", type=int, default=DEFAULT_VALUE_RANGE[1])
    gen_p.add_argument(
        "--out", metavar="PATH", required=True,
        help="output file; .bin/.i64 means raw little-endian int64, else text",
    )

    topo_p = sub.add_parser("topology", help="export the network edge list")
    topo_p.add_argument("--dimension", type=_positive_int, required=True)
    topo_p.add_argument("--mode", type=_mode, default=GroupMode.FULL)
    topo_p.add_argument("--out", metavar="PATH", help="edge list file (default: stdout)")

    return parser


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def _cmd_run(args) -> int:
    if args.input is None and args.count is None:
        print("error: --count is required unless --input is given", file=sys.stderr)
        return 2
    cfg = RunConfig(
        dimension=args.dimension,
        group_mode=args.mode,
        dist=args.dist if args.input is None else None,
        element_count=args.count,
        seed=args.seed,
        value_range=(args.value_lo, args.value_hi),
        engine=args.engine,
        input_path=args.input,
    )
    trace_path = _out_path(args.trace)
    result = execute_run(cfg, trace_path=str(trace_path) if trace_path else None)
    if args.format == "json":
        text = json.dumps(result, indent=2, sort_keys=True) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=SWEEP_COLUMNS)
        writer.writeheader()
        writer.writerow(run_to_row(result))
        text = buf.getvalue()
    _emit(text, _out_path(args.out))
    return 0


def _cmd_sweep(args) -> int:
    counts = args.counts if args.counts else [mb * MB_ELEMENTS for mb in args.sizes_mb]
    cells = list(sweep_cells(args.dimensions, args.modes, args.dists, counts, args.seed))
    if not cells:
        print("error: empty sweep matrix", file=sys.stderr)
        return 2
    if args.engine == "measure":
        cells = [
            RunConfig(c.dimension, c.group_mode, c.dist, c.element_count, c.seed, c.value_range, "measure")
            for c in cells
        ]
    out = _out_path(args.out)
    if out is None:
        failures = execute_sweep(cells, sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            failures = execute_sweep(cells, fh)
    if failures:
        print(f"{failures} cell(s) failed", file=sys.stderr)
        return 1
    return 0


def _cmd_gen(args) -> int:
    spec = DistributionSpec(args.dist, args.count, args.seed, (args.value_lo, args.value_hi))
    out = _out_path(args.out)
    write_array(out, generate(spec))
    return 0


def _cmd_topology(args) -> int:
    topo = build_ohhc(OhhcConfig(args.dimension, args.mode))
    out = _out_path(args.out)
    if out is None:
        write_edge_list(topo, sys.stdout)
    else:
        with open(out, "w") as fh:
            write_edge_list(topo, fh)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "topology":
            return _cmd_topology(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
