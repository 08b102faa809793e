"""Solution statistics and batch aggregation.

`solution_stats` measures one ``(graph, query, solution)`` triple: objective
and shape of the induced solution subgraph, how many query vertices ended up
as singletons, and how central the added (non-query) vertices are *in the
full graph* - in-subgraph centrality would be nearly constant for the tiny
solutions these searches produce.
"""

from __future__ import annotations

import csv
import math
from dataclasses import asdict, dataclass
from typing import IO, Iterable, Mapping

from .graph import Graph, InputError, _check_vertices, subset_components
from .metrics import betweenness, harmonic_centrality, subset_inefficiency

__all__ = ["SolutionReport", "solution_stats", "report_to_dict", "write_batch_csv"]


@dataclass(frozen=True)
class SolutionReport:
    """Evaluation statistics for one solution."""

    inefficiency: float
    vertex_count: int
    density: float
    component_count: int
    singleton_query_count: int
    added_vertices: tuple[int, ...]
    mean_betweenness_added: float
    mean_harmonic_added: float
    runtime_ms: float


def solution_stats(
    graph: Graph,
    query: Iterable[int],
    solution: Iterable[int],
    runtime_ms: float = 0.0,
) -> SolutionReport:
    """Statistics of the induced solution subgraph.

    ``density`` is reported as 0.0 for solutions below two vertices, and the
    added-vertex centrality means are 0.0 when nothing was added, so every
    field is defined for every valid input.
    """
    q = _check_vertices(graph, query)
    s = _check_vertices(graph, solution)
    if not set(q) <= set(s):
        missing = sorted(set(q) - set(s))
        raise InputError(f"query vertices {missing} not in the solution")
    k = len(s)
    comps = subset_components(graph, s)
    bits = graph._bit_rows()
    smask = 0
    for v in s:
        smask |= 1 << v
    singletons = sum(1 for v in q if bits[v] & smask == 0)
    added = tuple(v for v in s if v not in set(q))
    if added:
        bc = betweenness(graph)
        mean_bc = math.fsum(bc[v] for v in added) / len(added)
        mean_hc = math.fsum(
            harmonic_centrality(graph, v) for v in added
        ) / len(added)
    else:
        mean_bc = 0.0
        mean_hc = 0.0
    edge_pairs = sum(
        1 for v in s for w in graph.adjacency[v] if w > v and (smask >> w) & 1
    )
    return SolutionReport(
        inefficiency=subset_inefficiency(graph, s),
        vertex_count=k,
        density=edge_pairs / (k * (k - 1) / 2) if k >= 2 else 0.0,
        component_count=len(comps),
        singleton_query_count=singletons,
        added_vertices=added,
        mean_betweenness_added=mean_bc,
        mean_harmonic_added=mean_hc,
        runtime_ms=runtime_ms,
    )


def report_to_dict(report: SolutionReport) -> dict:
    """JSON-ready dict with exactly the report fields, snake_case keys."""
    out = asdict(report)
    out["added_vertices"] = list(report.added_vertices)
    return out


_NUMERIC_FIELDS = [
    "inefficiency",
    "vertex_count",
    "density",
    "component_count",
    "singleton_query_count",
    "added_count",
    "mean_betweenness_added",
    "mean_harmonic_added",
    "runtime_ms",
]


def write_batch_csv(
    rows: Iterable[tuple[Mapping[str, object], SolutionReport]],
    out: IO[str],
    extra_numeric: Iterable[str] = (),
) -> None:
    """One CSV row per run plus a trailing mean row.

    ``rows`` pairs per-run metadata (written first, in the order of the
    first row's keys) with the run's report.  The mean row averages the
    numeric report columns and any ``extra_numeric`` metadata columns.
    """
    rows = list(rows)
    if not rows:
        raise InputError("no rows to write")
    meta_keys = list(rows[0][0].keys())
    extra = list(extra_numeric)
    report_cols = _NUMERIC_FIELDS[:6] + ["added_vertices"] + _NUMERIC_FIELDS[6:]
    header = meta_keys + report_cols
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    sums: dict[str, float] = {c: 0.0 for c in _NUMERIC_FIELDS + extra}
    for meta, rep in rows:
        record = dict(meta)
        record.update(report_to_dict(rep))
        record["added_count"] = len(rep.added_vertices)
        record["added_vertices"] = " ".join(str(v) for v in rep.added_vertices)
        writer.writerow([record[c] for c in header])
        for c in sums:
            sums[c] += float(record[c])
    mean_row = []
    for c in header:
        if c in sums:
            mean_row.append(sums[c] / len(rows))
        elif c == meta_keys[0]:
            mean_row.append("mean")
        else:
            mean_row.append("")
    writer.writerow(mean_row)
