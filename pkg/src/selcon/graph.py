"""Immutable simple undirected graph with BFS-based primitives.

Vertices are dense integers ``0 .. n-1``; external string labels are mapped
to ids at ingestion time.  Unreachable distances are reported as the
:data:`INFINITY` sentinel (``math.inf``), never as a large finite number, so
callers can treat ``1/d`` of an unreachable pair as exactly ``0`` with an
explicit branch.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable, NamedTuple, Sequence

INFINITY = math.inf


class InputError(ValueError):
    """Caller-supplied data violates a documented precondition."""


def vertex_set(ids: Iterable[int]) -> tuple[int, ...]:
    """Canonical vertex set: sorted ascending, duplicates dropped."""
    return tuple(sorted(set(ids)))


class Graph:
    """Simple undirected unweighted graph in canonical form.

    Invariants: no self-loops, no duplicate edges, neighbor lists sorted
    ascending.  Instances are immutable after construction and safe to share
    across concurrent workers; every operation in this package is read-only.

    Attributes:
        vertex_count: number of vertices.
        adjacency: tuple of per-vertex sorted neighbor tuples.
        labels: optional tuple of external vertex labels, or ``None``.
    """

    __slots__ = ("vertex_count", "adjacency", "labels", "_bits")

    def __init__(
        self,
        vertex_count: int,
        adjacency: Sequence[Sequence[int]],
        labels: Sequence[str] | None = None,
    ):
        self.vertex_count = vertex_count
        self.adjacency = tuple(tuple(nbrs) for nbrs in adjacency)
        self.labels = tuple(labels) if labels is not None else None
        self._bits: tuple[int, ...] | None = None

    # -- basic queries ----------------------------------------------------

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def degree(self, u: int) -> int:
        return len(self.adjacency[u])

    def neighbors(self, u: int) -> tuple[int, ...]:
        return self.adjacency[u]

    def has_edge(self, u: int, v: int) -> bool:
        return (self._bit_rows()[u] >> v) & 1 == 1

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) pairs with u < v, lexicographically sorted."""
        return [
            (u, v)
            for u in range(self.vertex_count)
            for v in self.adjacency[u]
            if u < v
        ]

    def label_of(self, u: int) -> str:
        return self.labels[u] if self.labels is not None else str(u)

    def _bit_rows(self) -> tuple[int, ...]:
        """Adjacency as one int bitmask per vertex (lazily cached).

        The cache write is idempotent, so a benign race between readers is
        harmless.
        """
        if self._bits is None:
            rows = []
            for nbrs in self.adjacency:
                row = 0
                for v in nbrs:
                    row |= 1 << v
                rows.append(row)
            self._bits = tuple(rows)
        return self._bits

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.adjacency == other.adjacency
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.adjacency))

    def __repr__(self) -> str:
        return f"Graph(n={self.vertex_count}, m={self.edge_count})"


def build_graph(
    edge_list: Iterable[tuple[int, int]],
    vertex_count: int,
    labels: Sequence[str] | None = None,
) -> Graph:
    """Build a canonical graph from an edge list.

    Duplicate edges (in either orientation) are deduplicated silently;
    self-loops are rejected because the representation is a simple graph.

    Raises:
        InputError: on a self-loop or an id outside ``0 .. vertex_count-1``.
    """
    if vertex_count < 0:
        raise InputError(f"vertex_count must be non-negative, got {vertex_count}")
    if labels is not None and len(labels) != vertex_count:
        raise InputError(
            f"{len(labels)} labels given for {vertex_count} vertices"
        )
    neighbor_sets: list[set[int]] = [set() for _ in range(vertex_count)]
    for u, v in edge_list:
        if not (0 <= u < vertex_count and 0 <= v < vertex_count):
            raise InputError(
                f"edge ({u}, {v}) has an id outside 0..{vertex_count - 1}"
            )
        if u == v:
            raise InputError(f"self-loop ({u}, {v}) is not allowed")
        neighbor_sets[u].add(v)
        neighbor_sets[v].add(u)
    return Graph(vertex_count, [sorted(s) for s in neighbor_sets], labels)


def _check_vertices(graph: Graph, verts: Iterable[int]) -> tuple[int, ...]:
    vs = vertex_set(verts)
    if vs and (vs[0] < 0 or vs[-1] >= graph.vertex_count):
        bad = vs[0] if vs[0] < 0 else vs[-1]
        raise InputError(
            f"vertex {bad} outside 0..{graph.vertex_count - 1}"
        )
    return vs


class InducedSubgraph(NamedTuple):
    """Induced subgraph plus the id remapping in both directions.

    ``to_original[local]`` is the original id of local vertex ``local``;
    ``to_local`` maps original ids back.  Local ids follow the sorted order
    of the inducing set, so the mapping is stable.
    """

    graph: Graph
    to_original: tuple[int, ...]
    to_local: dict[int, int]


def induced_subgraph(graph: Graph, members: Iterable[int]) -> InducedSubgraph:
    """Subgraph induced by ``members``: exactly the edges with both ends inside."""
    vs = _check_vertices(graph, members)
    to_local = {v: i for i, v in enumerate(vs)}
    adjacency = [
        [to_local[w] for w in graph.adjacency[v] if w in to_local] for v in vs
    ]
    labels = None
    if graph.labels is not None:
        labels = [graph.labels[v] for v in vs]
    return InducedSubgraph(Graph(len(vs), adjacency, labels), vs, to_local)


def bfs_distances(graph: Graph, source: int) -> list[int | float]:
    """Hop distances from ``source``; unreachable vertices get INFINITY."""
    if not 0 <= source < graph.vertex_count:
        raise InputError(
            f"source {source} outside 0..{graph.vertex_count - 1}"
        )
    dist: list[int | float] = [INFINITY] * graph.vertex_count
    dist[source] = 0
    queue = deque([source])
    adjacency = graph.adjacency
    while queue:
        v = queue.popleft()
        d = dist[v] + 1
        for w in adjacency[v]:
            if dist[w] is INFINITY:
                dist[w] = d
                queue.append(w)
    return dist


def _mask_bfs(bits: Sequence[int], mask: int, start: int) -> int:
    """Bitmask of vertices reachable from ``start`` inside ``mask``.

    ``start`` is a single-bit mask and must be inside ``mask``.
    """
    seen = start
    frontier = start
    while frontier:
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= bits[low.bit_length() - 1]
            f ^= low
        frontier = grow & mask & ~seen
        seen |= frontier
    return seen


def _bits_to_tuple(mask: int) -> tuple[int, ...]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return tuple(out)


def subset_components(graph: Graph, members: Iterable[int]) -> list[tuple[int, ...]]:
    """Connected components of the induced subgraph, in original ids.

    Components are ordered by smallest member; members sorted ascending.
    """
    vs = _check_vertices(graph, members)
    bits = graph._bit_rows()
    mask = 0
    for v in vs:
        mask |= 1 << v
    comps = []
    remaining = mask
    while remaining:
        low = remaining & -remaining
        reached = _mask_bfs(bits, remaining, low)
        comps.append(_bits_to_tuple(reached))
        remaining &= ~reached
    return comps


def connected_components(graph: Graph) -> list[tuple[int, ...]]:
    """Partition of V into connected components, sorted by smallest member."""
    return subset_components(graph, range(graph.vertex_count))


# -- edge-list text format ------------------------------------------------
#
# One edge per line, two whitespace-separated tokens (integer ids or labels);
# lines starting with '#' and blank lines are ignored.  Label mode assigns
# ids in first-seen order.


def _is_int_token(tok: str) -> bool:
    return tok.isdigit() or (tok.startswith("-") and tok[1:].isdigit())


def read_graph_text(text: str) -> Graph:
    """Parse the edge-list text format into a Graph.

    If every token is a non-negative integer the ids are used directly and
    ``vertex_count`` is ``max_id + 1``; otherwise tokens are treated as
    labels assigned ids in first-seen order.
    """
    pairs: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(
                f"line {lineno}: expected two tokens, got {len(tokens)}: {raw!r}"
            )
        pairs.append((tokens[0], tokens[1], lineno))

    integer_mode = all(
        _is_int_token(a) and _is_int_token(b) for a, b, _ in pairs
    )
    edges: list[tuple[int, int]] = []
    if integer_mode:
        max_id = -1
        for a, b, lineno in pairs:
            u, v = int(a), int(b)
            if u < 0 or v < 0:
                raise InputError(f"line {lineno}: negative vertex id {min(u, v)}")
            if u == v:
                raise InputError(f"line {lineno}: self-loop on {u}")
            max_id = max(max_id, u, v)
            edges.append((u, v))
        return build_graph(edges, max_id + 1)

    ids: dict[str, int] = {}
    for a, b, lineno in pairs:
        if a == b:
            raise InputError(f"line {lineno}: self-loop on {a!r}")
        for tok in (a, b):
            if tok not in ids:
                ids[tok] = len(ids)
        edges.append((ids[a], ids[b]))
    labels = [""] * len(ids)
    for tok, i in ids.items():
        labels[i] = tok
    return build_graph(edges, len(ids), labels)


def read_graph(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return read_graph_text(fh.read())
