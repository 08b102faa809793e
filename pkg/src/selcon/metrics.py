"""Scalar graph measures.

Conventions shared by every function here:

* ``inefficiency(G)`` sums ``1 - 1/d(u, v)`` over *ordered* pairs ``u != v``,
  with an unreachable pair contributing exactly ``1``.  Range ``[0, n(n-1)]``.
* ``harmonic_centrality(G, u)`` sums ``1/d(v, u)`` over ``v != u`` with
  ``1/INFINITY == 0``; ``total_harmonic`` sums that over all vertices, so the
  identities ``inefficiency = n(n-1) - total_harmonic`` and
  ``efficiency = total_harmonic / (n(n-1))`` hold up to float rounding.

Full-graph measures accumulate with ``math.fsum`` so the identities are
stable to well below 1e-9.  The ``subset_*`` variants avoid materializing
induced subgraphs and group vertices with identical closed neighborhoods
(mutually adjacent "twins") before running BFS; this is exact and collapses
the large twin blocks that show up in dense instances.
"""

from __future__ import annotations

import math
from collections import deque
from typing import Iterable

from .graph import INFINITY, Graph, InputError, _check_vertices

__all__ = [
    "harmonic_centrality",
    "total_harmonic",
    "inefficiency",
    "efficiency",
    "wiener_index",
    "betweenness",
    "density",
    "subset_inefficiency",
    "subset_wiener",
    "subset_diameter",
]


def _layer_counts(graph: Graph, source: int) -> tuple[list[int], int]:
    """(number of vertices at distance 1, 2, ...), count of unreachable."""
    bits = graph._bit_rows()
    seen = 1 << source
    frontier = bits[source]
    counts: list[int] = []
    reached = 1
    while frontier:
        frontier &= ~seen
        if not frontier:
            break
        c = frontier.bit_count()
        counts.append(c)
        reached += c
        seen |= frontier
        grow = 0
        f = frontier
        while f:
            low = f & -f
            grow |= bits[low.bit_length() - 1]
            f ^= low
        frontier = grow
    return counts, graph.vertex_count - reached


def harmonic_centrality(graph: Graph, u: int) -> float:
    """Sum of reciprocal distances from every other vertex to ``u``."""
    if not 0 <= u < graph.vertex_count:
        raise InputError(f"vertex {u} outside 0..{graph.vertex_count - 1}")
    counts, _ = _layer_counts(graph, u)
    return math.fsum(c / d for d, c in enumerate(counts, start=1))


def total_harmonic(graph: Graph) -> float:
    """Sum of harmonic centrality over all vertices; range [0, n(n-1)]."""
    terms = []
    for u in range(graph.vertex_count):
        counts, _ = _layer_counts(graph, u)
        terms.extend(c / d for d, c in enumerate(counts, start=1))
    return math.fsum(terms)


def inefficiency(graph: Graph) -> float:
    """Sum over ordered pairs of ``1 - 1/d``, unreachable pairs costing 1."""
    terms = []
    for u in range(graph.vertex_count):
        counts, unreached = _layer_counts(graph, u)
        terms.extend(c * (1.0 - 1.0 / d) for d, c in enumerate(counts, start=1))
        if unreached:
            terms.append(float(unreached))
    return math.fsum(terms)


def efficiency(graph: Graph) -> float:
    """``total_harmonic / (n(n-1))``, in [0, 1].  Undefined below 2 vertices."""
    n = graph.vertex_count
    if n < 2:
        raise InputError(f"efficiency undefined for {n} vertices")
    return total_harmonic(graph) / (n * (n - 1))


def wiener_index(graph: Graph) -> int | float:
    """Sum of pairwise distances (unordered); INFINITY if disconnected."""
    total = 0
    for u in range(graph.vertex_count):
        counts, unreached = _layer_counts(graph, u)
        if unreached:
            return INFINITY
        total += sum(c * d for d, c in enumerate(counts, start=1))
    return total // 2


def density(graph: Graph) -> float:
    """``|E| / (n(n-1)/2)``.  Undefined below 2 vertices."""
    n = graph.vertex_count
    if n < 2:
        raise InputError(f"density undefined for {n} vertices")
    return graph.edge_count / (n * (n - 1) / 2)


def betweenness(graph: Graph) -> list[float]:
    """Exact shortest-path betweenness, endpoints excluded.

    Normalized by ``(n-1)(n-2)`` so every value lies in [0, 1]; graphs with
    fewer than 3 vertices get all zeros.  Uses the standard forward BFS /
    backward dependency-accumulation scheme in ascending source order, so the
    result is deterministic.
    """
    n = graph.vertex_count
    raw = [0.0] * n
    if n < 3:
        return raw
    adjacency = graph.adjacency
    for s in range(n):
        # forward pass: BFS with shortest-path counts
        dist = [-1] * n
        sigma = [0] * n
        preds: list[list[int]] = [[] for _ in range(n)]
        dist[s] = 0
        sigma[s] = 1
        order: list[int] = []
        queue = deque([s])
        while queue:
            v = queue.popleft()
            order.append(v)
            dv = dist[v]
            sv = sigma[v]
            for w in adjacency[v]:
                if dist[w] < 0:
                    dist[w] = dv + 1
                    queue.append(w)
                if dist[w] == dv + 1:
                    sigma[w] += sv
                    preds[w].append(v)
        # backward pass: dependency accumulation
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                raw[w] += delta[w]
    norm = (n - 1) * (n - 2)
    return [x / norm for x in raw]


# -- subset variants -------------------------------------------------------


def _twin_classes(
    graph: Graph, verts: tuple[int, ...]
) -> tuple[list[int], list[int], list[int]]:
    """Group ``verts`` by closed neighborhood restricted to the subset.

    Vertices in one class are mutually adjacent and interchangeable, so the
    induced distance between two vertices of different classes equals the
    distance between their classes in the quotient graph, and equals 1 within
    a class.  Returns (class sizes, representative members, quotient
    adjacency bitmasks), with classes ordered by smallest member.
    """
    bits = graph._bit_rows()
    mask = 0
    for v in verts:
        mask |= 1 << v
    index: dict[int, int] = {}
    sizes: list[int] = []
    reps: list[int] = []
    for v in verts:
        sig = (bits[v] & mask) | (1 << v)
        i = index.get(sig)
        if i is None:
            index[sig] = len(sizes)
            sizes.append(1)
            reps.append(v)
        else:
            sizes[i] += 1
    c = len(sizes)
    qadj = []
    for i in range(c):
        row_bits = bits[reps[i]]
        row = 0
        for j in range(c):
            if j != i and (row_bits >> reps[j]) & 1:
                row |= 1 << j
        qadj.append(row)
    return sizes, reps, qadj


def subset_inefficiency(graph: Graph, members: Iterable[int]) -> float:
    """Inefficiency of the induced subgraph, without materializing it.

    Matches ``inefficiency(induced_subgraph(graph, members).graph)`` up to
    float summation order (well within 1e-9); used as the evaluator inside
    the search algorithms.  Accumulates in class order, so results are
    deterministic for a given input regardless of caller parallelism.
    """
    verts = _check_vertices(graph, members)
    k = len(verts)
    if k < 2:
        return 0.0
    sizes, _, qadj = _twin_classes(graph, verts)
    c = len(sizes)
    if c == 1:
        return 0.0
    total = 0.0
    for i in range(c):
        si = sizes[i]
        seen = 1 << i
        frontier = qadj[i] & ~seen
        d = 1
        acc = 0.0
        while frontier:
            inv = 1.0 / d
            f = frontier
            while f:
                low = f & -f
                acc += sizes[low.bit_length() - 1] * inv
                f ^= low
            seen |= frontier
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= qadj[low.bit_length() - 1]
                f ^= low
            frontier = grow & ~seen
            d += 1
        # within-class ordered pairs sit at distance 1 and cost 0
        total += si * ((k - si) - acc)
    return total


def subset_wiener(graph: Graph, members: Iterable[int]) -> int | float:
    """Wiener index of the induced subgraph; INFINITY if it is disconnected."""
    verts = _check_vertices(graph, members)
    k = len(verts)
    if k < 2:
        return 0
    sizes, _, qadj = _twin_classes(graph, verts)
    c = len(sizes)
    within = sum(s * (s - 1) // 2 for s in sizes)
    if c == 1:
        return within
    ordered = 0
    for i in range(c):
        si = sizes[i]
        seen = 1 << i
        frontier = qadj[i] & ~seen
        d = 1
        acc = 0
        reached = si
        while frontier:
            f = frontier
            while f:
                low = f & -f
                sj = sizes[low.bit_length() - 1]
                acc += sj * d
                reached += sj
                f ^= low
            seen |= frontier
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= qadj[low.bit_length() - 1]
                f ^= low
            frontier = grow & ~seen
            d += 1
        if reached < k:
            return INFINITY
        ordered += si * acc
    return within + ordered // 2


def subset_diameter(graph: Graph, members: Iterable[int]) -> int | float:
    """Largest pairwise distance in the induced subgraph; INFINITY if split."""
    verts = _check_vertices(graph, members)
    if len(verts) < 2:
        return 0
    sizes, _, qadj = _twin_classes(graph, verts)
    c = len(sizes)
    if c == 1:
        return 1
    best = 1 if any(s > 1 for s in sizes) else 0
    for i in range(c):
        seen = 1 << i
        frontier = qadj[i] & ~seen
        d = 0
        reached = 1
        while frontier:
            d += 1
            reached += frontier.bit_count()
            seen |= frontier
            grow = 0
            f = frontier
            while f:
                low = f & -f
                grow |= qadj[low.bit_length() - 1]
                f ^= low
            frontier = grow & ~seen
        if reached < c:
            return INFINITY
        best = max(best, d)
    return best
