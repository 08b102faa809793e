"""Seed connectors, the greedy relaxing search, and exact oracles.

The pipeline: build a connected seed superset of the query (`mwc_connector`
or `ctp_connector`), then `greedy_relax` deletes non-query vertices one at a
time, always the one whose removal yields the lowest inefficiency, and
returns the best subgraph seen along the whole deletion chain.  `gra_mis`
wires the two stages together.  `exhaustive_relax` and `brute_force_mis` are
the exponential references used for validation on small instances.

Determinism contract: every tie is broken explicitly (smallest vertex id for
per-step removals; fewest vertices then lexicographic order for set-valued
results), so identical inputs give identical outputs under any scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .graph import (
    Graph,
    InputError,
    _check_vertices,
    _mask_bfs,
    bfs_distances,
    subset_components,
    vertex_set,
)
from .metrics import subset_inefficiency, subset_wiener

__all__ = [
    "EXHAUSTIVE_CAP_DEFAULT",
    "BRUTE_FORCE_CAP_DEFAULT",
    "SearchCapExceeded",
    "RelaxStep",
    "RelaxTrace",
    "mwc_connector",
    "ctp_connector",
    "greedy_relax",
    "gra_mis",
    "exhaustive_relax",
    "brute_force_mis",
]

EXHAUSTIVE_CAP_DEFAULT = 20
BRUTE_FORCE_CAP_DEFAULT = 22


class SearchCapExceeded(RuntimeError):
    """An exponential search was refused because the candidate pool is too big."""

    def __init__(self, what: str, pool_size: int, cap: int):
        super().__init__(
            f"{what}: candidate pool has {pool_size} vertices, cap is {cap}"
        )
        self.pool_size = pool_size
        self.cap = cap


@dataclass(frozen=True)
class RelaxStep:
    """One state of the deletion chain.

    ``removed`` is the vertex deleted to reach this state (None for the seed
    state), ``inefficiency`` the objective of the state's induced subgraph,
    ``size`` its vertex count.
    """

    removed: int | None
    inefficiency: float
    size: int


@dataclass(frozen=True)
class RelaxTrace:
    """Full deletion chain of one greedy relaxation run.

    Sizes decrease by exactly one per step after the seed entry; the final
    entry is the bare query set.  ``best_index`` points at the entry with
    minimum inefficiency (ties: fewest vertices, then earliest step).
    """

    steps: tuple[RelaxStep, ...]
    best_index: int


# -- seed connectors -------------------------------------------------------


def _query_groups(graph: Graph, query: tuple[int, ...]) -> list[tuple[int, ...]]:
    """Split the query by connected component of the host graph."""
    comp_of = {}
    for comp in subset_components(graph, range(graph.vertex_count)):
        root = comp[0]
        for v in comp:
            comp_of[v] = root
    groups: dict[int, list[int]] = {}
    for q in query:
        groups.setdefault(comp_of[q], []).append(q)
    return [tuple(groups[root]) for root in sorted(groups)]


def _lowest_parent_path(
    graph: Graph, dist: list[int | float], target: int
) -> list[int]:
    """Walk a shortest path back to the BFS root, preferring low parent ids."""
    path = [target]
    cur = target
    while dist[cur] > 0:
        cur = min(p for p in graph.adjacency[cur] if dist[p] == dist[cur] - 1)
        path.append(cur)
    return path


def _spt_union_connector(graph: Graph, qs: tuple[int, ...]) -> tuple[int, ...]:
    """Best-of-candidates shortest-path-tree union around one query group.

    Candidate roots are the query vertices plus the highest-degree vertices
    inside the union of BFS balls of radius max pairwise query distance; for
    each root the union of one lowest-parent-id shortest path to every query
    vertex forms a connected candidate, scored by its induced Wiener index.
    """
    if len(qs) == 1:
        return qs
    dist_q = {q: bfs_distances(graph, q) for q in qs}
    radius = max(dist_q[a][b] for a in qs for b in qs)
    in_ball = [
        u
        for u in range(graph.vertex_count)
        if any(dist_q[q][u] <= radius for q in qs)
    ]
    budget = min(len(qs) * 5, 50)
    ranked = sorted(in_ball, key=lambda u: (-graph.degree(u), u))
    candidates = list(qs)
    for u in ranked[:budget]:
        if u not in dist_q:
            candidates.append(u)
    best: tuple | None = None
    for root in candidates:
        dist = dist_q.get(root) or bfs_distances(graph, root)
        members = set(qs)
        members.add(root)
        for q in qs:
            members.update(_lowest_parent_path(graph, dist, q))
        cand = vertex_set(members)
        key = (subset_wiener(graph, cand), len(cand), cand)
        if best is None or key < best:
            best = key
    assert best is not None
    return best[2]


def mwc_connector(graph: Graph, query: Iterable[int]) -> tuple[int, ...]:
    """Connected low-Wiener-index superset of the query, per component.

    If the query spans several components of the graph, each part gets its
    own connector and the union is returned; the relaxer copes with the
    inherent disconnection.
    """
    q = _check_vertices(graph, query)
    if not q:
        raise InputError("query must not be empty")
    members: set[int] = set()
    for group in _query_groups(graph, q):
        members.update(_spt_union_connector(graph, group))
    return vertex_set(members)


def ctp_connector(graph: Graph, query: Iterable[int]) -> tuple[int, ...]:
    """Greedy peeling seed: maximize minimum degree while keeping the query
    connected.

    Repeatedly deletes the minimum-degree non-query vertex whose removal
    keeps the query part connected (ties: smallest id), then returns the
    intermediate subgraph with the highest minimum degree (ties: fewest
    vertices).  Query parts in different host components are peeled
    independently and unioned.
    """
    q = _check_vertices(graph, query)
    if not q:
        raise InputError("query must not be empty")
    bits = graph._bit_rows()
    result: set[int] = set()
    for group in _query_groups(graph, q):
        comp = next(
            c
            for c in subset_components(graph, range(graph.vertex_count))
            if group[0] in c
        )
        current = set(comp)
        qmask = 0
        for v in group:
            qmask |= 1 << v
        best_key: tuple[int, int] | None = None
        best_set: tuple[int, ...] | None = None
        while True:
            mask = 0
            for v in current:
                mask |= 1 << v
            deg = {v: (bits[v] & mask).bit_count() for v in current}
            snapshot_key = (-min(deg.values()), len(current))
            if best_key is None or snapshot_key < best_key:
                best_key = snapshot_key
                best_set = vertex_set(current)
            removed = False
            for _, v in sorted((deg[v], v) for v in current if v not in group):
                rem_mask = mask & ~(1 << v)
                reached = _mask_bfs(bits, rem_mask, qmask & -qmask)
                if qmask & ~reached == 0:
                    current.discard(v)
                    removed = True
                    break
            if not removed:
                break
        assert best_set is not None
        result.update(best_set)
    return vertex_set(result)


# -- greedy relaxation ------------------------------------------------------


def _chain_inefficiency(
    sizes_sq: int, total_size: int, internal: float
) -> float:
    # cross-component ordered pairs each cost exactly 1
    return internal + (total_size * (total_size - 1) - sizes_sq)


def greedy_relax(
    graph: Graph, seed: Iterable[int], query: Iterable[int]
) -> tuple[tuple[int, ...], RelaxTrace]:
    """Delete non-query vertices greedily; return the best chain state.

    Each step evaluates the inefficiency of removing every candidate and
    removes the argmin (ties: smallest vertex id).  Removal costs are
    recomputed only on the connected component the candidate belongs to;
    the other components' contributions are cached, which is equivalent to
    full recomputation because a removal cannot change distances elsewhere.
    """
    s0 = _check_vertices(graph, seed)
    q = _check_vertices(graph, query)
    if not set(q) <= set(s0):
        missing = sorted(set(q) - set(s0))
        raise InputError(f"query vertices {missing} not in the seed set")

    comps = subset_components(graph, s0)
    internal = [subset_inefficiency(graph, c) for c in comps]
    comp_of = {v: i for i, c in enumerate(comps) for v in c}
    sizes_sq = sum(len(c) * (len(c) - 1) for c in comps)
    internal_sum = sum(internal)
    size = len(s0)

    steps = [RelaxStep(None, _chain_inefficiency(sizes_sq, size, internal_sum), size)]
    removals: list[int] = []
    removable = sorted(set(s0) - set(q))
    qset = set(q)

    while removable:
        best_cost = None
        best_u = -1
        best_pieces: list[tuple[int, ...]] = []
        best_pw: list[float] = []
        for u in removable:
            ci = comp_of[u]
            comp = comps[ci]
            pieces = subset_components(graph, [v for v in comp if v != u])
            pw = [subset_inefficiency(graph, p) for p in pieces]
            new_internal = internal_sum - internal[ci] + sum(pw)
            new_sq = (
                sizes_sq
                - len(comp) * (len(comp) - 1)
                + sum(len(p) * (len(p) - 1) for p in pieces)
            )
            cost = _chain_inefficiency(new_sq, size - 1, new_internal)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_u = u
                best_pieces = pieces
                best_pw = pw
        # apply the winning removal
        ci = comp_of[best_u]
        comp = comps[ci]
        internal_sum += sum(best_pw) - internal[ci]
        sizes_sq += sum(len(p) * (len(p) - 1) for p in best_pieces) - len(comp) * (
            len(comp) - 1
        )
        comps.pop(ci)
        internal.pop(ci)
        for p, w in zip(best_pieces, best_pw):
            comps.append(p)
            internal.append(w)
        comp_of = {v: i for i, c in enumerate(comps) for v in c}
        size -= 1
        removals.append(best_u)
        removable.remove(best_u)
        steps.append(RelaxStep(best_u, best_cost, size))

    best_index = min(
        range(len(steps)), key=lambda j: (steps[j].inefficiency, steps[j].size, j)
    )
    kept = set(s0) - set(removals[:best_index])
    trace = RelaxTrace(tuple(steps), best_index)
    return vertex_set(kept), trace


def gra_mis(
    graph: Graph, query: Iterable[int]
) -> tuple[tuple[int, ...], RelaxTrace]:
    """Greedy relaxing search seeded with the Wiener-style connector."""
    q = _check_vertices(graph, query)
    if not q:
        raise InputError("query must not be empty")
    return greedy_relax(graph, mwc_connector(graph, q), q)


# -- exponential references --------------------------------------------------


def _best_superset(
    graph: Graph,
    query: tuple[int, ...],
    pool: tuple[int, ...],
    cap: int,
    what: str,
) -> tuple[tuple[int, ...], float]:
    if len(pool) > cap:
        raise SearchCapExceeded(what, len(pool), cap)
    best_key: tuple | None = None
    best_members: tuple[int, ...] = query
    for mask in range(1 << len(pool)):
        extra = [pool[i] for i in range(len(pool)) if (mask >> i) & 1]
        members = vertex_set(query + tuple(extra))
        cost = subset_inefficiency(graph, members)
        key = (cost, len(extra), tuple(extra))
        if best_key is None or key < best_key:
            best_key = key
            best_members = members
    assert best_key is not None
    return best_members, best_key[0]


def exhaustive_relax(
    graph: Graph,
    seed: Iterable[int],
    query: Iterable[int],
    cap: int = EXHAUSTIVE_CAP_DEFAULT,
) -> tuple[int, ...]:
    """Best subset of the seed's non-query vertices, by full enumeration.

    Ties are broken toward fewer kept vertices, then the lexicographically
    smallest kept set.  Refuses when ``|seed - query| > cap``.
    """
    s0 = _check_vertices(graph, seed)
    q = _check_vertices(graph, query)
    if not set(q) <= set(s0):
        missing = sorted(set(q) - set(s0))
        raise InputError(f"query vertices {missing} not in the seed set")
    pool = tuple(sorted(set(s0) - set(q)))
    members, _ = _best_superset(graph, q, pool, cap, "exhaustive_relax")
    return members


def brute_force_mis(
    graph: Graph, query: Iterable[int], cap: int = BRUTE_FORCE_CAP_DEFAULT
) -> tuple[int, ...]:
    """Global optimum over every superset of the query.  Test oracle.

    Refuses when ``|V - query| > cap`` (default 22): the search is a full
    2^k enumeration.
    """
    q = _check_vertices(graph, query)
    pool = tuple(sorted(set(range(graph.vertex_count)) - set(q)))
    members, _ = _best_superset(graph, q, pool, cap, "brute_force_mis")
    return members
