"""Community-aware query generation and a planted-partition graph generator.

Queries are drawn with three knobs: ``n`` vertices from one randomly chosen
home community, plus ``m`` vertices spread round-robin over ``k`` other
communities.  Setting ``m = k`` yields the outlier regime of one far vertex
per extra community.  All sampling is uniform without replacement and fully
determined by the seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable

from .graph import Graph, InputError, build_graph, vertex_set

__all__ = [
    "CommunityAssignment",
    "QueryParams",
    "generate_query",
    "planted_partition",
    "read_communities_text",
]


@dataclass(frozen=True)
class CommunityAssignment:
    """Total membership map: ``membership[v]`` is vertex v's community id.

    Community ids are dense ``0 .. community_count-1``.
    """

    membership: tuple[int, ...]

    def __post_init__(self):
        if self.membership:
            seen = sorted(set(self.membership))
            if seen != list(range(len(seen))):
                raise InputError(
                    f"community ids must be dense 0..c-1, got {seen}"
                )

    @property
    def community_count(self) -> int:
        return max(self.membership) + 1 if self.membership else 0

    def members_of(self, community: int) -> tuple[int, ...]:
        return tuple(
            v for v, c in enumerate(self.membership) if c == community
        )

    def communities(self) -> list[tuple[int, ...]]:
        out: list[list[int]] = [[] for _ in range(self.community_count)]
        for v, c in enumerate(self.membership):
            out[c].append(v)
        return [tuple(c) for c in out]

    @classmethod
    def from_pairs(
        cls, pairs: Iterable[tuple[int, int]], vertex_count: int
    ) -> "CommunityAssignment":
        """Build from (vertex, community) pairs; community ids are remapped
        to dense 0..c-1 in sorted order of the original ids."""
        raw: dict[int, int] = {}
        for v, c in pairs:
            if not 0 <= v < vertex_count:
                raise InputError(f"vertex {v} outside 0..{vertex_count - 1}")
            if v in raw and raw[v] != c:
                raise InputError(f"vertex {v} assigned twice")
            raw[v] = c
        missing = [v for v in range(vertex_count) if v not in raw]
        if missing:
            raise InputError(
                f"vertices without a community: {missing[:10]}"
            )
        dense = {c: i for i, c in enumerate(sorted(set(raw.values())))}
        return cls(tuple(dense[raw[v]] for v in range(vertex_count)))


def read_communities_text(text: str, graph: Graph) -> CommunityAssignment:
    """Parse ``vertex_id community_id`` lines (``#`` comments allowed).

    Vertex tokens are labels when the graph is labeled, integer ids
    otherwise.
    """
    label_ids = (
        {lab: i for i, lab in enumerate(graph.labels)}
        if graph.labels is not None
        else None
    )
    pairs = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise InputError(
                f"line {lineno}: expected two tokens, got {len(tokens)}"
            )
        vtok, ctok = tokens
        if label_ids is not None and vtok in label_ids:
            v = label_ids[vtok]
        elif vtok.isdigit():
            v = int(vtok)
        else:
            raise InputError(f"line {lineno}: unknown vertex {vtok!r}")
        try:
            c = int(ctok)
        except ValueError as exc:
            raise InputError(
                f"line {lineno}: community id must be an integer, got {ctok!r}"
            ) from exc
        pairs.append((v, c))
    return CommunityAssignment.from_pairs(pairs, graph.vertex_count)


@dataclass(frozen=True)
class QueryParams:
    """Query-generation knobs: home count, spread count, community spread."""

    n: int
    m: int
    k: int
    seed: int = 0

    def __post_init__(self):
        if self.n < 0 or self.m < 0:
            raise InputError(f"n and m must be non-negative: n={self.n} m={self.m}")
        if self.n + self.m < 1:
            raise InputError("query must request at least one vertex")
        if self.m > 0 and not 1 <= self.k <= self.m:
            raise InputError(
                f"k must satisfy 1 <= k <= m when m > 0: m={self.m} k={self.k}"
            )
        if self.m == 0 and self.k != 0:
            raise InputError(f"k must be 0 when m is 0, got k={self.k}")


def generate_query(
    graph: Graph, communities: CommunityAssignment, params: QueryParams
) -> tuple[int, ...]:
    """Sample a query: n home-community vertices plus m spread over k others.

    The m vertices are allotted round-robin, so the k chosen communities'
    contributions differ by at most one (larger shares go to the larger
    communities for feasibility).  Raises InputError naming the binding
    constraint when the parameters cannot be met.
    """
    if len(communities.membership) != graph.vertex_count:
        raise InputError(
            f"community map covers {len(communities.membership)} vertices, "
            f"graph has {graph.vertex_count}"
        )
    rng = random.Random(params.seed)
    groups = communities.communities()
    eligible_home = [c for c, members in enumerate(groups) if len(members) >= params.n]
    if not eligible_home:
        raise InputError(
            f"no community has n={params.n} members "
            f"(largest has {max((len(g) for g in groups), default=0)})"
        )
    home = rng.choice(eligible_home)
    picked = list(rng.sample(groups[home], params.n)) if params.n else []

    if params.m:
        others = [
            c
            for c, members in enumerate(groups)
            if c != home and len(members) >= 1
        ]
        if len(others) < params.k:
            raise InputError(
                f"k={params.k} other communities requested, "
                f"only {len(others)} non-home communities have members"
            )
        chosen = rng.sample(others, params.k)
        # round-robin allotment; the ceil shares go to the largest communities
        base, extra = divmod(params.m, params.k)
        ordered = sorted(chosen, key=lambda c: (-len(groups[c]), c))
        for rank, c in enumerate(ordered):
            want = base + (1 if rank < extra else 0)
            if len(groups[c]) < want:
                raise InputError(
                    f"community {c} has {len(groups[c])} members, "
                    f"round-robin share needs {want}"
                )
            picked.extend(rng.sample(groups[c], want))
    return vertex_set(picked)


def planted_partition(
    communities: int,
    size: int,
    p_in: float,
    p_out: float,
    seed: int = 0,
) -> tuple[Graph, CommunityAssignment]:
    """Random graph of ``communities`` blocks of ``size`` vertices each.

    Every intra-community pair is an edge with probability ``p_in``, every
    inter-community pair with ``p_out``; requires ``0 <= p_out <= p_in <= 1``.
    The edge set is a pure function of the seed.
    """
    if communities < 1 or size < 1:
        raise InputError(
            f"need at least one community of one vertex: "
            f"communities={communities} size={size}"
        )
    if not 0.0 <= p_out <= p_in <= 1.0:
        raise InputError(
            f"probabilities must satisfy 0 <= p_out <= p_in <= 1: "
            f"p_in={p_in} p_out={p_out}"
        )
    n = communities * size
    membership = tuple(v // size for v in range(n))
    rng = random.Random(seed)
    edges = []
    for u in range(n):
        cu = membership[u]
        for v in range(u + 1, n):
            p = p_in if membership[v] == cu else p_out
            if p == 1.0:
                edges.append((u, v))
            elif p > 0.0 and rng.random() < p:
                edges.append((u, v))
    graph = build_graph(edges, n)
    return graph, CommunityAssignment(membership)
