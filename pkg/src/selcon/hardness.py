"""3-CNF reduction gadgets and their brute-force verification.

`reduce_3sat` maps a 3-CNF formula to a graph plus query set such that the
minimum-inefficiency solution encodes a choice of one satisfying local
assignment per clause, and those choices must be pairwise compatible (agree
on shared variables) to reach the floor cost.  `verify_reduction` checks the
whole equivalence on small formulas with two independent oracles: assignment
enumeration for satisfiability and subset enumeration for the minimum
inefficiency.

Two thresholds appear in the report.  ``threshold`` is ``2 * (B1 + B2)``
from the instance constants; it is exact for single-clause formulas but
overshoots the reachable floor once ``clause_count >= 2`` (the constants
fold the cross-clause pair counts incorrectly), so it cannot separate the
unsatisfiable case.  ``compatible_cost`` is the exact floor derived from the
construction's distance structure and is the one the equivalence verdict
uses.  Both are reported so the discrepancy stays visible.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from itertools import product
from typing import Mapping, Sequence

from .graph import Graph, InputError, build_graph
from .metrics import subset_diameter
from .connectors import SearchCapExceeded, _best_superset

__all__ = [
    "Cnf3Formula",
    "ReductionInstance",
    "ReductionReport",
    "parse_dimacs",
    "reduce_3sat",
    "build_reduction",
    "solution_from_assignment",
    "compatible_selection_cost",
    "verify_reduction",
    "verify_instance",
    "VERIFY_CLAUSE_CAP",
]

VERIFY_CLAUSE_CAP = 3

Assignment = tuple[tuple[int, bool], ...]


@dataclass(frozen=True)
class Cnf3Formula:
    """3-CNF formula: clauses of exactly three literals on distinct variables.

    A literal is ``(variable index, polarity)`` with 0-based variables.
    """

    variable_count: int
    clauses: tuple[tuple[tuple[int, bool], ...], ...]

    def __post_init__(self):
        for i, clause in enumerate(self.clauses):
            if len(clause) != 3:
                raise InputError(
                    f"clause {i} has {len(clause)} literals, expected 3"
                )
            vars_ = [v for v, _ in clause]
            if len(set(vars_)) != 3:
                raise InputError(f"clause {i} repeats a variable: {vars_}")
            for v in vars_:
                if not 0 <= v < self.variable_count:
                    raise InputError(
                        f"clause {i} uses variable {v}, "
                        f"have {self.variable_count}"
                    )

    def clause_count(self) -> int:
        return len(self.clauses)

    def satisfying_assignments(self, i: int) -> tuple[Assignment, ...]:
        """All assignments of clause i's variables that satisfy it.

        Enumerated in binary order of the literal truth values, skipping the
        single all-false-literals pattern, so vertex numbering downstream is
        deterministic.
        """
        clause = self.clauses[i]
        out = []
        for j in range(1, 8):
            truths = ((j >> 2) & 1, (j >> 1) & 1, j & 1)
            assignment = tuple(
                sorted(
                    (var, bool(t) if positive else not t)
                    for (var, positive), t in zip(clause, truths)
                )
            )
            out.append(assignment)
        return tuple(out)

    def evaluate(self, assignment: Sequence[bool]) -> bool:
        return all(
            any(assignment[var] == positive for var, positive in clause)
            for clause in self.clauses
        )


def parse_dimacs(text: str) -> Cnf3Formula:
    """Parse DIMACS CNF: ``p cnf <vars> <clauses>`` then 0-terminated clauses.

    ``c`` comment lines are ignored.  Every clause must have exactly three
    nonzero literals; negatives are negated variables.
    """
    variable_count = None
    declared_clauses = None
    clauses: list[tuple[tuple[int, bool], ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise InputError(f"line {lineno}: bad header {raw!r}")
            variable_count = int(parts[2])
            declared_clauses = int(parts[3])
            continue
        if variable_count is None:
            raise InputError(f"line {lineno}: clause before 'p cnf' header")
        try:
            nums = [int(t) for t in line.split()]
        except ValueError as exc:
            raise InputError(f"line {lineno}: non-integer token: {raw!r}") from exc
        if not nums or nums[-1] != 0:
            raise InputError(f"line {lineno}: clause not terminated by 0")
        lits = nums[:-1]
        if len(lits) != 3 or any(l == 0 for l in lits):
            raise InputError(
                f"line {lineno}: expected three nonzero literals, got {lits}"
            )
        for l in lits:
            if abs(l) > variable_count:
                raise InputError(
                    f"line {lineno}: literal {l} exceeds {variable_count} variables"
                )
        clauses.append(tuple((abs(l) - 1, l > 0) for l in lits))
    if variable_count is None:
        raise InputError("missing 'p cnf' header")
    if declared_clauses is not None and declared_clauses != len(clauses):
        raise InputError(
            f"header declares {declared_clauses} clauses, found {len(clauses)}"
        )
    return Cnf3Formula(variable_count, tuple(clauses))


@dataclass(frozen=True)
class ReductionInstance:
    """Built gadget: graph, query, constants, and clause bookkeeping.

    Vertex layout: the per-clause A blocks (size M each) come first, then the
    per-clause B blocks, then the per-clause assignment vertices, so the
    query is exactly ``range(2 * clause_count * M)``.
    """

    graph: Graph
    query: tuple[int, ...]
    M: int
    B1: float
    B2: float
    clause_count: int
    a_ranges: tuple[tuple[int, int], ...]
    b_ranges: tuple[tuple[int, int], ...]
    s_ranges: tuple[tuple[int, int], ...]
    s_assignments: tuple[tuple[Assignment, ...], ...]

    def assignment_vertices(self) -> tuple[int, ...]:
        return tuple(
            v for start, stop in self.s_ranges for v in range(start, stop)
        )


def _compatible(a: Assignment, b: Assignment) -> bool:
    """True when every shared variable receives the same value in both."""
    values = dict(a)
    return all(values.get(var, val) == val for var, val in b)


def build_reduction(
    assignment_sets: Sequence[Sequence[Mapping[int, bool] | Assignment]],
    M: int,
) -> ReductionInstance:
    """Build the gadget from explicit per-clause satisfying-assignment sets.

    This is the constructor `reduce_3sat` uses with the seven satisfying
    patterns of each clause; tests use it directly to craft contradiction
    instances over shared variables that no literal 3-CNF of this size could
    express.
    """
    m = len(assignment_sets)
    if m < 1:
        raise InputError("need at least one clause")
    if M < 1:
        raise InputError(f"M must be positive, got {M}")
    normalized: list[tuple[Assignment, ...]] = []
    for i, assignments in enumerate(assignment_sets):
        canon = []
        for a in assignments:
            pairs = tuple(sorted(dict(a).items()))
            canon.append(pairs)
        if len(set(canon)) != len(canon):
            raise InputError(f"clause {i} has duplicate assignments")
        normalized.append(tuple(canon))

    a_ranges = tuple((i * M, (i + 1) * M) for i in range(m))
    b_ranges = tuple((m * M + i * M, m * M + (i + 1) * M) for i in range(m))
    s_start = 2 * m * M
    s_ranges = []
    for i in range(m):
        s_ranges.append((s_start, s_start + len(normalized[i])))
        s_start += len(normalized[i])
    vertex_count = s_start

    edges: list[tuple[int, int]] = []
    # the A blocks together form one clique, likewise the B blocks
    a_all = range(0, m * M)
    b_all = range(m * M, 2 * m * M)
    for block in (a_all, b_all):
        verts = list(block)
        for x in range(len(verts)):
            for y in range(x + 1, len(verts)):
                edges.append((verts[x], verts[y]))
    # each assignment vertex attaches to its clause's whole A and B blocks
    flat: list[tuple[int, Assignment]] = []
    for i in range(m):
        start, stop = s_ranges[i]
        for offset, s in enumerate(range(start, stop)):
            flat.append((s, normalized[i][offset]))
            for t in range(*a_ranges[i]):
                edges.append((s, t))
            for t in range(*b_ranges[i]):
                edges.append((s, t))
    # assignment vertices link exactly when their assignments are compatible
    for x in range(len(flat)):
        sx, ax = flat[x]
        for y in range(x + 1, len(flat)):
            sy, ay = flat[y]
            if _compatible(ax, ay):
                edges.append((sx, sy))

    graph = build_graph(edges, vertex_count)
    query = tuple(range(2 * m * M))
    b1 = M * M * m * (m - 0.5)
    b2 = M * m * (m - 1) / 2
    return ReductionInstance(
        graph=graph,
        query=query,
        M=M,
        B1=b1,
        B2=b2,
        clause_count=m,
        a_ranges=a_ranges,
        b_ranges=tuple(b_ranges),
        s_ranges=tuple(s_ranges),
        s_assignments=tuple(normalized),
    )


def default_block_size(clause_count: int) -> int:
    return 6 * clause_count * clause_count + 1


def reduce_3sat(
    phi: Cnf3Formula, M_override: int | None = None
) -> ReductionInstance:
    """Build the gadget for a 3-CNF formula.

    ``M_override`` permits desk-scale blocks for structural tests; the
    threshold equivalence needs the default ``M = 6 m^2 + 1``, so a warning
    is emitted when overriding.
    """
    m = phi.clause_count()
    if m < 1:
        raise InputError("formula needs at least one clause")
    M = default_block_size(m)
    if M_override is not None:
        if M_override < 1:
            raise InputError(f"M override must be positive, got {M_override}")
        if M_override != M:
            warnings.warn(
                f"block size {M_override} overrides the default {M}; "
                "threshold constants assume the default",
                stacklevel=2,
            )
        M = M_override
    sets = [phi.satisfying_assignments(i) for i in range(m)]
    return build_reduction(sets, M)


def solution_from_assignment(
    inst: ReductionInstance, assignment: Sequence[bool]
) -> tuple[int, ...]:
    """Query plus, per clause, the assignment vertex the given truth
    assignment selects.

    Raises:
        InputError: if the assignment fails to satisfy some clause (no
            assignment vertex of that clause matches it).
    """
    selected = []
    for i in range(inst.clause_count):
        start, _ = inst.s_ranges[i]
        match = None
        for offset, pattern in enumerate(inst.s_assignments[i]):
            try:
                ok = all(assignment[var] == val for var, val in pattern)
            except IndexError as exc:
                raise InputError(
                    f"assignment too short for clause {i}"
                ) from exc
            if ok:
                match = start + offset
                break
        if match is None:
            raise InputError(f"assignment does not satisfy clause {i}")
        selected.append(match)
    patterns = [
        inst.s_assignments[i][s - inst.s_ranges[i][0]]
        for i, s in enumerate(selected)
    ]
    for x in range(len(patterns)):
        for y in range(x + 1, len(patterns)):
            assert _compatible(patterns[x], patterns[y]), (
                "selections from one assignment cannot conflict"
            )
    return inst.query + tuple(selected)


def compatible_selection_cost(clause_count: int, M: int) -> float:
    """Exact ordered-pair inefficiency of query + one compatible assignment
    vertex per clause.

    Derived from the construction: same-clause A-B pairs sit at distance 2,
    cross-clause A-B pairs at 3, each selected vertex at distance 2 from the
    other clauses' blocks, and everything else is adjacent.
    """
    m = clause_count
    return m * M * M + (4.0 / 3.0) * m * (m - 1) * M * M + 2.0 * m * (m - 1) * M


@dataclass(frozen=True)
class ReductionReport:
    """Outcome of verifying one instance with both brute-force oracles."""

    satisfiable: bool
    min_inefficiency: float
    best_solution: tuple[int, ...]
    threshold: float
    within_threshold: bool
    compatible_cost: float
    within_compatible_cost: bool
    equivalent: bool
    diameter: int
    M: int
    clause_count: int


def _instance_satisfiable(inst: ReductionInstance) -> bool:
    """Brute-force satisfiability: some full assignment matches one
    satisfying pattern in every clause."""
    variables = sorted(
        {var for clause in inst.s_assignments for a in clause for var, _ in a}
    )
    for values in product((False, True), repeat=len(variables)):
        chosen = dict(zip(variables, values))
        if all(
            any(all(chosen[var] == val for var, val in a) for a in clause)
            for clause in inst.s_assignments
        ):
            return True
    return False


def verify_instance(inst: ReductionInstance) -> ReductionReport:
    """Check the satisfiability <=> inefficiency-floor equivalence.

    Enumerates all subsets of the assignment vertices for the exact minimum
    and all truth assignments for satisfiability, so it refuses instances
    with more than VERIFY_CLAUSE_CAP clauses.
    """
    if inst.clause_count > VERIFY_CLAUSE_CAP:
        raise SearchCapExceeded(
            "verify_instance clauses", inst.clause_count, VERIFY_CLAUSE_CAP
        )
    pool = inst.assignment_vertices()
    best, min_cost = _best_superset(
        inst.graph, inst.query, pool, len(pool), "verify_instance"
    )
    satisfiable = _instance_satisfiable(inst)
    threshold = 2.0 * (inst.B1 + inst.B2)
    compat = compatible_selection_cost(inst.clause_count, inst.M)
    diameter = subset_diameter(inst.graph, range(inst.graph.vertex_count))
    if not isinstance(diameter, int):
        raise AssertionError("built instance must be connected")
    within_threshold = min_cost <= threshold + 1e-9
    within_compat = min_cost <= compat + 0.5
    return ReductionReport(
        satisfiable=satisfiable,
        min_inefficiency=min_cost,
        best_solution=best,
        threshold=threshold,
        within_threshold=within_threshold,
        compatible_cost=compat,
        within_compatible_cost=within_compat,
        equivalent=within_compat == satisfiable,
        diameter=diameter,
        M=inst.M,
        clause_count=inst.clause_count,
    )


def verify_reduction(
    phi: Cnf3Formula, M_override: int | None = None
) -> ReductionReport:
    """Build the gadget for ``phi`` and verify the equivalence on it."""
    inst = reduce_3sat(phi, M_override)
    report = verify_instance(inst)
    # sanity: the generic pattern-matching oracle must agree with direct
    # clause evaluation for literal formulas
    direct = any(
        phi.evaluate(values)
        for values in product((False, True), repeat=phi.variable_count)
    )
    assert direct == report.satisfiable
    return report
