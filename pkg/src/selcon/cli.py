"""Command-line interface: ``selcon connect | bench | reduce``.

Exit codes: 0 success, 2 input error (bad file, unknown vertex, malformed
config or CNF), 3 an exponential search refused because its candidate pool
exceeds the cap.

All randomness flows from one ``--seed`` (or config ``seed``) expanded
per-run by a counter, and volatile timings are reported as 0.0 unless
``--timings`` is given, so rerunning any command with identical inputs and
seed produces byte-identical output with any worker count.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from io import StringIO
from typing import Sequence

from . import connectors, hardness, querygen, report
from .graph import Graph, InputError, read_graph, subset_components, vertex_set

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_CAP = 3

ALGORITHMS = ("gra_mis", "exhaustive", "brute", "ctp_seeded")


# -- shared helpers ---------------------------------------------------------


def _resolve_vertex(graph: Graph, token: str) -> int:
    if graph.labels is not None:
        index = {lab: i for i, lab in enumerate(graph.labels)}
        if token in index:
            return index[token]
    if token.isdigit() and int(token) < graph.vertex_count:
        return int(token)
    raise InputError(f"unknown vertex label {token!r}")


def _read_query(spec: str, graph: Graph) -> tuple[int, ...]:
    """Query as a comma-separated list, or a file of one token per line."""
    try:
        with open(spec, "r", encoding="utf-8") as fh:
            tokens = [
                t
                for line in fh
                if (s := line.strip()) and not s.startswith("#")
                for t in s.split()
            ]
    except OSError:
        tokens = [t.strip() for t in spec.split(",") if t.strip()]
    if not tokens:
        raise InputError(f"empty query spec {spec!r}")
    return vertex_set(_resolve_vertex(graph, t) for t in tokens)


def _names(graph: Graph, verts: Sequence[int]) -> list[str] | list[int]:
    if graph.labels is not None:
        return [graph.labels[v] for v in verts]
    return list(verts)


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(text)


# -- connect ----------------------------------------------------------------


def _run_algorithm(
    graph: Graph, query: tuple[int, ...], algo: str, cap: int | None
):
    trace = None
    if algo == "gra_mis":
        solution, trace = connectors.gra_mis(graph, query)
    elif algo == "ctp_seeded":
        seed = connectors.ctp_connector(graph, query)
        solution, trace = connectors.greedy_relax(graph, seed, query)
    elif algo == "exhaustive":
        seed = connectors.mwc_connector(graph, query)
        solution = connectors.exhaustive_relax(
            graph, seed, query, cap=cap or connectors.EXHAUSTIVE_CAP_DEFAULT
        )
    elif algo == "brute":
        solution = connectors.brute_force_mis(
            graph, query, cap=cap or connectors.BRUTE_FORCE_CAP_DEFAULT
        )
    else:
        raise InputError(f"unknown algorithm {algo!r}")
    return solution, trace


def _dot_output(graph: Graph, query: tuple[int, ...], solution: tuple[int, ...]) -> str:
    qset = set(query)
    lines = ["graph selective_connector {"]
    for v in solution:
        color = "blue" if v in qset else "green"
        lines.append(f'  "{graph.label_of(v)}" [color={color}];')
    smask = 0
    for v in solution:
        smask |= 1 << v
    for v in solution:
        for w in graph.adjacency[v]:
            if w > v and (smask >> w) & 1:
                lines.append(f'  "{graph.label_of(v)}" -- "{graph.label_of(w)}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def cmd_connect(args: argparse.Namespace) -> int:
    graph = read_graph(args.graph)
    query = _read_query(args.query, graph)
    started = time.perf_counter()
    solution, trace = _run_algorithm(graph, query, args.algo, args.cap)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    if args.format == "dot":
        _emit(_dot_output(graph, query, solution), args.out)
        return EXIT_OK
    stats = report.solution_stats(
        graph, query, solution, runtime_ms=elapsed_ms if args.timings else 0.0
    )
    payload = {
        "algorithm": args.algo,
        "query": _names(graph, query),
        "solution": _names(graph, solution),
        "components": [
            _names(graph, comp) for comp in subset_components(graph, solution)
        ],
        "report": _report_payload(graph, stats),
    }
    if trace is not None and args.trace:
        payload["trace"] = {
            "best_index": trace.best_index,
            "steps": [
                {
                    "removed": None if s.removed is None else graph.label_of(s.removed),
                    "inefficiency": s.inefficiency,
                    "size": s.size,
                }
                for s in trace.steps
            ],
        }
    _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", args.out)
    return EXIT_OK


def _report_payload(graph: Graph, stats: report.SolutionReport) -> dict:
    payload = report.report_to_dict(stats)
    payload["added_vertices"] = _names(graph, stats.added_vertices)
    return payload


# -- bench ------------------------------------------------------------------


@dataclass
class BenchConfig:
    communities: int = 4
    community_size: int = 50
    p_in: float = 0.8
    p_out: float = 0.02
    n: tuple[int, ...] = (5,)
    m: tuple[int, ...] = (0,)
    k: tuple[int, ...] = (0,)
    reps: int = 10
    seed: int = 0
    cap: int = connectors.EXHAUSTIVE_CAP_DEFAULT
    graph: str | None = None
    communities_file: str | None = None
    out: str | None = None


_INT_LIST_KEYS = {"n", "m", "k"}
_INT_KEYS = {"communities", "community_size", "reps", "seed", "cap"}
_FLOAT_KEYS = {"p_in", "p_out"}
_PATH_KEYS = {"graph", "communities_file", "out"}


def parse_bench_config(text: str) -> BenchConfig:
    """Flat ``key = value`` lines; ``#`` comments; lists are comma-separated."""
    config = BenchConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise InputError(f"line {lineno}: expected 'key = value': {raw!r}")
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        try:
            if key in _INT_LIST_KEYS:
                setattr(
                    config, key, tuple(int(t) for t in value.split(",") if t.strip())
                )
            elif key in _INT_KEYS:
                setattr(config, key, int(value))
            elif key in _FLOAT_KEYS:
                setattr(config, key, float(value))
            elif key in _PATH_KEYS:
                setattr(config, key, value)
            else:
                raise InputError(f"line {lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise InputError(f"line {lineno}: bad value for {key}: {value!r}") from exc
    return config


def _valid_combo(n: int, m: int, k: int) -> bool:
    if n < 0 or m < 0 or n + m < 1:
        return False
    if m == 0:
        return k == 0
    return 1 <= k <= m


def _run_seeds(master: int, run_index: int) -> tuple[int, int]:
    base = master * 1_000_003 + 2 * run_index
    return base, base + 1


def _bench_one(
    config: BenchConfig,
    fixed: tuple[Graph, querygen.CommunityAssignment] | None,
    run_index: int,
    n: int,
    m: int,
    k: int,
    timings: bool,
):
    graph_seed, query_seed = _run_seeds(config.seed, run_index)
    if fixed is None:
        graph, communities = querygen.planted_partition(
            config.communities,
            config.community_size,
            config.p_in,
            config.p_out,
            seed=graph_seed,
        )
    else:
        graph, communities = fixed
    query = querygen.generate_query(
        graph, communities, querygen.QueryParams(n=n, m=m, k=k, seed=query_seed)
    )
    started = time.perf_counter()
    solution, _ = connectors.gra_mis(graph, query)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    seed_set = connectors.mwc_connector(graph, query)
    exhaustive = connectors.exhaustive_relax(graph, seed_set, query, cap=config.cap)
    from .metrics import subset_inefficiency

    greedy_cost = subset_inefficiency(graph, solution)
    exhaustive_cost = subset_inefficiency(graph, exhaustive)
    if abs(greedy_cost - exhaustive_cost) <= 1e-9:
        bucket = "equal"
    elif greedy_cost < exhaustive_cost:
        bucket = "greedy_better"
    else:
        bucket = "greedy_worse"
    stats = report.solution_stats(
        graph, query, solution, runtime_ms=elapsed_ms if timings else 0.0
    )
    meta = {
        "run": run_index,
        "n": n,
        "m": m,
        "k": k,
        "graph_seed": graph_seed,
        "query_seed": query_seed,
        "exhaustive_inefficiency": exhaustive_cost,
        "bucket": bucket,
    }
    return meta, stats


def cmd_bench(args: argparse.Namespace) -> int:
    with open(args.config, "r", encoding="utf-8") as fh:
        config = parse_bench_config(fh.read())
    if args.out is not None:
        config.out = args.out
    if args.graph is not None:
        config.graph = args.graph
    if args.communities is not None:
        config.communities_file = args.communities
    if (config.graph is None) != (config.communities_file is None):
        raise InputError("graph and communities_file must be given together")

    fixed = None
    if config.graph is not None:
        graph = read_graph(config.graph)
        with open(config.communities_file, "r", encoding="utf-8") as fh:
            communities = querygen.read_communities_text(fh.read(), graph)
        fixed = (graph, communities)

    combos = [
        (n, m, k)
        for n in config.n
        for m in config.m
        for k in config.k
        if _valid_combo(n, m, k)
    ]
    skipped = (
        len(config.n) * len(config.m) * len(config.k) - len(combos)
    ) * config.reps
    jobs = [
        (index, n, m, k)
        for index, (rep, (n, m, k)) in enumerate(
            (rep, combo) for combo in combos for rep in range(config.reps)
        )
    ]
    if not jobs:
        raise InputError("bench grid is empty after dropping invalid (n, m, k) combos")

    def work(job):
        index, n, m, k = job
        return _bench_one(config, fixed, index, n, m, k, args.timings)

    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(work, jobs))
    else:
        results = [work(job) for job in jobs]

    buffer = StringIO()
    report.write_batch_csv(
        results, buffer, extra_numeric=["exhaustive_inefficiency"]
    )
    csv_text = buffer.getvalue()
    buckets = {"equal": 0, "greedy_better": 0, "greedy_worse": 0}
    for meta, _ in results:
        buckets[meta["bucket"]] += 1
    total = len(results)
    summary = (
        f"runs={total} skipped={skipped}\n"
        "greedy_vs_exhaustive "
        f"equal={buckets['equal'] / total:.4f} "
        f"greedy_better={buckets['greedy_better'] / total:.4f} "
        f"greedy_worse={buckets['greedy_worse'] / total:.4f}\n"
    )
    if config.out is not None:
        _emit(csv_text, config.out)
        sys.stdout.write(summary)
    else:
        sys.stdout.write(csv_text)
        sys.stdout.write(summary)
    return EXIT_OK


# -- reduce -----------------------------------------------------------------


def cmd_reduce(args: argparse.Namespace) -> int:
    with open(args.cnf, "r", encoding="utf-8") as fh:
        phi = hardness.parse_dimacs(fh.read())
    inst = hardness.reduce_3sat(phi, args.m_override)
    constants = {
        "clause_count": inst.clause_count,
        "M": inst.M,
        "B1": inst.B1,
        "B2": inst.B2,
        "vertex_count": inst.graph.vertex_count,
        "edge_count": inst.graph.edge_count,
        "query_size": len(inst.query),
    }
    edge_lines = "".join(f"{u} {v}\n" for u, v in inst.graph.edges())
    query_lines = "".join(f"{v}\n" for v in inst.query)
    constants_text = json.dumps(constants, indent=2, sort_keys=True) + "\n"
    if args.out is not None:
        _emit(edge_lines, args.out + ".edges")
        _emit(query_lines, args.out + ".query")
        _emit(constants_text, args.out + ".json")
        sys.stdout.write(constants_text)
    else:
        sys.stdout.write("# constants\n")
        sys.stdout.write(constants_text)
        sys.stdout.write("# edges\n")
        sys.stdout.write(edge_lines)
        sys.stdout.write("# query\n")
        sys.stdout.write(query_lines)
    if args.verify:
        rep = hardness.verify_instance(inst)
        payload = {
            "satisfiable": rep.satisfiable,
            "min_inefficiency": rep.min_inefficiency,
            "threshold": rep.threshold,
            "within_threshold": rep.within_threshold,
            "compatible_cost": rep.compatible_cost,
            "within_compatible_cost": rep.within_compatible_cost,
            "equivalent": rep.equivalent,
            "diameter": rep.diameter,
        }
        sys.stdout.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")
        sys.stdout.write(
            f"verdict: {'EQUIVALENT' if rep.equivalent else 'MISMATCH'}\n"
        )
    return EXIT_OK


# -- entry point -------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selcon",
        description="Selective connectors by network-inefficiency minimization",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_connect = sub.add_parser("connect", help="extract a connector for a query")
    p_connect.add_argument("--graph", required=True, help="edge-list file")
    p_connect.add_argument(
        "--query", required=True, help="comma-separated vertices, or a file"
    )
    p_connect.add_argument("--algo", choices=ALGORITHMS, default="gra_mis")
    p_connect.add_argument("--format", choices=("json", "dot"), default="json")
    p_connect.add_argument("--out", default=None)
    p_connect.add_argument("--cap", type=int, default=None)
    p_connect.add_argument("--seed", type=int, default=0)
    p_connect.add_argument("--trace", action="store_true")
    p_connect.add_argument("--timings", action="store_true")
    p_connect.set_defaults(func=cmd_connect)

    p_bench = sub.add_parser("bench", help="run a seeded experiment grid")
    p_bench.add_argument("config", help="flat key=value config file")
    p_bench.add_argument("--out", default=None)
    p_bench.add_argument("--graph", default=None)
    p_bench.add_argument("--communities", default=None)
    p_bench.add_argument("--workers", type=int, default=1)
    p_bench.add_argument("--timings", action="store_true")
    p_bench.set_defaults(func=cmd_bench)

    p_reduce = sub.add_parser("reduce", help="build a 3-CNF reduction instance")
    p_reduce.add_argument("cnf", help="DIMACS CNF file")
    p_reduce.add_argument("--m-override", type=int, default=None, dest="m_override")
    p_reduce.add_argument("--verify", action="store_true")
    p_reduce.add_argument("--out", default=None)
    p_reduce.set_defaults(func=cmd_reduce)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except connectors.SearchCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
