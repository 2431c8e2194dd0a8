"""Command-line front end.

Subcommands: solve and count run a matcher on a text/pattern pair, gen
emits benchmark instances, analyze reports pattern structure, verify
cross-checks every backend on small instances, bench times the backends
over instance families and writes CSV.

Exit codes: 0 success (pattern contained / nonzero count), 3 pattern not
contained (or zero count), 1 usage or parse error, 2 a --max-n/--max-k
limit was exceeded, 4 verify found backends disagreeing.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import os
import random
import sys
import time
from typing import Callable, Sequence, TextIO

from .evenodd import evenodd_contains, evenodd_count
from .families import gen_grid_two_track, gen_three_track, track_partition
from .hardness import (
    PsiInstance,
    count_colorful,
    parse_edge_list,
    parse_pppm_instance,
    psi_to_pppm,
    render_pppm_instance,
)
from .oracle import brute_contains, brute_count
from .perm import Permutation, incidence_graph, lis_lds, parse_permutation
from .tdsolve import pattern_decomposition, solve_count, solve_decision, solve_strips
from .treewidth import (
    Graph,
    dump_decomposition,
    exact_treewidth,
    min_fill_decomposition,
    validate_decomposition,
)

__all__ = [
    "COUNTERS",
    "DECIDERS",
    "EXIT_DISAGREEMENT",
    "EXIT_LIMIT",
    "EXIT_NOT_CONTAINED",
    "EXIT_OK",
    "EXIT_USAGE",
    "console_main",
    "main",
    "pick_algorithm",
]

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_LIMIT = 2
EXIT_NOT_CONTAINED = 3
EXIT_DISAGREEMENT = 4

# Backend registries keyed by --algo name.  verify iterates these, so a
# test can plant a disagreement by patching one entry.
DECIDERS: dict[str, Callable[[Permutation, Permutation], bool]] = {
    "brute": brute_contains,
    "treedp": solve_decision,
    "evenodd": evenodd_contains,
}
COUNTERS: dict[str, Callable[[Permutation, Permutation], int]] = {
    "brute": brute_count,
    "treedp": solve_count,
    "evenodd": evenodd_count,
}


class UsageError(Exception):
    """Bad flags, unreadable files, or malformed input (exit 1)."""


class LimitExceeded(Exception):
    """Instance larger than a requested --max-n/--max-k bound (exit 2)."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; route through our own
    # exception so usage errors keep exit code 1.
    def error(self, message: str):
        raise UsageError(message)


def pick_algorithm(n: int, k: int) -> str:
    """Default backend choice for a text of length n, pattern of length k.

    Brute force wins on short texts.  Past that the even-odd matcher is
    preferred once the pattern spans at least half the text (its run time
    is driven by n - k), otherwise the tree DP.
    """
    if n <= 10:
        return "brute"
    if 2 * k >= n:
        return "evenodd"
    return "treedp"


def _thread_cap() -> int:
    raw = os.environ.get("PPM_THREADS")
    if raw is None:
        return 1
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"PPM_THREADS must be a positive integer, got {raw!r}")
    if cap < 1:
        raise UsageError(f"PPM_THREADS must be a positive integer, got {raw!r}")
    # All backends are sequential; any cap >= 1 is honoured trivially.
    return cap


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}")


def _read_permutation(path: str) -> Permutation:
    try:
        return parse_permutation(_read_text(path))
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}")


def _write_output(content: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(content)
        return
    try:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(content)
    except OSError as exc:
        raise UsageError(f"{path}: {exc.strerror or exc}")


def _check_limits(args: argparse.Namespace, n: int, k: int) -> None:
    max_n = getattr(args, "max_n", None)
    max_k = getattr(args, "max_k", None)
    if max_n is not None and n > max_n:
        raise LimitExceeded(f"text length {n} exceeds --max-n {max_n}")
    if max_k is not None and k > max_k:
        raise LimitExceeded(f"pattern length {k} exceeds --max-k {max_k}")


def _emit(report: dict, as_json: bool, out: TextIO | None = None) -> None:
    """Print a report dict as JSON or as key: value lines.

    JSON keeps insertion order and renders counts the caller already
    stringified, so a loads/dumps round trip is byte identical.
    """
    out = sys.stdout if out is None else out
    if as_json:
        print(json.dumps(report), file=out)
        return
    for key, value in report.items():
        if isinstance(value, dict):
            for inner, stat in value.items():
                print(f"{key}.{inner}: {stat}", file=out)
        else:
            print(f"{key}: {value}", file=out)


def _one_line(perm: Permutation) -> str:
    return " ".join(str(v) for v in perm)


def _resolve_algo(args: argparse.Namespace, n: int, k: int) -> str:
    algo = args.algo
    return pick_algorithm(n, k) if algo == "auto" else algo


def _run_decision(
    algo: str, text: Permutation, pattern: Permutation, args: argparse.Namespace
) -> tuple[bool, dict]:
    stats: dict = {}
    if algo == "strips":
        contained = solve_strips(text, pattern, strips=args.strips, stats=stats)
    elif algo == "treedp":
        td = pattern_decomposition(pattern)
        contained = DECIDERS[algo](text, pattern, decomposition=td)
        stats["bags"] = len(td.bags)
        stats["width"] = td.width
    elif algo == "evenodd":
        contained = DECIDERS[algo](text, pattern, stats=stats)
    else:
        contained = DECIDERS[algo](text, pattern)
    return bool(contained), stats


def _run_count(
    algo: str, text: Permutation, pattern: Permutation
) -> tuple[int, dict]:
    stats: dict = {}
    if algo == "treedp":
        td = pattern_decomposition(pattern)
        value = COUNTERS[algo](text, pattern, decomposition=td)
        stats["bags"] = len(td.bags)
        stats["width"] = td.width
    elif algo == "evenodd":
        value = COUNTERS[algo](text, pattern, stats=stats)
    else:
        value = COUNTERS[algo](text, pattern)
    return value, stats


def _cmd_solve(args: argparse.Namespace) -> int:
    text = _read_permutation(args.text)
    pattern = _read_permutation(args.pattern)
    _check_limits(args, len(text), len(pattern))
    algo = _resolve_algo(args, len(text), len(pattern))
    started = time.perf_counter_ns()
    contained, stats = _run_decision(algo, text, pattern, args)
    elapsed = time.perf_counter_ns() - started
    report = {
        "command": "solve",
        "n": len(text),
        "k": len(pattern),
        "algorithm": algo,
        "contains": contained,
        "elapsed_ns": elapsed,
    }
    if stats:
        report["stats"] = stats
    _emit(report, args.json)
    return EXIT_OK if contained else EXIT_NOT_CONTAINED


def _cmd_count(args: argparse.Namespace) -> int:
    if args.colorful:
        if args.instance is None:
            raise UsageError("--colorful requires --instance FILE")
        try:
            inst = parse_pppm_instance(_read_text(args.instance))
        except ValueError as exc:
            raise UsageError(f"{args.instance}: {exc}")
        n, k = len(inst.text), len(inst.pattern)
        _check_limits(args, n, k)
        algo = _resolve_algo(args, n, k)
        if algo == "strips":
            raise UsageError("the strips backend decides, it cannot count")
        started = time.perf_counter_ns()
        value = count_colorful(inst, backend=COUNTERS[algo])
        elapsed = time.perf_counter_ns() - started
        stats: dict = {}
    else:
        if args.text is None or args.pattern is None:
            raise UsageError("count needs --text and --pattern (or --colorful --instance)")
        text = _read_permutation(args.text)
        pattern = _read_permutation(args.pattern)
        n, k = len(text), len(pattern)
        _check_limits(args, n, k)
        algo = _resolve_algo(args, n, k)
        if algo == "strips":
            raise UsageError("the strips backend decides, it cannot count")
        started = time.perf_counter_ns()
        value, stats = _run_count(algo, text, pattern)
        elapsed = time.perf_counter_ns() - started
    report = {
        "command": "count",
        "n": n,
        "k": k,
        "algorithm": algo,
        # Counts grow past 2**53; keep them lossless in JSON output.
        "count": str(value),
        "colorful": bool(args.colorful),
        "elapsed_ns": elapsed,
    }
    if stats:
        report["stats"] = stats
    _emit(report, args.json)
    return EXIT_OK if value > 0 else EXIT_NOT_CONTAINED


def _parse_class_sizes(raw: str) -> tuple[int, ...]:
    parts = raw.replace(",", " ").split()
    if not parts:
        raise UsageError("--classes needs at least one size")
    try:
        sizes = tuple(int(p) for p in parts)
    except ValueError:
        raise UsageError(f"--classes has a non-integer entry in {raw!r}")
    return sizes


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.family == "grid":
        host, _ = gen_grid_two_track(args.k)
        content = _one_line(host) + "\n"
    elif args.family == "three-track":
        source = _read_permutation(args.pattern)
        host, _ = gen_three_track(source)
        content = _one_line(host) + "\n"
    elif args.family == "random":
        if args.n < 1:
            raise UsageError("--n must be at least 1")
        rng = random.Random(args.seed)
        content = _one_line(Permutation.random(args.n, rng)) + "\n"
    else:  # psi
        try:
            pattern_edges = parse_edge_list(_read_text(args.g))
            host_edges = parse_edge_list(_read_text(args.h))
        except ValueError as exc:
            raise UsageError(str(exc))
        sizes = _parse_class_sizes(args.classes)
        try:
            psi = PsiInstance(sizes, pattern_edges, host_edges).preprocess()
            inst = psi_to_pppm(psi)
        except ValueError as exc:
            raise UsageError(str(exc))
        content = render_pppm_instance(inst)
    _write_output(content, args.out)
    return EXIT_OK


def _cmd_analyze(args: argparse.Namespace) -> int:
    pattern = _read_permutation(args.pattern)
    n = len(pattern)
    inc = incidence_graph(pattern)
    graph = Graph.from_edges(inc.edge_set(), vertices=range(1, n + 1))
    rising, falling = lis_lds(pattern)
    td = min_fill_decomposition(graph)
    report = {
        "command": "analyze",
        "n": n,
        "lis": rising,
        "lds": falling,
        "tracks": len(track_partition(pattern).tracks),
        "edges": len(inc.edges),
        "max_degree": max((inc.degree(i) for i in range(1, n + 1)), default=0),
        "width": td.width,
    }
    if n <= 16:
        exact, _ = exact_treewidth(graph)
        report["exact_width"] = exact
    if args.dump_td is not None:
        if not validate_decomposition(graph, td):
            raise AssertionError("min-fill produced an invalid decomposition")
        _write_output(dump_decomposition(td), args.dump_td)
        report["dump_td"] = args.dump_td
    _emit(report, args.json)
    return EXIT_OK


def _verify_instances(
    args: argparse.Namespace,
) -> "itertools.chain[tuple[Permutation, Permutation]]":
    def exhaustive():
        for n in range(1, args.max_n + 1):
            for k in range(1, min(args.max_k, n) + 1):
                for pat in itertools.permutations(range(1, k + 1)):
                    pattern = Permutation(pat)
                    for txt in itertools.permutations(range(1, n + 1)):
                        yield Permutation(txt), pattern

    def sampled():
        rng = random.Random(args.seed)
        for _ in range(args.random):
            k = rng.randint(1, 6)
            n = rng.randint(k, 12)
            yield Permutation.random(n, rng), Permutation.random(k, rng)

    return itertools.chain(exhaustive(), sampled())


def _cmd_verify(args: argparse.Namespace) -> int:
    checked = 0
    for text, pattern in _verify_instances(args):
        counts = {name: fn(text, pattern) for name, fn in COUNTERS.items()}
        votes = {name: bool(fn(text, pattern)) for name, fn in DECIDERS.items()}
        for strips in (1, 2):
            if strips <= len(text):
                votes[f"strips[{strips}]"] = solve_strips(
                    text, pattern, strips=strips
                )
        reference = next(iter(counts.values()))
        expected = reference > 0
        count_bad = any(value != reference for value in counts.values())
        vote_bad = any(vote != expected for vote in votes.values())
        checked += 1
        if count_bad or vote_bad:
            report = {
                "command": "verify",
                "checked": checked,
                "ok": False,
                "text": _one_line(text),
                "pattern": _one_line(pattern),
                "counts": {name: str(value) for name, value in counts.items()},
                "decisions": votes,
            }
            if args.json:
                _emit(report, True)
            else:
                print("backends disagree on this instance:")
                _emit(report, False)
            return EXIT_DISAGREEMENT
    _emit({"command": "verify", "checked": checked, "ok": True}, args.json)
    return EXIT_OK


def _bench_instances(
    family: str, rng: random.Random
) -> list[tuple[Permutation, Permutation, int | None]]:
    instances: list[tuple[Permutation, Permutation, int | None]] = []
    if family == "random":
        for n, k in ((8, 3), (10, 4), (12, 4)):
            instances.append(
                (Permutation.random(n, rng), Permutation.random(k, rng), None)
            )
    elif family == "grid":
        for k in (2, 3):
            host, _ = gen_grid_two_track(k)
            instances.append((host, Permutation.random(3, rng), k))
    elif family == "three-track":
        for m in (4, 5):
            host, _ = gen_three_track(Permutation.random(m, rng))
            instances.append((host, Permutation.random(3, rng), None))
    else:
        raise UsageError(f"unknown bench family {family!r}")
    return instances


def _cmd_bench(args: argparse.Namespace) -> int:
    families = [f.strip() for f in args.families.split(",") if f.strip()]
    if not families:
        raise UsageError("--families needs at least one family name")
    rng = random.Random(args.seed)
    writer = csv.writer(sys.stdout)
    writer.writerow(
        [
            "family",
            "n",
            "k",
            "algo",
            "contains",
            "count",
            "width",
            "width_lower_bound",
            "elapsed_ns",
            "note",
        ]
    )
    budget_ns = None if args.budget_ms is None else args.budget_ms * 1_000_000
    for family in families:
        for text, pattern, bound in _bench_instances(family, rng):
            width = min_fill_decomposition(
                Graph.from_edges(
                    incidence_graph(text).edge_set(),
                    vertices=range(1, len(text) + 1),
                )
            ).width
            for algo in ("brute", "treedp", "evenodd", "strips"):
                started = time.perf_counter_ns()
                if algo == "strips":
                    contained = solve_strips(text, pattern)
                    count = ""
                else:
                    value = COUNTERS[algo](text, pattern)
                    contained = value > 0
                    count = str(value)
                elapsed = time.perf_counter_ns() - started
                note = ""
                if budget_ns is not None and elapsed > budget_ns:
                    note = "budget_exceeded"
                writer.writerow(
                    [
                        family,
                        len(text),
                        len(pattern),
                        algo,
                        "true" if contained else "false",
                        count,
                        width,
                        "" if bound is None else bound,
                        elapsed,
                        note,
                    ]
                )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ppm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_io(p: argparse.ArgumentParser, required: bool = True) -> None:
        p.add_argument("--text", required=required, help="file with the text permutation")
        p.add_argument("--pattern", required=required, help="file with the pattern permutation")
        p.add_argument("--json", action="store_true", help="emit one JSON object")
        p.add_argument("--max-n", type=int, default=None, help="reject longer texts (exit 2)")
        p.add_argument("--max-k", type=int, default=None, help="reject longer patterns (exit 2)")

    p_solve = sub.add_parser("solve", help="decide whether the pattern occurs in the text")
    add_io(p_solve)
    p_solve.add_argument(
        "--algo",
        choices=("auto", "brute", "treedp", "evenodd", "strips"),
        default="auto",
    )
    p_solve.add_argument("--strips", type=int, default=None, help="strip count for --algo strips")
    p_solve.set_defaults(func=_cmd_solve)

    p_count = sub.add_parser("count", help="count occurrences of the pattern in the text")
    add_io(p_count, required=False)
    p_count.add_argument(
        "--algo", choices=("auto", "brute", "treedp", "evenodd"), default="auto"
    )
    p_count.add_argument(
        "--colorful",
        action="store_true",
        help="count embeddings of a colored instance that use every color",
    )
    p_count.add_argument(
        "--instance", default=None, help="colored instance file (text/colors/pattern lines)"
    )
    p_count.set_defaults(func=_cmd_count)

    p_gen = sub.add_parser("gen", help="generate instances")
    gen_sub = p_gen.add_subparsers(dest="family", required=True)

    p_grid = gen_sub.add_parser("grid", help="2-increasing host with a k x k grid minor")
    p_grid.add_argument("--k", type=int, required=True)
    p_grid.add_argument("--out", default=None)
    p_grid.set_defaults(func=_cmd_gen)

    p_three = gen_sub.add_parser(
        "three-track", help="3-increasing host built from a source permutation"
    )
    p_three.add_argument("--pattern", required=True, help="file with the source permutation")
    p_three.add_argument("--out", default=None)
    p_three.set_defaults(func=_cmd_gen)

    p_rand = gen_sub.add_parser("random", help="uniform random permutation")
    p_rand.add_argument("--n", type=int, required=True)
    p_rand.add_argument("--seed", type=int, default=0)
    p_rand.add_argument("--out", default=None)
    p_rand.set_defaults(func=_cmd_gen)

    p_psi = gen_sub.add_parser(
        "psi", help="compile a partitioned subgraph instance to a colored matching instance"
    )
    p_psi.add_argument("--g", required=True, help="pattern graph edge list (one 'u v' per line)")
    p_psi.add_argument("--h", required=True, help="host graph edge list (one 'u v' per line)")
    p_psi.add_argument("--classes", required=True, help="class sizes, e.g. '2 3 1'")
    p_psi.add_argument("--out", default=None)
    p_psi.set_defaults(func=_cmd_gen)

    p_analyze = sub.add_parser("analyze", help="report structure of a pattern")
    p_analyze.add_argument("--pattern", required=True)
    p_analyze.add_argument("--json", action="store_true")
    p_analyze.add_argument(
        "--dump-td", default=None, help="write the constraint-graph tree decomposition here"
    )
    p_analyze.set_defaults(func=_cmd_analyze)

    p_verify = sub.add_parser("verify", help="cross-check all backends on small instances")
    p_verify.add_argument("--max-n", type=int, default=7)
    p_verify.add_argument("--max-k", type=int, default=4)
    p_verify.add_argument("--random", type=int, default=0, help="extra seeded random instances")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--json", action="store_true")
    p_verify.set_defaults(func=_cmd_verify)

    p_bench = sub.add_parser("bench", help="time the backends, CSV on stdout")
    p_bench.add_argument("--families", default="random,grid,three-track")
    p_bench.add_argument("--seed", type=int, default=0)
    p_bench.add_argument(
        "--budget-ms", type=int, default=None, help="mark rows slower than this"
    )
    p_bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        _thread_cap()
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LimitExceeded as exc:
        print(f"limit exceeded: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def console_main() -> None:
    sys.exit(main())
