"""Command-line entry point: ``cluster``, ``benchmark`` and ``oracle`` subcommands.

Exit status is 0 on success, 1 on a usage error, 2 when the run itself fails.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from .bench import RunConfig, read_configs, read_manifest, run_benchmark, run_config
from .coarsening import Prioritizer
from .graph import modularity
from .io import FORMATS, read_graph, write_clustering
from .oracle import MAX_ORACLE_VERTICES, exact_max_modularity
from .refinement import REFINERS

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; 2 is reserved for runtime failures here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _percentage(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < value <= 100:
        raise argparse.ArgumentTypeError(f"must lie in (0, 100], got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="modclust", description="Multi-level greedy modularity clustering.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cluster", help="cluster one graph")
    p.add_argument("--input", required=True, type=Path)
    p.add_argument("--format", choices=FORMATS, default=None, help="default: from the file extension")
    p.add_argument("--coarsen", choices=("ss", "ms"), default="ss")
    p.add_argument("--merge-fraction", type=_percentage, help="percent of improving pairs merged per round (ms only)")
    p.add_argument("--prioritizer", choices=[k.value for k in Prioritizer], default="sig")
    p.add_argument("--refine", choices=list(REFINERS), default="fast")
    p.add_argument("--reduction-factor", type=_percentage, default=50.0)
    p.add_argument("--output", type=Path, help="write '<label> <cluster>' lines here")
    p.add_argument("--drop-self-edges", action="store_true")

    b = sub.add_parser("benchmark", help="run a config matrix over a graph manifest")
    b.add_argument("--manifest", required=True, type=Path)
    b.add_argument("--configs", required=True, type=Path, help="JSON list of run configs")
    b.add_argument("--out", required=True, type=Path, help="per-run CSV; the summary goes next to it")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--warmup", action="store_true", help="run each config once untimed first")

    o = sub.add_parser("oracle", help=f"exact maximum modularity (at most {MAX_ORACLE_VERTICES} vertices)")
    o.add_argument("--input", required=True, type=Path)
    o.add_argument("--format", choices=FORMATS, default=None)
    o.add_argument("--output", type=Path)
    return parser


def _cmd_cluster(args) -> int:
    if args.coarsen == "ms" and args.merge_fraction is None:
        raise UsageError("--coarsen ms requires --merge-fraction")
    if args.coarsen == "ss" and args.merge_fraction is not None:
        raise UsageError("--merge-fraction only applies to --coarsen ms")
    config = RunConfig(
        coarsener=args.coarsen,
        prioritizer=args.prioritizer,
        refiner=args.refine,
        reduction_factor=args.reduction_factor,
        merge_fraction=args.merge_fraction,
    )
    graph = read_graph(args.input, args.format, drop_self_edges=args.drop_self_edges)
    result = run_config(graph, config)
    print(f"modularity {modularity(graph, result.clustering):.9f}")
    print(f"clusters {result.clustering.n_clusters}")
    print(f"levels {result.levels}")
    print(f"runtime_ms {result.runtime_ms:.3f}")
    if args.output:
        write_clustering(result.clustering, args.output)
    return EXIT_OK


def _cmd_benchmark(args) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be at least 1")
    entries = read_manifest(args.manifest)
    configs = read_configs(args.configs)
    report = run_benchmark(entries, configs, jobs=args.jobs, warmup=args.warmup)
    report.write_csv(args.out)
    summary = args.out.with_name(args.out.stem + "_summary.csv")
    report.write_summary(summary)
    for line in report.summary_lines():
        print(line)
    print(f"wrote {len(report.rows)} rows to {args.out} and means to {summary}")
    return EXIT_OK


def _cmd_oracle(args) -> int:
    graph = read_graph(args.input, args.format)
    clustering, q = exact_max_modularity(graph)
    print(f"modularity {q:.9f}")
    print(f"clusters {clustering.n_clusters}")
    if args.output:
        write_clustering(clustering, args.output)
    return EXIT_OK


COMMANDS = {"cluster": _cmd_cluster, "benchmark": _cmd_benchmark, "oracle": _cmd_oracle}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"modclust: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError, RecursionError) as exc:
        print(f"modclust: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
