"""Benchmark harness: every configuration on every graph of a manifest, one CSV row each."""

from __future__ import annotations

import csv
import json
import logging
import os
import statistics
import time
from collections.abc import Iterable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import NamedTuple

from .coarsening import Prioritizer
from .graph import Clustering, Graph, modularity
from .io import FORMATS, read_graph
from .multilevel import CoarsenerConfig, build_hierarchy, refine_hierarchy
from .refinement import REFINERS

__all__ = [
    "RunConfig",
    "ManifestEntry",
    "BenchmarkRow",
    "BenchmarkReport",
    "CSV_HEADER",
    "read_manifest",
    "read_configs",
    "RunResult",
    "run_config",
    "run_benchmark",
]

log = logging.getLogger(__name__)

CSV_HEADER = (
    "graph",
    "coarsener",
    "merge_fraction",
    "prioritizer",
    "refiner",
    "reduction_factor",
    "n",
    "m",
    "modularity",
    "runtime_ms",
    "clusters",
)


@dataclass(frozen=True)
class RunConfig:
    """One point of the design space.

    ``merge_fraction`` is required for the multi-step coarsener (``"ms"``) and
    must be absent for single-step (``"ss"``).
    """

    coarsener: str = "ss"
    prioritizer: str = "sig"
    refiner: str = "fast"
    reduction_factor: float = 50.0
    merge_fraction: float | None = None

    def __post_init__(self):
        if self.coarsener not in ("ss", "ms"):
            raise ValueError(f"coarsener must be 'ss' or 'ms', got {self.coarsener!r}")
        if (self.coarsener == "ms") != (self.merge_fraction is not None):
            raise ValueError("merge_fraction is required for 'ms' and not allowed for 'ss'")
        object.__setattr__(self, "prioritizer", Prioritizer.parse(self.prioritizer).value)
        if self.refiner not in REFINERS:
            raise ValueError(f"refiner must be one of {sorted(REFINERS)}, got {self.refiner!r}")
        if not 0 < self.reduction_factor <= 100:
            raise ValueError(f"reduction factor must lie in (0, 100], got {self.reduction_factor}")
        # validates merge_fraction range
        self.coarsener_config()

    @classmethod
    def from_mapping(cls, data: dict) -> RunConfig:
        unknown = set(data) - {"coarsener", "prioritizer", "refiner", "reduction_factor", "merge_fraction"}
        if unknown:
            raise ValueError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    def coarsener_config(self) -> CoarsenerConfig:
        return CoarsenerConfig(Prioritizer.parse(self.prioritizer), self.merge_fraction)

    @property
    def label(self) -> str:
        coarse = "SS" if self.merge_fraction is None else f"MS{self.merge_fraction:g}"
        return f"{coarse}-{self.prioritizer}+{self.refiner}@{self.reduction_factor:g}"


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: str
    format: str = "edgelist"
    unweighted: bool = False

    def load(self) -> Graph:
        return read_graph(self.path, self.format, unweighted=self.unweighted)


@dataclass
class BenchmarkRow:
    graph: str
    config: RunConfig
    n: int | None = None
    m: int | None = None
    modularity: float | None = None
    runtime_ms: float | None = None
    levels: int | None = None
    clusters: int | None = None
    error: str | None = None

    def csv_fields(self) -> list[str]:
        c = self.config
        head = [
            self.graph,
            c.coarsener,
            "" if c.merge_fraction is None else f"{c.merge_fraction:g}",
            c.prioritizer,
            c.refiner,
            f"{c.reduction_factor:g}",
        ]
        size = ["" if self.n is None else str(self.n), "" if self.m is None else str(self.m)]
        if self.error is not None:
            return head + size + ["error", "", ""]
        return head + size + [f"{self.modularity:.9f}", f"{self.runtime_ms:.3f}", str(self.clusters)]


@dataclass
class BenchmarkReport:
    rows: list[BenchmarkRow] = field(default_factory=list)

    @property
    def failures(self) -> list[BenchmarkRow]:
        return [r for r in self.rows if r.error is not None]

    def mean_modularity(self) -> dict[RunConfig, float]:
        """Mean modularity per configuration over the graphs where it succeeded."""
        grouped: dict[RunConfig, list[float]] = {}
        for row in self.rows:
            if row.error is None:
                grouped.setdefault(row.config, []).append(row.modularity)
        return {config: statistics.fmean(values) for config, values in grouped.items()}

    def write_csv(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(CSV_HEADER)
            writer.writerows(row.csv_fields() for row in self.rows)

    def write_summary(self, path: str | os.PathLike) -> None:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["config", "graphs", "mean_modularity"])
            counts: dict[RunConfig, int] = {}
            for row in self.rows:
                if row.error is None:
                    counts[row.config] = counts.get(row.config, 0) + 1
            for config, mean in self.mean_modularity().items():
                writer.writerow([config.label, counts[config], f"{mean:.9f}"])

    def summary_lines(self) -> list[str]:
        means = self.mean_modularity()
        width = max((len(c.label) for c in means), default=6)
        lines = [f"{'config':<{width}}  mean Q"]
        lines += [f"{c.label:<{width}}  {q:.6f}" for c, q in sorted(means.items(), key=lambda kv: -kv[1])]
        for row in self.failures:
            lines.append(f"FAILED {row.graph} {row.config.label}: {row.error}")
        return lines


def read_manifest(path: str | os.PathLike) -> list[ManifestEntry]:
    """Parse a manifest: one ``name path [format] [unweighted]`` line per graph.

    Relative paths are resolved against the manifest's directory.  Format
    defaults from the extension; the trailing flag may be ``unweighted`` or
    ``uw``.  ``#`` starts a comment.
    """
    base = Path(path).resolve().parent
    entries = []
    names = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            parts = raw.split("#", 1)[0].split()
            if not parts:
                continue
            if len(parts) < 2 or len(parts) > 4:
                raise ValueError(f"{path}:{lineno}: expected 'name path [format] [unweighted]'")
            name, file_path, *rest = parts
            unweighted = False
            if rest and rest[-1].lower() in ("unweighted", "uw"):
                unweighted = True
                rest.pop()
            if rest:
                fmt = rest.pop(0)
                if fmt not in FORMATS:
                    raise ValueError(f"{path}:{lineno}: unknown format {fmt!r}")
            else:
                fmt = "pajek" if file_path.lower().endswith((".net", ".paj")) else "edgelist"
            if rest:
                raise ValueError(f"{path}:{lineno}: unexpected field {rest[0]!r}")
            if name in names:
                raise ValueError(f"{path}:{lineno}: duplicate graph name {name!r}")
            names.add(name)
            entries.append(ManifestEntry(name, str(base / file_path), fmt, unweighted))
    return entries


def read_configs(path: str | os.PathLike) -> list[RunConfig]:
    """Configurations come as a JSON list of objects with :class:`RunConfig` fields."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not all(isinstance(item, dict) for item in data):
        raise ValueError(f"{path}: expected a JSON list of config objects")
    return [RunConfig.from_mapping(item) for item in data]


class RunResult(NamedTuple):
    clustering: Clustering
    runtime_ms: float
    levels: int


def run_config(graph: Graph, config: RunConfig) -> RunResult:
    """Cluster ``graph`` and time it; parsing is not part of the measurement."""
    coarsener = config.coarsener_config()
    start = time.perf_counter()
    hierarchy = build_hierarchy(graph, coarsener, config.reduction_factor)
    clustering = refine_hierarchy(hierarchy, config.refiner)
    return RunResult(clustering, (time.perf_counter() - start) * 1000.0, len(hierarchy))


def _run_graph(entry: ManifestEntry, configs: Sequence[RunConfig], warmup: bool) -> list[BenchmarkRow]:
    try:
        graph = entry.load()
    except (OSError, ValueError) as exc:
        log.warning("cannot load %s: %s", entry.name, exc)
        return [BenchmarkRow(entry.name, c, error=f"load: {exc}") for c in configs]
    rows = []
    for config in configs:
        row = BenchmarkRow(entry.name, config, n=graph.n, m=graph.edge_count)
        try:
            if warmup:
                run_config(graph, config)
            result = run_config(graph, config)
        except Exception as exc:  # one bad run must not sink the batch
            log.warning("%s with %s failed: %s", entry.name, config.label, exc)
            row.error = f"{type(exc).__name__}: {exc}"
        else:
            row.modularity = modularity(graph, result.clustering)
            row.runtime_ms = result.runtime_ms
            row.levels = result.levels
            row.clusters = result.clustering.n_clusters
        rows.append(row)
    return rows


def run_benchmark(
    entries: Iterable[ManifestEntry],
    configs: Sequence[RunConfig],
    *,
    jobs: int = 1,
    warmup: bool = False,
) -> BenchmarkReport:
    """Run all configurations on all graphs.

    Rows come out in manifest order, then config order, whatever ``jobs`` is.
    """
    entries = list(entries)
    if jobs <= 1 or len(entries) <= 1:
        results = [_run_graph(e, configs, warmup) for e in entries]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_graph, entries, [configs] * len(entries), [warmup] * len(entries)))
    return BenchmarkReport([row for rows in results for row in rows])

