"""Multi-level clustering: record coarsening levels, then refine from coarse to fine."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction

from .coarsening import MergeEvent, Prioritizer, multi_step_greedy, single_step_greedy
from .graph import Clustering, Graph, contract
from .refinement import REFINERS, Refiner

__all__ = [
    "CoarsenerConfig",
    "LevelHierarchy",
    "build_hierarchy",
    "project",
    "refine_hierarchy",
    "multi_level_cluster",
]


@dataclass(frozen=True)
class CoarsenerConfig:
    """Which greedy coarsener to run and with which prioritizer.

    ``merge_fraction`` selects Multi-Step Greedy; ``None`` means Single-Step.
    """

    prioritizer: Prioritizer = Prioritizer.SIG
    merge_fraction: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "prioritizer", Prioritizer.parse(self.prioritizer))
        if self.merge_fraction is not None and not 0 < self.merge_fraction <= 100:
            raise ValueError(f"merge fraction must lie in (0, 100], got {self.merge_fraction}")

    def run(self, graph: Graph, observer=None) -> Clustering:
        if self.merge_fraction is None:
            return single_step_greedy(graph, self.prioritizer, observer)
        return multi_step_greedy(graph, self.prioritizer, self.merge_fraction, observer)


@dataclass
class LevelHierarchy:
    """Coarsening levels, finest first.

    ``maps[i]`` sends each vertex of ``levels[i]`` to its vertex in
    ``levels[i + 1]``.
    """

    levels: list[Graph]
    maps: list[list[int]] = field(default_factory=list)
    reduction_factor: float = 100.0

    def __len__(self) -> int:
        return len(self.levels)

    @property
    def coarsest(self) -> Graph:
        return self.levels[-1]

    def composed_map(self, level: int) -> list[int]:
        """Map from original vertices to the vertices of ``levels[level]``."""
        mapping = list(range(self.levels[0].n))
        for step in self.maps[:level]:
            mapping = [step[p] for p in mapping]
        return mapping


def _check_reduction_factor(reduction_factor: float) -> Fraction:
    if not 0 < reduction_factor <= 100:
        raise ValueError(f"reduction factor must lie in (0, 100], got {reduction_factor}")
    return Fraction(str(reduction_factor))


def build_hierarchy(graph: Graph, coarsener: CoarsenerConfig, reduction_factor: float = 50.0) -> LevelHierarchy:
    """Coarsen level by level until a coarsening pass merges nothing.

    Each pass stops as soon as the cluster count drops to
    ``(1 - reduction_factor / 100)`` times the level's vertex count, or when
    no improving merge remains; its clustering is contracted into the next
    level.
    """
    rf = _check_reduction_factor(reduction_factor)
    keep = 100 - rf
    hierarchy = LevelHierarchy([graph], [], float(reduction_factor))
    current = graph
    while True:
        n = current.n

        def reached(event: MergeEvent, n: int = n) -> bool:
            return event.n_clusters * 100 <= keep * n

        clustering = coarsener.run(current, reached)
        if clustering.n_clusters == n:
            break
        current, vertex_map = contract(current, clustering)
        hierarchy.levels.append(current)
        hierarchy.maps.append(vertex_map)
    return hierarchy


def project(coarse: Clustering | Sequence[int], vertex_map: Sequence[int], fine_graph: Graph) -> Clustering:
    """Give every fine vertex the cluster of its coarse image."""
    assignment = coarse.assignment if isinstance(coarse, Clustering) else coarse
    if len(vertex_map) != fine_graph.n:
        raise ValueError(f"map covers {len(vertex_map)} vertices, fine graph has {fine_graph.n}")
    if vertex_map and max(vertex_map) >= len(assignment):
        raise ValueError("map points outside the coarse clustering")
    return Clustering(fine_graph, [assignment[p] for p in vertex_map])


def refine_hierarchy(hierarchy: LevelHierarchy, refiner: Refiner | str) -> Clustering:
    """Start from singletons on the coarsest level, then project and refine down to level 0."""
    if isinstance(refiner, str):
        refiner = REFINERS[refiner]
    clustering = Clustering.singletons(hierarchy.coarsest)
    for level in range(len(hierarchy) - 2, -1, -1):
        graph = hierarchy.levels[level]
        clustering = project(clustering, hierarchy.maps[level], graph)
        clustering = refiner(graph, clustering)
    return clustering


def multi_level_cluster(
    graph: Graph,
    coarsener: CoarsenerConfig,
    refiner: Refiner | str = "fast",
    reduction_factor: float = 50.0,
) -> Clustering:
    """Coarsen with level recording, then refine every level from coarsest to finest."""
    if isinstance(refiner, str) and refiner not in REFINERS:
        raise ValueError(f"unknown refiner {refiner!r}; expected one of {sorted(REFINERS)}")
    hierarchy = build_hierarchy(graph, coarsener, reduction_factor)
    return refine_hierarchy(hierarchy, refiner)
