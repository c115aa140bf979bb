"""Multi-level greedy modularity clustering.

Greedy coarsening (single-step or multi-step) driven by a merge prioritizer,
followed by vertex-mover refinement on every recorded level.
"""

from .coarsening import MergeEvent, Prioritizer, multi_step_greedy, priority, single_step_greedy
from .graph import (
    NEW,
    Clustering,
    DegenerateGraphError,
    Graph,
    contract,
    delta_q_merge,
    delta_q_move,
    modularity,
)
from .io import ParseError, read_clustering, read_graph, write_clustering
from .multilevel import CoarsenerConfig, LevelHierarchy, build_hierarchy, multi_level_cluster, project, refine_hierarchy
from .oracle import GraphTooLargeError, exact_max_modularity
from .refinement import (
    REFINERS,
    MoveProposal,
    best_move_for_vertex,
    complete_greedy_refine,
    fast_greedy_refine,
    kernighan_lin_refine,
)

__version__ = "0.1.0"

__all__ = [
    "NEW",
    "Graph",
    "Clustering",
    "DegenerateGraphError",
    "modularity",
    "delta_q_merge",
    "delta_q_move",
    "contract",
    "exact_max_modularity",
    "GraphTooLargeError",
    "Prioritizer",
    "MergeEvent",
    "priority",
    "single_step_greedy",
    "multi_step_greedy",
    "MoveProposal",
    "best_move_for_vertex",
    "complete_greedy_refine",
    "fast_greedy_refine",
    "kernighan_lin_refine",
    "REFINERS",
    "CoarsenerConfig",
    "LevelHierarchy",
    "build_hierarchy",
    "project",
    "refine_hierarchy",
    "multi_level_cluster",
    "ParseError",
    "read_graph",
    "write_clustering",
    "read_clustering",
]
