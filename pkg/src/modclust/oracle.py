"""Exhaustive modularity maximization for tiny graphs.

Every set partition is visited once as a restricted growth string, and the
per-cluster degree and intra-cluster weight are updated incrementally as
vertices are placed.  Intended as an independent test oracle only.
"""

from __future__ import annotations

import math

from .graph import Clustering, DegenerateGraphError, Graph, modularity

MAX_ORACLE_VERTICES = 12


class GraphTooLargeError(ValueError):
    """Raised when exhaustive enumeration is refused."""


def exact_max_modularity(graph: Graph) -> tuple[Clustering, float]:
    """Return a modularity-maximizing clustering and its value.

    Among optimal partitions the first one in restricted-growth order is
    returned, so the result is deterministic.
    """
    n = graph.n
    if n > MAX_ORACLE_VERTICES:
        raise GraphTooLargeError(f"exact search is limited to {MAX_ORACLE_VERTICES} vertices, got {n}")
    total = graph.total_weight
    if total <= 0:
        raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")

    # Weight from v to earlier vertices, and its self-edge.
    back = [[(u, w) for u, w in graph.adjacency[v] if u < v] for v in range(n)]
    loops = [graph.self_weight(v) for v in range(n)]
    degrees = graph.degrees
    scale = total * total

    labels = [0] * n
    inner = [0.0] * n
    degree = [0.0] * n
    best_value = -math.inf
    best_labels: list[int] = []

    def place(v: int, k: int) -> None:
        nonlocal best_value, best_labels
        if v == n:
            value = sum(inner[c] for c in range(k)) / total - sum(degree[c] * degree[c] for c in range(k)) / scale
            if value > best_value:
                best_value = value
                best_labels = labels[:]
            return
        dv = degrees[v]
        for c in range(k + 1):
            gained = loops[v] + 2.0 * sum(w for u, w in back[v] if labels[u] == c)
            labels[v] = c
            inner[c] += gained
            degree[c] += dv
            place(v + 1, max(k, c + 1))
            inner[c] -= gained
            degree[c] -= dv

    place(0, 0)
    # Report the winner's value from a clean recomputation, free of the
    # add/subtract drift accumulated during the search.
    return Clustering(graph, best_labels), modularity(graph, best_labels)
