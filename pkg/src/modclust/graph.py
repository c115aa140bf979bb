"""Weighted undirected graphs, clusterings, and modularity arithmetic.

Conventions follow the literal definitions: ``f(u, v)`` is a symmetric weight
function, ``deg(v) = sum_u f(u, v)`` (a self-edge counts once), and
``f(C, C)`` sums over ordered vertex pairs, so every undirected edge inside a
cluster contributes twice and a self-edge once.  With these conventions
``deg(V) == f(V, V)``.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence

__all__ = [
    "NEW",
    "DegenerateGraphError",
    "Graph",
    "Clustering",
    "modularity",
    "delta_q_merge",
    "delta_q_move",
    "contract",
]

#: Target id denoting a freshly created, empty cluster.
NEW = -1


class DegenerateGraphError(ValueError):
    """Raised when modularity is undefined because ``f(V, V) == 0``."""


class Graph:
    """Immutable weighted undirected graph with sorted adjacency lists.

    ``adjacency[v]`` is a tuple of ``(neighbor, weight)`` pairs sorted by
    neighbor id; a self-edge appears as ``(v, f(v, v))``.  Degrees and the
    total weight are computed once at construction.

    ``vertex_sizes`` counts how many original vertices each vertex stands
    for; it is 1 everywhere for input graphs and accumulates under
    :func:`contract`.
    """

    __slots__ = ("n", "adjacency", "degrees", "total_weight", "labels", "vertex_sizes", "_m")

    def __init__(
        self,
        n: int,
        adjacency: Sequence[Sequence[tuple[int, float]]],
        labels: Sequence[str] | None = None,
        vertex_sizes: Sequence[int] | None = None,
    ):
        if n < 0 or len(adjacency) != n:
            raise ValueError("adjacency must have one entry per vertex")
        self.n = n
        self.adjacency = tuple(tuple(row) for row in adjacency)
        self.degrees = tuple(math.fsum(w for _, w in row) for row in self.adjacency)
        self.total_weight = math.fsum(self.degrees)
        self.labels = tuple(labels) if labels is not None else tuple(str(v) for v in range(n))
        self.vertex_sizes = tuple(vertex_sizes) if vertex_sizes is not None else (1,) * n
        if len(self.labels) != n or len(self.vertex_sizes) != n:
            raise ValueError("labels and vertex_sizes must have one entry per vertex")
        self._m = sum(1 for v, row in enumerate(self.adjacency) for u, _ in row if u >= v)

    @classmethod
    def from_edges(
        cls,
        n: int,
        edges: Iterable[tuple[int, int] | tuple[int, int, float]],
        labels: Sequence[str] | None = None,
        vertex_sizes: Sequence[int] | None = None,
    ) -> Graph:
        """Build a graph from undirected edges ``(u, v[, w])``.

        Repeated pairs accumulate (order-independently).  An edge
        ``(u, v, w)`` with ``u != v`` sets ``f(u, v) = f(v, u) = w``; a
        self-edge ``(v, v, w)`` sets ``f(v, v) = w``.
        """
        rows: list[dict[int, list[float]]] = [{} for _ in range(n)]
        for edge in edges:
            u, v = edge[0], edge[1]
            w = float(edge[2]) if len(edge) > 2 else 1.0
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for {n} vertices")
            if w < 0 or math.isnan(w) or math.isinf(w):
                raise ValueError(f"edge ({u}, {v}) has invalid weight {w}")
            rows[u].setdefault(v, []).append(w)
            if u != v:
                rows[v].setdefault(u, []).append(w)
        adjacency = []
        for row in rows:
            summed = ((u, math.fsum(ws)) for u, ws in row.items())
            adjacency.append(sorted((u, w) for u, w in summed if w > 0))
        return cls(n, adjacency, labels, vertex_sizes)

    @property
    def edge_count(self) -> int:
        """Number of unordered adjacent pairs, self-edges included."""
        return self._m

    def weight(self, u: int, v: int) -> float:
        for x, w in self.adjacency[u]:
            if x == v:
                return w
            if x > v:
                break
        return 0.0

    def self_weight(self, v: int) -> float:
        return self.weight(v, v)

    def edges(self) -> Iterable[tuple[int, int, float]]:
        """Yield each unordered pair once as ``(u, v, w)`` with ``u <= v``."""
        for v, row in enumerate(self.adjacency):
            for u, w in row:
                if u >= v:
                    yield v, u, w

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.edge_count}, total_weight={self.total_weight:g})"


class Clustering:
    """Mutable partition of a graph's vertices with cached cluster statistics.

    Cluster ids are nonnegative integers but need not be dense while the
    clustering is being edited; :meth:`relabeled` returns a dense copy.
    Empty clusters are dropped as soon as they arise.
    """

    __slots__ = ("graph", "assignment", "members", "degree", "inner", "_next_id")

    def __init__(self, graph: Graph, assignment: Sequence[int]):
        if len(assignment) != graph.n:
            raise ValueError(f"assignment has {len(assignment)} entries, graph has {graph.n} vertices")
        self.graph = graph
        self.assignment = list(assignment)
        self.members: dict[int, set[int]] = {}
        for v, c in enumerate(self.assignment):
            if c < 0:
                raise ValueError(f"vertex {v} has negative cluster id {c}")
            self.members.setdefault(c, set()).add(v)
        self.degree: dict[int, float] = {}
        self.inner: dict[int, float] = {}
        self._recompute_caches()
        self._next_id = max(self.members, default=-1) + 1

    @classmethod
    def singletons(cls, graph: Graph) -> Clustering:
        return cls(graph, range(graph.n))

    @classmethod
    def single_cluster(cls, graph: Graph) -> Clustering:
        return cls(graph, [0] * graph.n)

    def _recompute_caches(self) -> None:
        degrees = self.graph.degrees
        adjacency = self.graph.adjacency
        assignment = self.assignment
        for c, vs in self.members.items():
            self.degree[c] = math.fsum(degrees[v] for v in vs)
            self.inner[c] = math.fsum(w for v in vs for u, w in adjacency[v] if assignment[u] == c)

    def copy(self) -> Clustering:
        other = Clustering.__new__(Clustering)
        other.graph = self.graph
        other.assignment = list(self.assignment)
        other.members = {c: set(vs) for c, vs in self.members.items()}
        other.degree = dict(self.degree)
        other.inner = dict(self.inner)
        other._next_id = self._next_id
        return other

    def __len__(self) -> int:
        return len(self.members)

    @property
    def n_clusters(self) -> int:
        return len(self.members)

    def cluster_of(self, v: int) -> int:
        return self.assignment[v]

    def clusters(self) -> list[list[int]]:
        """Clusters as sorted member lists, ordered by smallest member."""
        return sorted(sorted(vs) for vs in self.members.values())

    def relabeled(self) -> list[int]:
        """Dense cluster ids numbered by first appearance in vertex order."""
        ids: dict[int, int] = {}
        return [ids.setdefault(c, len(ids)) for c in self.assignment]

    def weight_to(self, v: int, c: int) -> float:
        """``f(v, c - v)``: weight from ``v`` into cluster ``c``, excluding a self-edge."""
        assignment = self.assignment
        return math.fsum(w for u, w in self.graph.adjacency[v] if u != v and assignment[u] == c)

    def weight_between(self, c: int, d: int) -> float:
        """``f(C, D)`` for two distinct clusters."""
        if len(self.members[c]) > len(self.members[d]):
            c, d = d, c
        adjacency = self.graph.adjacency
        assignment = self.assignment
        return math.fsum(w for v in self.members[c] for u, w in adjacency[v] if assignment[u] == d)

    def new_cluster_id(self) -> int:
        c = self._next_id
        self._next_id += 1
        return c

    def move(self, v: int, target: int, *, weight_from: float | None = None, weight_to: float | None = None) -> int:
        """Move ``v`` into ``target`` and return the id it landed in.

        ``target`` may be :data:`NEW` or any unused nonnegative id, in which
        case a cluster is created.  The optional weights let callers that
        already know ``f(v, C - v)`` and ``f(v, D)`` skip the edge scan.
        """
        source = self.assignment[v]
        if target == NEW:
            target = self.new_cluster_id()
        if target == source:
            raise ValueError(f"vertex {v} is already in cluster {target}")
        if weight_from is None:
            weight_from = self.weight_to(v, source)
        if weight_to is None:
            weight_to = self.weight_to(v, target) if target in self.members else 0.0
        loop = self.graph.self_weight(v)
        dv = self.graph.degrees[v]

        src = self.members[source]
        src.discard(v)
        if src:
            self.degree[source] -= dv
            self.inner[source] -= 2.0 * weight_from + loop
        else:
            del self.members[source], self.degree[source], self.inner[source]

        if target in self.members:
            self.members[target].add(v)
            self.degree[target] += dv
            self.inner[target] += 2.0 * weight_to + loop
        else:
            self.members[target] = {v}
            self.degree[target] = dv
            self.inner[target] = loop
            self._next_id = max(self._next_id, target + 1)
        self.assignment[v] = target
        return target

    def merge(self, c: int, d: int) -> int:
        """Merge clusters ``c`` and ``d``; the larger keeps its id, which is returned."""
        if c == d:
            raise ValueError("cannot merge a cluster with itself")
        between = self.weight_between(c, d)
        if len(self.members[c]) < len(self.members[d]) or (
            len(self.members[c]) == len(self.members[d]) and d < c
        ):
            c, d = d, c
        for v in self.members[d]:
            self.assignment[v] = c
        self.members[c] |= self.members.pop(d)
        self.degree[c] += self.degree.pop(d)
        self.inner[c] += self.inner.pop(d) + 2.0 * between
        return c

    def quality(self) -> float:
        """Modularity from the cached statistics (no edge scan)."""
        total = self.graph.total_weight
        if total <= 0:
            raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
        inner = math.fsum(self.inner.values())
        expected = math.fsum(d * d for d in self.degree.values())
        return inner / total - expected / (total * total)

    def check(self, rel_tol: float = 1e-9) -> None:
        """Assert the partition and cache invariants; raises ``AssertionError``."""
        seen = set()
        for c, vs in self.members.items():
            assert vs, f"cluster {c} is empty"
            assert not (seen & vs), "clusters overlap"
            seen |= vs
            for v in vs:
                assert self.assignment[v] == c
        assert seen == set(range(self.graph.n)), "clusters do not cover the vertex set"
        fresh = self.copy()
        fresh._recompute_caches()
        scale = max(self.graph.total_weight, 1.0)
        for c in self.members:
            assert math.isclose(self.degree[c], fresh.degree[c], rel_tol=rel_tol, abs_tol=rel_tol * scale)
            assert math.isclose(self.inner[c], fresh.inner[c], rel_tol=rel_tol, abs_tol=rel_tol * scale)

    def __repr__(self) -> str:
        return f"Clustering(n={self.graph.n}, clusters={self.n_clusters})"


def _as_assignment(graph: Graph, clustering: Clustering | Sequence[int]) -> Sequence[int]:
    assignment = clustering.assignment if isinstance(clustering, Clustering) else clustering
    if len(assignment) != graph.n:
        raise ValueError(f"clustering covers {len(assignment)} vertices, graph has {graph.n}")
    return assignment


def modularity(graph: Graph, clustering: Clustering | Sequence[int]) -> float:
    """Modularity recomputed from scratch by one pass over all edges.

    ``clustering`` may be a :class:`Clustering` or a plain vertex-to-cluster
    sequence; cached statistics are never consulted.
    """
    total = graph.total_weight
    if total <= 0:
        raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
    assignment = _as_assignment(graph, clustering)
    inner: dict[int, list[float]] = {}
    degree: dict[int, list[float]] = {}
    for v, row in enumerate(graph.adjacency):
        c = assignment[v]
        degree.setdefault(c, []).append(graph.degrees[v])
        acc = inner.setdefault(c, [])
        for u, w in row:
            if assignment[u] == c:
                acc.append(w)
    intra = math.fsum(math.fsum(ws) for ws in inner.values())
    expected = math.fsum(math.fsum(ds) ** 2 for ds in degree.values())
    return intra / total - expected / (total * total)


def delta_q_merge(graph: Graph, clustering: Clustering, c: int, d: int) -> float:
    """Modularity change of merging clusters ``c`` and ``d``."""
    if c == d:
        raise ValueError("cannot merge a cluster with itself")
    for x in (c, d):
        if x not in clustering.members:
            raise ValueError(f"unknown cluster id {x}")
    total = graph.total_weight
    if total <= 0:
        raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
    between = clustering.weight_between(c, d)
    return 2.0 * (between * total - clustering.degree[c] * clustering.degree[d]) / (total * total)


def delta_q_move(graph: Graph, clustering: Clustering, v: int, target: int) -> float:
    """Modularity change of moving vertex ``v`` into ``target`` (or :data:`NEW`)."""
    if not 0 <= v < graph.n:
        raise ValueError(f"unknown vertex {v}")
    source = clustering.assignment[v]
    if target == source:
        raise ValueError(f"vertex {v} is already in cluster {target}")
    if target != NEW and target not in clustering.members:
        raise ValueError(f"unknown cluster id {target}")
    total = graph.total_weight
    if total <= 0:
        raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
    dv = graph.degrees[v]
    w_from = clustering.weight_to(v, source)
    # exact zero for a singleton, whatever rounding the degree cache carries
    rest = clustering.degree[source] - dv if len(clustering.members[source]) > 1 else 0.0
    if target == NEW:
        w_to, d_to = 0.0, 0.0
    else:
        w_to, d_to = clustering.weight_to(v, target), clustering.degree[target]
    return 2.0 * ((w_to - w_from) * total - dv * (d_to - rest)) / (total * total)


def contract(graph: Graph, clustering: Clustering | Sequence[int]) -> tuple[Graph, list[int]]:
    """Collapse each cluster into one vertex.

    Coarse vertices are numbered by first appearance of their cluster in
    vertex order.  The weight between coarse vertices is ``f(P, Q)``; the
    intra-cluster weight ``f(P, P)`` becomes a self-edge, which keeps every
    coarse degree equal to ``deg(P)``.  Returns the coarse graph and the
    fine-vertex to coarse-vertex map.
    """
    assignment = _as_assignment(graph, clustering)
    ids: dict[int, int] = {}
    vertex_map = [ids.setdefault(c, len(ids)) for c in assignment]
    k = len(ids)
    groups: list[list[int]] = [[] for _ in range(k)]
    for v, p in enumerate(vertex_map):
        groups[p].append(v)

    adjacency: list[list[tuple[int, float]]] = []
    sizes: list[int] = []
    for p, vs in enumerate(groups):
        # One search structure per coarse vertex, filled cluster by cluster.
        acc: dict[int, list[float]] = {}
        for v in vs:
            for u, w in graph.adjacency[v]:
                acc.setdefault(vertex_map[u], []).append(w)
        adjacency.append(sorted((q, math.fsum(ws)) for q, ws in acc.items()))
        sizes.append(sum(graph.vertex_sizes[v] for v in vs))
    coarse = Graph(k, adjacency, labels=[str(p) for p in range(k)], vertex_sizes=sizes)
    return coarse, vertex_map
