"""Greedy coarsening by iterated cluster merging.

Both coarseners start from singleton clusters and work on a dynamically
coarsened copy of the graph in which every live cluster is one vertex with a
hash-map adjacency ``neighbor -> f(C, D)``.  When two clusters merge, the
shorter adjacency is folded into the longer one.

Pair priorities are ranked by ``(priority desc, min id asc, max id asc)``.
"""

from __future__ import annotations

import enum
import heapq
import math
from collections.abc import Callable
from fractions import Fraction
from typing import NamedTuple

from .graph import Clustering, DegenerateGraphError, Graph

__all__ = [
    "Prioritizer",
    "MergeEvent",
    "priority",
    "single_step_greedy",
    "multi_step_greedy",
]


class Prioritizer(str, enum.Enum):
    """Merge priority functions over adjacent cluster pairs."""

    MI = "mi"  # modularity increase
    WD = "wd"  # weight density f(C,D) / (deg C deg D)
    SIG = "sig"  # significance dQ / sqrt(deg C deg D)
    DA = "da"  # Danon et al.: dQ / min(deg C, deg D)
    HN = "hn"  # Wakita-Tsurumi, size = vertex count
    HE = "he"  # Wakita-Tsurumi, size = number of neighbor clusters

    @classmethod
    def parse(cls, value: str | Prioritizer) -> Prioritizer:
        if isinstance(value, Prioritizer):
            return value
        try:
            return cls(value.lower())
        except ValueError:
            raise ValueError(f"unknown prioritizer {value!r}; expected one of {[p.value for p in cls]}") from None


class MergeEvent(NamedTuple):
    """Passed to the coarsening observer after every merge."""

    survivor: int
    absorbed: int
    delta_q: float
    n_clusters: int


#: Return a truthy value to stop coarsening after the reported merge.
MergeObserver = Callable[[MergeEvent], object]


def _priority_fn(kind: Prioritizer, total: float) -> Callable[[float, float, float, float, float], float]:
    """Return ``fn(f, deg_c, deg_d, size_c, size_d) -> priority``.

    Every function is symmetric in its two clusters, bit for bit, so a pair
    gets the same priority whichever side computes it.
    """
    scale = total * total

    if kind is Prioritizer.MI:
        return lambda f, dc, dd, sc, sd: 2.0 * (f * total - dc * dd) / scale
    if kind is Prioritizer.WD:
        return lambda f, dc, dd, sc, sd: f / (dc * dd)
    if kind is Prioritizer.SIG:
        return lambda f, dc, dd, sc, sd: 2.0 * (f * total - dc * dd) / scale / math.sqrt(dc * dd)
    if kind is Prioritizer.DA:
        return lambda f, dc, dd, sc, sd: 2.0 * (f * total - dc * dd) / scale / min(dc, dd)
    # HN and HE share the balance factor; they differ in what "size" counts.
    return lambda f, dc, dd, sc, sd: min(sc / sd, sd / sc) * (2.0 * (f * total - dc * dd) / scale)


def priority(kind: Prioritizer | str, graph: Graph, clustering: Clustering, c: int, d: int) -> float:
    """Merge priority of two adjacent clusters of ``clustering``.

    Recomputes everything from the clustering, so it is slow but convenient
    for inspection and testing.
    """
    kind = Prioritizer.parse(kind)
    if c == d:
        raise ValueError("a cluster is not adjacent to itself")
    between = clustering.weight_between(c, d)
    if not between > 0:
        raise ValueError(f"clusters {c} and {d} are not adjacent")
    if kind is Prioritizer.HE:
        sc, sd = (_neighbor_cluster_count(clustering, x) for x in (c, d))
    else:
        sc, sd = (sum(graph.vertex_sizes[v] for v in clustering.members[x]) for x in (c, d))
    fn = _priority_fn(kind, graph.total_weight)
    return fn(between, clustering.degree[c], clustering.degree[d], sc, sd)


def _neighbor_cluster_count(clustering: Clustering, c: int) -> int:
    adjacency = clustering.graph.adjacency
    assignment = clustering.assignment
    return len({assignment[u] for v in clustering.members[c] for u, w in adjacency[v] if w > 0} - {c})


class _CoarseGraph:
    """Working graph whose vertices are the live clusters."""

    def __init__(self, graph: Graph, kind: Prioritizer):
        if graph.total_weight <= 0:
            raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
        n = graph.n
        self.graph = graph
        self.kind = kind
        self.total = graph.total_weight
        self.adj: list[dict[int, float]] = [{u: w for u, w in row if u != v} for v, row in enumerate(graph.adjacency)]
        self.degree = list(graph.degrees)
        self.size = [float(s) for s in graph.vertex_sizes]
        self.members: list[list[int]] = [[v] for v in range(n)]
        self.alive = [True] * n
        self.n_clusters = n
        self._fn = _priority_fn(kind, self.total)

    def pair_priority(self, c: int, d: int, f: float) -> float:
        if self.kind is Prioritizer.HE:
            return self._fn(f, self.degree[c], self.degree[d], len(self.adj[c]), len(self.adj[d]))
        return self._fn(f, self.degree[c], self.degree[d], self.size[c], self.size[d])

    def delta_q(self, c: int, d: int) -> float:
        total = self.total
        return 2.0 * (self.adj[c][d] * total - self.degree[c] * self.degree[d]) / (total * total)

    def merge(self, c: int, d: int) -> tuple[int, int, set[int]]:
        """Merge two adjacent clusters.

        Returns ``(survivor, absorbed, common)`` where ``common`` holds the
        clusters that were adjacent to both.
        """
        adj = self.adj
        if len(adj[c]) < len(adj[d]) or (len(adj[c]) == len(adj[d]) and d < c):
            c, d = d, c
        survivor, absorbed = c, d
        into = adj[survivor]
        del into[absorbed]
        common = set()
        for x, w in adj[absorbed].items():
            if x == survivor:
                continue
            row = adj[x]
            del row[absorbed]
            if x in into:
                into[x] += w
                row[survivor] += w
                common.add(x)
            else:
                into[x] = w
                row[survivor] = w
        adj[absorbed] = {}
        self.degree[survivor] += self.degree[absorbed]
        self.size[survivor] += self.size[absorbed]
        small, large = sorted((self.members[survivor], self.members[absorbed]), key=len)
        large.extend(small)
        self.members[survivor] = large
        self.members[absorbed] = []
        self.alive[absorbed] = False
        self.n_clusters -= 1
        return survivor, absorbed, common

    def live_pairs(self) -> list[tuple[int, int]]:
        return [(c, d) for c in range(len(self.adj)) if self.alive[c] for d in self.adj[c] if c < d]

    def to_clustering(self) -> Clustering:
        assignment = [0] * self.graph.n
        label = 0
        for c in sorted(range(len(self.members)), key=lambda c: min(self.members[c], default=self.graph.n)):
            if not self.alive[c]:
                continue
            for v in self.members[c]:
                assignment[v] = label
            label += 1
        return Clustering(self.graph, assignment)


class _BestPartnerQueue:
    """Max-heap over clusters keyed by each cluster's best partner.

    Entries are invalidated lazily: every cluster carries a version number
    that is bumped whenever its best partner is recomputed.
    """

    def __init__(self, cg: _CoarseGraph):
        self.cg = cg
        n = len(cg.adj)
        self.best: list[tuple[float, int] | None] = [None] * n
        self.version = [0] * n
        self.heap: list[tuple[float, int, int, int, int]] = []
        for c in range(n):
            self.rescan(c)

    def rescan(self, c: int) -> None:
        cg = self.cg
        best_p = -math.inf
        best_d = -1
        for d, f in cg.adj[c].items():
            p = cg.pair_priority(c, d, f)
            if p > best_p or (p == best_p and d < best_d):
                best_p, best_d = p, d
        self._set(c, (best_p, best_d) if best_d >= 0 else None)

    def offer(self, c: int, d: int, p: float) -> None:
        """Tell ``c`` about a changed pair ``(c, d)`` that is not its current best."""
        current = self.best[c]
        if current is None or p > current[0] or (p == current[0] and d < current[1]):
            self._set(c, (p, d))

    def _set(self, c: int, best: tuple[float, int] | None) -> None:
        self.best[c] = best
        self.version[c] += 1
        if best is not None:
            p, d = best
            heapq.heappush(self.heap, (-p, min(c, d), max(c, d), c, self.version[c]))

    def top(self) -> tuple[float, int, int] | None:
        heap = self.heap
        while heap:
            neg_p, a, b, owner, version = heap[0]
            if self.cg.alive[owner] and self.version[owner] == version:
                return -neg_p, a, b
            heapq.heappop(heap)
        return None

    def partner(self, c: int) -> int:
        best = self.best[c]
        return -1 if best is None else best[1]

    def after_merge(self, survivor: int, absorbed: int, common: set[int]) -> None:
        cg = self.cg
        self.best[absorbed] = None
        self.version[absorbed] += 1
        self.rescan(survivor)
        touched = (survivor, absorbed)
        for x, f in cg.adj[survivor].items():
            if x in common and cg.kind is Prioritizer.HE:
                continue
            if self.partner(x) in touched:
                self.rescan(x)
            else:
                self.offer(x, survivor, cg.pair_priority(x, survivor, f))
        if cg.kind is Prioritizer.HE:
            # Clusters adjacent to both merged clusters lost a neighbor, which
            # changes the priority of every pair they take part in.
            for x in common:
                self.rescan(x)
            for x in common:
                for y, f in cg.adj[x].items():
                    if y == survivor or y in common:
                        continue
                    if self.partner(y) == x:
                        self.rescan(y)
                    else:
                        self.offer(y, x, cg.pair_priority(y, x, f))


def single_step_greedy(
    graph: Graph,
    prioritizer: Prioritizer | str = Prioritizer.SIG,
    observer: MergeObserver | None = None,
) -> Clustering:
    """Repeatedly merge the highest-priority adjacent pair while that merge raises modularity."""
    kind = Prioritizer.parse(prioritizer)
    cg = _CoarseGraph(graph, kind)
    queue = _BestPartnerQueue(cg)
    while True:
        top = queue.top()
        if top is None:
            break
        _, c, d = top
        dq = cg.delta_q(c, d)
        if not dq > 0:
            break
        survivor, absorbed, common = cg.merge(c, d)
        queue.after_merge(survivor, absorbed, common)
        if observer is not None and observer(MergeEvent(survivor, absorbed, dq, cg.n_clusters)):
            break
    return cg.to_clustering()


def multi_step_greedy(
    graph: Graph,
    prioritizer: Prioritizer | str = Prioritizer.SIG,
    merge_fraction: float = 5.0,
    observer: MergeObserver | None = None,
) -> Clustering:
    """Merge up to ``ceil(merge_fraction% * #improving pairs)`` disjoint pairs per round.

    Candidates are ranked once at the start of each round; a pair whose
    cluster was already merged in the round is skipped, not replaced.
    """
    if not 0 < merge_fraction <= 100:
        raise ValueError(f"merge fraction must lie in (0, 100], got {merge_fraction}")
    fraction = Fraction(str(merge_fraction)) / 100
    kind = Prioritizer.parse(prioritizer)
    cg = _CoarseGraph(graph, kind)
    while True:
        ranked = []
        improving = 0
        for c, d in cg.live_pairs():
            f = cg.adj[c][d]
            dq = cg.delta_q(c, d)
            if dq > 0:
                improving += 1
            ranked.append((-cg.pair_priority(c, d, f), c, d, dq))
        if improving == 0:
            break
        limit = math.ceil(fraction * improving)
        ranked.sort()
        merged: set[int] = set()
        for _, c, d, dq in ranked[:limit]:
            if c in merged or d in merged or not dq > 0:
                continue
            survivor, absorbed, _ = cg.merge(c, d)
            merged.update((survivor, absorbed))
            if observer is not None and observer(MergeEvent(survivor, absorbed, dq, cg.n_clusters)):
                return cg.to_clustering()
    return cg.to_clustering()
