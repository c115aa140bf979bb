"""Vertex-moving local search: Complete Greedy, Fast Greedy, Kernighan-Lin.

Move gains are handled internally in a scaled form
``(f(v,D) - f(v,C-v)) * f(V,V) - deg(v) * (deg(D) - deg(C-v))`` which equals
the modularity change times ``f(V,V)^2 / 2``.  For integer weights it is
computed exactly, so ties and the strict ``> 0`` tests are not perturbed by
rounding.

Ties between equally good moves go to the lowest vertex id, then the lowest
target cluster id, with a new cluster ranked after every existing one.
"""

from __future__ import annotations

import heapq
import math
from collections.abc import Callable, Iterable
from typing import NamedTuple

from .graph import NEW, Clustering, DegenerateGraphError, Graph, modularity

__all__ = [
    "MoveProposal",
    "best_move_for_vertex",
    "complete_greedy_refine",
    "fast_greedy_refine",
    "kernighan_lin_refine",
    "kl_patience",
    "REFINERS",
]


class MoveProposal(NamedTuple):
    vertex: int
    target: int  # cluster id, or NEW
    gain: float  # modularity change if applied


class _Move(NamedTuple):
    scaled: float
    vertex: int
    target: int
    weight_from: float
    weight_to: float


def _scan(graph: Graph, clustering: Clustering, v: int) -> _Move:
    """Best move of ``v`` over its adjacent clusters plus a new cluster."""
    total = graph.total_weight
    assignment = clustering.assignment
    cdeg = clustering.degree
    source = assignment[v]
    acc: dict[int, float] = {}
    for u, w in graph.adjacency[v]:
        if u != v:
            c = assignment[u]
            acc[c] = acc.get(c, 0.0) + w
    w_from = acc.pop(source, 0.0)
    dv = graph.degrees[v]
    rest = cdeg[source] - dv if len(clustering.members[source]) > 1 else 0.0
    best_g = dv * rest - w_from * total
    best_t = NEW
    best_w = 0.0
    for c, w in acc.items():
        g = (w - w_from) * total - dv * (cdeg[c] - rest)
        if g > best_g or (g == best_g and (best_t == NEW or c < best_t)):
            best_g, best_t, best_w = g, c, w
    return _Move(best_g, v, best_t, w_from, best_w)


def _check(graph: Graph) -> float:
    """Validate the graph and return the smallest scaled gain worth acting on.

    The threshold corresponds to a modularity change of 1e-13.  It sits far
    above floating-point noise in the scaled gains, so rounding can never
    make a cycle of moves look improving, yet far below any real gain on
    integer-weighted graphs.
    """
    total = graph.total_weight
    if total <= 0:
        raise DegenerateGraphError("modularity is undefined for a graph with zero total weight")
    return 5e-14 * total * total


def _unscale(graph: Graph, scaled: float) -> float:
    total = graph.total_weight
    return 2.0 * scaled / (total * total)


def best_move_for_vertex(graph: Graph, clustering: Clustering, v: int) -> MoveProposal:
    """Highest-gain move of one vertex; the gain may be zero or negative."""
    _check(graph)
    move = _scan(graph, clustering, v)
    return MoveProposal(v, move.target, _unscale(graph, move.scaled))


def _apply(clustering: Clustering, move: _Move) -> int:
    return clustering.move(move.vertex, move.target, weight_from=move.weight_from, weight_to=move.weight_to)


class _MoveCache:
    """Per-vertex best moves in a lazily invalidated max-heap."""

    def __init__(self, graph: Graph, clustering: Clustering, skip: list[bool] | None = None):
        self.graph = graph
        self.clustering = clustering
        self.skip = skip
        self.version = [0] * graph.n
        self.moves: list[_Move | None] = [None] * graph.n
        self.heap: list[tuple[float, int, float, int]] = []
        for v in range(graph.n):
            self.refresh(v)

    def refresh(self, v: int) -> None:
        if self.skip is not None and self.skip[v]:
            return
        move = _scan(self.graph, self.clustering, v)
        self.moves[v] = move
        self.version[v] += 1
        target_key = math.inf if move.target == NEW else move.target
        heapq.heappush(self.heap, (-move.scaled, v, target_key, self.version[v]))

    def best(self) -> _Move | None:
        heap = self.heap
        skip = self.skip
        while heap:
            _, v, _, version = heap[0]
            if version == self.version[v] and (skip is None or not skip[v]):
                return self.moves[v]
            heapq.heappop(heap)
        return None

    def touched_by(self, clusters: Iterable[int]) -> set[int]:
        """Members of ``clusters`` and all their neighbors."""
        members = self.clustering.members
        adjacency = self.graph.adjacency
        out: set[int] = set()
        for c in clusters:
            for v in members.get(c, ()):
                out.add(v)
                out.update(u for u, _ in adjacency[v])
        return out


def complete_greedy_refine(graph: Graph, clustering: Clustering) -> Clustering:
    """Apply the globally best vertex move until no move raises modularity.

    Works on a copy; the input clustering is left untouched.
    """
    tol = _check(graph)
    clustering = clustering.copy()
    cache = _MoveCache(graph, clustering)
    while True:
        move = cache.best()
        if move is None or not move.scaled > tol:
            break
        source = clustering.assignment[move.vertex]
        target = _apply(clustering, move)
        for u in cache.touched_by((source, target)):
            cache.refresh(u)
    return clustering


def fast_greedy_refine(graph: Graph, clustering: Clustering) -> Clustering:
    """Sweep the vertices, moving each to its best cluster, until a sweep moves nothing.

    Vertices are visited by increasing adjacency length (then id).  Works on
    a copy of ``clustering``.
    """
    tol = _check(graph)
    clustering = clustering.copy()
    order = sorted(range(graph.n), key=lambda v: (len(graph.adjacency[v]), v))
    moved = True
    while moved:
        moved = False
        for v in order:
            move = _scan(graph, clustering, v)
            if move.scaled > tol:
                _apply(clustering, move)
                moved = True
    return clustering


def kl_patience(n: int) -> int:
    """Moves without a new peak after which the inner loop gives up: round(10 log2 n), at least 1."""
    if n <= 1:
        return 1
    return max(1, math.floor(10.0 * math.log2(n) + 0.5))


def kernighan_lin_refine(graph: Graph, clustering: Clustering) -> Clustering:
    """Kernighan-Lin style refinement with peak restoration.

    Each pass moves every vertex at most once, always taking the best move
    among the unmoved vertices even when it lowers modularity, and remembers
    the best clustering seen.  A pass stops early after :func:`kl_patience`
    moves without a new peak; the clustering is then rolled back to the
    peak.  Passes repeat while they raise modularity.
    """
    tol = _check(graph)
    clustering = clustering.copy()
    n = graph.n
    patience = kl_patience(n)
    quality = modularity(graph, clustering)
    while True:
        saved = clustering.copy()
        moved = [False] * n
        cache = _MoveCache(graph, clustering, skip=moved)
        log: list[tuple[int, int]] = []
        gained = peak = 0.0
        peak_at = 0
        since_peak = 0
        for _ in range(n):
            move = cache.best()
            if move is None:
                break
            v = move.vertex
            source = clustering.assignment[v]
            moved[v] = True
            if move.target == NEW and len(clustering.members[source]) == 1:
                # Already alone: the partition would not change.
                log.append((v, source))
            else:
                target = _apply(clustering, move)
                log.append((v, source))
                gained += move.scaled
                for u in cache.touched_by((source, target)):
                    cache.refresh(u)
            if gained > peak + tol:
                peak, peak_at, since_peak = gained, len(log), 0
            else:
                since_peak += 1
                if since_peak >= patience:
                    break
        for v, source in reversed(log[peak_at:]):
            if clustering.assignment[v] != source:
                clustering.move(v, source)
        if not peak > 0:
            break
        # Guard against rounding in the accumulated gains: only a measurable
        # rise in freshly computed modularity earns another pass.
        previous, quality = quality, modularity(graph, clustering)
        if quality < previous:
            return saved
        if not quality > previous:
            break
    return clustering


def _no_refinement(graph: Graph, clustering: Clustering) -> Clustering:
    return clustering.copy()


Refiner = Callable[[Graph, Clustering], Clustering]

REFINERS: dict[str, Refiner] = {
    "none": _no_refinement,
    "fast": fast_greedy_refine,
    "complete": complete_greedy_refine,
    "kl": kernighan_lin_refine,
}
