"""Deterministic synthetic graphs for tests and timing runs."""

from __future__ import annotations

import random

from .graph import Graph


def triangle() -> Graph:
    return Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])


def two_triangles() -> Graph:
    """Triangles 0-1-2 and 3-4-5 joined by the bridge 2-3."""
    return Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])


def ring_of_cliques(n_cliques: int, clique_size: int) -> Graph:
    """Cliques arranged in a ring, consecutive cliques joined by one edge."""
    edges = []
    for k in range(n_cliques):
        base = k * clique_size
        edges.extend((base + i, base + j) for i in range(clique_size) for j in range(i + 1, clique_size))
        if n_cliques > 1:
            nxt = ((k + 1) % n_cliques) * clique_size
            edges.append((base + clique_size - 1, nxt))
    return Graph.from_edges(n_cliques * clique_size, edges)


def random_graph(n: int, p: float, seed: int, weights: str = "unit") -> Graph:
    """Erdos-Renyi style graph.

    ``weights`` is ``"unit"``, ``"int"`` (1..5), ``"real"`` (uniform in
    (0, 3]), or ``"mixed"`` (a per-graph pick of the others, with
    occasional self-edges).
    """
    rng = random.Random(seed)
    if weights == "mixed":
        weights = rng.choice(["unit", "int", "real"])
        self_edges = rng.random() < 0.3
    else:
        self_edges = False
    draw = {
        "unit": lambda: 1.0,
        "int": lambda: float(rng.randint(1, 5)),
        "real": lambda: round(rng.uniform(0.05, 3.0), 3),
    }[weights]
    edges = [(u, v, draw()) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    if self_edges:
        edges.extend((v, v, draw()) for v in range(n) if rng.random() < 0.2)
    return Graph.from_edges(n, edges)


def planted_partition(
    n: int,
    mean_degree: float,
    mixing: float,
    seed: int,
    min_size: int = 10,
    max_size: int = 100,
) -> Graph:
    """Community-structured graph with about ``n * mean_degree / 2`` edges.

    Community sizes are uniform in ``[min_size, max_size]``.  Each edge picks
    a uniform endpoint ``u`` and, with probability ``1 - mixing``, a partner
    from ``u``'s community, else a uniform partner.  Self-loops and repeated
    pairs are discarded.
    """
    rng = random.Random(seed)
    community = []
    groups: list[list[int]] = []
    while len(community) < n:
        size = min(rng.randint(min_size, max_size), n - len(community))
        groups.append(list(range(len(community), len(community) + size)))
        community.extend([len(groups) - 1] * size)
    target = int(n * mean_degree / 2)
    seen: set[tuple[int, int]] = set()
    attempts = 0
    while len(seen) < target and attempts < 20 * target:
        attempts += 1
        u = rng.randrange(n)
        v = rng.choice(groups[community[u]]) if rng.random() >= mixing else rng.randrange(n)
        if u != v:
            seen.add((min(u, v), max(u, v)))
    return Graph.from_edges(n, sorted(seen))
