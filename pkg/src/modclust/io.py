"""Reading graphs (edge lists, Pajek) and writing clusterings."""

from __future__ import annotations

import os
import re
from collections.abc import Iterable, Sequence

from .graph import Clustering, Graph

__all__ = ["ParseError", "FORMATS", "read_graph", "parse_graph", "write_clustering", "read_clustering"]

FORMATS = ("edgelist", "pajek")


class ParseError(ValueError):
    """A graph file could not be parsed; carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None, source: str | None = None):
        self.line = line
        self.source = source
        where = ""
        if source:
            where = f"{source}:"
        if line is not None:
            where = f"{where}{line}: " if where else f"line {line}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


def _weight(token: str, lineno: int, source: str | None) -> float:
    try:
        w = float(token)
    except ValueError:
        raise ParseError(f"bad edge weight {token!r}", lineno, source) from None
    if w < 0 or w != w or w in (float("inf"), float("-inf")):
        raise ParseError(f"edge weight must be a nonnegative finite number, got {token}", lineno, source)
    return w


def _label_order(labels: Iterable[str]) -> list[str]:
    """Sort numeric labels numerically, anything else lexicographically."""
    labels = set(labels)
    try:
        return sorted(labels, key=int)
    except ValueError:
        return sorted(labels)


def _parse_edgelist(lines: Iterable[str], source: str | None) -> tuple[list[str], list[tuple[str, str, float]]]:
    edges = []
    seen: set[str] = set()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line or line.startswith("%"):
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ParseError(f"expected 'u v [w]', got {raw.strip()!r}", lineno, source)
        w = _weight(parts[2], lineno, source) if len(parts) == 3 else 1.0
        edges.append((parts[0], parts[1], w))
        seen.update(parts[:2])
    return _label_order(seen), edges


_SECTION = re.compile(r"^\*(\w+)", re.ASCII)


def _parse_pajek(
    lines: Iterable[str], source: str | None
) -> tuple[list[str], list[tuple[str, str, float]], dict[str, str]]:
    n = None
    names: dict[str, str] = {}
    edges: list[tuple[str, str, float]] = []
    section = None
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        match = _SECTION.match(line)
        if match:
            section = match.group(1).lower()
            if section == "vertices":
                parts = line.split()
                if len(parts) < 2 or not parts[1].isdigit():
                    raise ParseError("'*Vertices' needs a vertex count", lineno, source)
                n = int(parts[1])
            elif section not in ("edges", "arcs", "edgeslist", "arcslist"):
                section = "ignored"
            continue
        if section is None:
            raise ParseError("data before the first section header", lineno, source)
        if section == "ignored":
            continue
        if section == "vertices":
            vid, *tail = line.split(None, 1)
            rest = tail[0] if tail else ""
            if not vid.isdigit():
                raise ParseError(f"bad vertex line {line!r}", lineno, source)
            rest = rest.strip()
            if rest.startswith('"'):
                end = rest.find('"', 1)
                if end < 0:
                    raise ParseError("unterminated vertex label", lineno, source)
                names[vid] = rest[1:end]
            elif rest:
                names[vid] = rest.split()[0]
            continue
        parts = line.split()
        if section in ("edges", "arcs"):
            if len(parts) < 2:
                raise ParseError(f"expected 'u v [w]', got {line!r}", lineno, source)
            w = _weight(parts[2], lineno, source) if len(parts) >= 3 else 1.0
            edges.append((parts[0], parts[1], w))
        else:
            edges.extend((parts[0], x, 1.0) for x in parts[1:])
        for vid in parts[:2] if section in ("edges", "arcs") else parts:
            if not vid.isdigit() or (n is not None and not 1 <= int(vid) <= n):
                raise ParseError(f"vertex id {vid!r} out of range", lineno, source)
    if n is None:
        raise ParseError("missing '*Vertices' header", None, source)
    ids = [str(i) for i in range(1, n + 1)]
    return ids, edges, names


def parse_graph(
    lines: Iterable[str],
    fmt: str = "edgelist",
    *,
    drop_self_edges: bool = False,
    unweighted: bool = False,
    source: str | None = None,
) -> Graph:
    """Parse graph text.

    ``unweighted`` replaces every accumulated weight by 1 and implies
    ``drop_self_edges``; this is how graphs flagged for unweighted use are
    read.
    """
    if fmt == "edgelist":
        ids, edges = _parse_edgelist(lines, source)
        names: dict[str, str] = {}
    elif fmt == "pajek":
        ids, edges, names = _parse_pajek(lines, source)
    else:
        raise ValueError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")
    index = {label: i for i, label in enumerate(ids)}
    triples = [(index[u], index[v], w) for u, v, w in edges]
    if drop_self_edges or unweighted:
        triples = [(u, v, w) for u, v, w in triples if u != v]
    if unweighted:
        pairs = {(min(u, v), max(u, v)) for u, v, w in triples if w > 0}
        triples = [(u, v, 1.0) for u, v in sorted(pairs)]
    labels = [names.get(label, label) for label in ids]
    return Graph.from_edges(len(ids), triples, labels=labels)


def read_graph(
    path: str | os.PathLike,
    fmt: str | None = None,
    *,
    drop_self_edges: bool = False,
    unweighted: bool = False,
) -> Graph:
    """Read a graph file; the format defaults from the extension (``.net`` is Pajek)."""
    path = os.fspath(path)
    if fmt is None:
        fmt = "pajek" if path.lower().endswith((".net", ".paj")) else "edgelist"
    with open(path, encoding="utf-8-sig") as fh:
        return parse_graph(fh, fmt, drop_self_edges=drop_self_edges, unweighted=unweighted, source=path)


def write_clustering(clustering: Clustering | Sequence[int], path: str | os.PathLike, labels: Sequence[str] | None = None) -> None:
    """Write one ``<vertex label> <cluster id>`` line per vertex, ids dense from 0."""
    if isinstance(clustering, Clustering):
        dense = clustering.relabeled()
        labels = labels if labels is not None else clustering.graph.labels
    else:
        ids: dict[int, int] = {}
        dense = [ids.setdefault(c, len(ids)) for c in clustering]
    if labels is None:
        labels = [str(v) for v in range(len(dense))]
    with open(path, "w", encoding="utf-8") as fh:
        for label, c in zip(labels, dense):
            fh.write(f"{label} {c}\n")


def read_clustering(path: str | os.PathLike, graph: Graph) -> Clustering:
    """Read a file written by :func:`write_clustering` back onto ``graph``.

    Lines are matched to vertices by position, and each label is checked.
    """
    source = os.fspath(path)
    assignment = []
    with open(source, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            label, _, cluster = line.rpartition(" ")
            v = len(assignment)
            if v >= graph.n or label != graph.labels[v] or not cluster.isdigit():
                raise ParseError(f"unexpected clustering line {line!r}", lineno, source)
            assignment.append(int(cluster))
    if len(assignment) != graph.n:
        raise ParseError(f"expected {graph.n} vertices, found {len(assignment)}", None, source)
    return Clustering(graph, assignment)
