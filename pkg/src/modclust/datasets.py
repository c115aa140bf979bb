"""Small real-world graphs shipped with the package, plus lookup of user-supplied ones."""

from __future__ import annotations

import os
from importlib import resources
from pathlib import Path

from .graph import Graph
from .io import read_graph

# name -> (file in modclust/data, read without weights and self-edges)
BUNDLED = {
    "karate": ("karate.net", True),
    "SouthernWomen": ("southernwomen.net", True),
    "lesmis": ("lesmis.net", False),
    "afootball": ("afootball.net", True),
    "celegansneural": ("celegansneural.net", False),
}

GRAPH_DIR_ENV = "MODCLUST_GRAPH_DIR"
_EXTENSIONS = {".net": "pajek", ".paj": "pajek", ".txt": "edgelist", ".edges": "edgelist", ".edgelist": "edgelist"}


def bundled_names() -> list[str]:
    return list(BUNDLED)


def bundled_path(name: str) -> Path:
    try:
        filename, _ = BUNDLED[name]
    except KeyError:
        raise KeyError(f"no bundled graph named {name!r}; available: {', '.join(BUNDLED)}") from None
    return Path(str(resources.files("modclust") / "data" / filename))


def load_bundled(name: str, *, unweighted: bool | None = None) -> Graph:
    """Load a bundled graph; ``unweighted`` defaults to how the graph is meant to be used."""
    if unweighted is None:
        unweighted = BUNDLED[name][1] if name in BUNDLED else False
    return read_graph(bundled_path(name), "pajek", unweighted=unweighted)


def find_graph(name: str, directory: str | os.PathLike | None = None) -> tuple[Path, str] | None:
    """Look for ``<name>.<ext>`` (case-insensitive) among bundled data and the user graph directory.

    The directory defaults to ``$MODCLUST_GRAPH_DIR``.  Returns the path and
    its format, or ``None``.
    """
    if name in BUNDLED:
        return bundled_path(name), "pajek"
    directory = directory if directory is not None else os.environ.get(GRAPH_DIR_ENV)
    if not directory or not Path(directory).is_dir():
        return None
    for path in sorted(Path(directory).iterdir()):
        fmt = _EXTENSIONS.get(path.suffix.lower())
        if fmt and path.stem.lower() == name.lower():
            return path, fmt
    return None
