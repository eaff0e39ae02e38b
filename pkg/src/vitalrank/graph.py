"""Undirected simple-graph container, edge-list ingestion, degree statistics."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "Graph",
    "GraphStats",
    "GraphParseError",
    "parse_edge_list",
    "load_edge_list",
    "graph_stats",
]

COMMENT_PREFIXES = ("%", "#")


class GraphParseError(ValueError):
    """Malformed edge-list input."""


class Graph:
    """Immutable undirected simple graph with dense internal node indices.

    Adjacency is stored CSR-style: the sorted neighbours of node ``u`` are
    ``indices[indptr[u]:indptr[u+1]]``. External node labels map to internal
    indices through ``labels`` / ``index()``; all algorithms work on indices.
    Instances are never mutated after construction, so they are safe to share
    across threads.
    """

    __slots__ = ("n", "m", "indptr", "indices", "labels", "_label_index")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Sequence[str] | None = None,
    ):
        if n < 0:
            raise ValueError("node count must be non-negative")
        pairs = set()
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                continue  # simple graph: drop self-loops
            pairs.add((u, v) if u < v else (v, u))

        self.n = n
        self.m = len(pairs)
        if pairs:
            arr = np.array(sorted(pairs), dtype=np.int32)
            both = np.concatenate([arr, arr[:, ::-1]])
            order = np.lexsort((both[:, 1], both[:, 0]))
            both = both[order]
            counts = np.bincount(both[:, 0], minlength=n)
            self.indptr = np.concatenate([[0], np.cumsum(counts)]).astype(np.int64)
            self.indices = np.ascontiguousarray(both[:, 1], dtype=np.int32)
        else:
            self.indptr = np.zeros(n + 1, dtype=np.int64)
            self.indices = np.zeros(0, dtype=np.int32)

        if labels is None:
            labels = [str(i) for i in range(n)]
        elif len(labels) != n:
            raise ValueError("labels length must equal node count")
        self.labels = list(labels)
        self._label_index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._label_index) != n:
            raise ValueError("node labels must be unique")

    def _check(self, u: int) -> None:
        if not 0 <= u < self.n:
            raise IndexError(f"node index {u} out of range [0, {self.n})")

    def degree(self, u: int) -> int:
        self._check(u)
        return int(self.indptr[u + 1] - self.indptr[u])

    def neighbors(self, u: int) -> np.ndarray:
        """Sorted neighbour indices of ``u`` (a read-only view)."""
        self._check(u)
        return self.indices[self.indptr[u] : self.indptr[u + 1]]

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def edges(self) -> Iterator[tuple[int, int]]:
        """Each undirected edge once, as (u, v) with u < v."""
        for u in range(self.n):
            for v in self.neighbors(u):
                if u < v:
                    yield u, int(v)

    def index(self, label: str) -> int:
        return self._label_index[label]

    def label(self, u: int) -> str:
        self._check(u)
        return self.labels[u]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def parse_edge_list(source: str | Iterable[str]) -> Graph:
    """Parse a whitespace- or comma-separated edge list into a Graph.

    Lines starting with '%' or '#' are comments. Node labels are arbitrary
    strings mapped to dense indices in first-seen order. Self-loops are
    dropped (the label still registers a node), duplicate edges in either
    orientation are merged.

    Raises GraphParseError for lines that do not hold exactly two tokens and
    for input that defines no nodes at all.
    """
    if isinstance(source, str):
        source = source.splitlines()

    label_index: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, int]] = []

    def intern(tok: str) -> int:
        idx = label_index.get(tok)
        if idx is None:
            idx = len(labels)
            label_index[tok] = idx
            labels.append(tok)
        return idx

    for lineno, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line or line.startswith(COMMENT_PREFIXES):
            continue
        tokens = line.replace(",", " ").split()
        if len(tokens) != 2:
            raise GraphParseError(
                f"line {lineno}: expected two node labels, got {len(tokens)}: {line!r}"
            )
        u, v = intern(tokens[0]), intern(tokens[1])
        edges.append((u, v))

    if not labels:
        raise GraphParseError("empty edge list: no nodes defined")
    return Graph(len(labels), edges, labels)


def load_edge_list(path: str) -> Graph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edge_list(fh)


@dataclass(frozen=True)
class GraphStats:
    """Graph-level degree statistics and the epidemic-threshold estimate.

    ``beta_threshold`` is the heterogeneous mean-field estimate
    <k> / (<k^2> - <k>); it is None when <k^2> <= <k> (no positive threshold
    exists, e.g. when all degrees are <= 1).
    """

    n: int
    m: int
    max_degree: int
    avg_degree: float
    mean_degree_squared: float
    beta_threshold: float | None

    CSV_HEADER = "n,m,max_deg,avg_deg,mean_deg_sq,beta_th"

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "m": self.m,
                "max_degree": self.max_degree,
                "avg_degree": self.avg_degree,
                "mean_degree_squared": self.mean_degree_squared,
                "beta_threshold": self.beta_threshold,
            }
        )

    def csv_row(self) -> str:
        bt = "" if self.beta_threshold is None else repr(self.beta_threshold)
        return (
            f"{self.n},{self.m},{self.max_degree},"
            f"{self.avg_degree!r},{self.mean_degree_squared!r},{bt}"
        )


def graph_stats(g: Graph) -> GraphStats:
    if g.n < 1:
        raise ValueError("graph_stats requires at least one node")
    deg = g.degrees().astype(np.float64)
    avg = 2.0 * g.m / g.n
    msq = float(np.mean(deg * deg))
    beta_th = avg / (msq - avg) if msq > avg else None
    return GraphStats(
        n=g.n,
        m=g.m,
        max_degree=int(deg.max()) if g.n else 0,
        avg_degree=avg,
        mean_degree_squared=msq,
        beta_threshold=beta_th,
    )
