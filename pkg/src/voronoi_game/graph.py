"""Immutable undirected graphs with cached hop distances.

Vertices are the integers ``0..n-1``. A :class:`Graph` is validated on
construction (simple, symmetric, connected) and never mutated afterwards, so
it can be shared freely between searches.
"""

from __future__ import annotations

import json
import threading
from collections import OrderedDict, deque
from typing import Any, Iterable, Iterator, Mapping

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

# Upper bound on n*n for the dense all-pairs table. Beyond it, rows are
# computed on demand by BFS and kept in a bounded LRU.
DEFAULT_MATRIX_CAP = 16_000_000
ROW_CACHE_SIZE = 4096


class GraphError(ValueError):
    """Raised for malformed graphs or invalid vertex ids."""


def bfs_distances(adj: list[tuple[int, ...]] | tuple[tuple[int, ...], ...], source: int) -> list[int]:
    """Hop distances from ``source``; unreachable vertices get -1."""
    dist = [-1] * len(adj)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        du = dist[u] + 1
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = du
                queue.append(w)
    return dist


class Graph:
    """Simple connected undirected graph on vertices ``0..n-1``.

    Parameters
    ----------
    n : int
        Number of vertices, at least 1.
    edges : iterable of (u, v)
        Undirected edges. Self-loops and repeated edges are rejected.
    labels : mapping, optional
        Role tag per vertex (``"corner"``, ``"leaf"``, ``"hub"`` ...).
    meta : object, optional
        Family metadata produced by a generator in :mod:`voronoi_game.families`.
    matrix_cap : int
        Largest ``n*n`` for which a dense distance table is built.
    """

    __slots__ = ("n", "adj", "labels", "meta", "matrix_cap", "_edges", "_matrix", "_rows", "_lock")

    def __init__(
        self,
        n: int,
        edges: Iterable[tuple[int, int]],
        labels: Mapping[int, str] | None = None,
        meta: Any = None,
        *,
        matrix_cap: int = DEFAULT_MATRIX_CAP,
    ) -> None:
        if not isinstance(n, (int, np.integer)) or n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {n!r}")
        n = int(n)
        nbrs: list[set[int]] = [set() for _ in range(n)]
        edge_list = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) references a vertex outside 0..{n - 1}")
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if v in nbrs[u]:
                raise GraphError(f"parallel edge ({u}, {v})")
            nbrs[u].add(v)
            nbrs[v].add(u)
            edge_list.append((min(u, v), max(u, v)))
        self.n = n
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(s)) for s in nbrs)
        self._edges = tuple(sorted(edge_list))
        self.labels: dict[int, str] = dict(labels or {})
        for v in self.labels:
            self._check_vertex(v)
        self.meta = meta
        self.matrix_cap = matrix_cap
        self._matrix: np.ndarray | None = None
        self._rows: OrderedDict[int, tuple[int, ...]] = OrderedDict()
        self._lock = threading.Lock()

        reach = bfs_distances(self.adj, 0)
        if min(reach) < 0:
            missing = reach.index(-1)
            raise GraphError(f"graph is disconnected (vertex {missing} unreachable from 0)")

    # -- structure -------------------------------------------------------
    def __len__(self) -> int:
        return self.n

    def __repr__(self) -> str:
        tag = getattr(self.meta, "family", None)
        extra = f", family={tag!r}" if tag else ""
        return f"Graph(n={self.n}, m={len(self._edges)}{extra})"

    def _check_vertex(self, v: int) -> None:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise GraphError(f"invalid vertex id {v!r} for graph with n={self.n}")

    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def num_edges(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> tuple[int, ...]:
        self._check_vertex(v)
        return self.adj[v]

    def degree(self, v: int) -> int:
        return len(self.neighbors(v))

    @property
    def max_degree(self) -> int:
        return max(len(a) for a in self.adj)

    def is_tree(self) -> bool:
        return len(self._edges) == self.n - 1

    # -- distances -------------------------------------------------------
    def distances_from(self, source: int) -> tuple[int, ...]:
        """Hop distance from ``source`` to every vertex."""
        self._check_vertex(source)
        source = int(source)
        if self._matrix is not None:
            return tuple(self._matrix[source].tolist())
        with self._lock:
            row = self._rows.get(source)
            if row is not None:
                self._rows.move_to_end(source)
                return row
        row = tuple(bfs_distances(self.adj, source))
        with self._lock:
            self._rows[source] = row
            if len(self._rows) > ROW_CACHE_SIZE:
                self._rows.popitem(last=False)
        return row

    def dist(self, u: int, v: int) -> int:
        return self.distances_from(u)[v]

    def has_matrix(self) -> bool:
        return self.n * self.n <= self.matrix_cap

    def distance_matrix(self) -> np.ndarray:
        """Dense all-pairs hop distances as a read-only ``int32`` array.

        Raises :class:`MemoryError` when ``n*n`` exceeds ``matrix_cap``; callers
        that can live without the table should use :meth:`rows` instead.
        """
        if self._matrix is not None:
            return self._matrix
        if not self.has_matrix():
            raise MemoryError(
                f"distance table for n={self.n} exceeds matrix_cap={self.matrix_cap} entries"
            )
        with self._lock:
            if self._matrix is None:
                self._matrix = _all_pairs(self)
        return self._matrix

    def rows(self, sources: Iterable[int]) -> np.ndarray:
        """Distance rows for ``sources`` stacked into a 2-D array."""
        sources = [int(s) for s in sources]
        if self.has_matrix():
            return self.distance_matrix()[sources]
        return np.array([self.distances_from(s) for s in sources], dtype=np.int32).reshape(
            len(sources), self.n
        )

    # -- conversion ------------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"n": self.n, "edges": [list(e) for e in self._edges]}
        if self.labels:
            out["labels"] = {str(v): tag for v, tag in sorted(self.labels.items())}
        if self.meta is not None:
            out["family"] = self.meta.to_dict() if hasattr(self.meta, "to_dict") else self.meta
        return out

    def to_json(self, **kwargs: Any) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Graph":
        labels = {int(k): v for k, v in (data.get("labels") or {}).items()}
        meta = data.get("family")
        if isinstance(meta, Mapping):
            from .families import FamilyMetadata

            meta = FamilyMetadata.from_dict(meta)
        return cls(data["n"], [tuple(e) for e in data["edges"]], labels, meta)

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        return cls.from_dict(json.loads(text))

    def to_dot(self, highlight: Mapping[int, str] | None = None, name: str = "G") -> str:
        """Graphviz source. ``highlight`` maps vertex -> fill colour."""
        highlight = highlight or {}
        lines = [f"graph {name} {{", "  node [shape=circle, fontsize=10];"]
        for v in range(self.n):
            attrs = []
            if v in self.labels:
                attrs.append(f'tooltip="{self.labels[v]}"')
            if v in highlight:
                attrs.append(f'style=filled, fillcolor="{highlight[v]}"')
            lines.append(f"  {v}" + (f" [{', '.join(attrs)}];" if attrs else ";"))
        lines.extend(f"  {u} -- {v};" for u, v in self._edges)
        lines.append("}")
        return "\n".join(lines) + "\n"

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from(self._edges)
        return g

    @classmethod
    def from_networkx(cls, g, **kwargs: Any) -> "Graph":
        """Relabel ``g``'s nodes to ``0..n-1`` in sorted order and wrap it."""
        nodes = sorted(g.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        return cls(len(nodes), [(index[u], index[v]) for u, v in g.edges()], **kwargs)

    def iter_vertices(self) -> Iterator[int]:
        return iter(range(self.n))


def _all_pairs(g: Graph) -> np.ndarray:
    if g.n == 1:
        out = np.zeros((1, 1), dtype=np.int32)
    else:
        u, v = np.array(g.edges(), dtype=np.int64).T
        rows = np.concatenate([u, v])
        cols = np.concatenate([v, u])
        mat = csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(g.n, g.n))
        out = shortest_path(mat, method="D", unweighted=True, directed=False).astype(np.int32)
    out.setflags(write=False)
    return out


def all_distances_from(g: Graph, source: int) -> list[int]:
    """Hop distances from ``source`` to every vertex of ``g``."""
    return list(g.distances_from(source))
