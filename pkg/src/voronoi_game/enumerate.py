"""Small-instance corpora: all trees / connected graphs up to a size cap, plus seeded random ones."""

from __future__ import annotations

from typing import Iterator

import networkx as nx
import numpy as np

from .graph import Graph

TREE_CAP = 14
CONNECTED_CAP = 7


class EnumerationCapError(ValueError):
    pass


def _edges(h: nx.Graph) -> list[tuple[int, int]]:
    return [(int(u), int(v)) for u, v in h.edges()]


def enumerate_trees(n: int, *, cap: int = TREE_CAP) -> Iterator[Graph]:
    """Every tree on ``n`` vertices, one per isomorphism class."""
    if n < 1:
        raise EnumerationCapError(f"n must be positive, got {n}")
    if n > cap:
        raise EnumerationCapError(f"tree enumeration is capped at n={cap}, got {n}")
    if n == 1:
        yield Graph(1, [])
        return
    for t in nx.nonisomorphic_trees(n):
        yield Graph(n, _edges(t))


def enumerate_connected(n: int, *, cap: int = CONNECTED_CAP) -> Iterator[Graph]:
    """Every connected graph on ``n`` vertices, one per isomorphism class.

    Taken from the graph atlas, which lists all graphs on up to seven vertices.
    """
    if n < 1:
        raise EnumerationCapError(f"n must be positive, got {n}")
    if n > min(cap, CONNECTED_CAP):
        raise EnumerationCapError(f"connected-graph enumeration is capped at n={min(cap, CONNECTED_CAP)}, got {n}")
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == n and nx.is_connected(h):
            yield Graph(n, _edges(h))


def random_tree(n: int, rng: np.random.Generator) -> Graph:
    """Uniform labelled tree on ``n`` vertices from a random Pruefer sequence."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n <= 2:
        return Graph(n, [(0, 1)] if n == 2 else [])
    seq = rng.integers(0, n, size=n - 2).tolist()
    return Graph(n, _edges(nx.from_prufer_sequence(seq)))


def random_trees(count: int, max_n: int, seed: int, min_n: int = 2) -> Iterator[tuple[int, Graph]]:
    """``(index, tree)`` pairs with sizes drawn uniformly from ``[min_n, max_n]``."""
    rng = np.random.default_rng(seed)
    for i in range(count):
        yield i, random_tree(int(rng.integers(min_n, max_n + 1)), rng)


def random_bounded_degree(n: int, rng: np.random.Generator, max_degree: int = 3, extra_edges: int | None = None) -> Graph:
    """Random connected graph with maximum degree exactly ``max_degree`` (when n allows it).

    A random tree respecting the degree bound is grown first; then random
    non-edges between unsaturated vertices are added. Draws are retried until
    the maximum degree is reached.
    """
    if n < 2:
        raise ValueError("need at least two vertices")
    want = min(max_degree, n - 1)
    while True:
        deg = [0] * n
        edges: set[tuple[int, int]] = set()
        for v in range(1, n):
            options = [u for u in range(v) if deg[u] < max_degree]
            u = options[int(rng.integers(len(options)))]
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
        budget = int(rng.integers(0, n + 1)) if extra_edges is None else extra_edges
        for _ in range(budget):
            open_ = [v for v in range(n) if deg[v] < max_degree]
            pairs = [(u, v) for i, u in enumerate(open_) for v in open_[i + 1 :] if (u, v) not in edges]
            if not pairs:
                break
            u, v = pairs[int(rng.integers(len(pairs)))]
            edges.add((u, v))
            deg[u] += 1
            deg[v] += 1
        if max(deg) == want:
            return Graph(n, sorted(edges))


def random_bounded_degree_graphs(
    count: int, max_n: int, seed: int, max_degree: int = 3, min_n: int = 4
) -> Iterator[tuple[int, Graph]]:
    rng = np.random.default_rng(seed)
    for i in range(count):
        yield i, random_bounded_degree(int(rng.integers(min_n, max_n + 1)), rng, max_degree)
