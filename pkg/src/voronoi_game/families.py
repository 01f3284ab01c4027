"""Generators for the graph families used by the strategies and verifiers.

Each generator returns a :class:`~voronoi_game.graph.Graph` whose ``meta`` is a
:class:`FamilyMetadata` recording the structure that family-aware strategies
need (corners, rings, legs, hub, ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import comb
from typing import Any, Iterator

from .graph import Graph, GraphError

SIZE_CAP = 1_000_000

Point = tuple[int, ...]


class FamilyError(ValueError):
    """Bad generator parameters or a construction exceeding the size cap."""


@dataclass(frozen=True)
class Leg:
    """A leg of the broom tree: its path from top to bottom and its brooms."""

    path: tuple[int, ...]
    brooms: tuple[tuple[int, tuple[int, ...]], ...]  # (broom vertex on path, its leaves)

    @property
    def leaves(self) -> tuple[int, ...]:
        return tuple(x for _, leaves in self.brooms for x in leaves)

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(self.path) | frozenset(self.leaves)


@dataclass
class FamilyMetadata:
    family: str
    params: dict[str, Any]
    center: int | None = None
    head: int | None = None
    hub: int | None = None
    corners: tuple[int, ...] = ()
    corner_points: tuple[Point, ...] = ()
    coords: dict[int, Point] = field(default_factory=dict)
    anchor: dict[int, int] = field(default_factory=dict)
    rings: dict[Point, tuple[int, ...]] = field(default_factory=dict)
    ring_label: dict[int, str] = field(default_factory=dict)
    connections: dict[int, tuple[Point, Point, int, int]] = field(default_factory=dict)
    legs: tuple[Leg, ...] = ()
    head_leaves: tuple[int, ...] = ()
    arms: tuple[tuple[int, ...], ...] = ()
    copy_of: dict[int, int] = field(default_factory=dict)
    attachments: tuple[int, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        def pt(p: Point) -> str:
            return ",".join(map(str, p))

        out: dict[str, Any] = {"family": self.family, "params": dict(self.params)}
        for name in ("center", "head", "hub"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.corners:
            out["corners"] = list(self.corners)
            out["corner_points"] = [list(p) for p in self.corner_points]
        if self.coords:
            out["coords"] = {str(v): list(p) for v, p in self.coords.items()}
        if self.anchor:
            out["anchor"] = {str(v): a for v, a in self.anchor.items()}
        if self.rings:
            out["rings"] = {pt(p): list(ids) for p, ids in self.rings.items()}
            out["ring_label"] = {str(v): s for v, s in self.ring_label.items()}
        if self.connections:
            out["connections"] = {
                str(v): [list(lo), list(hi), axis, k] for v, (lo, hi, axis, k) in self.connections.items()
            }
        if self.legs:
            out["legs"] = [
                {"path": list(leg.path), "brooms": [[c, list(lv)] for c, lv in leg.brooms]} for leg in self.legs
            ]
        if self.head_leaves:
            out["head_leaves"] = list(self.head_leaves)
        if self.arms:
            out["arms"] = [list(a) for a in self.arms]
        if self.copy_of:
            out["copy_of"] = {str(v): i for v, i in self.copy_of.items()}
        if self.attachments:
            out["attachments"] = list(self.attachments)
        return out

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "FamilyMetadata":
        def pt(s: str) -> Point:
            return tuple(int(x) for x in s.split(","))

        return cls(
            family=d["family"],
            params=dict(d.get("params", {})),
            center=d.get("center"),
            head=d.get("head"),
            hub=d.get("hub"),
            corners=tuple(d.get("corners", ())),
            corner_points=tuple(tuple(p) for p in d.get("corner_points", ())),
            coords={int(v): tuple(p) for v, p in d.get("coords", {}).items()},
            anchor={int(v): a for v, a in d.get("anchor", {}).items()},
            rings={pt(k): tuple(ids) for k, ids in d.get("rings", {}).items()},
            ring_label={int(v): s for v, s in d.get("ring_label", {}).items()},
            connections={
                int(v): (tuple(lo), tuple(hi), axis, k) for v, (lo, hi, axis, k) in d.get("connections", {}).items()
            },
            legs=tuple(
                Leg(tuple(leg["path"]), tuple((c, tuple(lv)) for c, lv in leg["brooms"])) for leg in d.get("legs", ())
            ),
            head_leaves=tuple(d.get("head_leaves", ())),
            arms=tuple(tuple(a) for a in d.get("arms", ())),
            copy_of={int(v): i for v, i in d.get("copy_of", {}).items()},
            attachments=tuple(d.get("attachments", ())),
        )


class _Builder:
    """Incremental vertex/edge collector with a size cap."""

    def __init__(self, cap: int = SIZE_CAP) -> None:
        self.n = 0
        self.edges: list[tuple[int, int]] = []
        self.labels: dict[int, str] = {}
        self.cap = cap

    def add(self, label: str | None = None) -> int:
        v = self.n
        self.n += 1
        if self.n > self.cap:
            raise FamilyError(f"construction exceeds the size cap of {self.cap} vertices")
        if label:
            self.labels[v] = label
        return v

    def link(self, u: int, v: int) -> None:
        self.edges.append((u, v))

    def path_from(self, start: int, length: int, label: str) -> list[int]:
        """Append ``length`` new vertices as a path hanging off ``start``."""
        out = []
        prev = start
        for _ in range(length):
            v = self.add(label)
            self.link(prev, v)
            out.append(v)
            prev = v
        return out

    def build(self, meta: FamilyMetadata) -> Graph:
        return Graph(self.n, self.edges, self.labels, meta)


def _positive(**kwargs: int) -> None:
    for name, value in kwargs.items():
        if not isinstance(value, int) or value < 1:
            raise FamilyError(f"{name} must be a positive integer, got {value!r}")


# -- small families -----------------------------------------------------------


def gen_star(k: int) -> Graph:
    """Star ``S_k``: centre 0 and leaves ``1..k``."""
    _positive(k=k)
    b = _Builder()
    c = b.add("center")
    for _ in range(k):
        b.link(c, b.add("leaf"))
    return b.build(FamilyMetadata("star", {"k": k}, center=c))


def gen_path(n: int) -> Graph:
    _positive(n=n)
    b = _Builder()
    prev = b.add()
    for _ in range(n - 1):
        v = b.add()
        b.link(prev, v)
        prev = v
    return b.build(FamilyMetadata("path", {"n": n}))


def gen_nine_vertex() -> Graph:
    """Six-cycle ``0..5`` with leaves 6, 7, 8 hanging off vertices 0, 2, 4."""
    b = _Builder()
    cyc = [b.add("cycle") for _ in range(6)]
    for i in range(6):
        b.link(cyc[i], cyc[(i + 1) % 6])
    for i in (0, 2, 4):
        b.link(cyc[i], b.add("leaf"))
    return b.build(FamilyMetadata("nine_vertex", {}))


def gen_spider(k: int, N: int) -> Graph:
    """``S_{k,N}``: a star whose k leaves are replaced by paths of N vertices."""
    _positive(k=k, N=N)
    b = _Builder()
    c = b.add("center")
    arms = tuple(tuple(b.path_from(c, N, "arm")) for _ in range(k))
    return b.build(FamilyMetadata("spider", {"k": k, "N": N}, center=c, arms=arms))


# -- lattice families ---------------------------------------------------------


def compositions(total: int, parts: int) -> Iterator[Point]:
    """Non-negative integer vectors of length ``parts`` summing to ``total``, lexicographically descending."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def gen_simplex(d: int, t0: int, N: int, *, leaves_everywhere: bool = False, cap: int = SIZE_CAP) -> Graph:
    """Lattice slice ``{x >= 0 : sum(x) = d^2 t0}`` with edges at L1 distance 2.

    ``N`` leaves hang off each of the ``d`` corners; ``leaves_everywhere``
    attaches them to every lattice vertex instead.
    """
    _positive(d=d, t0=t0)
    if d < 2:
        raise FamilyError("the simplex needs d >= 2")
    if not isinstance(N, int) or N < 0:
        raise FamilyError(f"N must be a non-negative integer, got {N!r}")
    total = d * d * t0
    size = comb(total + d - 1, d - 1)
    grow = size if leaves_everywhere else d
    if size + grow * N > cap:
        raise FamilyError(f"simplex with d={d}, t0={t0}, N={N} has {size + grow * N} vertices > cap {cap}")
    b = _Builder(cap)
    index: dict[Point, int] = {}
    coords: dict[int, Point] = {}
    for p in compositions(total, d):
        v = b.add("lattice")
        index[p] = v
        coords[v] = p
    for p, v in index.items():
        for i in range(d):
            if p[i] == 0:
                continue
            for j in range(d):
                if j == i:
                    continue
                q = list(p)
                q[i] -= 1
                q[j] += 1
                w = index[tuple(q)]
                if v < w:
                    b.link(v, w)
    corner_points = tuple(tuple(total if j == i else 0 for j in range(d)) for i in range(d))
    corners = tuple(index[p] for p in corner_points)
    for c in corners:
        b.labels[c] = "corner"
    anchor: dict[int, int] = {}
    hosts = list(index.values()) if leaves_everywhere else corners
    for host in hosts:
        for _ in range(N):
            leaf = b.add("leaf")
            b.link(host, leaf)
            anchor[leaf] = host
    meta = FamilyMetadata(
        "simplex",
        {"d": d, "t0": t0, "N": N, "leaves_everywhere": leaves_everywhere},
        corners=corners,
        corner_points=corner_points,
        coords=coords,
        anchor=anchor,
    )
    return b.build(meta)


def cut_corner_points(d: int, L: int) -> Iterator[Point]:
    """Points of ``[0, L]^d`` with coordinate sum at least ``L``."""
    for p in itertools.product(range(L + 1), repeat=d):
        if sum(p) >= L:
            yield p


def _cube_size(d: int, L: int) -> int:
    return (L + 1) ** d - comb(L - 1 + d, d)


def gen_cut_corner_cube(d: int, t: int = 1, *, L: int | None = None, cap: int = SIZE_CAP) -> Graph:
    """Grid ``[0, L]^d`` minus the points with coordinate sum below ``L``; ``L`` defaults to ``d^2 t``."""
    _positive(d=d, t=t)
    if d < 2:
        raise FamilyError("the cube needs d >= 2")
    L = d * d * t if L is None else L
    _positive(L=L)
    if _cube_size(d, L) > cap:
        raise FamilyError(f"cut-corner cube d={d}, L={L} exceeds the size cap {cap}")
    b = _Builder(cap)
    index: dict[Point, int] = {}
    coords: dict[int, Point] = {}
    for p in cut_corner_points(d, L):
        v = b.add("lattice")
        index[p] = v
        coords[v] = p
    for p, v in index.items():
        for i in range(d):
            q = p[:i] + (p[i] + 1,) + p[i + 1 :]
            w = index.get(q)
            if w is not None:
                b.link(v, w)
    corner_points = tuple(tuple(L if j == i else 0 for j in range(d)) for i in range(d))
    corners = tuple(index[p] for p in corner_points)
    for c in corners:
        b.labels[c] = "corner"
    meta = FamilyMetadata(
        "cut_corner_cube", {"d": d, "t": t, "L": L}, corners=corners, corner_points=corner_points, coords=coords
    )
    return b.build(meta)


def ring_labels(d: int) -> list[str]:
    """Cyclic ring order ``1+, 1-, 2+, 2-, ..., d+, d-``."""
    return [f"{i}{s}" for i in range(1, d + 1) for s in "+-"]


def gen_grid_connected_cycles(d: int, t: int = 1, N: int = 1, *, L: int | None = None, cap: int = SIZE_CAP) -> Graph:
    """Degree-3 realization of the cut-corner cube.

    Every grid point becomes a ring of ``2d`` nodes; ``x(i+)`` is joined to
    ``(x + e_i)(i-)`` by a path of ``6d - 1`` edges; each corner ring gets a tail
    of ``N`` vertices attached at its lowest-id degree-2 node.
    """
    _positive(d=d, t=t)
    if d < 2:
        raise FamilyError("grid-connected cycles need d >= 2")
    if not isinstance(N, int) or N < 0:
        raise FamilyError(f"N must be a non-negative integer, got {N!r}")
    L = d * d * t if L is None else L
    _positive(L=L)
    points = list(cut_corner_points(d, L))
    present = set(points)
    n_links = sum(1 for p in points for i in range(d) if p[i] < L and p[:i] + (p[i] + 1,) + p[i + 1 :] in present)
    interior = 6 * d - 2
    size = 2 * d * len(points) + interior * n_links + d * N
    if size > cap:
        raise FamilyError(f"grid-connected cycles d={d}, L={L}, N={N} need {size} vertices > cap {cap}")
    b = _Builder(cap)
    labels = ring_labels(d)
    rings: dict[Point, tuple[int, ...]] = {}
    coords: dict[int, Point] = {}
    ring_label: dict[int, str] = {}
    for p in points:
        ids = tuple(b.add("ring-node") for _ in labels)
        rings[p] = ids
        for v, lab in zip(ids, labels):
            coords[v] = p
            ring_label[v] = lab
        for k in range(len(ids)):
            b.link(ids[k], ids[(k + 1) % len(ids)])
    degree = {v: 2 for ids in rings.values() for v in ids}
    connections: dict[int, tuple[Point, Point, int, int]] = {}
    for p in points:
        for i in range(d):
            q = p[:i] + (p[i] + 1,) + p[i + 1 :]
            if q not in present:
                continue
            start = rings[p][2 * i]  # i+
            end = rings[q][2 * i + 1]  # i-
            inner = b.path_from(start, interior, "connection")
            b.link(inner[-1], end)
            degree[start] += 1
            degree[end] += 1
            for k, v in enumerate(inner):
                connections[v] = (p, q, i, k + 1)
    corner_points = tuple(tuple(L if j == i else 0 for j in range(d)) for i in range(d))
    attachments = []
    anchor: dict[int, int] = {}
    for cp in corner_points:
        at = min(v for v in rings[cp] if degree[v] == 2)
        attachments.append(at)
        for v in b.path_from(at, N, "tail"):
            anchor[v] = at
    meta = FamilyMetadata(
        "grid_connected_cycles",
        {"d": d, "t": t, "N": N, "L": L},
        corners=tuple(attachments),
        corner_points=corner_points,
        coords=coords,
        anchor=anchor,
        rings=rings,
        ring_label=ring_label,
        connections=connections,
        attachments=tuple(attachments),
    )
    return b.build(meta)


# -- trees --------------------------------------------------------------------


def broom_depths(k: int) -> list[int]:
    """Depths below the centre of the k brooms of a leg: gaps 1, 2, 4, ... from the top."""
    return [(1 << (j + 1)) - 1 for j in range(k)]


def gen_broom_leg_tree(k: int, N: int) -> Graph:
    """Centre ``c`` (vertex 0) with a head broom of ``kN`` leaves and two legs.

    A leg is a path of ``2^k - 1`` vertices hanging from ``c`` carrying a broom
    of ``N`` leaves at depths ``1, 3, 7, ..., 2^k - 1``.
    """
    _positive(k=k, N=N)
    if (1 << k) > SIZE_CAP:
        raise FamilyError(f"k={k} makes legs longer than the size cap")
    b = _Builder()
    c = b.add("center")
    h = b.add("head")
    b.link(c, h)
    head_leaves = tuple(b.path_from(h, 1, "broom-leaf")[0] for _ in range(k * N))
    depths = set(broom_depths(k))
    legs = []
    for _ in range(2):
        path = b.path_from(c, (1 << k) - 1, "leg-path")
        brooms = []
        for depth, v in enumerate(path, start=1):
            if depth in depths:
                brooms.append((v, tuple(b.path_from(v, 1, "broom-leaf")[0] for _ in range(N))))
        legs.append(Leg(tuple(path), tuple(brooms)))
    meta = FamilyMetadata("broom_leg_tree", {"k": k, "N": N}, center=c, head=h, legs=tuple(legs), head_leaves=head_leaves)
    return b.build(meta)


def broom_vertices(g: Graph) -> tuple[int, ...]:
    """All broom leaves (head and legs) of a broom-leg tree."""
    meta = g.meta
    return tuple(meta.head_leaves) + tuple(x for leg in meta.legs for x in leg.leaves)


# -- hub composition ----------------------------------------------------------


def gen_delta_copies(delta: int, inner: Graph, attach: int | None = None) -> Graph:
    """Hub vertex 0 joined by one edge to each of ``delta`` disjoint copies of ``inner``.

    ``attach`` is the vertex of ``inner`` receiving the hub edge; by default the
    lowest-id vertex of minimum degree. The attachment may not raise the
    maximum degree above ``max(delta, inner.max_degree)``.
    """
    _positive(delta=delta)
    if attach is None:
        attach = min(range(inner.n), key=lambda v: (inner.degree(v), v))
    if not 0 <= attach < inner.n:
        raise FamilyError(f"attachment vertex {attach} is not in the inner graph")
    bound = max(delta, inner.max_degree)
    if inner.degree(attach) + 1 > bound:
        raise FamilyError(
            f"attaching at vertex {attach} (degree {inner.degree(attach)}) exceeds the degree bound {bound}"
        )
    if 1 + delta * inner.n > SIZE_CAP:
        raise FamilyError("composite exceeds the size cap")
    edges = []
    labels = {0: "hub"}
    copy_of: dict[int, int] = {}
    attachments = []
    for i in range(delta):
        off = 1 + i * inner.n
        for u, v in inner.edges():
            edges.append((off + u, off + v))
        for v in range(inner.n):
            copy_of[off + v] = i
            if v in inner.labels:
                labels[off + v] = inner.labels[v]
        edges.append((0, off + attach))
        attachments.append(off + attach)
    meta = FamilyMetadata(
        "delta_copies",
        {"delta": delta, "inner_n": inner.n, "attach": attach},
        hub=0,
        copy_of=copy_of,
        attachments=tuple(attachments),
    )
    g = Graph(1 + delta * inner.n, edges, labels, meta)
    return g


def copy_graph(g: Graph, index: int) -> tuple[Graph, list[int]]:
    """The ``index``-th copy of a hub composite as a standalone graph plus its global ids."""
    meta = g.meta
    members = sorted(v for v, i in meta.copy_of.items() if i == index)
    local = {v: k for k, v in enumerate(members)}
    edges = [(local[u], local[v]) for u, v in g.edges() if u in local and v in local]
    return Graph(len(members), edges), members


GENERATORS = {
    "star": gen_star,
    "path": gen_path,
    "nine": gen_nine_vertex,
    "spider": gen_spider,
    "simplex": gen_simplex,
    "cube": gen_cut_corner_cube,
    "gcc": gen_grid_connected_cycles,
    "broom": gen_broom_leg_tree,
}


def generate(family: str, **params: Any) -> Graph:
    try:
        fn = GENERATORS[family]
    except KeyError:
        raise FamilyError(f"unknown family {family!r}; choose from {sorted(GENERATORS)}") from None
    return fn(**params)


__all__ = [
    "FamilyError",
    "FamilyMetadata",
    "GraphError",
    "Leg",
    "broom_vertices",
    "copy_graph",
    "gen_broom_leg_tree",
    "gen_cut_corner_cube",
    "gen_delta_copies",
    "gen_grid_connected_cycles",
    "gen_nine_vertex",
    "gen_path",
    "gen_simplex",
    "gen_spider",
    "gen_star",
    "generate",
]
