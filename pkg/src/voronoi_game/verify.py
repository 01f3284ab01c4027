"""Bound verifiers over single instances and corpora, with JSON-line reports.

Every report carries the instance descriptor it was computed from, so the
verdict can be recomputed later with :func:`rerun`.
"""

from __future__ import annotations

import json
import operator
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Iterable, Iterator, Sequence

from .enumerate import enumerate_connected, enumerate_trees, random_bounded_degree_graphs, random_trees
from .families import generate
from .graph import Graph
from .solver import GameSpec, SolveResult, solve

RELATIONS: dict[str, Callable[[Fraction, Fraction], bool]] = {
    "==": operator.eq,
    "<=": operator.le,
    "<": operator.lt,
    ">=": operator.ge,
    ">": operator.gt,
}


def _frac(x: Fraction | None) -> str | None:
    return None if x is None else f"{x.numerator}/{x.denominator}"


def _parse_frac(s: str | None) -> Fraction | None:
    return None if s is None else Fraction(s)


@dataclass(frozen=True)
class BoundReport:
    """One checked inequality ``lhs <relation> rhs``.

    ``between`` reports carry a ``value`` and check ``lhs <= value <= rhs``.
    ``witness`` is the principal variation of the offending solve, present only
    on failure.
    """

    bound: str
    instance: dict
    lhs: Fraction
    rhs: Fraction
    relation: str
    passed: bool
    value: Fraction | None = None
    witness: tuple[int, ...] | None = None
    seed: int | None = None
    rounds: int | None = None

    def to_dict(self) -> dict[str, Any]:
        return {
            "bound": self.bound,
            "instance": self.instance,
            "rounds": self.rounds,
            "lhs": _frac(self.lhs),
            "relation": self.relation,
            "rhs": _frac(self.rhs),
            "value": _frac(self.value),
            "pass": self.passed,
            "witness": None if self.witness is None else list(self.witness),
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict[str, Any]) -> "BoundReport":
        return cls(
            bound=d["bound"],
            instance=d["instance"],
            lhs=Fraction(d["lhs"]),
            rhs=Fraction(d["rhs"]),
            relation=d["relation"],
            passed=bool(d["pass"]),
            value=_parse_frac(d.get("value")),
            witness=None if d.get("witness") is None else tuple(d["witness"]),
            seed=d.get("seed"),
            rounds=d.get("rounds"),
        )


def _report(
    bound: str,
    instance: dict,
    lhs: Fraction,
    relation: str,
    rhs: Fraction,
    result: SolveResult,
    rounds: int,
    value: Fraction | None = None,
) -> BoundReport:
    if relation == "between":
        ok = lhs <= value <= rhs
    else:
        ok = RELATIONS[relation](lhs, rhs)
    return BoundReport(
        bound,
        instance,
        lhs,
        rhs,
        relation,
        ok,
        value=value,
        witness=None if ok else result.principal_variation,
        seed=instance.get("seed"),
        rounds=rounds,
    )


# -- instance descriptors -----------------------------------------------------


def family_instance(family: str, **params: Any) -> dict:
    return {"kind": "family", "family": family, "params": params}


def edge_instance(g: Graph, **extra: Any) -> dict:
    return {"kind": "edges", "n": g.n, "edges": [list(e) for e in g.edges()], **extra}


def build_graph(instance: dict) -> Graph:
    """Rebuild the graph a descriptor names."""
    kind = instance.get("kind")
    if kind == "family":
        return generate(instance["family"], **instance.get("params", {}))
    if kind == "edges":
        return Graph(instance["n"], [tuple(e) for e in instance["edges"]])
    raise ValueError(f"unknown instance kind {kind!r}")


def _solve(g: Graph, t: int, budget: dict) -> SolveResult:
    return solve(GameSpec(g, t), **budget)


# -- single-instance verifiers ------------------------------------------------


def verify_star(k: int, t: int, instance: dict | None = None, **budget: Any) -> BoundReport:
    if k < 1:
        raise ValueError(f"k must be positive, got {k}")
    if 2 * t > k + 1:
        raise ValueError(f"t={t} is too large for a star with {k + 1} vertices")
    inst = instance or family_instance("star", k=k)
    res = _solve(build_graph(inst), t, budget)
    return _report("star", inst, res.ratio, "==", 1 - Fraction(t, k + 1), res, t)


def verify_path(n: int, t: int, instance: dict | None = None, **budget: Any) -> BoundReport:
    if 2 * t >= n:
        raise ValueError(f"the path result covers t < n/2 only; got n={n}, t={t}")
    inst = instance or family_instance("path", n=n)
    res = _solve(build_graph(inst), t, budget)
    expected = Fraction(n + 1, 2 * n) if n % 2 == 1 and t == 1 else Fraction(1, 2)
    return _report("path", inst, res.ratio, "==", expected, res, t)


def verify_sandwich(g: Graph, t: int, instance: dict | None = None, **budget: Any) -> BoundReport:
    """``VR(G,1)/2 <= VR(G,t) <= (VR(G,1) + 1)/2``."""
    inst = instance or edge_instance(g)
    one = _solve(g, 1, budget).ratio
    res = _solve(g, t, budget)
    return _report("sandwich", inst, one / 2, "between", (one + 1) / 2, res, t, value=res.ratio)


def verify_tree_bounds(corpus: Iterable[tuple[dict, Graph]], t: int = 2, **budget: Any) -> list[BoundReport]:
    """Per tree: VR(T,1) >= 1/2; VR(T,2) > 1/3; VR(T,t) >= 1/4.

    Games that do not fit on the tree (2t > n) are skipped.
    """
    out = []
    for inst, tree in corpus:
        if not tree.is_tree():
            raise ValueError(f"instance {inst.get('id')} is not a tree")
        if tree.n >= 2:
            r1 = _solve(tree, 1, budget)
            out.append(_report("tree-half", inst, r1.ratio, ">=", Fraction(1, 2), r1, 1))
        if tree.n >= 4:
            r2 = _solve(tree, 2, budget)
            out.append(_report("tree-third", inst, r2.ratio, ">", Fraction(1, 3), r2, 2))
        if 2 * t <= tree.n:
            rt = r2 if t == 2 else r1 if t == 1 else _solve(tree, t, budget)
            out.append(_report("tree-quarter", inst, rt.ratio, ">=", Fraction(1, 4), rt, t))
    return out


def degree_bound(n: int, delta: int, t: int) -> Fraction:
    """``1 - 1/D + 1/(nD)`` for one round, ``1 - 1/(2D) + 1/(2nD)`` otherwise."""
    if t == 1:
        return 1 - Fraction(1, delta) + Fraction(1, n * delta)
    return 1 - Fraction(1, 2 * delta) + Fraction(1, 2 * n * delta)


def verify_degree_bounds(g: Graph, t: int, instance: dict | None = None, **budget: Any) -> BoundReport:
    inst = instance or edge_instance(g)
    res = _solve(g, t, budget)
    name = "degree-one-round" if t == 1 else "degree-multi-round"
    return _report(name, inst, res.ratio, "<=", degree_bound(g.n, g.max_degree, t), res, t)


# -- corpora ------------------------------------------------------------------


def _span(text: str) -> range:
    lo, _, hi = text.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def _fields(text: str) -> dict[str, str]:
    out = {}
    for part in filter(None, text.split(",")):
        key, _, val = part.partition("=")
        out[key.strip()] = val.strip()
    return out


def parse_corpus(text: str, seed: int = 0) -> list[dict]:
    """Instance descriptors from a corpus spec.

    Forms: ``trees:n=4-12``, ``connected:n=2-7``, ``random-trees:count=100,n=2-200``,
    ``random-deg3:count=50,n=4-10``, ``stars:k=1-8``, ``paths:n=2-12``, or
    ``family:NAME:key=val,...`` for a single generated graph.
    """
    head, _, rest = text.partition(":")
    out: list[dict] = []
    if head == "family":
        name, _, params = rest.partition(":")
        out.append(family_instance(name, **{k: int(v) for k, v in _fields(params).items()}))
    elif head in ("stars", "paths"):
        key = "k" if head == "stars" else "n"
        family = head[:-1]
        out.extend(family_instance(family, **{key: x}) for x in _span(_fields(rest)[key]))
    elif head in ("trees", "connected"):
        enum = enumerate_trees if head == "trees" else enumerate_connected
        for n in _span(_fields(rest)["n"]):
            out.extend(edge_instance(g) for g in enum(n))
    elif head in ("random-trees", "random-deg3"):
        f = _fields(rest)
        sizes = _span(f.get("n", "2-20"))
        count = int(f.get("count", "100"))
        if head == "random-trees":
            stream = random_trees(count, sizes.stop - 1, seed, min_n=sizes.start)
        else:
            stream = random_bounded_degree_graphs(count, sizes.stop - 1, seed, min_n=sizes.start)
        out.extend(edge_instance(g, seed=seed, index=i) for i, g in stream)
    else:
        raise ValueError(f"unknown corpus {text!r}")
    for i, inst in enumerate(out):
        inst["id"] = i
    return out


BOUNDS = ("star", "path", "sandwich", "tree", "degree")


def check_instance(bound: str, instance: dict, rounds: Sequence[int], budget: dict | None = None) -> list[BoundReport]:
    """Run ``bound`` on one descriptor for each applicable round count."""
    budget = budget or {}
    g = build_graph(instance)
    out: list[BoundReport] = []
    if bound == "tree":
        out = verify_tree_bounds([(instance, g)], rounds[0], **budget)
        for t in rounds[1:]:
            out.extend(r for r in verify_tree_bounds([(instance, g)], t, **budget) if r.bound == "tree-quarter")
        return out
    for t in rounds:
        if 2 * t > g.n:
            continue
        if bound == "star":
            k = instance["params"]["k"]
            if 2 * t <= k + 1:
                out.append(verify_star(k, t, instance, **budget))
        elif bound == "path":
            n = instance["params"]["n"]
            if 2 * t < n:
                out.append(verify_path(n, t, instance, **budget))
        elif bound == "sandwich":
            out.append(verify_sandwich(g, t, instance, **budget))
        elif bound == "degree":
            out.append(verify_degree_bounds(g, t, instance, **budget))
        else:
            raise ValueError(f"unknown bound {bound!r}; choose from {BOUNDS}")
    return out


def _task(args: tuple) -> list[dict]:
    bound, instance, rounds, budget = args
    return [r.to_dict() for r in check_instance(bound, instance, rounds, budget)]


def run_corpus(
    bound: str, instances: Sequence[dict], rounds: Sequence[int], *, jobs: int = 1, budget: dict | None = None
) -> Iterator[BoundReport]:
    """Reports for every instance, in instance order regardless of completion order."""
    tasks = [(bound, inst, tuple(rounds), budget or {}) for inst in instances]
    if jobs <= 1:
        results: Iterable[list[dict]] = map(_task, tasks)
        for batch in results:
            yield from map(BoundReport.from_dict, batch)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        for batch in pool.map(_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))):
            yield from map(BoundReport.from_dict, batch)


def rerun(report: BoundReport | dict, budget: dict | None = None) -> BoundReport:
    """Recompute a report from its descriptor."""
    r = BoundReport.from_dict(report) if isinstance(report, dict) else report
    family = r.bound.split("-")[0]
    bound = family if family in ("tree", "degree") else r.bound
    for fresh in check_instance(bound, r.instance, [r.rounds], budget):
        if fresh.bound == r.bound:
            return fresh
    raise ValueError(f"could not reproduce report {r.bound} on {r.instance.get('id')}")
