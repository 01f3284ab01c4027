"""Command-line entry point: ``voronoi-game {gen,solve,exploit,verify,bench}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Any, Sequence

from .families import FamilyError, generate
from .graph import Graph, GraphError
from .solver import BudgetExceeded, GameSpec, SolverError, exploit, solve
from .strategies import REGISTRY, make_strategy, strategy_holder
from .strategy import StrategyError
from .verify import BOUNDS, BoundReport, parse_corpus, run_corpus
from .voronoi import Player

BENCH_INSTANCES = (
    ("nine-vertex t=2", "nine", {}, 2),
    ("star k=8 t=3", "star", {"k": 8}, 3),
    ("path n=12 t=3", "path", {"n": 12}, 3),
    ("spider k=3 N=4 t=2", "spider", {"k": 3, "N": 4}, 2),
    ("broom-leg k=3 N=2 t=2", "broom", {"k": 3, "N": 2}, 2),
)


def _value(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _params(pairs: Sequence[str]) -> dict[str, Any]:
    out = {}
    for p in pairs:
        key, sep, val = p.partition("=")
        if not sep:
            raise argparse.ArgumentTypeError(f"expected key=value, got {p!r}")
        out[key] = _value(val)
    return out


def _rounds(text: str) -> list[int]:
    lo, _, hi = text.partition("-")
    return list(range(int(lo), int(hi or lo) + 1))


def load_graph(source: str) -> Graph:
    """A graph JSON file, ``-`` for stdin, or ``family:NAME:key=val,...``."""
    if source.startswith("family:"):
        _, name, params = (source.split(":", 2) + [""])[:3]
        return generate(name, **_params(filter(None, params.split(","))))
    text = sys.stdin.read() if source == "-" else open(source, encoding="utf-8").read()
    return Graph.from_json(text)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _table(rows: list[dict], columns: Sequence[str]) -> str:
    cells = [[str(r.get(c, "")) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines) + "\n"


def _csv(rows: list[dict], columns: Sequence[str]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=list(columns), extrasaction="ignore")
    w.writeheader()
    for r in rows:
        w.writerow({k: json.dumps(v) if isinstance(v, (list, dict)) else v for k, v in r.items()})
    return buf.getvalue()


def _render(rows: list[dict], columns: Sequence[str], fmt: str) -> str:
    if fmt == "json":
        return "".join(json.dumps(r, sort_keys=True) + "\n" for r in rows)
    if fmt == "csv":
        return _csv(rows, columns)
    return _table(rows, columns)


def _budget(args: argparse.Namespace) -> dict:
    return {"budget_nodes": args.budget_nodes, "budget_seconds": args.budget_seconds}


# -- subcommands --------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    g = generate(args.family, **_params(args.params))
    text = g.to_dot() + "\n" if args.format == "dot" else g.to_json() + "\n"
    _emit(text, args.out)
    return 0


def cmd_solve(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    res = solve(GameSpec(g, args.rounds), **_budget(args))
    row = {"n": g.n, "rounds": args.rounds, **res.to_dict()}
    _emit(_render([row], ["n", "rounds", "ratio", "principal_variation", "nodes_searched"], args.format), args.out)
    return 0


def cmd_exploit(args: argparse.Namespace) -> int:
    g = load_graph(args.graph)
    strat = make_strategy(args.strategy, g, **_params(args.params))
    holder = Player.parse(args.holder) if args.holder else strategy_holder(args.strategy)
    res = exploit(GameSpec(g, args.rounds), strat, holder, **_budget(args))
    row = {"strategy": args.strategy, "n": g.n, "rounds": args.rounds, **res.to_dict()}
    columns = ["strategy", "holder", "n", "rounds", "ratio", "witness_line", "lines_searched"]
    _emit(_render([row], columns, args.format), args.out)
    return 0


def cmd_verify(args: argparse.Namespace) -> int:
    instances = parse_corpus(args.corpus, seed=args.seed)
    reports: list[BoundReport] = list(
        run_corpus(args.bound, instances, _rounds(args.rounds), jobs=args.jobs, budget=_budget(args))
    )
    rows = [r.to_dict() for r in reports]
    for row in rows:
        row["id"] = row["instance"].get("id")
    columns = ["id", "bound", "rounds", "lhs", "relation", "rhs", "value", "pass", "witness", "seed"]
    text = _render(rows, columns, args.format)
    failed = sum(not r.passed for r in reports)
    if args.format == "text":
        text += f"{len(reports) - failed}/{len(reports)} passed\n"
    _emit(text, args.out)
    return 0 if failed == 0 else 1


def cmd_bench(args: argparse.Namespace) -> int:
    rows = []
    for label, family, params, t in BENCH_INSTANCES:
        g = generate(family, **params)
        start = time.perf_counter()
        res = solve(GameSpec(g, t), **_budget(args))
        secs = time.perf_counter() - start
        rows.append(
            {
                "instance": label,
                "n": g.n,
                "ratio": res.to_dict()["ratio"],
                "nodes": res.nodes_searched,
                "seconds": round(secs, 4),
                "nodes_per_second": int(res.nodes_searched / secs) if secs > 0 else None,
            }
        )
    _emit(_render(rows, ["instance", "n", "ratio", "nodes", "seconds", "nodes_per_second"], args.format), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--budget-nodes", type=int, default=None, help="abort after this many search nodes")
    common.add_argument("--budget-seconds", type=float, default=None, help="abort after this much wall time")
    common.add_argument("--seed", type=int, default=0, help="seed for random corpora")
    common.add_argument("--format", choices=("json", "text", "csv"), default="text")
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="voronoi-game", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a family graph as JSON or DOT")
    gen.add_argument("family")
    gen.add_argument("params", nargs="*", help="key=value family parameters")
    gen.add_argument("--format", choices=("json", "dot"), default="json")
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_gen)

    sv = sub.add_parser("solve", parents=[common], help="exact value of the t-round game")
    sv.add_argument("graph", help="graph JSON path, '-' for stdin, or family:NAME:k=v,...")
    sv.add_argument("--rounds", type=int, required=True)
    sv.set_defaults(func=cmd_solve)

    ex = sub.add_parser("exploit", parents=[common], help="worst case of a fixed strategy")
    ex.add_argument("graph")
    ex.add_argument("strategy", choices=sorted(REGISTRY))
    ex.add_argument("params", nargs="*", help="key=value strategy parameters")
    ex.add_argument("--holder", choices=("A", "B"), default=None)
    ex.add_argument("--rounds", type=int, required=True)
    ex.set_defaults(func=cmd_exploit)

    vf = sub.add_parser("verify", parents=[common], help="check a bound over a corpus")
    vf.add_argument("bound", choices=BOUNDS)
    vf.add_argument("corpus", help="e.g. trees:n=4-12, connected:n=2-7, random-deg3:count=50,n=4-10, stars:k=1-8")
    vf.add_argument("--rounds", default="2", help="round count or range such as 1-3")
    vf.add_argument("--jobs", type=int, default=1)
    vf.set_defaults(func=cmd_verify)

    bench = sub.add_parser("bench", parents=[common], help="solver throughput on pinned instances")
    bench.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except (GraphError, FamilyError, SolverError, StrategyError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
