"""Exact solver and strategy toolkit for the discrete Voronoi game on graphs."""

from .graph import Graph, GraphError, all_distances_from
from .solver import (
    BudgetExceeded,
    ExploitResult,
    GameSpec,
    SolveResult,
    exploit,
    minimax_reference,
    per_round_check,
    solve,
    voronoi_ratio,
)
from .voronoi import Owner, Player, Position, Score, dominance_region, partition

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "ExploitResult",
    "GameSpec",
    "Graph",
    "GraphError",
    "Owner",
    "Player",
    "Position",
    "Score",
    "SolveResult",
    "all_distances_from",
    "dominance_region",
    "exploit",
    "minimax_reference",
    "partition",
    "per_round_check",
    "solve",
    "voronoi_ratio",
]
