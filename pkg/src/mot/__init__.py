"""Martingale optimal transport on finitely supported measures of the line."""
from .costs import parse_cost
from .curtain import Coupling, is_left_monotone, left_curtain, right_curtain
from .lp import hoeffding_frechet, solve_classical, solve_martingale
from .measures import DiscreteMeasure, convex_order, extended_order, make_measure
from .shadow import maximal_embedding, shadow, shadow_atom

__all__ = [
    "Coupling",
    "DiscreteMeasure",
    "convex_order",
    "extended_order",
    "hoeffding_frechet",
    "is_left_monotone",
    "left_curtain",
    "make_measure",
    "maximal_embedding",
    "parse_cost",
    "right_curtain",
    "shadow",
    "shadow_atom",
    "solve_classical",
    "solve_martingale",
]
