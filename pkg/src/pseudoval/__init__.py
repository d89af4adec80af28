"""Exact arithmetic for valuation-ring extensions to k(X) induced by pseudo-monotone sequences."""

from .extensions import ExtRing, Factored, HeuristicIndecision, Raw, parse_ratfunc, ve_contains, w_e
from .lambda_topology import LambdaSpace, ball_to_interval, cover_witness, lambda_dist
from .metrics import DistDesc, dist_delta, dist_pseudo_limit_formula, invert_sequence, similitude, sigma_beta, z_construct
from .sequences import Ball, Kind, SeqSpec, breadth, classify, equivalent, pseudo_limit_set
from .valued_field import INF, Dyadic, PAdic, ParseError, field_from_name, parse_elem

__all__ = [
    "Ball",
    "DistDesc",
    "Dyadic",
    "ExtRing",
    "Factored",
    "HeuristicIndecision",
    "INF",
    "Kind",
    "LambdaSpace",
    "PAdic",
    "ParseError",
    "Raw",
    "SeqSpec",
    "ball_to_interval",
    "breadth",
    "classify",
    "cover_witness",
    "dist_delta",
    "dist_pseudo_limit_formula",
    "equivalent",
    "field_from_name",
    "invert_sequence",
    "lambda_dist",
    "parse_elem",
    "parse_ratfunc",
    "pseudo_limit_set",
    "sigma_beta",
    "similitude",
    "ve_contains",
    "w_e",
    "z_construct",
]
