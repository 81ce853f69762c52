"""Steiner forests on metrics with distances 1 and 2.

The heuristics (:func:`solve_stp`, :func:`solve_gst`), an exact oracle for
small instances, and a potential-function audit of the greedy star heuristic.
"""
from .errors import InternalError, ParseError, PreconditionError, ResourceLimitError
from .gst import annihilate_unsafe, ge_preprocess, solve_gst
from .harness import (GenParams, RatioConfig, RatioReport, gen_random, parse_instance,
                      parse_solution, run_ratio_experiment, write_instance, write_solution)
from .instance import (DisjointSet, Instance, MetricGraph, connection_cost, is_valid_solution,
                       propify, solution_cost)
from .ledger import (AuditReport, ReferenceSolution, audit_stp_run, check_safety_lemmas,
                     make_bridgeless, pg_of_fcomp, prom_cost, redistribute)
from .oracle import (OptimalForest, brute_force_opt, skeleton_cost, steiner_forest_opt,
                     steiner_tree_opt)
from .rayward_smith import Move, MoveKind, Trace, replay, solve_stp
from .residual import ResidualState, Star

__version__ = "0.1.0"

__all__ = [
    "AuditReport", "DisjointSet", "GenParams", "Instance", "InternalError", "MetricGraph",
    "Move", "MoveKind", "OptimalForest", "ParseError", "PreconditionError", "RatioConfig",
    "RatioReport", "ReferenceSolution", "ResidualState", "ResourceLimitError", "Star", "Trace",
    "annihilate_unsafe", "audit_stp_run", "brute_force_opt", "check_safety_lemmas",
    "connection_cost", "gen_random", "ge_preprocess", "is_valid_solution", "make_bridgeless",
    "parse_instance", "parse_solution", "pg_of_fcomp", "prom_cost", "propify", "redistribute",
    "replay", "run_ratio_experiment", "skeleton_cost", "solution_cost", "solve_gst", "solve_stp",
    "steiner_forest_opt", "steiner_tree_opt", "write_instance", "write_solution",
]
