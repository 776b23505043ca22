"""Requirement cut toolkit.

Cut a graph so each terminal group falls apart into its required number of
components, at near-minimal cost: metric LP relaxation with spanning-tree
separation, randomized threshold rounding calibrated by (an upper bound on)
the number of minimal Steiner trees, plus series-parallel tree embeddings
and exhaustive oracles for checking all of it at small scale.
"""

__version__ = "0.1.0"

from .errors import (ConfigError, ConvergenceError, GraphStructureError, InputError,
                     ParseError, ReqcutError, ResourceError)
from .exact import OracleBudget, approximation_ratio, enumerate_spanning_trees, exact_solve
from .gen import gen_bounded_fes, gen_setcover_star, gen_short_cycles, gen_sp_depth
from .graph import (CutSolution, Graph, Instance, components_per_group,
                    is_feasible_cut, make_cut_solution, minimum_spanning_tree,
                    require_valid, to_cost, validate)
from .io import dump_instance_json, dump_instance_text, load_instance, parse_instance
from .kernels import BACKEND
from .metriclp import (LpResult, Metric, check_cut_equivalence, scale_metric,
                       separation_oracle, solve_relaxed_lp)
from .rounding import (RoundingConfig, TrialReport, compute_alpha, round_once,
                       solve_requirement_cut)
from .spembed import (CompositionTrace, SpInstance, construct_tree, dump_sp_expression,
                      estimate_distortion, find_sp_terminals, parse_sp_expression,
                      recognize_sp, solve_sp_pipeline, stretch_bound,
                      subdivide_integer_costs, tree_distances)
from .steiner import (enumerate_minimal_steiner_trees, exact_sigma_by_enumeration,
                      sigma_upper_bound)
from .treecount import count_spanning_trees_exact, feedback_edge_number, log_spanning_trees

__all__ = [
    "BACKEND",
    "CompositionTrace",
    "ConfigError",
    "ConvergenceError",
    "CutSolution",
    "Graph",
    "GraphStructureError",
    "InputError",
    "Instance",
    "LpResult",
    "Metric",
    "OracleBudget",
    "ParseError",
    "ReqcutError",
    "ResourceError",
    "RoundingConfig",
    "SpInstance",
    "TrialReport",
    "approximation_ratio",
    "check_cut_equivalence",
    "components_per_group",
    "compute_alpha",
    "construct_tree",
    "count_spanning_trees_exact",
    "dump_instance_json",
    "dump_instance_text",
    "dump_sp_expression",
    "enumerate_minimal_steiner_trees",
    "enumerate_spanning_trees",
    "estimate_distortion",
    "exact_sigma_by_enumeration",
    "exact_solve",
    "feedback_edge_number",
    "find_sp_terminals",
    "gen_bounded_fes",
    "gen_setcover_star",
    "gen_short_cycles",
    "gen_sp_depth",
    "is_feasible_cut",
    "load_instance",
    "log_spanning_trees",
    "make_cut_solution",
    "minimum_spanning_tree",
    "parse_instance",
    "parse_sp_expression",
    "recognize_sp",
    "require_valid",
    "round_once",
    "scale_metric",
    "separation_oracle",
    "sigma_upper_bound",
    "solve_relaxed_lp",
    "solve_requirement_cut",
    "solve_sp_pipeline",
    "stretch_bound",
    "subdivide_integer_costs",
    "to_cost",
    "tree_distances",
    "validate",
]
