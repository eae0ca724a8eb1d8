"""Exact counting, uniform sampling and bound verification for list
colourings of locally sparse graphs.

The package computes exact colouring counts (big integers, never floats),
samples proper colourings exactly uniformly, evaluates the closed-form
list-size and count bounds it verifies the counts against, and ships the
corpus generators, reports, HTTP service and CLI around them.
"""
from __future__ import annotations

import sys

from ._version import VERSION as __version__

# Exact counts routinely have tens of thousands of digits; the interpreter's
# default int->str cap would make printing or serializing them raise.
if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(2_000_000)

from .errors import (ToolkitError, InputError, DomainError, HypothesisError,
                     CapacityError, GenerationError, UncolourableError)
from .graphs import (Graph, SparsityProfile, induced_subgraph, local_density,
                     degree_stats, parse_graph, format_graph, load_graph,
                     save_graph)
from .bounds import (lambert_w, LogValue, BoundParams, thm1_params,
                     check_thm1_hypotheses, neighbour_thresholds, cor2_bound,
                     thm3_bound, thm3_sharpness_ceiling, thm4_params,
                     thm4_bound)
from .chromatic import chromatic_polynomial_eval
from .counting import (ListAssignment, PartialColouring, CountBudget,
                       DEFAULT_BUDGET, available_list, count_colourings,
                       count_extensions, expected_available,
                       enumerate_colourings, verify_star, StarReport,
                       tail_probability, parse_lists, format_lists, load_lists)
from .sampling import (RandomSource, sample_uniform, chain_rule_probability,
                       resample_once, avoidance_probability_bound,
                       ExperimentTrace, four_step_experiment,
                       four_step_exact_distribution,
                       resample_exact_distribution, experiment_diagnostics)
from .generators import (GeneratorSpec, parse_spec, format_spec, generate,
                         named_graph, triangle_free_gnp, bipartite_random,
                         regular_triangle_free, regularize)
from .reports import (Status, TaggedValue, Check, InstanceInfo,
                      VerificationReport, report_from_json, report_from_csv,
                      grid_to_csv, grid_from_csv)
from .verify import (verify_thm1, verify_thm4, check_lemma2, check_markov,
                     run_experiment, thm3_compare, bounds_grid, GRID_FIELDS)

__all__ = [
    "__version__",
    # errors
    "ToolkitError", "InputError", "DomainError", "HypothesisError",
    "CapacityError", "GenerationError", "UncolourableError",
    # graphs
    "Graph", "SparsityProfile", "induced_subgraph", "local_density",
    "degree_stats", "parse_graph", "format_graph", "load_graph", "save_graph",
    # bounds
    "lambert_w", "LogValue", "BoundParams", "thm1_params",
    "check_thm1_hypotheses", "neighbour_thresholds", "cor2_bound",
    "thm3_bound", "thm3_sharpness_ceiling", "thm4_params", "thm4_bound",
    # counting
    "chromatic_polynomial_eval", "ListAssignment", "PartialColouring",
    "CountBudget", "DEFAULT_BUDGET", "available_list", "count_colourings",
    "count_extensions", "expected_available", "enumerate_colourings",
    "verify_star", "StarReport", "tail_probability", "parse_lists",
    "format_lists", "load_lists",
    # sampling
    "RandomSource", "sample_uniform", "chain_rule_probability",
    "resample_once", "avoidance_probability_bound", "ExperimentTrace",
    "four_step_experiment", "four_step_exact_distribution",
    "resample_exact_distribution", "experiment_diagnostics",
    # generators
    "GeneratorSpec", "parse_spec", "format_spec", "generate", "named_graph",
    "triangle_free_gnp", "bipartite_random", "regular_triangle_free",
    "regularize",
    # reports and pipelines
    "Status", "TaggedValue", "Check", "InstanceInfo", "VerificationReport",
    "report_from_json", "report_from_csv", "grid_to_csv", "grid_from_csv",
    "verify_thm1", "verify_thm4", "check_lemma2", "check_markov",
    "run_experiment", "thm3_compare", "bounds_grid", "GRID_FIELDS",
]
