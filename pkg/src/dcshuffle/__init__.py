"""Exact rate-region analysis of the MapReduce shuffle as distributed index coding."""

__version__ = "0.1.0"

from .capacity_check import GAP, MATCH, UNDECIDED, Verdict, check_capacity, verify_family
from .dc_model import (DcInstance, MessageId, ShuffleProblem, computation_load,
                       derive_shuffle_problem, gen_family, relabel_instance, validate)
from .errors import (BlowupBudgetExceeded, BudgetExceeded, DcShuffleError, DimensionCapExceeded,
                     DivisibilityError, IncompleteChoice, Infeasible, InvalidInstance,
                     MissingCoordinate, NonuniformCapacity, StrategyExhausted, Unbounded,
                     UnboundedPolytope, UndeliverableMessage, UnknownVertex)
from .icgraph import SideInfoDigraph, build_digraph, enumerate_acyclic_subsets, is_acyclic, mais
from .inner_bound import (DecodingChoice, achievable, composite_region, default_choice,
                          inner_region)
from .outer_bound import acyclic_outer_region, family_outer_region, prop1_region
from .polytope import (HPolytope, LinearInequality, VarLabel, fme_eliminate, lp_max,
                       region_contains, remove_redundant, vertices)
from .shuffle_sim import build_scheme, rate_report, run

__all__ = [
    "__version__",
    "GAP", "MATCH", "UNDECIDED", "Verdict", "check_capacity", "verify_family",
    "DcInstance", "MessageId", "ShuffleProblem", "computation_load", "derive_shuffle_problem",
    "gen_family", "relabel_instance", "validate",
    "BlowupBudgetExceeded", "BudgetExceeded", "DcShuffleError", "DimensionCapExceeded",
    "DivisibilityError", "IncompleteChoice", "Infeasible", "InvalidInstance",
    "MissingCoordinate", "NonuniformCapacity", "StrategyExhausted", "Unbounded",
    "UnboundedPolytope", "UndeliverableMessage", "UnknownVertex",
    "SideInfoDigraph", "build_digraph", "enumerate_acyclic_subsets", "is_acyclic", "mais",
    "DecodingChoice", "achievable", "composite_region", "default_choice", "inner_region",
    "acyclic_outer_region", "family_outer_region", "prop1_region",
    "HPolytope", "LinearInequality", "VarLabel", "fme_eliminate", "lp_max",
    "region_contains", "remove_redundant", "vertices",
    "build_scheme", "rate_report", "run",
]
