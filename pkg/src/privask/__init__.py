"""Privacy-bounded adaptive interview trees.

Build, verify and optimize decision trees of questions ("interviews") that
classify a population of candidate types as precisely as possible while every
reachable state of the interview keeps the share of each protected answer
within prescribed bounds.
"""

from .model import (
    Ask,
    CandidateType,
    InfeasibleRootError,
    Instance,
    InterviewTree,
    LEAF,
    Leaf,
    PopulationView,
    PrivacyRule,
    RootPrivacyWarning,
    ValidationError,
    answer_ratio,
    fit_ratio,
    parse_instance,
    parse_rational,
    parse_tree,
    privacy_ok,
    probe_question,
    QuestionProbe,
    restrict,
    serialize_instance,
    serialize_tree,
    split,
)
from .verify import LeafRecord, VerifyReport, decide_cdpc_tree, goodness, leaves, verify_gcopc
from .exact import CdpcResult, ExactResult, SearchBudget, decide_cdpc, solve_exact
from .greedy import solve_greedy
from .ga import GaConfig, GaRunRecord, crossover, mutate, random_tree, run_ga
from .reduction import (
    ScInstance,
    ScTransformParams,
    cdpc_to_gcopc,
    parse_sc,
    sc_bruteforce,
    serialize_sc,
    shared_bound_rules,
    strategy_tree,
    transform_params,
    transform_sc,
)
from .gen import GenParams, generate
from .bench import (
    BenchResult,
    BenchRow,
    SignTestResult,
    SignTestUndefinedError,
    run_benchmark,
    sign_test,
)
from .datasets import hiring_instance, hiring_solution_tree

__version__ = "0.1.0"

__all__ = [
    "Ask",
    "BenchResult",
    "BenchRow",
    "CandidateType",
    "CdpcResult",
    "ExactResult",
    "GaConfig",
    "GaRunRecord",
    "GenParams",
    "InfeasibleRootError",
    "Instance",
    "InterviewTree",
    "LEAF",
    "Leaf",
    "LeafRecord",
    "PopulationView",
    "PrivacyRule",
    "QuestionProbe",
    "RootPrivacyWarning",
    "ScInstance",
    "ScTransformParams",
    "SearchBudget",
    "SignTestResult",
    "SignTestUndefinedError",
    "ValidationError",
    "VerifyReport",
    "answer_ratio",
    "cdpc_to_gcopc",
    "crossover",
    "decide_cdpc",
    "decide_cdpc_tree",
    "fit_ratio",
    "generate",
    "goodness",
    "hiring_instance",
    "hiring_solution_tree",
    "leaves",
    "mutate",
    "parse_instance",
    "parse_rational",
    "parse_sc",
    "parse_tree",
    "privacy_ok",
    "probe_question",
    "random_tree",
    "restrict",
    "run_benchmark",
    "run_ga",
    "sc_bruteforce",
    "serialize_instance",
    "serialize_sc",
    "serialize_tree",
    "shared_bound_rules",
    "sign_test",
    "solve_exact",
    "solve_greedy",
    "split",
    "strategy_tree",
    "transform_params",
    "transform_sc",
    "verify_gcopc",
]
