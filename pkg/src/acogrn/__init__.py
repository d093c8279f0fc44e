"""Max-Min Ant System inference of key gene interactions.

Pipeline: expression table -> Pearson correlation matrix -> maximum
correlation Hamiltonian circuit -> edges scored against a gold standard.
"""

from ._backend import DEFAULT as _DEFAULT_KERNELS
from .aco import (
    AcoParams,
    AcoResult,
    ObjectiveMode,
    PheromoneMatrix,
    Tour,
    VisibilityMode,
    construct_tour,
    run_aco,
    tour_score,
    tour_to_edges,
    transition_probabilities,
    update_pheromones,
    visibility_transform,
)
from .correlation import (
    CorrelationMatrix,
    ExpressionMatrix,
    build_correlation_matrix,
    parse_correlation_file,
    parse_expression_file,
    pearson_correlation,
)
from .datasets import BenchmarkCase, load_benchmark
from .errors import *  # noqa: F401,F403
from .evaluation import (
    EvaluationReport,
    GoldStandard,
    evaluation_report_render,
    match_edges,
    parse_gold_standard,
)
from .oracle import OracleResult, brute_force_optimum, enumerate_cycles

BACKEND = _DEFAULT_KERNELS.NAME
__version__ = "0.1.0"
