"""Complete-randomization assignment spaces and the randomization engine."""
from randomization.space import (
    AssignmentSpace,
    enumerate_assignments,
    sample,
    sample_ranks,
    unrank,
)
from randomization.summary import (
    SCHEMA_VERSION,
    DistributionSummary,
    EstimatorSummary,
    IntervalSummary,
    RecordLayout,
    lower_median,
    summarize,
)
from randomization.engine import (
    AssignmentEvaluator,
    RandomizationEngine,
    evaluate_assignment,
    exact_distribution,
    monte_carlo_distribution,
)

__all__ = [
    "AssignmentSpace", "enumerate_assignments", "sample", "sample_ranks", "unrank",
    "SCHEMA_VERSION", "DistributionSummary", "EstimatorSummary", "IntervalSummary",
    "RecordLayout", "lower_median", "summarize",
    "AssignmentEvaluator", "RandomizationEngine", "evaluate_assignment",
    "exact_distribution", "monte_carlo_distribution",
]
