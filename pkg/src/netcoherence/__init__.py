"""Multichannel coherence detection over incompletely connected sensor networks.

The package computes a generalized coherence statistic for M sensor channels
when only some sensor pairs can exchange data.  Missing pairwise inner
products are replaced by maximum entropy surrogates: the unique values that
make the completed Gram matrix as noncommittal as possible, which is the same
as forcing its inverse to vanish on every missing pair.  A Monte Carlo
harness turns the statistic into ROC curves and per-link value reports.
"""

from .coherence import (
    ChannelData,
    GcStatistic,
    Hypothesis,
    build_partial_gram,
    gc_statistic,
    gc_threshold_test,
)
from .errors import (
    ChannelFileError,
    ConfigError,
    ConvergenceError,
    DegenerateInputError,
    DimensionMismatchError,
    ExcessiveExclusionError,
    InfeasiblePartialMatrixError,
    InternalConsistencyError,
    InvalidInputError,
    InvalidPermutationError,
    InvalidThresholdError,
    NetcoherenceError,
    SingularMatrixError,
    SubmatrixSingularError,
)
from .maxent import (
    CompletionConfig,
    CompletionResult,
    PartialHermitian,
    complete,
    single_entry_update,
    verify_zero_pattern,
)
from .numerics import HermitianMatrix, inner_product, normalize
from .simulate import (
    BatchDiagnostics,
    LinkValue,
    RocCurve,
    SignalModel,
    TrialBatch,
    generate_trial,
    link_value_report,
    pd_at_pfa,
    roc_from_scores,
    run_batch,
)
from .topology import Topology, all_topologies, are_isomorphic

__version__ = "0.1.0"

__all__ = [
    "BatchDiagnostics",
    "ChannelData",
    "ChannelFileError",
    "CompletionConfig",
    "CompletionResult",
    "ConfigError",
    "ConvergenceError",
    "DegenerateInputError",
    "DimensionMismatchError",
    "ExcessiveExclusionError",
    "GcStatistic",
    "HermitianMatrix",
    "Hypothesis",
    "InfeasiblePartialMatrixError",
    "InternalConsistencyError",
    "InvalidInputError",
    "InvalidPermutationError",
    "InvalidThresholdError",
    "LinkValue",
    "NetcoherenceError",
    "PartialHermitian",
    "RocCurve",
    "SignalModel",
    "SingularMatrixError",
    "SubmatrixSingularError",
    "Topology",
    "TrialBatch",
    "all_topologies",
    "are_isomorphic",
    "build_partial_gram",
    "complete",
    "gc_statistic",
    "gc_threshold_test",
    "generate_trial",
    "inner_product",
    "link_value_report",
    "normalize",
    "pd_at_pfa",
    "roc_from_scores",
    "run_batch",
    "single_entry_update",
    "verify_zero_pattern",
    "__version__",
]
