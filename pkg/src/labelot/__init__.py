"""Label-name-supervised topic assignment via entropy-regularized optimal
transport.

Documents and topic labels are embedded (or scored) into a cost matrix;
a transport plan between the document and label distributions assigns every
document a topic (complete mode) or only the most confident fraction p
(partial mode). Batched solves keep memory flat on larger corpora, and
extrinsic metrics (P1, mutual information) evaluate against gold labels.
"""

from .assignment import (
    UNASSIGNED,
    BatchSchedule,
    Clustering,
    batched_complete_assign,
    batched_partial_assign,
    harden_complete,
    harden_partial,
    read_clustering,
    write_clustering,
)
from .corpus import Document, LabelSpec, load_corpus, load_labels, render_label, write_corpus, write_labels
from .costs import EmbeddingMatrix, ScoreMatrix, ce_costs, l2_costs, seed_doc_label_embeddings
from .harness import (
    ExperimentConfig,
    OmissionSpec,
    RunOutput,
    build_costs,
    run_assign,
    run_label_omission,
    run_nn_baseline,
)
from .errors import (
    ConfigError,
    EvaluationError,
    HardeningError,
    InputError,
    LabelotError,
    ProviderError,
    SolverError,
)
from .matio import read_matrix, write_matrix
from .metrics import ContingencyTable, MetricsReport, evaluate, inverse_purity, mutual_information, p1, purity
from .providers import ProviderConfig, fetch_embeddings
from .transport import (
    CostMatrix,
    Marginal,
    SolverConfig,
    TransportPlan,
    sinkhorn_complete,
    sinkhorn_partial,
    wasserstein_cost,
)

__version__ = "0.1.0"

__all__ = [
    "BatchSchedule",
    "Clustering",
    "ConfigError",
    "ContingencyTable",
    "CostMatrix",
    "Document",
    "EmbeddingMatrix",
    "EvaluationError",
    "ExperimentConfig",
    "HardeningError",
    "InputError",
    "LabelSpec",
    "LabelotError",
    "Marginal",
    "MetricsReport",
    "OmissionSpec",
    "ProviderConfig",
    "ProviderError",
    "RunOutput",
    "ScoreMatrix",
    "SolverConfig",
    "SolverError",
    "TransportPlan",
    "UNASSIGNED",
    "batched_complete_assign",
    "batched_partial_assign",
    "build_costs",
    "ce_costs",
    "evaluate",
    "fetch_embeddings",
    "harden_complete",
    "harden_partial",
    "inverse_purity",
    "l2_costs",
    "load_corpus",
    "load_labels",
    "mutual_information",
    "p1",
    "purity",
    "read_clustering",
    "read_matrix",
    "render_label",
    "run_assign",
    "run_label_omission",
    "run_nn_baseline",
    "seed_doc_label_embeddings",
    "sinkhorn_complete",
    "sinkhorn_partial",
    "wasserstein_cost",
    "write_clustering",
    "write_corpus",
    "write_labels",
    "write_matrix",
]
