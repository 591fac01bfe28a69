"""Bidirectional topic matching between two topic-modeled corpora.

Two independently trained topic models are applied reciprocally, each labeling
the other corpus's documents by embedding similarity. Aggregating the resulting
topic pairs yields pairing strengths, corpus closeness/uniqueness/alignment
factors, unique-topic extraction, and an agreement check against a plain
cosine-similarity matching.
"""

from ._version import __version__
from . import errors
from .interchange import (
    OUTLIER_ID,
    CorpusBundle,
    TopicMeta,
    load_bundle,
    outlier_centroid,
    write_bundle,
)
from .matcher import (
    AssignmentTable,
    DocAssignment,
    assign_cross_topics,
    build_assignment_table,
    cosine_similarity,
)
from .cooccur import (
    OutlierDiagnostics,
    PairCounts,
    StrengthMatrix,
    count_pairs,
    outlier_diagnostics,
    pairing_strengths,
)
from .measures import (
    MeasureReport,
    UniqueTopic,
    alignment_strength,
    build_measure_report,
    classify_relationship,
    closeness_skew,
    corpus_alignment,
    corpus_closeness,
    corpus_uniqueness,
    unique_topics,
)
from .validate import (
    MatchLabeling,
    btm_match,
    cohens_kappa,
    cosine_match,
    discrepancy_report,
    validation_report,
)
from .synth import GroundTruth, OracleReport, SynthConfig, brute_force_report, generate_pair
from .report import AnalysisReport, build_report, load_report_json, plot_data
from .cli import RunConfig, run_analyze

__all__ = [
    "__version__",
    "errors",
    "OUTLIER_ID",
    "CorpusBundle",
    "TopicMeta",
    "load_bundle",
    "write_bundle",
    "outlier_centroid",
    "AssignmentTable",
    "DocAssignment",
    "cosine_similarity",
    "assign_cross_topics",
    "build_assignment_table",
    "PairCounts",
    "StrengthMatrix",
    "OutlierDiagnostics",
    "count_pairs",
    "pairing_strengths",
    "outlier_diagnostics",
    "MeasureReport",
    "UniqueTopic",
    "corpus_closeness",
    "corpus_uniqueness",
    "closeness_skew",
    "alignment_strength",
    "corpus_alignment",
    "unique_topics",
    "classify_relationship",
    "build_measure_report",
    "MatchLabeling",
    "btm_match",
    "cosine_match",
    "cohens_kappa",
    "discrepancy_report",
    "validation_report",
    "SynthConfig",
    "GroundTruth",
    "OracleReport",
    "generate_pair",
    "brute_force_report",
    "AnalysisReport",
    "build_report",
    "plot_data",
    "load_report_json",
    "RunConfig",
    "run_analyze",
]
