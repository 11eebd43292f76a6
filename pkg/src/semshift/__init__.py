"""Graded lexical semantic change scores from diachronic usage embeddings."""

from .errors import (
    ConfigError,
    DomainError,
    FormatError,
    SemshiftError,
    ValidationError,
)
from .evaluation import EvalResult, aggregate, evaluate_run, rank_with_ties, spearman
from .hubness import HubnessStats, hubness_report
from .interpret import (
    AsymmetryRecord,
    ChangeDirection,
    LdaDirection,
    asymmetry_ranking,
    lda_direction,
    top_discriminative_definitions,
)
from .metrics import (
    DirectionalAMD,
    Matching,
    amd,
    amd_directional,
    apd,
    cosine_distance,
    distance_matrix,
    prt,
    samd_greedy,
    samd_hungarian,
    subsample_equal,
)
from .spaces import (
    ProjectedPair,
    RankError,
    SpaceConfig,
    SpaceKind,
    apply_space,
    fit_pca,
    project_definition_space,
    select_random_dims,
    stress_schedule,
)
from .store import (
    ChangeScoreTable,
    DefinitionSet,
    EmbeddingStore,
    GoldScores,
    Metric,
    StoreManifest,
    UsageEmbeddingSet,
    load_definition_set,
    load_embedding_store,
    load_gold_scores,
    read_results,
    write_results,
    write_store,
)

__version__ = "0.1.0"
