"""Interval-agreement fuzzy modelling and risk-score moderation."""

from ._core import (
    AgreementT1,
    BatchRow,
    DriverModeration,
    EnsembleStrategy,
    FactorInfo,
    GroupSummary,
    ImpactRegistry,
    Interval,
    MembershipFunction,
    ModerationConfig,
    ModerationResult,
    PanelSummary,
    PointOverride,
    RatingScale,
    ResponsePanel,
    ResponseRecord,
    SimilarityMatrix,
    ZSliceSet,
    __version__,
    aggregate_zgt2,
    build_group_fs,
    build_iaa,
    centroid_t1,
    centroid_zgt2,
    defuzzify_factor,
    jaccard,
    load_batch_csv,
    load_batch_csv_file,
    load_factor_manifest,
    load_factor_manifest_file,
    merge_impacts,
    moderate,
    moderate_batch,
    normalize_multiplier,
    parse_responses,
    parse_responses_file,
    round_dp,
    sample_t1,
    sample_zgt2,
    serialize_responses,
    similarity_matrix,
    summarize,
)

__all__ = [
    "AgreementT1",
    "BatchRow",
    "DriverModeration",
    "EnsembleStrategy",
    "FactorInfo",
    "GroupSummary",
    "ImpactRegistry",
    "Interval",
    "MembershipFunction",
    "ModerationConfig",
    "ModerationResult",
    "PanelSummary",
    "PointOverride",
    "RatingScale",
    "ResponsePanel",
    "ResponseRecord",
    "SimilarityMatrix",
    "ZSliceSet",
    "aggregate_zgt2",
    "build_group_fs",
    "build_iaa",
    "centroid_t1",
    "centroid_zgt2",
    "defuzzify_factor",
    "jaccard",
    "load_batch_csv",
    "load_batch_csv_file",
    "load_factor_manifest",
    "load_factor_manifest_file",
    "merge_impacts",
    "moderate",
    "moderate_batch",
    "normalize_multiplier",
    "parse_responses",
    "parse_responses_file",
    "round_dp",
    "sample_t1",
    "sample_zgt2",
    "serialize_responses",
    "similarity_matrix",
    "summarize",
]
