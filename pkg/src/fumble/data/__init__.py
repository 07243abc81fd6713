from .annotations import (
    AgreementStats,
    AnnotationRecord,
    OnsetSet,
    QCRemoval,
    WorkerLabel,
    agreement_stats,
    apply_quality_control,
    consolidate_onsets,
    read_annotations,
    write_annotations,
)
from .labels import ClassLabel, derive_window_label, shift_for_anticipation
from .splits import Split, make_splits, read_splits, write_splits
from .synthetic import (
    SyntheticSpec,
    generate_synthetic_video,
    read_ground_truth,
    sample_specs,
    write_synthetic_corpus,
)

__all__ = [
    "WorkerLabel",
    "AnnotationRecord",
    "OnsetSet",
    "QCRemoval",
    "AgreementStats",
    "apply_quality_control",
    "consolidate_onsets",
    "agreement_stats",
    "read_annotations",
    "write_annotations",
    "ClassLabel",
    "derive_window_label",
    "shift_for_anticipation",
    "Split",
    "make_splits",
    "read_splits",
    "write_splits",
    "SyntheticSpec",
    "generate_synthetic_video",
    "sample_specs",
    "read_ground_truth",
    "write_synthetic_corpus",
]
