from .metrics import (
    LocalizationResult,
    WindowPrediction,
    anticipation_accuracy,
    breakdown_report,
    classification_accuracy,
    human_consistency,
    localization_accuracy,
    localize_onset,
    nearest_neighbors,
    slide_windows,
)
from .report import EvalReport, emit_report, report_from_json, report_to_json

__all__ = [
    "WindowPrediction",
    "LocalizationResult",
    "slide_windows",
    "classification_accuracy",
    "localize_onset",
    "localization_accuracy",
    "anticipation_accuracy",
    "human_consistency",
    "breakdown_report",
    "nearest_neighbors",
    "EvalReport",
    "emit_report",
    "report_to_json",
    "report_from_json",
]
