from .heads import ContextHead, SortClassifier, SortPairHead, SpeedHead, context_predict, sort_forward
from .losses import nce_loss, speed_loss
from .samplers import (
    PERMUTATIONS_3,
    SPEED_RATES,
    ContextTriplet,
    SortSample,
    SpeedSample,
    permutation_from_index,
    permutation_index,
    sample_context_batch,
    sample_sort_batch,
    sample_speed_batch,
)
from .train import PretrainConfig, PretrainReport, TrainingDiverged, pretrain

__all__ = [
    "SPEED_RATES",
    "PERMUTATIONS_3",
    "SpeedSample",
    "ContextTriplet",
    "SortSample",
    "permutation_index",
    "permutation_from_index",
    "sample_speed_batch",
    "sample_context_batch",
    "sample_sort_batch",
    "SpeedHead",
    "ContextHead",
    "SortPairHead",
    "SortClassifier",
    "context_predict",
    "sort_forward",
    "speed_loss",
    "nce_loss",
    "PretrainConfig",
    "PretrainReport",
    "TrainingDiverged",
    "pretrain",
]
