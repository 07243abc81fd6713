"""Benchmark metrics: sliding-window classification, onset localization,
anticipation, human consistency, and per-category breakdowns."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from fumble.data.annotations import OnsetSet
from fumble.data.labels import ClassLabel
from fumble.media.assets import ClipWindow

LOCALIZATION_THRESHOLDS = (1.0, 0.25)
_EPS = 1e-9


@dataclass
class WindowPrediction:
    window: ClipWindow
    scores: np.ndarray  # (3,) probabilities, sum 1

    def __post_init__(self):
        self.scores = np.asarray(self.scores, np.float64)
        if self.scores.shape != (3,) or self.scores.min() < -_EPS:
            raise ValueError(f"scores must be 3 nonnegative values, got {self.scores}")
        if abs(self.scores.sum() - 1.0) > 1e-6:
            raise ValueError(f"scores must sum to 1, got {self.scores.sum()}")

    @property
    def label(self) -> ClassLabel:
        return ClassLabel(int(self.scores.argmax()))


@dataclass
class LocalizationResult:
    video_id: str
    predicted_onset: float | None  # None when the video yielded no windows
    matched: dict[float, bool] | None = None


def slide_windows(
    video_id: str,
    duration: float,
    window_len: float = 1.0,
    stride: float = 0.25,
) -> list[ClipWindow]:
    """Windows [i*stride, i*stride + window_len] with end <= duration.

    Videos shorter than one window yield an empty list.
    """
    n = int(np.floor((duration - window_len) / stride + _EPS)) + 1
    if n <= 0:
        return []
    return [ClipWindow(video_id, i * stride, i * stride + window_len) for i in range(n)]


def _label_values(labels) -> np.ndarray:
    return np.array([lab.value if isinstance(lab, ClassLabel) else int(lab) for lab in labels])


def classification_accuracy(predictions, labels) -> tuple[float, np.ndarray]:
    """Overall accuracy (%) and the row-normalized 3x3 confusion matrix (%).

    Rows are true labels; rows with support sum to 100.
    """
    pred = _label_values(predictions)
    true = _label_values(labels)
    if pred.shape != true.shape:
        raise ValueError(f"{len(pred)} predictions vs {len(true)} labels")
    counts = np.zeros((3, 3))
    np.add.at(counts, (true, pred), 1)
    confusion = np.zeros((3, 3))
    support = counts.sum(axis=1)
    nonzero = support > 0
    confusion[nonzero] = 100.0 * counts[nonzero] / support[nonzero, None]
    accuracy = 100.0 * float((pred == true).mean()) if len(true) else 0.0
    return accuracy, confusion


def localize_onset(predictions: list[WindowPrediction]) -> float:
    """Center of the window with the highest Transitional score; ties earliest."""
    if not predictions:
        raise ValueError("no window predictions")
    scores = np.array([p.scores[ClassLabel.TRANSITIONAL.value] for p in predictions])
    centers = np.array([p.window.center for p in predictions])
    best = scores.max()
    return float(centers[scores >= best - _EPS].min())


def match_onset(predicted: float, onsets: OnsetSet, threshold: float) -> bool:
    """Correct iff the prediction is within threshold of any ground-truth onset."""
    return min(abs(predicted - t) for t in onsets.onsets) <= threshold + _EPS


def localization_accuracy(
    predictions: dict[str, float | None],
    onset_sets: dict[str, OnsetSet],
    threshold: float,
) -> float:
    """Fraction (%) of videos whose predicted onset lands near any true onset.

    Videos with no prediction (too short for a single window) count as
    failures; videos without a ground-truth onset set are skipped with a
    warning.
    """
    correct = 0
    total = 0
    for video_id, predicted in predictions.items():
        if video_id not in onset_sets:
            warnings.warn(f"no onset set for {video_id}; skipped")
            continue
        total += 1
        if predicted is not None and match_onset(predicted, onset_sets[video_id], threshold):
            correct += 1
    return 100.0 * correct / total if total else 0.0


def anticipation_accuracy(predictions, labels) -> dict:
    """3-way accuracy on future-shifted labels, plus the set's chance levels.

    `chance_uniform` is a uniform guesser's expected accuracy; `chance_prior`
    the accuracy of guessing from the empirical label distribution; `majority`
    the best constant prediction. All in percent.
    """
    true = _label_values(labels)
    accuracy, confusion = classification_accuracy(predictions, labels)
    freqs = np.bincount(true, minlength=3) / max(len(true), 1)
    return {
        "accuracy": accuracy,
        "confusion": confusion,
        "n": len(true),
        "chance_uniform": 100.0 / 3.0,
        "chance_prior": 100.0 * float((freqs**2).sum()),
        "majority": 100.0 * float(freqs.max()) if len(true) else 0.0,
    }


def human_consistency(
    held_out: dict[str, float],
    consensus: dict[str, OnsetSet],
    thresholds: tuple[float, ...] = LOCALIZATION_THRESHOLDS,
) -> dict[float, float]:
    """Score a held-out worker's onsets against the other workers' onset sets."""
    return {
        thr: localization_accuracy(held_out, consensus, thr)  # type: ignore[arg-type]
        for thr in thresholds
    }


def breakdown_report(
    per_video_metric: dict[str, float],
    category_map: dict[str, str] | None,
) -> dict[str, dict]:
    """Mean metric per category; videos without a category pool into "other"."""
    category_map = category_map or {}
    groups: dict[str, list[float]] = {}
    for video_id, value in per_video_metric.items():
        groups.setdefault(category_map.get(video_id, "other"), []).append(value)
    return {
        cat: {"mean": float(np.mean(vals)), "n": len(vals)}
        for cat, vals in sorted(groups.items())
    }


def nearest_neighbors(
    query: np.ndarray,
    bank: np.ndarray,
    bank_ids: list[str],
    k: int = 10,
) -> list[tuple[str, float]]:
    """Ranked cosine-similarity neighbors of one feature vector."""
    q = query / max(np.linalg.norm(query), _EPS)
    b = bank / np.maximum(np.linalg.norm(bank, axis=1, keepdims=True), _EPS)
    sims = b @ q
    order = np.argsort(-sims)[:k]
    return [(bank_ids[i], float(sims[i])) for i in order]
