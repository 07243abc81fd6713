"""Benchmark assembly: corpus loading, window labeling, and task evaluation.

Glue shared by the pipeline, the CLI, and the acceptance suite: turn a corpus
plus onset ground truth into labeled windows, probe features, and per-task
metrics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from fumble.data.annotations import OnsetSet
from fumble.data.labels import ClassLabel, derive_window_label, shift_for_anticipation
from fumble.encoder.model import VideoEncoder, encode
from fumble.evaluation.metrics import WindowPrediction, localize_onset, slide_windows
from fumble.media.assets import ClipWindow, probe_asset
from fumble.media.sources import ClipSource, FileSource
from fumble.transfer.finetune import FinetunedModel, LabeledWindow, score_windows


@dataclass
class CorpusVideo:
    source: ClipSource
    onsets: OnsetSet
    duration: float

    @property
    def id(self) -> str:
        return self.source.id


def load_corpus(media_dir: Path | str, clip_size: int = 112) -> list[CorpusVideo]:
    """Load a rendered corpus via its ground_truth.json.

    clip_size must match the encoder input size the clips will feed.
    """
    media_dir = Path(media_dir)
    truth = json.loads((media_dir / "ground_truth.json").read_text())
    videos = []
    for vid in sorted(truth):
        info = truth[vid]
        asset = probe_asset(media_dir / info["uri"], asset_id=vid)
        onsets = tuple(sorted(float(t) for t in info["onsets"]))
        videos.append(
            CorpusVideo(
                source=FileSource(asset, size=clip_size),
                onsets=OnsetSet(onsets=onsets, median_onset=float(np.median(onsets))),
                duration=float(info["duration"]),
            )
        )
    return videos


def sample_labeled_windows(
    video: CorpusVideo,
    rng: np.random.Generator,
    per_class: int = 2,
    window_len: float = 1.0,
) -> list[LabeledWindow]:
    """Draw up to per_class windows of each label from one video.

    Center ranges follow the label rule: a window is Transitional iff it
    contains the onset, Intentional iff fully before, Unintentional iff fully
    after. Classes whose valid range is empty on this video are skipped.
    """
    half = window_len / 2.0
    t = video.onsets.median_onset
    duration = video.duration
    ranges = {
        ClassLabel.INTENTIONAL: (half, t - half - 1e-3),
        ClassLabel.TRANSITIONAL: (max(t - half, half), min(t + half, duration - half)),
        ClassLabel.UNINTENTIONAL: (t + half + 1e-3, duration - half),
    }
    samples = []
    for label, (lo, hi) in ranges.items():
        if hi <= lo:
            continue
        for _ in range(per_class):
            center = float(rng.uniform(lo, hi))
            window = ClipWindow(video.id, center - half, center + half)
            # Boundary draws can land on the other side of the rule; the
            # derived label is the ground truth either way.
            derived = derive_window_label(window, video.onsets)
            samples.append(LabeledWindow(source=video.source, window=window, label=derived))
    return samples


def build_window_sets(
    videos: list[CorpusVideo],
    seed: int,
    per_class: int = 2,
    window_len: float = 1.0,
) -> list[LabeledWindow]:
    rng = np.random.default_rng(seed)
    samples: list[LabeledWindow] = []
    for video in videos:
        samples.extend(sample_labeled_windows(video, rng, per_class, window_len))
    return samples


def window_features(
    encoder: VideoEncoder,
    samples: list[LabeledWindow],
    rate: float = 16.0,
) -> tuple[np.ndarray, np.ndarray]:
    """Frozen-encoder features and integer labels for labeled windows."""
    feats = []
    labels = []
    for s in samples:
        source = s.source.to_array_source()
        clip = source.clip(s.window.center, rate, encoder.config.frames)
        feats.append(encode(encoder, clip))
        labels.append(s.label.value)
    return np.stack(feats), np.array(labels)


def localize_corpus(
    model: FinetunedModel,
    videos: list[CorpusVideo],
    window_len: float = 1.0,
    stride: float = 0.25,
    rate: float = 16.0,
) -> dict[str, float | None]:
    """Predicted onset per video from sliding-window Transitional scores."""
    predictions: dict[str, float | None] = {}
    for video in videos:
        windows = slide_windows(video.id, video.duration, window_len, stride)
        if not windows:
            predictions[video.id] = None
            continue
        source = video.source.to_array_source()
        probs = score_windows(model, source, windows, rate=rate)
        preds = [WindowPrediction(window=w, scores=p) for w, p in zip(windows, probs)]
        predictions[video.id] = localize_onset(preds)
    return predictions


def anticipation_windows(
    samples: list[LabeledWindow],
    durations: dict[str, float],
    onset_sets: dict[str, OnsetSet],
    horizon: float = 1.5,
) -> list[LabeledWindow]:
    """Relabel windows with their future (+horizon) class; drop out-of-range ones."""
    out = []
    for s in samples:
        label = shift_for_anticipation(
            s.window, onset_sets[s.window.asset_id], durations[s.window.asset_id], horizon
        )
        if label is None:
            continue
        out.append(LabeledWindow(source=s.source, window=s.window, label=label))
    return out
