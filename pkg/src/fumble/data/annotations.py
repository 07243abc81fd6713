"""Worker onset annotations: quality control, consolidation, agreement."""

from __future__ import annotations

import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path


@dataclass(frozen=True)
class WorkerLabel:
    """One worker's verdict on one video: an onset time or a no-failure flag."""

    worker_id: str
    onset: float | None
    no_failure: bool = False

    def __post_init__(self):
        if self.no_failure and self.onset is not None:
            raise ValueError("no_failure labels carry no onset")
        if not self.no_failure and self.onset is None:
            raise ValueError("a failure label needs an onset time")


@dataclass
class AnnotationRecord:
    video_id: str
    duration: float
    labels: list[WorkerLabel] = field(default_factory=list)

    def __post_init__(self):
        for lab in self.labels:
            if lab.onset is not None and not 0 <= lab.onset <= self.duration:
                raise ValueError(
                    f"onset {lab.onset} outside [0, {self.duration}] for {self.video_id}"
                )

    def onsets(self) -> list[float]:
        return [lab.onset for lab in self.labels if lab.onset is not None]


@dataclass(frozen=True)
class OnsetSet:
    """Consolidated failure onsets for one video; possibly more than one."""

    onsets: tuple[float, ...]
    median_onset: float

    def __post_init__(self):
        if not self.onsets:
            raise ValueError("OnsetSet must be non-empty")
        if not min(self.onsets) <= self.median_onset <= max(self.onsets):
            raise ValueError("median_onset outside onset range")


@dataclass(frozen=True)
class QCRemoval:
    video_id: str
    reason: str


REASON_UNLABELED = "unlabeled"
REASON_MAJORITY_NO_FAILURE = "majority_no_failure"
REASON_EDGE_ONSET = "edge_onset"


def edge_margin_seconds(duration: float, edge_margin: float = 0.05) -> float:
    """The 'very beginning or end' zone: max(0.25 s, edge_margin * duration)."""
    return max(0.25, edge_margin * duration)


def apply_quality_control(
    records: list[AnnotationRecord], edge_margin: float = 0.05
) -> tuple[list[AnnotationRecord], list[QCRemoval]]:
    """Drop unlabeled videos, majority no-failure votes, and edge-of-clip onsets.

    An onset at the very start or end of a clip indicates a scene-detection
    error rather than a real failure. Every removal carries a reason.
    """
    kept: list[AnnotationRecord] = []
    removed: list[QCRemoval] = []
    for rec in records:
        if not rec.labels:
            removed.append(QCRemoval(rec.video_id, REASON_UNLABELED))
            continue
        n_no_failure = sum(1 for lab in rec.labels if lab.no_failure)
        if n_no_failure * 2 > len(rec.labels):
            removed.append(QCRemoval(rec.video_id, REASON_MAJORITY_NO_FAILURE))
            continue
        onsets = rec.onsets()
        if not onsets:
            removed.append(QCRemoval(rec.video_id, REASON_UNLABELED))
            continue
        med = statistics.median(onsets)
        margin = edge_margin_seconds(rec.duration, edge_margin)
        if med < margin or med > rec.duration - margin:
            removed.append(QCRemoval(rec.video_id, REASON_EDGE_ONSET))
            continue
        kept.append(rec)
    return kept, removed


def consolidate_onsets(record: AnnotationRecord, cluster_radius: float = 1.0) -> OnsetSet:
    """Single-link cluster worker onsets; one consolidated onset per cluster.

    Onsets whose sorted gaps are <= cluster_radius chain into one cluster;
    each cluster contributes its median. median_onset is the median over all
    worker onsets (used for window labels; the per-cluster onsets are the
    localization ground truth).
    """
    onsets = sorted(record.onsets())
    if not onsets:
        raise ValueError(f"record {record.video_id} has no onsets")
    clusters: list[list[float]] = [[onsets[0]]]
    for t in onsets[1:]:
        if t - clusters[-1][-1] <= cluster_radius:
            clusters[-1].append(t)
        else:
            clusters.append([t])
    consolidated = tuple(statistics.median(c) for c in clusters)
    return OnsetSet(onsets=consolidated, median_onset=statistics.median(onsets))


@dataclass
class AgreementStats:
    """Per-video worker-onset spread and its dataset-level median."""

    per_video_stdev: dict[str, float]        # seconds
    per_video_stdev_frac: dict[str, float]   # fraction of duration
    median_stdev: float
    median_stdev_frac: float
    n_videos: int


def agreement_stats(records: list[AnnotationRecord]) -> AgreementStats:
    """Sample standard deviation (n-1) of worker onsets per video, plus medians.

    Videos with fewer than two onsets are skipped.
    """
    per_sec: dict[str, float] = {}
    per_frac: dict[str, float] = {}
    for rec in records:
        onsets = rec.onsets()
        if len(onsets) < 2:
            continue
        sd = statistics.stdev(onsets)
        per_sec[rec.video_id] = sd
        per_frac[rec.video_id] = sd / rec.duration
    if per_sec:
        med = statistics.median(per_sec.values())
        med_frac = statistics.median(per_frac.values())
    else:
        med = float("nan")
        med_frac = float("nan")
    return AgreementStats(
        per_video_stdev=per_sec,
        per_video_stdev_frac=per_frac,
        median_stdev=med,
        median_stdev_frac=med_frac,
        n_videos=len(per_sec),
    )


def write_annotations(records: list[AnnotationRecord], path: Path | str) -> None:
    """JSON-lines: {video_id, duration, labels: [{worker, onset|null, no_failure}]}."""
    with open(path, "w") as fh:
        for rec in records:
            fh.write(
                json.dumps(
                    {
                        "video_id": rec.video_id,
                        "duration": rec.duration,
                        "labels": [
                            {"worker": lab.worker_id, "onset": lab.onset, "no_failure": lab.no_failure}
                            for lab in rec.labels
                        ],
                    }
                )
                + "\n"
            )


def read_annotations(path: Path | str) -> list[AnnotationRecord]:
    records = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            records.append(
                AnnotationRecord(
                    video_id=rec["video_id"],
                    duration=float(rec["duration"]),
                    labels=[
                        WorkerLabel(
                            worker_id=lab["worker"],
                            onset=None if lab["onset"] is None else float(lab["onset"]),
                            no_failure=bool(lab.get("no_failure", False)),
                        )
                        for lab in rec["labels"]
                    ],
                )
            )
    return records
