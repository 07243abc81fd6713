"""Worker quality checks against manually labeled gold videos."""

from __future__ import annotations

from .store import AnnotationStore


def assign_gold_checks(
    store: AnnotationStore,
    gold: dict[str, float],
    max_deviation: float = 1.0,
    fail_fraction: float = 0.5,
) -> set[str]:
    """Flag workers whose gold-video onsets are off by more than `max_deviation`
    seconds on more than `fail_fraction` of the gold items they labeled.

    Flagged workers' labels are excluded from consensus downstream.
    """
    if not gold:
        raise ValueError("gold set is empty")
    items: dict[str, int] = {}
    bad: dict[str, int] = {}
    for video_id, true_onset in gold.items():
        for ann in store.labels_for(video_id):
            items[ann.worker_id] = items.get(ann.worker_id, 0) + 1
            off = ann.no_failure or abs((ann.onset or 0.0) - true_onset) > max_deviation
            if off:
                bad[ann.worker_id] = bad.get(ann.worker_id, 0) + 1
    return {w for w, n in items.items() if bad.get(w, 0) / n > fail_fraction}
