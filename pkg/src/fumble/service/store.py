"""Append-only annotation store.

Submissions are appended to a JSON-lines log and fsync'd before they are
acknowledged, so an acknowledged label survives a crash or restart. Periodic
compaction rewrites the log in-place (single-writer; reads go through the
in-memory snapshot).
"""

from __future__ import annotations

import json
import os
import time
from dataclasses import asdict, dataclass
from pathlib import Path

from fumble.data.annotations import AnnotationRecord, WorkerLabel


class DuplicateAnnotation(Exception):
    """The (worker, video) pair already has a stored label."""


@dataclass(frozen=True)
class StoredAnnotation:
    video_id: str
    worker_id: str
    onset: float | None
    no_failure: bool
    timestamp: float


class AnnotationStore:
    def __init__(self, path: Path | str):
        self.path = Path(path)
        self._by_video: dict[str, list[StoredAnnotation]] = {}
        self._pairs: set[tuple[str, str]] = set()
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def _replay(self) -> None:
        with open(self.path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                self._index(StoredAnnotation(**json.loads(line)))

    def _index(self, ann: StoredAnnotation) -> None:
        self._by_video.setdefault(ann.video_id, []).append(ann)
        self._pairs.add((ann.worker_id, ann.video_id))

    def submit(
        self,
        video_id: str,
        worker_id: str,
        onset: float | None,
        no_failure: bool,
    ) -> StoredAnnotation:
        """Persist one label; the write hits disk before this returns."""
        if (worker_id, video_id) in self._pairs:
            raise DuplicateAnnotation(f"worker {worker_id} already labeled {video_id}")
        ann = StoredAnnotation(
            video_id=video_id,
            worker_id=worker_id,
            onset=onset,
            no_failure=no_failure,
            timestamp=time.time(),
        )
        with open(self.path, "a") as fh:
            fh.write(json.dumps(asdict(ann)) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        self._index(ann)
        return ann

    def labels_for(self, video_id: str) -> list[StoredAnnotation]:
        return list(self._by_video.get(video_id, []))

    def count(self, video_id: str) -> int:
        return len(self._by_video.get(video_id, []))

    def has(self, video_id: str, worker_id: str) -> bool:
        return (worker_id, video_id) in self._pairs

    def video_ids(self) -> list[str]:
        return sorted(self._by_video)

    def __len__(self) -> int:
        return sum(len(v) for v in self._by_video.values())

    def records(
        self,
        durations: dict[str, float],
        exclude_workers: set[str] | None = None,
    ) -> list[AnnotationRecord]:
        """Materialize AnnotationRecords for videos with a known duration."""
        exclude = exclude_workers or set()
        out = []
        for video_id, anns in sorted(self._by_video.items()):
            if video_id not in durations:
                continue
            labels = [
                WorkerLabel(worker_id=a.worker_id, onset=a.onset, no_failure=a.no_failure)
                for a in anns
                if a.worker_id not in exclude
            ]
            out.append(AnnotationRecord(video_id=video_id, duration=durations[video_id], labels=labels))
        return out

    def compact(self) -> None:
        """Rewrite the log from the in-memory snapshot (drops torn lines)."""
        tmp = self.path.with_suffix(".tmp")
        with open(tmp, "w") as fh:
            for anns in self._by_video.values():
                for ann in anns:
                    fh.write(json.dumps(asdict(ann)) + "\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp, self.path)
