"""HTTP annotation service (versioned under /v1).

Serves the video list and byte-range clip streams, hands each worker their
next unlabeled assignment, accepts onset labels, and reports agreement/QC
stats. The store is single-writer; every acknowledged POST has already been
fsync'd.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from fumble.data.annotations import agreement_stats, apply_quality_control
from fumble.media.assets import probe_asset

from .gold import assign_gold_checks
from .store import AnnotationStore, DuplicateAnnotation

DEFAULT_LABELS_PER_VIDEO = 3
VIDEO_SUFFIXES = (".avi", ".mp4", ".mkv", ".mov", ".webm")


@dataclass(frozen=True)
class ServiceVideo:
    id: str
    uri: Path
    duration: float
    fps: float


@dataclass
class ServiceConfig:
    videos: dict[str, ServiceVideo]
    store_path: Path
    labels_per_video: int = DEFAULT_LABELS_PER_VIDEO
    test_ids: set[str] = field(default_factory=set)  # these take one extra held-out label
    gold: dict[str, float] | None = None
    static_dir: Path | None = None

    @classmethod
    def from_media_dir(
        cls,
        media_dir: Path | str,
        store_path: Path | str,
        test_ids: set[str] | None = None,
        gold: dict[str, float] | None = None,
        static_dir: Path | str | None = None,
    ) -> "ServiceConfig":
        media_dir = Path(media_dir)
        videos = {}
        truth_path = media_dir / "ground_truth.json"
        if truth_path.exists():
            truth = json.loads(truth_path.read_text())
            for vid, info in truth.items():
                videos[vid] = ServiceVideo(
                    id=vid,
                    uri=media_dir / info["uri"],
                    duration=float(info["duration"]),
                    fps=float(info["fps"]),
                )
        else:
            for path in sorted(media_dir.iterdir()):
                if path.suffix.lower() in VIDEO_SUFFIXES:
                    asset = probe_asset(path)
                    videos[asset.id] = ServiceVideo(
                        id=asset.id, uri=path, duration=asset.duration, fps=asset.native_fps
                    )
        return cls(
            videos=videos,
            store_path=Path(store_path),
            test_ids=test_ids or set(),
            gold=gold,
            static_dir=Path(static_dir) if static_dir else None,
        )

    def max_labels(self, video_id: str) -> int:
        return self.labels_per_video + (1 if video_id in self.test_ids else 0)


class AnnotationIn(BaseModel):
    video_id: str
    worker_id: str
    onset: float | None = None
    no_failure: bool = False


def create_app(config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="fumble annotation service")
    store = AnnotationStore(config.store_path)
    app.state.store = store
    app.state.config = config
    durations = {vid: v.duration for vid, v in config.videos.items()}

    def video_payload(v: ServiceVideo) -> dict:
        return {
            "id": v.id,
            "duration": v.duration,
            "fps": v.fps,
            "n_labels": store.count(v.id),
            "stream_url": f"/v1/videos/{v.id}/stream",
        }

    def flagged_workers() -> set[str]:
        if not config.gold:
            return set()
        return assign_gold_checks(store, config.gold)

    @app.get("/v1/videos")
    def list_videos(page: int = 1, page_size: int = 50):
        ids = sorted(config.videos)
        lo = (page - 1) * page_size
        return {
            "videos": [video_payload(config.videos[v]) for v in ids[lo : lo + page_size]],
            "page": page,
            "page_size": page_size,
            "total": len(ids),
        }

    @app.get("/v1/videos/next-for/{worker_id}")
    def next_for(worker_id: str):
        for vid in sorted(config.videos):
            if store.has(vid, worker_id):
                continue
            if store.count(vid) >= config.max_labels(vid):
                continue
            return {"video": video_payload(config.videos[vid])}
        return {"video": None}

    @app.get("/v1/videos/{video_id}/stream")
    def stream(video_id: str, request: Request):
        video = config.videos.get(video_id)
        if video is None:
            raise HTTPException(404, f"unknown video {video_id}")
        data = video.uri.read_bytes()
        size = len(data)
        range_header = request.headers.get("range")
        headers = {"Accept-Ranges": "bytes", "Content-Type": "video/x-msvideo"}
        if range_header:
            try:
                spec = range_header.strip().lower().removeprefix("bytes=")
                start_s, _, end_s = spec.partition("-")
                start = int(start_s) if start_s else 0
                end = int(end_s) if end_s else size - 1
            except ValueError:
                raise HTTPException(416, f"bad range {range_header!r}")
            if start >= size or start > end:
                raise HTTPException(416, f"range {range_header!r} outside {size} bytes")
            end = min(end, size - 1)
            headers["Content-Range"] = f"bytes {start}-{end}/{size}"
            return Response(content=data[start : end + 1], status_code=206, headers=headers)
        return Response(content=data, status_code=200, headers=headers)

    @app.post("/v1/annotations", status_code=201)
    def post_annotation(body: AnnotationIn):
        video = config.videos.get(body.video_id)
        if video is None:
            raise HTTPException(404, f"unknown video {body.video_id}")
        if body.no_failure:
            if body.onset is not None:
                raise HTTPException(422, "no_failure submissions must not carry an onset")
        else:
            if body.onset is None:
                raise HTTPException(422, "either mark an onset or set no_failure")
            if not 0 <= body.onset <= video.duration:
                raise HTTPException(
                    422, f"onset {body.onset} outside [0, {video.duration:.3f}]"
                )
        if store.count(body.video_id) >= config.max_labels(body.video_id):
            raise HTTPException(409, f"{body.video_id} already has all its labels")
        try:
            ann = store.submit(body.video_id, body.worker_id, body.onset, body.no_failure)
        except DuplicateAnnotation as exc:
            raise HTTPException(409, str(exc))
        return {
            "video_id": ann.video_id,
            "worker_id": ann.worker_id,
            "onset": ann.onset,
            "no_failure": ann.no_failure,
            "timestamp": ann.timestamp,
        }

    @app.get("/v1/stats/agreement")
    def agreement():
        records = store.records(durations, exclude_workers=flagged_workers())
        stats = agreement_stats(records)
        return {
            "per_video": {
                vid: {"stdev": stats.per_video_stdev[vid], "stdev_frac": stats.per_video_stdev_frac[vid]}
                for vid in stats.per_video_stdev
            },
            "median_stdev": None if stats.n_videos == 0 else stats.median_stdev,
            "median_stdev_frac": None if stats.n_videos == 0 else stats.median_stdev_frac,
            "n_videos": stats.n_videos,
        }

    @app.get("/v1/qc")
    def qc():
        records = store.records(durations, exclude_workers=flagged_workers())
        kept, removed = apply_quality_control(records)
        return {
            "kept": [r.video_id for r in kept],
            "removed": [{"video_id": r.video_id, "reason": r.reason} for r in removed],
            "flagged_workers": sorted(flagged_workers()),
        }

    if config.static_dir is not None and config.static_dir.exists():
        app.mount("/", StaticFiles(directory=config.static_dir, html=True), name="ui")

    return app
