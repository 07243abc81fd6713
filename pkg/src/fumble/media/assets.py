"""Source-video metadata, time windows, clip tensors, and the clip manifest."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np

from fumble.errors import BoundsError, DecodeError


@dataclass(frozen=True)
class VideoAsset:
    """A decodable source video."""

    id: str
    uri: Path
    duration: float
    native_fps: float
    width: int
    height: int

    def __post_init__(self):
        if self.duration <= 0:
            raise ValueError(f"duration must be positive, got {self.duration}")
        if self.native_fps <= 0:
            raise ValueError(f"native_fps must be positive, got {self.native_fps}")
        if self.width < 16 or self.height < 16:
            raise ValueError(f"frame size too small: {self.width}x{self.height}")


@dataclass(frozen=True)
class ClipWindow:
    """A time interval [start, end] inside one asset, in seconds."""

    asset_id: str
    start: float
    end: float

    def __post_init__(self):
        if not 0 <= self.start < self.end:
            raise ValueError(f"bad window [{self.start}, {self.end}]")

    @property
    def length(self) -> float:
        return self.end - self.start

    @property
    def center(self) -> float:
        return 0.5 * (self.start + self.end)


@dataclass(frozen=True)
class CropRect:
    """Pixel rectangle kept after border removal (right/bottom exclusive)."""

    left: int
    top: int
    right: int
    bottom: int

    def __post_init__(self):
        if not (0 <= self.left < self.right and 0 <= self.top < self.bottom):
            raise ValueError(f"degenerate crop {self}")

    @classmethod
    def full_frame(cls, width: int, height: int) -> "CropRect":
        return cls(0, 0, width, height)

    def is_full_frame(self, width: int, height: int) -> bool:
        return (self.left, self.top, self.right, self.bottom) == (0, 0, width, height)

    def apply(self, frame: np.ndarray) -> np.ndarray:
        return frame[self.top : self.bottom, self.left : self.right]


@dataclass
class ClipTensor:
    """A T x H x W x 3 block of frames in [0, 1] tagged with its sampling rate."""

    frames: np.ndarray
    rate: float
    origin: ClipWindow

    def __post_init__(self):
        if self.frames.ndim != 4 or self.frames.shape[-1] != 3:
            raise ValueError(f"frames must be TxHxWx3, got {self.frames.shape}")

    @property
    def num_frames(self) -> int:
        return self.frames.shape[0]

    @property
    def span(self) -> float:
        """Temporal footprint in seconds: frame count times the frame period."""
        return self.frames.shape[0] / self.rate


def probe_asset(uri: Path | str, asset_id: str | None = None) -> VideoAsset:
    """Read container metadata and build a VideoAsset."""
    uri = Path(uri)
    cap = cv2.VideoCapture(str(uri))
    if not cap.isOpened():
        raise DecodeError(f"cannot open {uri}")
    try:
        fps = cap.get(cv2.CAP_PROP_FPS)
        frames = cap.get(cv2.CAP_PROP_FRAME_COUNT)
        width = int(cap.get(cv2.CAP_PROP_FRAME_WIDTH))
        height = int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT))
    finally:
        cap.release()
    if fps <= 0 or frames <= 0:
        raise DecodeError(f"no decodable video stream in {uri}")
    return VideoAsset(
        id=asset_id or uri.stem,
        uri=uri,
        duration=frames / fps,
        native_fps=fps,
        width=width,
        height=height,
    )


@dataclass
class ManifestEntry:
    """One clip-manifest record: a window plus its crop, referencing the source file."""

    asset_id: str
    uri: str
    start: float
    end: float
    crop: tuple[int, int, int, int]

    def window(self) -> ClipWindow:
        return ClipWindow(self.asset_id, self.start, self.end)

    def crop_rect(self) -> CropRect:
        return CropRect(*self.crop)


def write_manifest(entries: list[ManifestEntry], path: Path | str) -> None:
    """Write the clip manifest as JSON-lines, one record per window."""
    with open(path, "w") as fh:
        for e in entries:
            fh.write(
                json.dumps(
                    {
                        "asset_id": e.asset_id,
                        "uri": e.uri,
                        "start": e.start,
                        "end": e.end,
                        "crop": list(e.crop),
                    }
                )
                + "\n"
            )


def read_manifest(path: Path | str) -> list[ManifestEntry]:
    entries = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            rec = json.loads(line)
            entries.append(
                ManifestEntry(
                    asset_id=rec["asset_id"],
                    uri=rec["uri"],
                    start=float(rec["start"]),
                    end=float(rec["end"]),
                    crop=tuple(int(v) for v in rec["crop"]),
                )
            )
    return entries


def check_window(asset: VideoAsset, window: ClipWindow) -> None:
    """Raise BoundsError unless the window lies inside the asset."""
    eps = 1e-6
    if window.start < -eps or window.end > asset.duration + eps:
        raise BoundsError(
            f"window [{window.start:.3f}, {window.end:.3f}] outside asset "
            f"{asset.id} of duration {asset.duration:.3f}"
        )
