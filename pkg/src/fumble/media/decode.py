"""Frame decoding and fixed-length clip sampling."""

from __future__ import annotations

import math
from pathlib import Path

import cv2
import numpy as np

from fumble.errors import BoundsError, DecodeError

from .assets import ClipTensor, ClipWindow, CropRect, VideoAsset, check_window

# Seeking backwards or far ahead re-positions the decoder; short gaps are
# cheaper to skip with grab().
_SEEK_GAP = 150


class VideoReader:
    """Index-addressed frame access over a cv2 capture.

    Reads are deterministic: frame k is always the k-th frame of the stream.
    Not safe to share across threads.
    """

    def __init__(self, uri: Path | str):
        self._cap = cv2.VideoCapture(str(uri))
        if not self._cap.isOpened():
            raise DecodeError(f"cannot open {uri}")
        self._next = 0
        self.num_frames = int(self._cap.get(cv2.CAP_PROP_FRAME_COUNT))

    def close(self) -> None:
        self._cap.release()

    def __enter__(self) -> "VideoReader":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    def read_at(self, index: int) -> np.ndarray:
        """Return frame `index` as an RGB uint8 array."""
        index = min(max(index, 0), self.num_frames - 1)
        if index < self._next or index > self._next + _SEEK_GAP:
            self._cap.set(cv2.CAP_PROP_POS_FRAMES, index)
            self._next = index
        while self._next < index:
            if not self._cap.grab():
                raise DecodeError(f"decoder stalled at frame {self._next}")
            self._next += 1
        ok, frame = self._cap.read()
        if not ok:
            raise DecodeError(f"cannot decode frame {index}")
        self._next = index + 1
        return cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)


def _frame_indices(asset: VideoAsset, window: ClipWindow, rate: float) -> np.ndarray:
    """Native frame indices for uniform sampling of the window at `rate`.

    Samples at the centers of the `rate`-grid periods; beyond the native fps
    this duplicates the nearest native frame.
    """
    n = math.ceil((window.end - window.start) * rate - 1e-9)
    times = window.start + (np.arange(n) + 0.5) / rate
    idx = np.floor(times * asset.native_fps).astype(int)
    return np.clip(idx, 0, max(int(round(asset.duration * asset.native_fps)) - 1, 0))


def decode_frames(asset: VideoAsset, window: ClipWindow, rate: float) -> np.ndarray:
    """Decode ceil(len(window) * rate) frames uniformly spanning the window.

    Returns an (N, H, W, 3) float32 array with values in [0, 1].
    """
    check_window(asset, window)
    idx = _frame_indices(asset, window, rate)
    with VideoReader(asset.uri) as reader:
        frames = [reader.read_at(int(k)) for k in idx]
    return np.stack(frames).astype(np.float32) / 255.0


def decode_all(asset: VideoAsset, size: int | None = None) -> np.ndarray:
    """Decode every frame sequentially; returns (N, H, W, 3) uint8 RGB.

    Used by training loops to amortize decode cost across many clip draws.
    """
    cap = cv2.VideoCapture(str(asset.uri))
    if not cap.isOpened():
        raise DecodeError(f"cannot open {asset.uri}")
    frames = []
    try:
        while True:
            ok, frame = cap.read()
            if not ok:
                break
            frame = cv2.cvtColor(frame, cv2.COLOR_BGR2RGB)
            if size is not None and frame.shape[:2] != (size, size):
                frame = resize_center_crop(frame, size)
            frames.append(frame)
    finally:
        cap.release()
    if not frames:
        raise DecodeError(f"no frames decoded from {asset.uri}")
    return np.stack(frames)


def resize_center_crop(frame: np.ndarray, size: int) -> np.ndarray:
    """Scale the short side to `size`, then center-crop to size x size."""
    h, w = frame.shape[:2]
    scale = size / min(h, w)
    nh, nw = max(int(round(h * scale)), size), max(int(round(w * scale)), size)
    frame = cv2.resize(frame, (nw, nh), interpolation=cv2.INTER_AREA)
    top = (nh - size) // 2
    left = (nw - size) // 2
    return frame[top : top + size, left : left + size]


def sample_clip(
    asset: VideoAsset,
    center: float,
    rate: float,
    T: int = 16,
    crop: CropRect | None = None,
    size: int = 112,
) -> ClipTensor:
    """Sample T frames spanning T/rate seconds around `center`.

    Frames are cropped, short-side scaled, and center-cropped to size x size.
    Raises BoundsError when the span does not fit inside the asset.
    """
    half = T / (2.0 * rate)
    if center - half < -1e-9 or center + half > asset.duration + 1e-9:
        raise BoundsError(
            f"clip at {center:.3f}s needs [{center - half:.3f}, {center + half:.3f}] "
            f"but asset {asset.id} has duration {asset.duration:.3f}"
        )
    window = ClipWindow(asset.id, max(center - half, 0.0), min(center + half, asset.duration))
    idx = _frame_indices(asset, window, rate)[:T]
    with VideoReader(asset.uri) as reader:
        frames = []
        for k in idx:
            frame = reader.read_at(int(k))
            if crop is not None:
                frame = crop.apply(frame)
            frames.append(resize_center_crop(frame, size))
    block = np.stack(frames).astype(np.float32) / 255.0
    return ClipTensor(frames=block, rate=rate, origin=window)


def clip_from_frames(
    frames: np.ndarray,
    fps: float,
    asset_id: str,
    center: float,
    rate: float,
    T: int = 16,
    size: int = 112,
) -> ClipTensor:
    """Like sample_clip but over an already-decoded (N, H, W, 3) uint8 array."""
    half = T / (2.0 * rate)
    duration = frames.shape[0] / fps
    if center - half < -1e-9 or center + half > duration + 1e-9:
        raise BoundsError(f"clip at {center:.3f}s does not fit in {duration:.3f}s of frames")
    window = ClipWindow(asset_id, max(center - half, 0.0), min(center + half, duration))
    n = T
    times = window.start + (np.arange(n) + 0.5) / rate
    idx = np.clip(np.floor(times * fps).astype(int), 0, frames.shape[0] - 1)
    picked = frames[idx]
    if picked.shape[1] != size or picked.shape[2] != size:
        picked = np.stack([resize_center_crop(f, size) for f in picked])
    return ClipTensor(frames=picked.astype(np.float32) / 255.0, rate=rate, origin=window)
