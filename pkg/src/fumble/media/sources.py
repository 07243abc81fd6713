"""Clip sources: a uniform way to draw fixed-length clips from a video.

FileSource decodes from disk per draw; ArraySource draws from an in-memory
frame block, which training loops use to amortize decode cost across many
draws from the same video.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .assets import ClipTensor, CropRect, VideoAsset
from .decode import clip_from_frames, decode_all, sample_clip


@dataclass
class FileSource:
    asset: VideoAsset
    crop: CropRect | None = None
    size: int = 112

    @property
    def id(self) -> str:
        return self.asset.id

    @property
    def duration(self) -> float:
        return self.asset.duration

    def clip(self, center: float, rate: float, T: int = 16) -> ClipTensor:
        return sample_clip(self.asset, center, rate, T=T, crop=self.crop, size=self.size)

    def to_array_source(self) -> "ArraySource":
        frames = decode_all(self.asset)
        if self.crop is not None:
            frames = frames[:, self.crop.top : self.crop.bottom, self.crop.left : self.crop.right]
        return ArraySource(frames=frames, fps=self.asset.native_fps, id=self.asset.id, size=self.size)


@dataclass
class ArraySource:
    frames: np.ndarray  # (N, H, W, 3) uint8
    fps: float
    id: str
    size: int = 112

    @property
    def duration(self) -> float:
        return self.frames.shape[0] / self.fps

    def clip(self, center: float, rate: float, T: int = 16) -> ClipTensor:
        return clip_from_frames(self.frames, self.fps, self.id, center, rate, T=T, size=self.size)

    def to_array_source(self) -> "ArraySource":
        return self


ClipSource = FileSource | ArraySource
