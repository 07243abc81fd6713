"""Scene-cut detection via edge change ratio, and scene filtering.

A frame's edge map is its Sobel gradient magnitude binarized at 10% of the
frame maximum. Between consecutive frames, the change ratio is

    rho = max(fraction of entering edge pixels, fraction of exiting edge pixels)

where "entering" means edge pixels of the current frame not covered by the
(dilated) previous edge map, and vice versa for "exiting". A cut is declared
where rho exceeds the threshold. No stabilization is applied.
"""

from __future__ import annotations

import cv2
import numpy as np

from .assets import ClipWindow, VideoAsset
from .decode import VideoReader


def edge_map(gray: np.ndarray, threshold_frac: float = 0.1) -> np.ndarray:
    """Binarized Sobel gradient magnitude; boolean (H, W)."""
    gx = cv2.Sobel(gray, cv2.CV_32F, 1, 0, ksize=3)
    gy = cv2.Sobel(gray, cv2.CV_32F, 0, 1, ksize=3)
    mag = np.hypot(gx, gy)
    peak = float(mag.max())
    if peak <= 0:
        return np.zeros(gray.shape, bool)
    return mag > threshold_frac * peak


def edge_change_ratio(prev_edges: np.ndarray, cur_edges: np.ndarray, dilate_radius: int = 1) -> float:
    """Max of entering/exiting edge-pixel fractions between two edge maps."""
    n_prev = int(prev_edges.sum())
    n_cur = int(cur_edges.sum())
    if n_prev == 0 and n_cur == 0:
        return 0.0
    kernel = np.ones((2 * dilate_radius + 1,) * 2, np.uint8)
    prev_dil = cv2.dilate(prev_edges.astype(np.uint8), kernel).astype(bool)
    cur_dil = cv2.dilate(cur_edges.astype(np.uint8), kernel).astype(bool)
    entering = float((cur_edges & ~prev_dil).sum()) / n_cur if n_cur else 1.0
    exiting = float((prev_edges & ~cur_dil).sum()) / n_prev if n_prev else 1.0
    return max(entering, exiting)


def detect_scene_boundaries(
    asset: VideoAsset,
    threshold: float = 0.7,
    downscale_width: int = 160,
    dilate_radius: int = 1,
) -> list[float]:
    """Cut times (seconds) where the edge change ratio exceeds `threshold`.

    A cut at time t means frame floor(t * fps) starts a new scene. Times are
    strictly increasing. Single-frame videos yield no cuts.
    """
    cuts: list[float] = []
    with VideoReader(asset.uri) as reader:
        n = reader.num_frames
        prev = None
        for k in range(n):
            frame = reader.read_at(k)
            if frame.shape[1] > downscale_width:
                scale = downscale_width / frame.shape[1]
                frame = cv2.resize(
                    frame,
                    (downscale_width, max(int(round(frame.shape[0] * scale)), 1)),
                    interpolation=cv2.INTER_AREA,
                )
            gray = cv2.cvtColor(frame, cv2.COLOR_RGB2GRAY).astype(np.float32) / 255.0
            edges = edge_map(gray)
            if prev is not None:
                rho = edge_change_ratio(prev, edges, dilate_radius)
                if rho > threshold:
                    cuts.append(k / asset.native_fps)
            prev = edges
    return cuts


def split_and_filter_scenes(
    asset: VideoAsset,
    cuts: list[float],
    min_len: float = 3.0,
    max_len: float = 30.0,
) -> list[ClipWindow]:
    """Partition the asset at cut points; keep scenes with length in [min_len, max_len].

    Scenes shorter than min_len are unlikely to be complete; scenes longer
    than max_len likely contain missed cuts. Both are dropped.
    """
    bounds = [0.0] + sorted(cuts) + [asset.duration]
    windows = []
    for a, b in zip(bounds[:-1], bounds[1:]):
        if b - a <= 0:
            continue
        if min_len <= b - a <= max_len:
            windows.append(ClipWindow(asset.id, a, b))
    return windows
