"""Letterbox border detection.

Portrait footage collated into a landscape frame leaves constant near-black
bands at the borders. A band is cropped when (a) its rows/columns stay
near-black across at least `band_frac` of the sampled frames and (b) its inner
boundary registers as a strong axis-aligned line in a Hough-style accumulator
over the temporal-mean edge map (row/column vote sums).
"""

from __future__ import annotations

import numpy as np

from .assets import CropRect
from .scenes import edge_map

# Mean luminance below this counts as "near black" (values in [0, 1]).
BLACK_LUMINANCE = 0.04


def _band_extent(black_frac: np.ndarray, band_frac: float) -> int:
    """Length of the maximal prefix whose entries are black in >= band_frac of frames."""
    n = 0
    for v in black_frac:
        if v >= band_frac:
            n += 1
        else:
            break
    return n


def _line_strength(votes: np.ndarray, position: int, tolerance: int = 2) -> float:
    """Peak accumulator vote within `tolerance` of `position`, relative to the global max."""
    lo = max(position - tolerance, 0)
    hi = min(position + tolerance + 1, len(votes))
    peak = float(votes.max())
    if peak <= 0:
        return 0.0
    return float(votes[lo:hi].max()) / peak


def detect_letterbox(
    frames: np.ndarray,
    band_frac: float = 0.95,
    min_line_strength: float = 0.35,
    max_sampled: int = 16,
) -> CropRect:
    """Maximal interior rectangle excluding constant near-black border bands.

    `frames` is (N, H, W, 3) with values in [0, 1]. Returns the full-frame
    rect when no borders are found (including all-black input).
    """
    if frames.ndim != 4 or frames.shape[0] < 1:
        raise ValueError(f"need (N, H, W, 3) frames, got {frames.shape}")
    n, h, w = frames.shape[:3]
    if n > max_sampled:
        frames = frames[np.linspace(0, n - 1, max_sampled).astype(int)]

    lum = frames.mean(axis=3)
    col_black = (lum.mean(axis=1) < BLACK_LUMINANCE).mean(axis=0)  # (W,)
    row_black = (lum.mean(axis=2) < BLACK_LUMINANCE).mean(axis=0)  # (H,)

    left = _band_extent(col_black, band_frac)
    right = w - _band_extent(col_black[::-1], band_frac)
    top = _band_extent(row_black, band_frac)
    bottom = h - _band_extent(row_black[::-1], band_frac)

    # Degenerate interior (e.g. an all-black video): nothing to crop.
    if left >= right or top >= bottom:
        return CropRect.full_frame(w, h)

    # Axis-aligned Hough accumulator: column/row sums of the temporal-mean
    # edge map vote for vertical/horizontal lines.
    edges = edge_map(lum.mean(axis=0).astype(np.float32))
    col_votes = edges.sum(axis=0).astype(np.float64)
    row_votes = edges.sum(axis=1).astype(np.float64)

    if left > 0 and _line_strength(col_votes, left) < min_line_strength:
        left = 0
    if right < w and _line_strength(col_votes, right) < min_line_strength:
        right = w
    if top > 0 and _line_strength(row_votes, top) < min_line_strength:
        top = 0
    if bottom < h and _line_strength(row_votes, bottom) < min_line_strength:
        bottom = h

    return CropRect(left, top, right, bottom)
