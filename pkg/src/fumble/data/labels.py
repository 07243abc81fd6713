"""The three-way label space and window labeling rules."""

from __future__ import annotations

from enum import Enum

from fumble.media.assets import ClipWindow

from .annotations import OnsetSet


class ClassLabel(Enum):
    INTENTIONAL = 0
    TRANSITIONAL = 1
    UNINTENTIONAL = 2


def derive_window_label(window: ClipWindow, onsets: OnsetSet) -> ClassLabel:
    """Label a window by where it sits relative to the median failure onset.

    Transitional iff the onset lies inside [start, end]; Intentional iff the
    window ends before it; Unintentional iff it starts after it. Exactly one
    case applies.
    """
    t = onsets.median_onset
    if window.start <= t <= window.end:
        return ClassLabel.TRANSITIONAL
    if window.end < t:
        return ClassLabel.INTENTIONAL
    return ClassLabel.UNINTENTIONAL


def shift_for_anticipation(
    window: ClipWindow,
    onsets: OnsetSet,
    duration: float,
    horizon: float = 1.5,
) -> ClassLabel | None:
    """Label of the window translated `horizon` seconds into the future.

    Returns None when the shifted window falls outside the video (the sample
    is excluded from anticipation training/evaluation).
    """
    if window.end + horizon > duration + 1e-9:
        return None
    shifted = ClipWindow(window.asset_id, window.start + horizon, window.end + horizon)
    return derive_window_label(shifted, onsets)
