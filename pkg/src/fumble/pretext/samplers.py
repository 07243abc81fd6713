"""Clip samplers for the three self-supervised objectives."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from fumble.media.assets import ClipTensor
from fumble.media.sources import ClipSource

# The discrete rate set for the speed task; labels index into it.
SPEED_RATES = (4.0, 8.0, 16.0, 30.0)

# Lexicographic enumeration of S3; a permutation's label is its index here.
PERMUTATIONS_3 = tuple(itertools.permutations(range(3)))


def permutation_index(perm: tuple[int, int, int]) -> int:
    return PERMUTATIONS_3.index(tuple(perm))


def permutation_from_index(label: int) -> tuple[int, int, int]:
    return PERMUTATIONS_3[label]


@dataclass
class SpeedSample:
    clip: ClipTensor
    label: int  # index into SPEED_RATES; clip.rate == SPEED_RATES[label]


@dataclass
class ContextTriplet:
    past: ClipTensor
    present: ClipTensor
    future: ClipTensor
    offset: float  # seconds between consecutive clip centers


@dataclass
class SortSample:
    clips: tuple[ClipTensor, ClipTensor, ClipTensor]  # shuffled order
    permutation_label: int  # index of the applied permutation in PERMUTATIONS_3


def _speed_eligible(sources: list[ClipSource], T: int) -> list[ClipSource]:
    span = T / min(SPEED_RATES)
    return [s for s in sources if s.duration >= span]


def sample_speed_batch(
    sources: list[ClipSource],
    batch_size: int,
    rng: np.random.Generator,
    T: int = 16,
) -> list[SpeedSample]:
    """Rate drawn uniformly from SPEED_RATES, center uniform over the valid range.

    Sources shorter than the slowest rate's span (T / 4 fps) are excluded.
    Each sample draws an independent center, so clips of different rates share
    no alignment.
    """
    eligible = _speed_eligible(sources, T)
    if not eligible:
        raise ValueError(f"no source long enough for the slowest rate ({T / min(SPEED_RATES)}s)")
    samples = []
    for _ in range(batch_size):
        src = eligible[int(rng.integers(len(eligible)))]
        label = int(rng.integers(len(SPEED_RATES)))
        rate = SPEED_RATES[label]
        half = T / (2.0 * rate)
        center = float(rng.uniform(half, src.duration - half))
        samples.append(SpeedSample(clip=src.clip(center, rate, T), label=label))
    return samples


def sample_context_batch(
    sources: list[ClipSource],
    batch_size: int,
    rng: np.random.Generator,
    offset: float = 1.0,
    rate: float = 16.0,
    T: int = 16,
) -> list[ContextTriplet]:
    """Triplets of clips centered at t - offset, t, t + offset."""
    span = T / rate
    need = 2 * offset + span
    eligible = [s for s in sources if s.duration >= need]
    if not eligible:
        raise ValueError(f"no source long enough for a context triplet ({need}s)")
    samples = []
    for _ in range(batch_size):
        src = eligible[int(rng.integers(len(eligible)))]
        lo = offset + span / 2.0
        t = float(rng.uniform(lo, src.duration - lo))
        samples.append(
            ContextTriplet(
                past=src.clip(t - offset, rate, T),
                present=src.clip(t, rate, T),
                future=src.clip(t + offset, rate, T),
                offset=offset,
            )
        )
    return samples


def sample_sort_batch(
    sources: list[ClipSource],
    batch_size: int,
    rng: np.random.Generator,
    rate: float = 16.0,
    T: int = 16,
    gap: float = 0.5,
) -> list[SortSample]:
    """Three clips in temporal order with `gap` between them, then shuffled.

    With 1 s clips and 0.5 s gaps, consecutive centers are 1.5 s apart and a
    source must offer span + 2*(span + gap) seconds of footage.
    """
    span = T / rate
    step = span + gap
    need = span + 2 * step
    eligible = [s for s in sources if s.duration >= need]
    if not eligible:
        raise ValueError(f"no source long enough for a sort triplet ({need}s)")
    samples = []
    for _ in range(batch_size):
        src = eligible[int(rng.integers(len(eligible)))]
        c0 = float(rng.uniform(span / 2.0, src.duration - 2 * step - span / 2.0))
        ordered = [src.clip(c0 + i * step, rate, T) for i in range(3)]
        label = int(rng.integers(len(PERMUTATIONS_3)))
        perm = PERMUTATIONS_3[label]
        samples.append(
            SortSample(clips=tuple(ordered[p] for p in perm), permutation_label=label)
        )
    return samples
