"""Deterministic benchmark splits: unlabeled pretrain / labeled train / test."""

from __future__ import annotations

import json
from enum import Enum
from pathlib import Path

import numpy as np

from fumble.errors import ConfigError


class Split(str, Enum):
    UNLABELED_PRETRAIN = "unlabeled_pretrain"
    LABELED_TRAIN = "labeled_train"
    TEST = "test"


# Default ratios mirror the benchmark convention of a 20,338-video corpus
# split 6,231 / 7,368 / 6,739; proportional for other corpus sizes.
DEFAULT_RATIOS = (6231 / 20338, 7368 / 20338, 6739 / 20338)

_ORDER = (Split.UNLABELED_PRETRAIN, Split.LABELED_TRAIN, Split.TEST)


def apportion(n: int, ratios: tuple[float, float, float]) -> tuple[int, int, int]:
    """Largest-remainder apportionment of n items into three integer counts."""
    quotas = [n * r for r in ratios]
    counts = [int(q) for q in quotas]
    remainders = [q - c for q, c in zip(quotas, counts)]
    for _ in range(n - sum(counts)):
        i = int(np.argmax(remainders))
        counts[i] += 1
        remainders[i] = -1.0
    return tuple(counts)


def make_splits(
    video_ids: list[str],
    seed: int,
    ratios: tuple[float, float, float] = DEFAULT_RATIOS,
) -> dict[str, Split]:
    """Seeded partition of ids into the three splits; same seed, same result."""
    if len(set(video_ids)) != len(video_ids):
        raise ConfigError("video ids must be unique")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"split ratios must sum to 1, got {sum(ratios)}")
    ids = sorted(video_ids)
    rng = np.random.default_rng(seed)
    rng.shuffle(ids)
    counts = apportion(len(ids), ratios)
    assignment: dict[str, Split] = {}
    pos = 0
    for split, count in zip(_ORDER, counts):
        for vid in ids[pos : pos + count]:
            assignment[vid] = split
        pos += count
    return assignment


def write_splits(assignment: dict[str, Split], path: Path | str) -> None:
    with open(path, "w") as fh:
        json.dump({vid: split.value for vid, split in sorted(assignment.items())}, fh, indent=1)


def read_splits(path: Path | str) -> dict[str, Split]:
    with open(path) as fh:
        raw = json.load(fh)
    return {vid: Split(value) for vid, value in raw.items()}
