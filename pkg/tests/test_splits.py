import pytest

from fumble.data.splits import DEFAULT_RATIOS, Split, apportion, make_splits, read_splits, write_splits
from fumble.errors import ConfigError


def test_hundred_ids_paper_proportions():
    ids = [f"v{i}" for i in range(100)]
    assignment = make_splits(ids, seed=0)
    counts = {split: 0 for split in Split}
    for split in assignment.values():
        counts[split] += 1
    assert counts[Split.UNLABELED_PRETRAIN] == 31
    assert counts[Split.LABELED_TRAIN] == 36
    assert counts[Split.TEST] == 33


def test_full_scale_counts_exact():
    assert apportion(20338, DEFAULT_RATIOS) == (6231, 7368, 6739)


def test_same_seed_same_assignment():
    ids = [f"v{i}" for i in range(57)]
    assert make_splits(ids, seed=7) == make_splits(ids, seed=7)
    assert make_splits(ids, seed=7) != make_splits(ids, seed=8)


def test_partition_every_id_once():
    ids = [f"v{i}" for i in range(513)]
    assignment = make_splits(ids, seed=3)
    assert sorted(assignment) == sorted(ids)


def test_order_invariance():
    ids = [f"v{i}" for i in range(40)]
    assert make_splits(ids, seed=1) == make_splits(list(reversed(ids)), seed=1)


def test_bad_ratios_rejected():
    with pytest.raises(ConfigError):
        make_splits(["a", "b"], seed=0, ratios=(0.5, 0.2, 0.2))


def test_duplicate_ids_rejected():
    with pytest.raises(ConfigError):
        make_splits(["a", "a", "b"], seed=0)


def test_roundtrip(tmp_path):
    ids = [f"v{i}" for i in range(20)]
    assignment = make_splits(ids, seed=0)
    path = tmp_path / "splits.json"
    write_splits(assignment, path)
    assert read_splits(path) == assignment
