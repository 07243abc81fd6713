import numpy as np
import pytest

from fumble.data.annotations import OnsetSet
from fumble.data.labels import ClassLabel
from fumble.evaluation.metrics import (
    WindowPrediction,
    anticipation_accuracy,
    breakdown_report,
    classification_accuracy,
    human_consistency,
    localization_accuracy,
    localize_onset,
    match_onset,
    nearest_neighbors,
    slide_windows,
)
from fumble.media.assets import ClipWindow


def onset_set(*ts):
    return OnsetSet(onsets=tuple(sorted(ts)), median_onset=float(np.median(ts)))


def wp(center, transitional_score, video="v", length=1.0):
    rest = (1.0 - transitional_score) / 2.0
    return WindowPrediction(
        window=ClipWindow(video, center - length / 2, center + length / 2),
        scores=np.array([rest, transitional_score, rest]),
    )


# --- sliding windows ----------------------------------------------------------

def test_slide_window_counts():
    assert len(slide_windows("v", 2.0)) == 5
    assert len(slide_windows("v", 1.0)) == 1
    assert slide_windows("v", 0.5) == []


def test_slide_window_formula_fuzz():
    rng = np.random.default_rng(0)
    for _ in range(500):
        d = float(rng.uniform(1.0, 40.0))
        windows = slide_windows("v", d)
        assert len(windows) == int(np.floor((d - 1.0) / 0.25 + 1e-9)) + 1
        assert all(w.end <= d + 1e-9 for w in windows)
        assert windows[0].start == 0.0


# --- classification ----------------------------------------------------------

def test_all_correct_identity_confusion():
    labels = [ClassLabel.INTENTIONAL, ClassLabel.TRANSITIONAL, ClassLabel.UNINTENTIONAL] * 3
    acc, confusion = classification_accuracy(labels, labels)
    assert acc == 100.0
    np.testing.assert_allclose(confusion, 100.0 * np.eye(3))


def test_uniform_random_near_chance():
    rng = np.random.default_rng(1)
    labels = rng.integers(0, 3, size=30_000)
    preds = rng.integers(0, 3, size=30_000)
    acc, _ = classification_accuracy(preds, labels)
    assert abs(acc - 100 / 3) < 1.0


def test_hand_built_confusion():
    # 9 samples: true labels 3 of each; predictions hand-picked
    true = [0, 0, 0, 1, 1, 1, 2, 2, 2]
    pred = [0, 1, 0, 1, 1, 2, 2, 2, 0]
    acc, confusion = classification_accuracy(pred, true)
    assert acc == pytest.approx(100 * 6 / 9)
    expected = np.array(
        [
            [200 / 3, 100 / 3, 0.0],
            [0.0, 200 / 3, 100 / 3],
            [100 / 3, 0.0, 200 / 3],
        ]
    )
    np.testing.assert_allclose(confusion, expected)
    # accuracy equals the label-frequency-weighted trace
    freqs = np.bincount(true, minlength=3) / len(true)
    assert acc == pytest.approx(float(np.sum(freqs * np.diag(confusion))))


def test_length_mismatch_rejected():
    with pytest.raises(ValueError):
        classification_accuracy([0, 1], [0, 1, 2])


# --- localization -------------------------------------------------------------

def test_localize_onset_argmax_center():
    preds = [wp(0.5, 0.1), wp(0.75, 0.9), wp(1.0, 0.2)]
    assert localize_onset(preds) == pytest.approx(0.75)


def test_localize_onset_tie_earliest():
    preds = [wp(0.5, 0.4), wp(0.75, 0.9), wp(1.0, 0.9)]
    assert localize_onset(preds) == pytest.approx(0.75)


def test_localize_onset_monotone_scores():
    preds = [wp(c, s) for c, s in zip([0.5, 0.75, 1.0, 1.25], [0.1, 0.2, 0.3, 0.4])]
    assert localize_onset(preds) == pytest.approx(1.25)


def test_match_thresholds():
    gt = onset_set(2.0, 5.0)
    assert match_onset(2.7, gt, 1.0)
    assert not match_onset(2.7, gt, 0.25)
    assert match_onset(5.0, gt, 1.0) and match_onset(5.0, gt, 0.25)


def test_localization_accuracy_counts_missing_prediction_as_failure():
    onsets = {"a": onset_set(2.0), "b": onset_set(3.0)}
    preds = {"a": 2.1, "b": None}
    assert localization_accuracy(preds, onsets, 1.0) == pytest.approx(50.0)


def test_localization_skips_missing_onset_set():
    onsets = {"a": onset_set(2.0)}
    preds = {"a": 2.1, "zzz": 5.0}
    with pytest.warns(UserWarning):
        acc = localization_accuracy(preds, onsets, 1.0)
    assert acc == pytest.approx(100.0)


def _brute_force_accuracy(preds, onset_sets, threshold):
    """Independent naive matcher."""
    total = correct = 0
    for vid, p in preds.items():
        if vid not in onset_sets:
            continue
        total += 1
        if p is None:
            continue
        if any(abs(p - t) <= threshold + 1e-9 for t in onset_sets[vid].onsets):
            correct += 1
    return 100.0 * correct / total if total else 0.0


def test_matcher_against_brute_force_fuzz():
    rng = np.random.default_rng(2)
    for trial in range(1000):
        n = int(rng.integers(1, 6))
        onsets = {}
        preds = {}
        for i in range(n):
            vid = f"v{i}"
            ts = sorted(rng.uniform(0, 20, size=int(rng.integers(1, 4))))
            onsets[vid] = OnsetSet(onsets=tuple(ts), median_onset=float(np.median(ts)))
            preds[vid] = None if rng.random() < 0.1 else float(rng.uniform(0, 20))
        thr = float(rng.choice([0.25, 1.0, rng.uniform(0.05, 3.0)]))
        assert localization_accuracy(preds, onsets, thr) == _brute_force_accuracy(preds, onsets, thr)
        # threshold monotonicity on the same instance
        assert localization_accuracy(preds, onsets, 1.0) >= localization_accuracy(preds, onsets, 0.25)


# --- anticipation -------------------------------------------------------------

def test_anticipation_perfect_oracle():
    labels = [0, 1, 2, 1, 0, 2]
    result = anticipation_accuracy(labels, labels)
    assert result["accuracy"] == 100.0
    assert result["chance_uniform"] == pytest.approx(100 / 3)


def test_anticipation_uniform_random_balanced():
    rng = np.random.default_rng(3)
    labels = np.repeat(np.arange(3), 5000)
    preds = rng.integers(0, 3, size=labels.size)
    result = anticipation_accuracy(preds, labels)
    assert abs(result["accuracy"] - 100 / 3) < 1.5
    assert result["chance_prior"] == pytest.approx(100 / 3)
    assert result["majority"] == pytest.approx(100 / 3)


def test_anticipation_chance_prior_reflects_skew():
    labels = np.array([2] * 80 + [0] * 10 + [1] * 10)
    result = anticipation_accuracy(labels, labels)
    assert result["chance_prior"] == pytest.approx(100 * (0.8**2 + 0.01 + 0.01))
    assert result["majority"] == pytest.approx(80.0)


# --- human consistency ---------------------------------------------------------

def test_human_consistency_exact_match():
    consensus = {"v": onset_set(2.0, 6.0)}
    scores = human_consistency({"v": 2.0}, consensus)
    assert scores[1.0] == 100.0 and scores[0.25] == 100.0


def test_human_consistency_partial():
    consensus = {"v": onset_set(2.0)}
    scores = human_consistency({"v": 2.6}, consensus)
    assert scores[1.0] == 100.0 and scores[0.25] == 0.0


# --- breakdown and neighbors ---------------------------------------------------

def test_breakdown_single_category_equals_overall():
    metric = {"a": 1.0, "b": 0.0, "c": 1.0}
    out = breakdown_report(metric, {"a": "x", "b": "x", "c": "x"})
    assert out == {"x": {"mean": pytest.approx(2 / 3), "n": 3}}


def test_breakdown_empty_map_pools_other():
    out = breakdown_report({"a": 1.0, "b": 0.0}, None)
    assert set(out) == {"other"}
    assert out["other"]["n"] == 2


def test_breakdown_two_categories_hand_case():
    metric = {"a": 1.0, "b": 0.0, "c": 1.0, "d": 1.0}
    out = breakdown_report(metric, {"a": "env", "b": "env", "c": "multi"})
    assert out["env"] == {"mean": pytest.approx(0.5), "n": 2}
    assert out["multi"] == {"mean": pytest.approx(1.0), "n": 1}
    assert out["other"] == {"mean": pytest.approx(1.0), "n": 1}


def test_nearest_neighbors_ranked_by_cosine():
    bank = np.array([[1.0, 0.0], [0.7, 0.7], [0.0, 1.0], [-1.0, 0.0]])
    out = nearest_neighbors(np.array([1.0, 0.05]), bank, ["a", "b", "c", "d"], k=3)
    assert [vid for vid, _ in out] == ["a", "b", "c"]
    assert out[0][1] >= out[1][1] >= out[2][1]
