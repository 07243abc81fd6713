import numpy as np
import pytest

from fumble.media.assets import ClipWindow, probe_asset
from fumble.media.scenes import detect_scene_boundaries, edge_change_ratio, edge_map, split_and_filter_scenes

from conftest import textured_frames, write_video

FPS = 30.0
FRAME = 1.0 / FPS


def _concat_scenes(tmp_path, name, scene_lengths, seeds):
    """Hard-cut concatenation of textured scenes; returns (asset, cut times)."""
    parts = []
    for nsec, seed in zip(scene_lengths, seeds):
        parts.append(textured_frames(int(nsec * FPS), 96, 128, seed=seed, shift_per_frame=(0.1, 0.2)))
    frames = np.concatenate(parts)
    cuts = np.cumsum([len(p) for p in parts[:-1]]) / FPS
    asset = probe_asset(write_video(tmp_path / name, frames, fps=FPS))
    return asset, list(cuts)


def test_static_uniform_gray_has_no_cuts(tmp_path):
    frames = np.full((60, 96, 128, 3), 128, np.uint8)
    asset = probe_asset(write_video(tmp_path / "gray.avi", frames, fps=FPS))
    assert detect_scene_boundaries(asset) == []


def test_two_scene_hard_cut_recovered(tmp_path):
    asset, true_cuts = _concat_scenes(tmp_path, "two.avi", [5.0, 5.0], seeds=[10, 20])
    cuts = detect_scene_boundaries(asset)
    assert len(cuts) == 1
    assert abs(cuts[0] - true_cuts[0]) <= FRAME + 1e-9


def test_three_scene_cuts_recovered(tmp_path):
    asset, true_cuts = _concat_scenes(tmp_path, "three.avi", [4.0, 5.0, 4.0], seeds=[1, 2, 3])
    cuts = detect_scene_boundaries(asset)
    assert len(cuts) == 2
    for found, true in zip(cuts, true_cuts):
        assert abs(found - true) <= FRAME + 1e-9


def test_no_spurious_cuts_in_static_spans(tmp_path):
    frames = textured_frames(240, 96, 128, seed=7, shift_per_frame=(0.2, 0.4))
    asset = probe_asset(write_video(tmp_path / "smooth.avi", frames, fps=FPS))
    assert detect_scene_boundaries(asset) == []


def test_edge_map_empty_for_flat_frame():
    assert edge_map(np.full((32, 32), 0.5, np.float32)).sum() == 0


def test_edge_change_ratio_zero_cases():
    flat = np.zeros((32, 32), bool)
    assert edge_change_ratio(flat, flat) == 0.0
    edges = edge_map(textured_frames(1, 32, 32, seed=5)[0, :, :, 0].astype(np.float32) / 255.0)
    assert edge_change_ratio(edges, edges) == 0.0


def _asset_stub(duration):
    # split_and_filter_scenes only touches id and duration
    class Stub:
        id = "stub"

    stub = Stub()
    stub.duration = duration
    return stub


def test_split_no_cuts_keeps_whole_asset():
    windows = split_and_filter_scenes(_asset_stub(10.0), [])
    assert [(w.start, w.end) for w in windows] == [(0.0, 10.0)]


def test_split_drops_short_scene():
    # cuts create a 2 s scene at the front
    windows = split_and_filter_scenes(_asset_stub(10.0), [2.0])
    assert [(w.start, w.end) for w in windows] == [(2.0, 10.0)]


def test_split_drops_long_scene():
    windows = split_and_filter_scenes(_asset_stub(40.0), [31.0])
    assert [(w.start, w.end) for w in windows] == [(31.0, 40.0)]


def test_split_partition_property():
    rng = np.random.default_rng(0)
    for _ in range(200):
        duration = float(rng.uniform(1.0, 90.0))
        n_cuts = int(rng.integers(0, 6))
        cuts = sorted(float(rng.uniform(0.0, duration)) for _ in range(n_cuts))
        windows = split_and_filter_scenes(_asset_stub(duration), cuts)
        for w in windows:
            assert 3.0 <= w.length <= 30.0
        for a, b in zip(windows[:-1], windows[1:]):
            assert a.end <= b.start + 1e-12


def test_windows_are_clip_windows():
    windows = split_and_filter_scenes(_asset_stub(10.0), [5.0])
    assert all(isinstance(w, ClipWindow) for w in windows)
