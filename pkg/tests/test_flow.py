import cv2
import numpy as np
import pytest

from fumble.kernels import COMPILED, hs_iterate, hs_iterate_numpy
from fumble.transfer.flow import dense_flow, flow_histogram, flow_magnitudes


def smooth_texture(h=96, w=120, seed=0, sigma=2.5):
    rng = np.random.default_rng(seed)
    return cv2.GaussianBlur(rng.uniform(0, 255, (h, w)).astype(np.float32), (0, 0), sigma)


def test_identical_frames_zero_field():
    tex = smooth_texture()
    field = dense_flow(tex, tex)
    assert np.abs(field).max() < 1e-4


def test_global_shift_recovered():
    tex = smooth_texture(seed=1)
    shifted = np.roll(tex, 3, axis=1)
    field = dense_flow(tex, shifted)
    inner = field[10:-10, 10:-10]
    assert abs(np.median(inner[..., 0]) - 3.0) <= 0.5
    assert abs(np.median(inner[..., 1])) <= 0.5


def test_shift_recovery_over_random_textures():
    rng = np.random.default_rng(2)
    for trial in range(5):
        tex = smooth_texture(seed=10 + trial, sigma=float(rng.uniform(1.5, 3.5)))
        dy, dx = int(rng.integers(-3, 4)), int(rng.integers(-3, 4))
        field = dense_flow(tex, np.roll(tex, (dy, dx), axis=(0, 1)))
        inner = field[12:-12, 12:-12]
        assert abs(np.median(inner[..., 0]) - dx) <= 0.5
        assert abs(np.median(inner[..., 1]) - dy) <= 0.5


def test_brightness_change_without_motion():
    tex = smooth_texture(seed=3)
    brighter = np.clip(tex * 1.3 + 10, 0, 255)
    field = dense_flow(tex, brighter)
    mag = np.hypot(field[..., 0], field[..., 1])
    assert np.median(mag) < 0.5


def test_shape_mismatch_rejected():
    with pytest.raises(ValueError):
        dense_flow(np.zeros((10, 10)), np.zeros((10, 12)))


def test_compiled_and_fallback_agree():
    rng = np.random.default_rng(4)
    ix, iy, it = rng.normal(size=(3, 33, 47))
    u0 = np.zeros((33, 47))
    a = hs_iterate(ix, iy, it, u0, u0, 1.0, 25)
    b = hs_iterate_numpy(ix, iy, it, u0, u0, 1.0, 25)
    np.testing.assert_allclose(a[0], b[0], atol=1e-10)
    np.testing.assert_allclose(a[1], b[1], atol=1e-10)


def test_compiled_kernel_present():
    # built via setup.py in this environment; fallback still covered above
    assert COMPILED


def test_flow_histogram_normalized():
    rng = np.random.default_rng(5)
    frames = rng.uniform(0, 1, size=(4, 40, 40, 3)).astype(np.float32)
    hist = flow_histogram(frames, bins=100)
    assert hist.shape == (100,)
    assert hist.min() >= 0
    assert hist.sum() == pytest.approx(1.0)


def test_static_clip_mass_in_first_bin():
    frames = np.repeat(smooth_texture(40, 40)[None, ..., None], 3, axis=-1)[None].repeat(5, axis=0)
    frames = frames.reshape(5, 40, 40, 3) / 255.0
    hist = flow_histogram(frames, bins=100)
    assert hist[0] > 0.99


def test_magnitude_range_clips_into_last_bin():
    mags_frames = np.zeros((2, 48, 48, 3), np.float32)
    mags_frames[0, :, ::2] = 1.0  # wild aliasing: large spurious flow
    mags_frames[1, ::2, :] = 1.0
    hist = flow_histogram(mags_frames, bins=10, mag_range=(0.0, 0.5))
    assert hist.sum() == pytest.approx(1.0)


def test_flow_magnitudes_empty_for_single_frame():
    frames = np.zeros((1, 32, 32, 3), np.float32)
    assert flow_magnitudes(frames).size == 0
