import cv2
import numpy as np
import pytest

from fumble.encoder.model import EncoderConfig
from fumble.media.assets import probe_asset


def write_video(path, frames, fps=30.0):
    """Write (N, H, W, 3) uint8 RGB frames as an MJPG AVI."""
    h, w = frames.shape[1:3]
    writer = cv2.VideoWriter(str(path), cv2.VideoWriter_fourcc(*"MJPG"), fps, (w, h))
    assert writer.isOpened(), f"cannot open writer for {path}"
    try:
        for frame in frames:
            writer.write(cv2.cvtColor(frame, cv2.COLOR_RGB2BGR))
    finally:
        writer.release()
    return path


def textured_frames(n, h, w, seed=0, shift_per_frame=(0.0, 0.0), base=None):
    """Scene-like frames: random shapes on a flat background (sparse edges),
    optionally translating over time."""
    rng = np.random.default_rng(seed)
    if base is None:
        # Scene content = small shapes on a flat background: edges stay
        # sparse, so distinct scenes share few edge pixels. One jittered
        # shape per grid cell keeps every crop window populated.
        base = np.full((h * 2, w * 2), float(rng.uniform(60, 180)), np.float32)
        cell_h, cell_w = max(h // 2, 12), max(w // 2, 12)
        for cy in range(0, 2 * h, cell_h):
            for cx in range(0, 2 * w, cell_w):
                shade = float(rng.uniform(20, 240))
                x = cx + int(rng.integers(0, cell_w))
                y = cy + int(rng.integers(0, cell_h))
                if rng.random() < 0.5:
                    cv2.rectangle(
                        base, (x, y), (x + int(rng.integers(8, 24)), y + int(rng.integers(8, 24))),
                        shade, thickness=-1,
                    )
                else:
                    cv2.circle(base, (x, y), int(rng.integers(4, 12)), shade, thickness=-1)
    frames = np.empty((n, h, w, 3), np.uint8)
    for k in range(n):
        dy = int(round(shift_per_frame[0] * k)) % h
        dx = int(round(shift_per_frame[1] * k)) % w
        crop = np.roll(np.roll(base, dy, axis=0), dx, axis=1)[:h, :w]
        frames[k] = np.stack([crop, crop, crop], axis=-1).astype(np.uint8)
    return frames


def micro_config():
    """Tiny encoder profile (<= 10^4 parameters) for gradient checks."""
    return EncoderConfig(stage_widths=(2, 4, 4, 8), stage_blocks=(1, 1, 1, 1), frames=4, size=16)


@pytest.fixture(scope="session")
def media_dir(tmp_path_factory):
    return tmp_path_factory.mktemp("media")


@pytest.fixture(scope="session")
def moving_asset(media_dir):
    """10 s, 30 fps textured video with slow motion (scene-free)."""
    frames = textured_frames(300, 64, 80, seed=1, shift_per_frame=(0.3, 0.5))
    path = write_video(media_dir / "moving.avi", frames)
    return probe_asset(path)
