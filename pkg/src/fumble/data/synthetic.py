"""Synthetic failure videos for desk-scale verification.

Each video shows a textured sprite moving along a smooth spline path until the
onset time, after which its velocity reverses and picks up heavy per-frame
jitter plus chaotic tumbling. The onset is exact ground truth, so labeling,
localization, and pretraining behavior can be verified without real footage.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import cv2
import numpy as np
from scipy.interpolate import CubicSpline

from .annotations import OnsetSet


@dataclass(frozen=True)
class SyntheticSpec:
    duration: float
    onset: float
    seed: int
    fps: float = 30.0
    size: int = 112
    sprite_radius: int = 12
    speed_scale: float = 1.0        # scales the smooth pre-onset speed
    jitter_sigma: float = 8.0       # px/frame velocity noise after onset
    damping: float = 0.85           # keeps post-onset speed bounded

    def __post_init__(self):
        if not 0.5 < self.onset < self.duration - 0.5:
            raise ValueError(f"onset {self.onset} too close to the ends of {self.duration}s")


def _background(rng: np.random.Generator, size: int) -> np.ndarray:
    """Static smooth color texture, mid-dark so the sprite stands out."""
    coarse = rng.uniform(40, 140, size=(9, 9, 3)).astype(np.float32)
    return cv2.resize(coarse, (size, size), interpolation=cv2.INTER_CUBIC)


def _smooth_path(rng: np.random.Generator, spec: SyntheticSpec) -> CubicSpline:
    """Cubic spline through random control points; low-jerk by construction."""
    margin = spec.sprite_radius + 4
    n_ctrl = max(4, int(spec.onset) + 2)
    times = np.linspace(-0.5, spec.onset + 0.5, n_ctrl)
    points = rng.uniform(margin, spec.size - margin, size=(n_ctrl, 2))
    # Limit segment speed so pre-onset motion stays visibly calm.
    max_step = 40.0 * spec.speed_scale * (times[1] - times[0])
    for i in range(1, n_ctrl):
        delta = points[i] - points[i - 1]
        dist = float(np.hypot(*delta))
        if dist > max_step:
            points[i] = points[i - 1] + delta * (max_step / dist)
    points = np.clip(points, margin, spec.size - margin)
    return CubicSpline(times, points, axis=0)


def _draw_sprite(frame: np.ndarray, pos: np.ndarray, theta: float, radius: int, color: tuple) -> None:
    center = (int(round(pos[0])), int(round(pos[1])))
    cv2.circle(frame, center, radius, color, thickness=-1, lineType=cv2.LINE_AA)
    tip = (
        int(round(pos[0] + radius * np.cos(theta))),
        int(round(pos[1] + radius * np.sin(theta))),
    )
    cv2.line(frame, center, tip, (245, 245, 245), thickness=2, lineType=cv2.LINE_AA)


def generate_synthetic_video(spec: SyntheticSpec) -> tuple[np.ndarray, OnsetSet]:
    """Render the video; returns (N, H, W, 3) uint8 frames and the true onset."""
    rng = np.random.default_rng(spec.seed)
    n_frames = int(round(spec.duration * spec.fps))
    bg = _background(rng, spec.size)
    path = _smooth_path(rng, spec)
    color = tuple(int(c) for c in rng.integers(170, 255, size=3))
    margin = float(spec.sprite_radius)

    theta = float(rng.uniform(0, 2 * np.pi))
    omega = float(rng.uniform(-1.5, 1.5))  # rad/s, calm pre-onset spin

    frames = np.empty((n_frames, spec.size, spec.size, 3), np.uint8)
    onset_frame = int(round(spec.onset * spec.fps))

    # Velocity at the switch comes from the spline derivative, then reverses.
    v = -path(spec.onset, 1) / spec.fps
    pos = path(spec.onset).astype(np.float64)

    for k in range(n_frames):
        t = k / spec.fps
        if k < onset_frame:
            p = path(min(t, spec.onset))
            theta_k = theta + omega * t
        else:
            if k > onset_frame:
                v = v * spec.damping + rng.normal(0.0, spec.jitter_sigma, size=2)
                pos = pos + v
                # Reflect off the walls, keeping the sprite fully visible.
                for ax in range(2):
                    if pos[ax] < margin:
                        pos[ax] = 2 * margin - pos[ax]
                        v[ax] = -v[ax]
                    elif pos[ax] > spec.size - margin:
                        pos[ax] = 2 * (spec.size - margin) - pos[ax]
                        v[ax] = -v[ax]
                pos = np.clip(pos, margin, spec.size - margin)
            p = pos
            theta_k = theta + omega * t + float(rng.normal(0.0, 1.2))

        frame = bg.copy()
        _draw_sprite(frame, np.asarray(p, np.float64), theta_k, spec.sprite_radius, color)
        frames[k] = np.clip(frame, 0, 255).astype(np.uint8)

    return frames, OnsetSet(onsets=(spec.onset,), median_onset=spec.onset)


def sample_specs(
    n: int,
    seed: int,
    duration_range: tuple[float, float] = (8.0, 12.0),
    onset_margin: float = 1.0,
    fps: float = 30.0,
    size: int = 112,
) -> list[SyntheticSpec]:
    """Draw corpus specs: duration uniform in range, onset uniform in [margin, D - margin]."""
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(n):
        duration = float(rng.uniform(*duration_range))
        duration = round(duration * fps) / fps  # whole frames
        onset = float(rng.uniform(onset_margin, duration - onset_margin))
        specs.append(
            SyntheticSpec(
                duration=duration,
                onset=onset,
                seed=int(rng.integers(0, 2**31 - 1)),
                fps=fps,
                size=size,
            )
        )
    return specs


def write_synthetic_corpus(
    out_dir: Path | str,
    n: int,
    seed: int,
    duration_range: tuple[float, float] = (8.0, 12.0),
    onset_margin: float = 1.0,
    fps: float = 30.0,
    size: int = 112,
) -> Path:
    """Render n videos plus ground_truth.json; returns the ground-truth path.

    ground_truth.json maps video id to {uri, duration, fps, onsets}.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    truth: dict[str, dict] = {}
    for i, spec in enumerate(sample_specs(n, seed, duration_range, onset_margin, fps, size)):
        vid = f"synth_{i:05d}"
        frames, onsets = generate_synthetic_video(spec)
        path = out_dir / f"{vid}.avi"
        writer = cv2.VideoWriter(
            str(path), cv2.VideoWriter_fourcc(*"MJPG"), spec.fps, (spec.size, spec.size)
        )
        try:
            for frame in frames:
                writer.write(cv2.cvtColor(frame, cv2.COLOR_RGB2BGR))
        finally:
            writer.release()
        truth[vid] = {
            "uri": path.name,
            "duration": frames.shape[0] / spec.fps,
            "fps": spec.fps,
            "onsets": list(onsets.onsets),
        }
    truth_path = out_dir / "ground_truth.json"
    with open(truth_path, "w") as fh:
        json.dump(truth, fh, indent=1, sort_keys=True)
    return truth_path


def read_ground_truth(path: Path | str) -> dict[str, dict]:
    with open(path) as fh:
        return json.load(fh)
