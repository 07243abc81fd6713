"""Dense optical flow via a classical variational scheme.

Brightness-constancy plus smoothness energy, minimized with a fixed Jacobi
iteration budget on a coarse-to-fine pyramid. Deterministic and self-contained
(the motion baseline only needs magnitude statistics). The per-level iteration
runs in the compiled kernel when available.
"""

from __future__ import annotations

import cv2
import numpy as np

from fumble.kernels import hs_iterate


def _gradients(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    avg = 0.5 * (a + b)
    ix = np.gradient(avg, axis=1)
    iy = np.gradient(avg, axis=0)
    it = b - a
    return ix, iy, it


def _warp(frame: np.ndarray, u: np.ndarray, v: np.ndarray) -> np.ndarray:
    h, w = frame.shape
    xs, ys = np.meshgrid(np.arange(w, dtype=np.float32), np.arange(h, dtype=np.float32))
    return cv2.remap(
        frame.astype(np.float32),
        xs + u.astype(np.float32),
        ys + v.astype(np.float32),
        cv2.INTER_LINEAR,
        borderMode=cv2.BORDER_REPLICATE,
    ).astype(np.float64)


def _standardize(frame: np.ndarray) -> np.ndarray:
    """Zero-mean, unit-variance photometric normalization.

    Makes the data term invariant to global brightness/contrast changes,
    which otherwise masquerade as motion.
    """
    frame = frame.astype(np.float64)
    std = frame.std()
    if std < 1e-12:
        return np.zeros_like(frame)
    return (frame - frame.mean()) / std


def dense_flow(
    frame_a: np.ndarray,
    frame_b: np.ndarray,
    alpha: float = 1.0,
    iterations: int = 80,
    levels: int = 4,
) -> np.ndarray:
    """Per-pixel displacement field (H, W, 2) taking frame_a to frame_b.

    Inputs are same-shape grayscale frames of any numeric range; each frame is
    photometrically standardized before the data term. alpha weights the
    smoothness term; iterations is the fixed budget per pyramid level.
    """
    if frame_a.shape != frame_b.shape or frame_a.ndim != 2:
        raise ValueError(f"need same-shape grayscale frames, got {frame_a.shape} vs {frame_b.shape}")
    a0 = _standardize(frame_a)
    b0 = _standardize(frame_b)

    pyramid = [(a0, b0)]
    for _ in range(levels - 1):
        a, b = pyramid[-1]
        if min(a.shape) < 16:
            break
        size = (a.shape[1] // 2, a.shape[0] // 2)
        pyramid.append(
            (
                cv2.resize(a, size, interpolation=cv2.INTER_AREA),
                cv2.resize(b, size, interpolation=cv2.INTER_AREA),
            )
        )

    u = np.zeros(pyramid[-1][0].shape, np.float64)
    v = np.zeros_like(u)
    alpha2 = alpha * alpha
    for li, (a, b) in enumerate(reversed(pyramid)):
        if li > 0:
            size = (a.shape[1], a.shape[0])
            sx = a.shape[1] / u.shape[1]
            sy = a.shape[0] / u.shape[0]
            u = cv2.resize(u, size, interpolation=cv2.INTER_LINEAR) * sx
            v = cv2.resize(v, size, interpolation=cv2.INTER_LINEAR) * sy
        b_warped = _warp(b, u, v)
        ix, iy, it = _gradients(a, b_warped)
        du, dv = hs_iterate(ix, iy, it, np.zeros_like(u), np.zeros_like(v), alpha2, iterations)
        u = u + du
        v = v + dv
    return np.stack([u, v], axis=-1)


def flow_magnitudes(frames: np.ndarray, **flow_kwargs) -> np.ndarray:
    """Flow magnitude samples over all consecutive frame pairs of a clip.

    `frames` is (T, H, W, 3) or (T, H, W); dense_flow standardizes intensities,
    so any value range works.
    """
    gray = frames.mean(axis=3) if frames.ndim == 4 else frames
    gray = gray.astype(np.float64)
    mags = []
    for a, b in zip(gray[:-1], gray[1:]):
        field = dense_flow(a, b, **flow_kwargs)
        mags.append(np.hypot(field[..., 0], field[..., 1]).ravel())
    return np.concatenate(mags) if mags else np.zeros(0)


def flow_histogram(
    frames: np.ndarray,
    bins: int = 100,
    mag_range: tuple[float, float] = (0.0, 20.0),
    **flow_kwargs,
) -> np.ndarray:
    """Normalized histogram of per-pixel flow magnitude over a clip.

    100 linear bins over [0, 20] px/frame by default; magnitudes beyond the
    range clip into the last bin. Entries are >= 0 and sum to 1.
    """
    mags = flow_magnitudes(frames, **flow_kwargs)
    if mags.size == 0:
        hist = np.zeros(bins)
        hist[0] = 1.0
        return hist
    mags = np.minimum(mags, mag_range[1] - 1e-9)
    hist, _ = np.histogram(mags, bins=bins, range=mag_range)
    return hist / hist.sum()
