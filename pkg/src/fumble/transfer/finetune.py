"""Fine-tuning the backbone on labeled 3-way windows (and anticipation)."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from fumble.data.labels import ClassLabel
from fumble.encoder.model import VideoEncoder, clips_to_tensor
from fumble.encoder.weights import export_weights
from fumble.media.assets import ClipWindow
from fumble.media.sources import ClipSource
from fumble.pretext.train import TrainingDiverged

from .probe import fit_linear_probe


@dataclass
class LabeledWindow:
    source: ClipSource
    window: ClipWindow
    label: ClassLabel


@dataclass
class FinetuneConfig:
    epochs: int = 8
    batch_size: int = 32
    lr: float = 1e-3
    momentum: float = 0.9
    cosine_decay: bool = True
    seed: int = 0
    freeze_encoder: bool = False
    balanced: bool = True
    rate: float = 16.0
    probe_lam: float = 1e-4  # used on the frozen-encoder path
    checkpoint_dir: Path | None = None


class FinetunedModel(nn.Module):
    """Backbone plus a 3-way linear head."""

    def __init__(self, encoder: VideoEncoder):
        super().__init__()
        self.encoder = encoder
        self.head = nn.Linear(encoder.feature_dim, 3)
        nn.init.normal_(self.head.weight, std=1e-2)
        nn.init.zeros_(self.head.bias)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.head(self.encoder(x))

    @torch.no_grad()
    def predict_proba(self, clips) -> np.ndarray:
        was_training = self.training
        self.eval()
        try:
            logits = self(clips_to_tensor(clips, self.encoder.config))
        finally:
            self.train(was_training)
        return torch.softmax(logits, dim=1).cpu().numpy()


def _clip_of(sample: LabeledWindow, cfg: FinetuneConfig, T: int):
    return sample.source.clip(sample.window.center, cfg.rate, T)


def _balanced_batches(labels: np.ndarray, batch_size: int, n_batches: int, rng):
    """Index batches with (near-)equal class counts, drawn with replacement."""
    by_class = [np.flatnonzero(labels == c) for c in range(3)]
    per = [batch_size // 3] * 3
    for i in range(batch_size % 3):
        per[i] += 1
    for _ in range(n_batches):
        picks = [rng.choice(idx, size=k, replace=True) for idx, k in zip(by_class, per) if len(idx)]
        yield np.concatenate(picks)


def finetune(
    encoder: VideoEncoder,
    samples: list[LabeledWindow],
    config: FinetuneConfig,
) -> tuple[FinetunedModel, dict]:
    """Train a 3-way head (and, unless frozen, all backbone parameters).

    With freeze_encoder, features are extracted once and the head is fit with
    the convex probe solver, so the result matches a linear probe on the same
    features. Returns (model, report).
    """
    if not samples:
        raise ValueError("no labeled windows")
    T = encoder.config.frames
    labels = np.array([s.label.value for s in samples])
    torch.manual_seed(config.seed)
    rng = np.random.default_rng(config.seed)
    model = FinetunedModel(encoder)
    t0 = time.perf_counter()

    if config.freeze_encoder:
        from fumble.encoder.model import encode

        feats = np.stack([encode(encoder, _clip_of(s, config, T)) for s in samples])
        probe = fit_linear_probe(feats, labels, lam=config.probe_lam, balanced=config.balanced)
        with torch.no_grad():
            model.head.weight.copy_(torch.from_numpy(probe.weights).float())
            model.head.bias.copy_(torch.from_numpy(probe.bias).float())
        report = {
            "mode": "frozen",
            "loss_curve": [probe.final_loss],
            "accuracy": float((probe.predict(feats) == labels).mean()),
            "wall_time": time.perf_counter() - t0,
        }
        return model, report

    if config.checkpoint_dir is not None:
        config.checkpoint_dir = Path(config.checkpoint_dir)
        config.checkpoint_dir.mkdir(parents=True, exist_ok=True)

    optimizer = torch.optim.SGD(model.parameters(), lr=config.lr, momentum=config.momentum)
    n_batches = max(len(samples) // config.batch_size, 1)
    curve = []
    final_acc = 0.0
    last_ckpt = None
    model.train()
    for epoch in range(config.epochs):
        lr = config.lr
        if config.cosine_decay:
            lr *= 0.5 * (1.0 + math.cos(math.pi * epoch / config.epochs))
        for group in optimizer.param_groups:
            group["lr"] = lr
        losses = []
        hits = total = 0
        if config.balanced:
            batches = _balanced_batches(labels, config.batch_size, n_batches, rng)
        else:
            order = rng.permutation(len(samples))
            batches = np.array_split(order, n_batches)
        for idx in batches:
            clips = [_clip_of(samples[i], config, T) for i in idx]
            y = torch.from_numpy(labels[idx]).long()
            logits = model(clips_to_tensor(clips, encoder.config))
            loss = F.cross_entropy(logits, y)
            if not torch.isfinite(loss):
                raise TrainingDiverged(last_ckpt)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(float(loss.detach()))
            hits += int((logits.argmax(1) == y).sum())
            total += len(idx)
        curve.append(float(np.mean(losses)))
        final_acc = hits / max(total, 1)
        if config.checkpoint_dir is not None:
            last_ckpt = config.checkpoint_dir / f"finetune_epoch{epoch:03d}.npz"
            export_weights(model, last_ckpt, config=encoder.config, extra_meta={"epoch": epoch})

    report = {
        "mode": "finetune",
        "loss_curve": curve,
        "accuracy": final_acc,
        "wall_time": time.perf_counter() - t0,
    }
    return model, report


def anticipation_head(
    encoder: VideoEncoder,
    shifted_samples: list[LabeledWindow],
    config: FinetuneConfig,
) -> tuple[FinetunedModel, dict]:
    """Same training contract as finetune, with labels shifted into the future.

    Callers build `shifted_samples` with dataset_core's shift rule; windows
    whose shifted counterpart leaves the video are already excluded there.
    """
    if not shifted_samples:
        raise ValueError("no anticipation samples (all shifted windows out of range?)")
    return finetune(encoder, shifted_samples, config)


@torch.no_grad()
def score_windows(
    model: FinetunedModel,
    source: ClipSource,
    windows: list[ClipWindow],
    rate: float = 16.0,
    batch_size: int = 32,
) -> np.ndarray:
    """Class probabilities (N, 3) for each window of one video."""
    T = model.encoder.config.frames
    probs = []
    for lo in range(0, len(windows), batch_size):
        clips = [source.clip(w.center, rate, T) for w in windows[lo : lo + batch_size]]
        probs.append(model.predict_proba(clips))
    return np.concatenate(probs) if probs else np.zeros((0, 3))
