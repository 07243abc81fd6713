"""Shared pretraining loop for the three self-supervised tasks."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from torch import nn

from fumble.encoder.model import EncoderConfig, build_encoder, clips_to_tensor
from fumble.errors import NumericError
from fumble.encoder.weights import export_weights
from fumble.media.sources import ClipSource

from .heads import ContextHead, SortClassifier, SortPairHead, SpeedHead, context_predict, sort_forward
from .losses import nce_loss, speed_loss
from .samplers import sample_context_batch, sample_sort_batch, sample_speed_batch

TASKS = ("speed", "context", "sort")


@dataclass
class PretrainConfig:
    encoder: EncoderConfig = field(default_factory=EncoderConfig.desk)
    epochs: int = 20
    batch_size: int = 32
    samples_per_video: int = 2  # clip draws per video per epoch
    lr: float = 1e-3            # desk default; use 1e-2 at full scale
    momentum: float = 0.9
    cosine_decay: bool = True
    seed: int = 0
    checkpoint_dir: Path | None = None


@dataclass
class PretrainReport:
    task: str
    epochs: int
    loss_curve: list[float]
    final_accuracy: float
    wall_time: float


class TrainingDiverged(RuntimeError):
    def __init__(self, last_checkpoint: Path | None):
        super().__init__(f"loss went non-finite; last good checkpoint: {last_checkpoint}")
        self.last_checkpoint = last_checkpoint


def make_heads(task: str, feature_dim: int) -> nn.ModuleDict:
    if task == "speed":
        return nn.ModuleDict({"speed": SpeedHead(feature_dim)})
    if task == "context":
        return nn.ModuleDict({"context": ContextHead(feature_dim)})
    if task == "sort":
        return nn.ModuleDict({"pair": SortPairHead(feature_dim), "order": SortClassifier()})
    raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")


def _epoch_batches(task, sources, cfg, rng):
    """Visit videos in seeded shuffled groups; decode each group once."""
    order = rng.permutation(len(sources))
    group = max(math.ceil(cfg.batch_size / cfg.samples_per_video), 2)
    for lo in range(0, len(order), group):
        chunk = [sources[i].to_array_source() for i in order[lo : lo + group]]
        if task == "speed":
            yield sample_speed_batch(chunk, cfg.batch_size, rng, T=cfg.encoder.frames)
        elif task == "context":
            yield sample_context_batch(chunk, cfg.batch_size, rng, T=cfg.encoder.frames)
        else:
            yield sample_sort_batch(chunk, cfg.batch_size, rng, T=cfg.encoder.frames)


def _step(task, encoder, heads, batch, cfg):
    """Forward one batch; returns (loss, n_correct, n)."""
    if task == "speed":
        x = clips_to_tensor([s.clip for s in batch], cfg.encoder)
        labels = torch.tensor([s.label for s in batch])
        logits = heads["speed"](encoder(x))
        return speed_loss(logits, labels), int((logits.argmax(1) == labels).sum()), len(batch)
    if task == "context":
        past = clips_to_tensor([t.past for t in batch], cfg.encoder)
        present = clips_to_tensor([t.present for t in batch], cfg.encoder)
        future = clips_to_tensor([t.future for t in batch], cfg.encoder)
        targets, preds = context_predict(encoder, heads["context"], past, present, future)
        z = preds @ targets.T
        correct = int((z.argmax(1) == torch.arange(len(batch))).sum())
        return nce_loss(targets, preds), correct, len(batch)
    stacks = tuple(
        clips_to_tensor([s.clips[i] for s in batch], cfg.encoder) for i in range(3)
    )
    labels = torch.tensor([s.permutation_label for s in batch])
    logits = sort_forward(encoder, heads["pair"], heads["order"], stacks)
    loss = torch.nn.functional.cross_entropy(logits, labels)
    return loss, int((logits.argmax(1) == labels).sum()), len(batch)


def pretrain(
    task: str,
    sources: list[ClipSource],
    config: PretrainConfig,
) -> tuple[torch.nn.Module, nn.ModuleDict, PretrainReport]:
    """Train encoder + task heads with seeded SGD; checkpoints each epoch.

    Returns (encoder, heads, report). Raises TrainingDiverged (carrying the
    last good checkpoint path) if the loss goes non-finite.
    """
    if task not in TASKS:
        raise ValueError(f"unknown task {task!r}; expected one of {TASKS}")
    torch.manual_seed(config.seed)
    encoder = build_encoder(config.encoder, config.seed)
    heads = make_heads(task, encoder.feature_dim)
    container = nn.ModuleDict({"encoder": encoder, "heads": heads})
    optimizer = torch.optim.SGD(container.parameters(), lr=config.lr, momentum=config.momentum)
    rng = np.random.default_rng(config.seed)

    if config.checkpoint_dir is not None:
        config.checkpoint_dir = Path(config.checkpoint_dir)
        config.checkpoint_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    curve: list[float] = []
    final_acc = 0.0
    last_ckpt: Path | None = None
    container.train()
    for epoch in range(config.epochs):
        if config.cosine_decay:
            lr = config.lr * 0.5 * (1.0 + math.cos(math.pi * epoch / config.epochs))
        else:
            lr = config.lr
        for group in optimizer.param_groups:
            group["lr"] = lr

        losses: list[float] = []
        hits = total = 0
        for batch in _epoch_batches(task, sources, config, rng):
            try:
                loss, correct, n = _step(task, encoder, heads, batch, config)
            except NumericError:
                raise TrainingDiverged(last_ckpt)
            if not torch.isfinite(loss):
                raise TrainingDiverged(last_ckpt)
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            losses.append(float(loss.detach()))
            hits += correct
            total += n
        curve.append(float(np.mean(losses)))
        final_acc = hits / max(total, 1)
        if config.checkpoint_dir is not None:
            last_ckpt = config.checkpoint_dir / f"ckpt_epoch{epoch:03d}.npz"
            export_weights(
                container,
                last_ckpt,
                config=config.encoder,
                extra_meta={"task": task, "epoch": epoch},
            )

    report = PretrainReport(
        task=task,
        epochs=config.epochs,
        loss_curve=curve,
        final_accuracy=final_acc,
        wall_time=time.perf_counter() - t0,
    )
    return encoder, heads, report
