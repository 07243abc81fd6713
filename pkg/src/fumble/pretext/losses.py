"""Losses for the self-supervised objectives."""

from __future__ import annotations

import math

import torch
import torch.nn.functional as F

from fumble.errors import NumericError


def speed_loss(logits: torch.Tensor, labels: torch.Tensor) -> torch.Tensor:
    """Mean cross-entropy of rate logits against true rate indices."""
    if not torch.isfinite(logits).all():
        raise NumericError("non-finite logits")
    return F.cross_entropy(logits, labels)


def nce_loss(targets: torch.Tensor, predictions: torch.Tensor) -> torch.Tensor:
    """In-batch noise-contrastive loss pulling each prediction to its own target.

    Similarities z[i, j] = <target_j, prediction_i> / sqrt(d); the positive for
    row i is z[i, i] and every other clip in the mini-batch is a negative.
    Requires batch size >= 2 (otherwise there are no negatives).
    """
    if targets.ndim != 2 or targets.shape != predictions.shape:
        raise ValueError(f"targets {tuple(targets.shape)} vs predictions {tuple(predictions.shape)}")
    b, d = targets.shape
    if b < 2:
        raise ValueError("nce_loss needs a batch of at least 2 (no negatives otherwise)")
    z = predictions @ targets.T / math.sqrt(d)
    return F.cross_entropy(z, torch.arange(b, device=z.device))
