"""Task heads on top of the shared video backbone.

Output layers start near zero so a fresh head scores every class almost
equally -- initial losses sit at chance level (ln C) by construction.
"""

from __future__ import annotations

import torch
from torch import nn

from fumble.errors import ConfigError
from fumble.encoder.model import VideoEncoder

_SMALL_INIT = 1e-3


def _small_linear(cin: int, cout: int) -> nn.Linear:
    layer = nn.Linear(cin, cout)
    nn.init.normal_(layer.weight, std=_SMALL_INIT)
    nn.init.zeros_(layer.bias)
    return layer


class SpeedHead(nn.Module):
    """Linear classifier over the discrete rate set."""

    def __init__(self, feature_dim: int, n_rates: int = 4):
        super().__init__()
        self.feature_dim = feature_dim
        self.fc = _small_linear(feature_dim, n_rates)

    def forward(self, feats: torch.Tensor) -> torch.Tensor:
        return self.fc(feats)


class ContextHead(nn.Module):
    """Two fully-connected layers mapping surrounding features to the middle one.

    Input is the concatenation of the past and future feature vectors (2d);
    hidden width 1024 with ReLU; output dimension d.
    """

    def __init__(self, feature_dim: int, hidden: int = 1024):
        super().__init__()
        self.feature_dim = feature_dim
        self.fc1 = nn.Linear(2 * feature_dim, hidden)
        self.relu = nn.ReLU(inplace=True)
        self.fc2 = _small_linear(hidden, feature_dim)

    def forward(self, past: torch.Tensor, future: torch.Tensor) -> torch.Tensor:
        return self.fc2(self.relu(self.fc1(torch.cat([past, future], dim=1))))


class SortPairHead(nn.Module):
    """Linear + ReLU on a concatenated feature pair."""

    def __init__(self, feature_dim: int, out_dim: int = 256):
        super().__init__()
        self.feature_dim = feature_dim
        self.out_dim = out_dim
        self.fc = nn.Linear(2 * feature_dim, out_dim)

    def forward(self, a: torch.Tensor, b: torch.Tensor) -> torch.Tensor:
        return torch.relu(self.fc(torch.cat([a, b], dim=1)))


class SortClassifier(nn.Module):
    """Linear layer over concatenated pairwise codes to the 6 sort orders."""

    def __init__(self, pair_dim: int = 256, n_orders: int = 6):
        super().__init__()
        self.fc = _small_linear(6 * pair_dim, n_orders)

    def forward(self, pair_codes: torch.Tensor) -> torch.Tensor:
        return self.fc(pair_codes)


def context_predict(
    f: VideoEncoder,
    g: ContextHead,
    past: torch.Tensor,
    present: torch.Tensor,
    future: torch.Tensor,
) -> tuple[torch.Tensor, torch.Tensor]:
    """Targets are the middle-clip features; predictions interpolate from context.

    All three inputs are (B, 3, T, H, W) batches; returns (targets, predictions)
    of shape (B, d).
    """
    if f.feature_dim != g.feature_dim:
        raise ConfigError(f"encoder dim {f.feature_dim} != context head dim {g.feature_dim}")
    targets = f(present)
    predictions = g(f(past), f(future))
    return targets, predictions


def sort_forward(
    f: VideoEncoder,
    g_pair: SortPairHead,
    h: SortClassifier,
    clips: tuple[torch.Tensor, torch.Tensor, torch.Tensor],
) -> torch.Tensor:
    """Logits over the 6 permutations for a batch of shuffled clip triplets.

    All ordered pairs (i, j), i != j, run through g_pair; the six pairwise
    codes concatenate into h's input.
    """
    if f.feature_dim != g_pair.feature_dim:
        raise ConfigError(f"encoder dim {f.feature_dim} != pair head dim {g_pair.feature_dim}")
    feats = [f(c) for c in clips]
    codes = [
        g_pair(feats[i], feats[j])
        for i in range(3)
        for j in range(3)
        if i != j
    ]
    return h(torch.cat(codes, dim=1))
