"""Non-learned priors and the motion-magnitude baseline."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np
import torch
from torch import nn
from torch.nn import functional as F

from fumble.data.labels import ClassLabel

from .flow import flow_histogram


@dataclass
class ModePrior:
    """Always predicts the modal class of the training labels."""

    mode: int

    def predict(self, n: int) -> np.ndarray:
        return np.full(n, self.mode)


@dataclass
class MiddlePrior:
    """Predicts the failure onset at the middle of the video."""

    def predict_onset(self, duration: float) -> float:
        return duration / 2.0


@dataclass
class ChancePredictor:
    """Uniform random class draws with a fixed seed."""

    seed: int = 0

    def predict(self, n: int) -> np.ndarray:
        return np.random.default_rng(self.seed).integers(0, 3, size=n)


def fixed_priors(train_labels, seed: int = 0) -> dict:
    """The naive baselines: training-mode classifier, middle localizer, chance."""
    values = [lab.value if isinstance(lab, ClassLabel) else int(lab) for lab in train_labels]
    mode = Counter(values).most_common(1)[0][0]
    return {
        "mode_prior": ModePrior(mode=mode),
        "middle_prior": MiddlePrior(),
        "chance": ChancePredictor(seed=seed),
    }


class MotionMLP(nn.Module):
    """One hidden layer (256, ReLU) over the 100-bin flow-magnitude histogram."""

    def __init__(self, bins: int = 100, hidden: int = 256):
        super().__init__()
        self.fc1 = nn.Linear(bins, hidden)
        self.fc2 = nn.Linear(hidden, 3)

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return self.fc2(torch.relu(self.fc1(x)))

    @torch.no_grad()
    def predict(self, hists: np.ndarray) -> np.ndarray:
        return self(torch.from_numpy(np.asarray(hists, np.float32))).argmax(1).numpy()


def clip_histograms(clips, bins: int = 100, **flow_kwargs) -> np.ndarray:
    """Flow-magnitude histogram per clip; rows sum to 1."""
    return np.stack([flow_histogram(c.frames if hasattr(c, "frames") else c, bins=bins, **flow_kwargs) for c in clips])


def motion_histogram_baseline(
    clips,
    labels,
    bins: int = 100,
    epochs: int = 300,
    lr: float = 1e-2,
    seed: int = 0,
    histograms: np.ndarray | None = None,
) -> tuple[MotionMLP, np.ndarray]:
    """Train the motion-magnitude classifier; returns (model, histograms).

    Pass precomputed `histograms` to skip the (slow) flow computation.
    """
    y = torch.tensor([lab.value if isinstance(lab, ClassLabel) else int(lab) for lab in labels])
    hists = clip_histograms(clips, bins=bins) if histograms is None else histograms
    x = torch.from_numpy(np.asarray(hists, np.float32))
    torch.manual_seed(seed)
    model = MotionMLP(bins=bins)
    optimizer = torch.optim.Adam(model.parameters(), lr=lr)
    model.train()
    for _ in range(epochs):
        loss = F.cross_entropy(model(x), y)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
    model.eval()
    return model, hists
