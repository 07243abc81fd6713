"""3D-convolutional residual video backbone.

The default profile is an 18-layer 3D residual network (feature dim 512); the
desk profile quarters the widths and uses one block per stage so the whole
test suite runs on CPU. Features are the globally average-pooled activations
of the last convolutional stage.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import torch
from torch import nn

from fumble.errors import ConfigError, ShapeError
from fumble.media.assets import ClipTensor

# Input normalization applied before the stem; clips arrive in [0, 1].
INPUT_MEAN = 0.45
INPUT_STD = 0.225


@dataclass(frozen=True)
class EncoderConfig:
    stage_widths: tuple[int, ...] = (64, 128, 256, 512)
    stage_blocks: tuple[int, ...] = (2, 2, 2, 2)
    frames: int = 16
    size: int = 112

    def __post_init__(self):
        if len(self.stage_widths) != len(self.stage_blocks):
            raise ConfigError(
                f"{len(self.stage_widths)} stage widths vs {len(self.stage_blocks)} block counts"
            )
        if not self.stage_widths or min(self.stage_widths) < 1 or min(self.stage_blocks) < 1:
            raise ConfigError("stage widths and block counts must be positive")

    @property
    def feature_dim(self) -> int:
        return self.stage_widths[-1]

    @classmethod
    def default(cls) -> "EncoderConfig":
        return cls()

    @classmethod
    def desk(cls) -> "EncoderConfig":
        """Quarter-width CPU profile; under 2M parameters."""
        return cls(stage_widths=(16, 32, 64, 128), stage_blocks=(1, 1, 1, 1))


class BasicBlock3d(nn.Module):
    def __init__(self, cin: int, cout: int, stride: int):
        super().__init__()
        self.conv1 = nn.Conv3d(cin, cout, 3, stride, 1, bias=False)
        self.bn1 = nn.BatchNorm3d(cout)
        self.conv2 = nn.Conv3d(cout, cout, 3, 1, 1, bias=False)
        self.bn2 = nn.BatchNorm3d(cout)
        self.relu = nn.ReLU(inplace=True)
        self.downsample = None
        if stride != 1 or cin != cout:
            self.downsample = nn.Sequential(
                nn.Conv3d(cin, cout, 1, stride, bias=False), nn.BatchNorm3d(cout)
            )

    def forward(self, x):
        identity = x if self.downsample is None else self.downsample(x)
        out = self.relu(self.bn1(self.conv1(x)))
        out = self.bn2(self.conv2(out))
        return self.relu(out + identity)


class VideoEncoder(nn.Module):
    """Stem conv + residual stages + global average pooling to feature_dim."""

    def __init__(self, config: EncoderConfig):
        super().__init__()
        self.config = config
        w0 = config.stage_widths[0]
        self.stem = nn.Sequential(
            nn.Conv3d(3, w0, (3, 7, 7), (1, 2, 2), (1, 3, 3), bias=False),
            nn.BatchNorm3d(w0),
            nn.ReLU(inplace=True),
        )
        stages = []
        cin = w0
        for si, (width, blocks) in enumerate(zip(config.stage_widths, config.stage_blocks)):
            layers = []
            for bi in range(blocks):
                stride = 2 if (si > 0 and bi == 0) else 1
                layers.append(BasicBlock3d(cin, width, stride))
                cin = width
            stages.append(nn.Sequential(*layers))
        self.stages = nn.Sequential(*stages)
        self.pool = nn.AdaptiveAvgPool3d(1)

    @property
    def feature_dim(self) -> int:
        return self.config.feature_dim

    def parameter_count(self) -> int:
        return sum(p.numel() for p in self.parameters())

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        if x.ndim != 5 or x.shape[1] != 3:
            raise ShapeError(f"expected (B, 3, T, H, W), got {tuple(x.shape)}")
        x = self.stem(x)
        x = self.stages(x)
        return self.pool(x).flatten(1)


def _init_weights(module: nn.Module) -> None:
    for m in module.modules():
        if isinstance(m, nn.Conv3d):
            nn.init.kaiming_normal_(m.weight, mode="fan_out", nonlinearity="relu")
        elif isinstance(m, nn.BatchNorm3d):
            nn.init.ones_(m.weight)
            nn.init.zeros_(m.bias)
    # Residual branches start as identity: zero gain on their final norm.
    for m in module.modules():
        if isinstance(m, BasicBlock3d):
            nn.init.zeros_(m.bn2.weight)


def build_encoder(config: EncoderConfig, seed: int = 0) -> VideoEncoder:
    """Construct and deterministically initialize the backbone."""
    torch.manual_seed(seed)
    encoder = VideoEncoder(config)
    _init_weights(encoder)
    return encoder


def clips_to_tensor(clips: list[ClipTensor] | ClipTensor, config: EncoderConfig) -> torch.Tensor:
    """Stack clips into a normalized (B, 3, T, H, W) float tensor."""
    if isinstance(clips, ClipTensor):
        clips = [clips]
    batch = []
    for clip in clips:
        t, h, w = clip.frames.shape[:3]
        if (t, h, w) != (config.frames, config.size, config.size):
            raise ShapeError(
                f"clip is {t}x{h}x{w}, encoder expects "
                f"{config.frames}x{config.size}x{config.size}"
            )
        batch.append(clip.frames)
    x = torch.from_numpy(np.stack(batch)).permute(0, 4, 1, 2, 3).contiguous()
    return (x - INPUT_MEAN) / INPUT_STD


@torch.no_grad()
def encode(encoder: VideoEncoder, clips: list[ClipTensor] | ClipTensor) -> np.ndarray:
    """Pooled last-stage features; (d,) for one clip, (B, d) for a batch."""
    single = isinstance(clips, ClipTensor)
    x = clips_to_tensor(clips, encoder.config)
    was_training = encoder.training
    encoder.eval()
    try:
        feats = encoder(x.to(next(encoder.parameters()).dtype))
    finally:
        encoder.train(was_training)
    out = feats.cpu().numpy()
    return out[0] if single else out
