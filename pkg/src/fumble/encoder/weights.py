"""Weight archives: named parameter arrays plus a JSON config header."""

from __future__ import annotations

import json
from dataclasses import asdict
from pathlib import Path

import numpy as np
import torch
from torch import nn

from fumble.errors import WeightImportError

from .model import EncoderConfig

SCHEMA_ID = "fumble-weights/1"
_META_KEY = "__meta__"


def export_weights(
    module: nn.Module,
    path: Path | str,
    config: EncoderConfig | None = None,
    extra_meta: dict | None = None,
) -> None:
    """Write all parameters and buffers of `module` to a single archive."""
    meta = {"schema": SCHEMA_ID}
    if config is not None:
        meta["config"] = asdict(config)
    if extra_meta:
        meta.update(extra_meta)
    arrays = {name: tensor.detach().cpu().numpy() for name, tensor in module.state_dict().items()}
    np.savez(path, **{_META_KEY: np.frombuffer(json.dumps(meta).encode(), np.uint8)}, **arrays)


def read_weights_meta(path: Path | str) -> dict:
    with np.load(path) as archive:
        if _META_KEY not in archive:
            raise WeightImportError(f"{path} has no config header")
        return json.loads(archive[_META_KEY].tobytes().decode())


def import_weights(module: nn.Module, path: Path | str, prefix: str = "") -> None:
    """Load matching arrays into `module`; round-trips with export_weights exactly.

    `prefix` selects a sub-namespace of the archive (e.g. "encoder." from a
    checkpoint that also stores head weights); other archive keys are ignored,
    so a backbone-only load from a full-model file succeeds. Missing or
    mismatched parameters raise WeightImportError naming the offenders.
    """
    with np.load(str(path)) as archive:
        available = {
            k[len(prefix) :]: archive[k]
            for k in archive.files
            if k != _META_KEY and k.startswith(prefix)
        }
    state = module.state_dict()
    missing = [name for name in state if name not in available]
    if missing:
        raise WeightImportError(f"{path} is missing parameters: {', '.join(sorted(missing))}")
    mismatched = [
        f"{name} (file {available[name].shape} vs model {tuple(state[name].shape)})"
        for name in state
        if tuple(available[name].shape) != tuple(state[name].shape)
    ]
    if mismatched:
        raise WeightImportError(f"shape mismatch in {path}: {'; '.join(sorted(mismatched))}")
    module.load_state_dict(
        {name: torch.from_numpy(np.array(available[name])) for name in state}, strict=True
    )
