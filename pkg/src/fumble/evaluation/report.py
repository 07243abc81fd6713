"""Evaluation reports: stable JSON plus distribution and confusion plots."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

SCHEMA_ID = "fumble-report/1"

_CLASS_NAMES = ("Intentional", "Transitional", "Unintentional")


def _plain(value):
    """Recursively convert numpy containers to JSON-native types."""
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    return value


@dataclass
class EvalReport:
    """Per-task metrics with metadata; serializes to a stable JSON schema."""

    tasks: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    distributions: dict = field(default_factory=dict)

    def __post_init__(self):
        self.tasks = _plain(self.tasks)
        self.meta = _plain(self.meta)
        self.distributions = _plain(self.distributions)

    def validate(self) -> None:
        for name, task in self.tasks.items():
            confusion = task.get("confusion")
            if confusion is None:
                continue
            m = np.asarray(confusion, np.float64)
            if m.shape != (3, 3):
                raise ValueError(f"{name}: confusion must be 3x3, got {m.shape}")
            for row in m:
                s = row.sum()
                if s > 0 and abs(s - 100.0) > 0.1:
                    raise ValueError(f"{name}: confusion row sums to {s}, expected 100")


def report_to_json(report: EvalReport) -> str:
    payload = {
        "schema": SCHEMA_ID,
        "tasks": report.tasks,
        "meta": report.meta,
        "distributions": report.distributions,
    }
    return json.dumps(payload, sort_keys=True, indent=1)


def report_from_json(text: str) -> EvalReport:
    payload = json.loads(text)
    if payload.get("schema") != SCHEMA_ID:
        raise ValueError(f"unknown report schema {payload.get('schema')!r}")
    return EvalReport(
        tasks=payload["tasks"],
        meta=payload["meta"],
        distributions=payload.get("distributions", {}),
    )


def _hist_plot(values, title: str, xlabel: str, path: Path, bins: int = 30) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.2))
    ax.hist(values, bins=bins, color="#4878a8", edgecolor="white")
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel("count")
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def _confusion_plot(matrix: np.ndarray, title: str, path: Path) -> None:
    fig, ax = plt.subplots(figsize=(4.2, 3.6))
    im = ax.imshow(matrix, cmap="Oranges", vmin=0, vmax=100)
    ax.set_xticks(range(3), _CLASS_NAMES, rotation=20, fontsize=8)
    ax.set_yticks(range(3), _CLASS_NAMES, fontsize=8)
    ax.set_xlabel("Predicted")
    ax.set_ylabel("True")
    for i in range(3):
        for j in range(3):
            ax.text(j, i, f"{matrix[i, j]:.1f}", ha="center", va="center", fontsize=9)
    ax.set_title(title)
    fig.colorbar(im, ax=ax, shrink=0.85)
    fig.tight_layout()
    fig.savefig(path, dpi=110)
    plt.close(fig)


def emit_report(report: EvalReport, out_dir: Path | str) -> list[Path]:
    """Write report.json (deterministic bytes) and available plots.

    Sections without data are omitted; the JSON schema stays valid either way.
    """
    report.validate()
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report dir {out_dir}: {exc}") from exc

    written = []
    json_path = out_dir / "report.json"
    json_path.write_text(report_to_json(report))
    written.append(json_path)

    dist_plots = {
        "clip_lengths": ("Clip length distribution", "seconds", "clip_length_hist.png"),
        "onset_fracs": ("Failure onset position", "fraction of duration", "onset_position_hist.png"),
        "worker_stdevs": ("Worker agreement", "onset stdev (s)", "worker_stdev_hist.png"),
    }
    for key, (title, xlabel, filename) in dist_plots.items():
        values = report.distributions.get(key)
        if values:
            path = out_dir / filename
            _hist_plot(values, title, xlabel, path)
            written.append(path)

    for name, task in report.tasks.items():
        confusion = task.get("confusion")
        if confusion is not None:
            path = out_dir / f"confusion_{name}.png"
            _confusion_plot(np.asarray(confusion, np.float64), f"{name} confusion (%)", path)
            written.append(path)
    return written
