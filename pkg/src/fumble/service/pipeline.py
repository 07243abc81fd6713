"""Declarative pipeline: synth/ingest -> pretrain -> probe -> evaluate -> report.

Each stage writes into a content-addressed cache directory keyed by its own
config plus its inputs' keys, so unchanged re-runs are pure cache hits and a
failed run resumes from the last completed stage.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from fumble.benchmark import (
    anticipation_windows,
    build_window_sets,
    load_corpus,
    localize_corpus,
    window_features,
)
from fumble.data.splits import Split, make_splits
from fumble.data.synthetic import write_synthetic_corpus
from fumble.encoder.model import EncoderConfig, build_encoder
from fumble.encoder.weights import export_weights, import_weights
from fumble.errors import ConfigError
from fumble.evaluation.metrics import classification_accuracy, localization_accuracy
from fumble.evaluation.report import EvalReport, emit_report
from fumble.pretext.train import PretrainConfig, pretrain
from fumble.transfer.baselines import MiddlePrior
from fumble.transfer.finetune import FinetuneConfig, FinetunedModel, finetune


class PipelineStageError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage {stage!r} failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass
class JobConfig:
    workdir: Path
    seed: int = 0
    profile: str = "desk"
    synth: dict = field(default_factory=lambda: {"n": 40})
    pretrain: dict = field(default_factory=lambda: {"task": "speed", "epochs": 2})
    probe: dict = field(default_factory=dict)
    evaluate: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: Path | str) -> "JobConfig":
        path = Path(path)
        raw = json.loads(path.read_text())
        workdir = Path(raw.get("workdir", path.parent / "work"))
        cfg = cls(
            workdir=workdir,
            seed=int(raw.get("seed", 0)),
            profile=raw.get("profile", "desk"),
            synth=raw.get("synth", {"n": 40}),
            pretrain=raw.get("pretrain", {"task": "speed", "epochs": 2}),
            probe=raw.get("probe", {}),
            evaluate=raw.get("evaluate", {}),
        )
        cfg.validate()
        return cfg

    def validate(self) -> None:
        if self.profile not in ("desk", "full"):
            raise ConfigError(f"unknown profile {self.profile!r}")
        media_dir = self.synth.get("media_dir")
        if media_dir is not None and not Path(media_dir).exists():
            raise ConfigError(f"media_dir {media_dir} does not exist")

    def encoder_config(self) -> EncoderConfig:
        return EncoderConfig.desk() if self.profile == "desk" else EncoderConfig.default()


def _stage_key(name: str, payload: dict) -> str:
    blob = json.dumps({"stage": name, **payload}, sort_keys=True, default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


def _stage_dir(cfg: JobConfig, name: str, key: str) -> Path:
    return Path(cfg.workdir) / "cache" / f"{name}-{key}"


def _done(stage_dir: Path) -> Path:
    return stage_dir / "done.json"


def run_pipeline(cfg: JobConfig) -> dict:
    """Run all stages; returns artifact paths plus per-stage cache hits."""
    cfg.validate()
    artifacts: dict = {"cache_hits": {}}

    # --- corpus ------------------------------------------------------------
    stage = "synth"
    key = _stage_key(stage, {"seed": cfg.seed, **cfg.synth})
    sdir = _stage_dir(cfg, stage, key)
    try:
        if cfg.synth.get("media_dir"):
            corpus_dir = Path(cfg.synth["media_dir"])
        elif _done(sdir).exists():
            corpus_dir = sdir
            artifacts["cache_hits"][stage] = True
        else:
            sdir.mkdir(parents=True, exist_ok=True)
            write_synthetic_corpus(
                sdir,
                n=int(cfg.synth.get("n", 40)),
                seed=cfg.seed,
                duration_range=tuple(cfg.synth.get("duration_range", (8.0, 12.0))),
            )
            _done(sdir).write_text(json.dumps({"n": cfg.synth.get("n", 40)}))
            corpus_dir = sdir
        videos = load_corpus(corpus_dir)
    except Exception as exc:
        raise PipelineStageError(stage, exc) from exc
    artifacts["corpus_dir"] = corpus_dir
    artifacts["cache_hits"].setdefault(stage, False)

    splits = make_splits([v.id for v in videos], seed=cfg.seed)
    by_split = {
        split: [v for v in videos if splits[v.id] == split]
        for split in (Split.UNLABELED_PRETRAIN, Split.LABELED_TRAIN, Split.TEST)
    }

    # --- pretrain ----------------------------------------------------------
    stage = "pretrain"
    key = _stage_key(stage, {"seed": cfg.seed, "profile": cfg.profile, "corpus": str(corpus_dir), **cfg.pretrain})
    sdir = _stage_dir(cfg, stage, key)
    ckpt = sdir / "encoder.npz"
    try:
        if _done(sdir).exists():
            artifacts["cache_hits"][stage] = True
        else:
            sdir.mkdir(parents=True, exist_ok=True)
            task = cfg.pretrain.get("task", "speed")
            pcfg = PretrainConfig(
                encoder=cfg.encoder_config(),
                epochs=int(cfg.pretrain.get("epochs", 2)),
                batch_size=int(cfg.pretrain.get("batch_size", 16)),
                samples_per_video=int(cfg.pretrain.get("samples_per_video", 2)),
                lr=float(cfg.pretrain.get("lr", 1e-3)),
                seed=cfg.seed,
                checkpoint_dir=sdir / "ckpts",
            )
            sources = [v.source for v in by_split[Split.UNLABELED_PRETRAIN]] or [v.source for v in videos]
            encoder, _, report = pretrain(task, sources, pcfg)
            export_weights(encoder, ckpt, config=pcfg.encoder, extra_meta={"task": task})
            (sdir / "pretrain_report.json").write_text(
                json.dumps({"loss_curve": report.loss_curve, "final_accuracy": report.final_accuracy})
            )
            _done(sdir).write_text("{}")
        artifacts["encoder_ckpt"] = ckpt
    except Exception as exc:
        raise PipelineStageError(stage, exc) from exc
    artifacts["cache_hits"].setdefault(stage, False)
    pretrain_key = key

    # --- probe -------------------------------------------------------------
    stage = "probe"
    key = _stage_key(stage, {"pretrain": pretrain_key, **cfg.probe})
    sdir = _stage_dir(cfg, stage, key)
    model_path = sdir / "probe_model.npz"
    try:
        encoder = build_encoder(cfg.encoder_config(), seed=cfg.seed)
        import_weights(encoder, ckpt)
        if _done(sdir).exists():
            artifacts["cache_hits"][stage] = True
            model = FinetunedModel(encoder)
            import_weights(model, model_path)
        else:
            sdir.mkdir(parents=True, exist_ok=True)
            train_windows = build_window_sets(
                by_split[Split.LABELED_TRAIN] or videos,
                seed=cfg.seed + 1,
                per_class=int(cfg.probe.get("per_class", 2)),
            )
            fcfg = FinetuneConfig(
                freeze_encoder=True,
                seed=cfg.seed,
                probe_lam=float(cfg.probe.get("lam", 1e-4)),
            )
            model, _ = finetune(encoder, train_windows, fcfg)
            export_weights(model, model_path, config=cfg.encoder_config())
            _done(sdir).write_text("{}")
        artifacts["probe_model"] = model_path
    except Exception as exc:
        raise PipelineStageError(stage, exc) from exc
    artifacts["cache_hits"].setdefault(stage, False)
    probe_key = key

    # --- evaluate + report ---------------------------------------------------
    stage = "evaluate"
    key = _stage_key(stage, {"probe": probe_key, **cfg.evaluate})
    sdir = _stage_dir(cfg, stage, key)
    report_dir = sdir / "report"
    try:
        if _done(sdir).exists():
            artifacts["cache_hits"][stage] = True
        else:
            sdir.mkdir(parents=True, exist_ok=True)
            test_videos = by_split[Split.TEST] or videos
            eval_windows = build_window_sets(test_videos, seed=cfg.seed + 2, per_class=2)
            feats, labels = window_features(encoder, eval_windows)
            with torch.no_grad():
                logits = model.head(torch.from_numpy(feats).float())
            preds = logits.argmax(1).numpy()
            cls_acc, confusion = classification_accuracy(preds, labels)

            onset_sets = {v.id: v.onsets for v in test_videos}
            located = localize_corpus(model, test_videos)
            thresholds = tuple(cfg.evaluate.get("thresholds", (1.0, 0.25)))
            loc = {f"accuracy@{t}": localization_accuracy(located, onset_sets, t) for t in thresholds}
            middle = {
                v.id: MiddlePrior().predict_onset(v.duration) for v in test_videos
            }
            loc_middle = {
                f"accuracy@{t}": localization_accuracy(middle, onset_sets, t) for t in thresholds
            }

            durations = {v.id: v.duration for v in test_videos}
            ant_windows = anticipation_windows(eval_windows, durations, onset_sets)
            ant: dict = {"n": len(ant_windows)}
            if ant_windows:
                afeats, alabels = window_features(encoder, ant_windows)
                with torch.no_grad():
                    apreds = model.head(torch.from_numpy(afeats).float()).argmax(1).numpy()
                ant["accuracy"], _ = classification_accuracy(apreds, alabels)

            report = EvalReport(
                tasks={
                    "classification": {
                        "accuracy": cls_acc,
                        "n": len(labels),
                        "confusion": confusion.tolist(),
                    },
                    "localization": {**loc, "n": len(located), "middle_prior": loc_middle},
                    "anticipation": ant,
                },
                meta={
                    "model_id": str(ckpt),
                    "split": "test",
                    "seed": cfg.seed,
                    "profile": cfg.profile,
                },
                distributions={
                    "clip_lengths": [v.duration for v in videos],
                    "onset_fracs": [v.onsets.median_onset / v.duration for v in videos],
                },
            )
            emit_report(report, report_dir)
            _done(sdir).write_text("{}")
        artifacts["report_dir"] = report_dir
        artifacts["report_json"] = report_dir / "report.json"
    except Exception as exc:
        raise PipelineStageError(stage, exc) from exc
    artifacts["cache_hits"].setdefault(stage, False)
    return artifacts
