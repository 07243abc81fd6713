"""Command-line entry points for the toolkit."""

from __future__ import annotations

import json
import os
from pathlib import Path

import click
import numpy as np
import torch

from fumble.benchmark import (
    anticipation_windows,
    build_window_sets,
    load_corpus,
    localize_corpus,
    window_features,
)
from fumble.data.splits import Split, make_splits, write_splits
from fumble.data.synthetic import write_synthetic_corpus
from fumble.encoder.model import EncoderConfig, build_encoder
from fumble.encoder.weights import export_weights, import_weights, read_weights_meta
from fumble.evaluation.metrics import classification_accuracy, localization_accuracy
from fumble.evaluation.report import EvalReport, emit_report, report_from_json
from fumble.media.assets import ManifestEntry, probe_asset, write_manifest
from fumble.media.decode import decode_frames
from fumble.media.letterbox import detect_letterbox
from fumble.media.scenes import detect_scene_boundaries, split_and_filter_scenes
from fumble.pretext.train import PretrainConfig, pretrain
from fumble.service.pipeline import JobConfig, run_pipeline
from fumble.transfer.baselines import fixed_priors, motion_histogram_baseline
from fumble.transfer.finetune import FinetuneConfig, FinetunedModel, finetune

VIDEO_SUFFIXES = (".avi", ".mp4", ".mkv", ".mov", ".webm")


def _encoder_from_ckpt(path: Path, prefix: str = "") -> tuple:
    meta = read_weights_meta(path)
    cfg_dict = meta.get("config")
    if cfg_dict is None:
        raise click.ClickException(f"{path} has no encoder config header")
    cfg = EncoderConfig(
        stage_widths=tuple(cfg_dict["stage_widths"]),
        stage_blocks=tuple(cfg_dict["stage_blocks"]),
        frames=cfg_dict["frames"],
        size=cfg_dict["size"],
    )
    encoder = build_encoder(cfg, seed=0)
    import_weights(encoder, path, prefix=prefix)
    return encoder, cfg


def _profile_config(profile: str) -> EncoderConfig:
    return EncoderConfig.desk() if profile == "desk" else EncoderConfig.default()


@click.group()
def main():
    """Self-supervised video pretext tasks and the intentionality benchmark."""


@main.command()
@click.option("--in", "in_dir", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--scene-threshold", default=0.7, show_default=True)
@click.option("--min-len", default=3.0, show_default=True)
@click.option("--max-len", default=30.0, show_default=True)
def ingest(in_dir: Path, out_path: Path, scene_threshold: float, min_len: float, max_len: float):
    """Split videos into scenes, drop bad lengths, detect letterbox, write the manifest."""
    entries = []
    for path in sorted(in_dir.iterdir()):
        if path.suffix.lower() not in VIDEO_SUFFIXES:
            continue
        asset = probe_asset(path)
        cuts = detect_scene_boundaries(asset, threshold=scene_threshold)
        windows = split_and_filter_scenes(asset, cuts, min_len=min_len, max_len=max_len)
        for window in windows:
            probe_len = min(window.length, 2.0)
            frames = decode_frames(
                asset,
                type(window)(asset.id, window.start, window.start + probe_len),
                rate=4.0,
            )
            crop = detect_letterbox(frames)
            entries.append(
                ManifestEntry(
                    asset_id=asset.id,
                    uri=str(path),
                    start=window.start,
                    end=window.end,
                    crop=(crop.left, crop.top, crop.right, crop.bottom),
                )
            )
        click.echo(f"{asset.id}: {len(cuts)} cuts, {len(windows)} scenes kept")
    write_manifest(entries, out_path)
    click.echo(f"wrote {len(entries)} clips to {out_path}")


@main.command()
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--n", default=300, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--min-duration", default=8.0, show_default=True)
@click.option("--max-duration", default=12.0, show_default=True)
def synth(out_dir: Path, n: int, seed: int, min_duration: float, max_duration: float):
    """Render a synthetic verification corpus with exact onset ground truth."""
    truth = write_synthetic_corpus(out_dir, n=n, seed=seed, duration_range=(min_duration, max_duration))
    click.echo(f"rendered {n} videos; ground truth at {truth}")


@main.command("pretrain")
@click.option("--task", type=click.Choice(["speed", "context", "sort"]), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--epochs", default=20, show_default=True)
@click.option("--batch-size", default=32, show_default=True)
@click.option("--lr", default=1e-3, show_default=True)
@click.option("--profile", type=click.Choice(["desk", "full"]), default="desk", show_default=True)
@click.option("--seed", default=0, show_default=True)
def pretrain_cmd(task, media, out_dir, epochs, batch_size, lr, profile, seed):
    """Train one self-supervised objective on the corpus's pretrain split."""
    videos = load_corpus(media)
    splits = make_splits([v.id for v in videos], seed=seed)
    sources = [v.source for v in videos if splits[v.id] == Split.UNLABELED_PRETRAIN]
    cfg = PretrainConfig(
        encoder=_profile_config(profile),
        epochs=epochs,
        batch_size=batch_size,
        lr=lr,
        seed=seed,
        checkpoint_dir=Path(out_dir) / "ckpts",
    )
    encoder, _, report = pretrain(task, sources or [v.source for v in videos], cfg)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    export_weights(encoder, out_dir / "encoder.npz", config=cfg.encoder, extra_meta={"task": task})
    write_splits(splits, out_dir / "splits.json")
    (out_dir / "pretrain_report.json").write_text(
        json.dumps(
            {
                "task": task,
                "loss_curve": report.loss_curve,
                "final_accuracy": report.final_accuracy,
                "wall_time": report.wall_time,
            },
            indent=1,
        )
    )
    click.echo(f"final loss {report.loss_curve[-1]:.4f}, accuracy {report.final_accuracy:.3f}")


def _fit_head(media, encoder_path, out_path, seed, per_class, freeze, horizon=None):
    encoder, cfg = _encoder_from_ckpt(Path(encoder_path))
    videos = load_corpus(media)
    splits = make_splits([v.id for v in videos], seed=seed)
    train_videos = [v for v in videos if splits[v.id] == Split.LABELED_TRAIN] or videos
    samples = build_window_sets(train_videos, seed=seed + 1, per_class=per_class)
    if horizon is not None:
        durations = {v.id: v.duration for v in train_videos}
        onset_sets = {v.id: v.onsets for v in train_videos}
        samples = anticipation_windows(samples, durations, onset_sets, horizon)
    fcfg = FinetuneConfig(freeze_encoder=freeze, seed=seed)
    model, report = finetune(encoder, samples, fcfg)
    export_weights(model, out_path, config=cfg, extra_meta={"horizon": horizon})
    click.echo(f"train accuracy {report['accuracy']:.3f} -> {out_path}")


@main.command()
@click.option("--encoder", "encoder_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--per-class", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
def probe(encoder_path, media, out_path, per_class, seed):
    """Fit a linear probe on frozen features from labeled windows."""
    _fit_head(media, encoder_path, out_path, seed, per_class, freeze=True)


@main.command("finetune")
@click.option("--encoder", "encoder_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--per-class", default=2, show_default=True)
@click.option("--seed", default=0, show_default=True)
def finetune_cmd(encoder_path, media, out_path, per_class, seed):
    """Fine-tune the full backbone on labeled windows."""
    _fit_head(media, encoder_path, out_path, seed, per_class, freeze=False)


@main.command()
@click.option("--encoder", "encoder_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_path", type=click.Path(path_type=Path), required=True)
@click.option("--horizon", default=1.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
def anticipate(encoder_path, media, out_path, horizon, seed):
    """Train the anticipation head on labels shifted into the future."""
    _fit_head(media, encoder_path, out_path, seed, per_class=2, freeze=False, horizon=horizon)


@main.command()
@click.option("--kind", type=click.Choice(["motion", "mode", "middle", "chance"]), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--n-videos", default=20, show_default=True, help="motion baseline: videos to use")
def baseline(kind, media, seed, n_videos):
    """Evaluate one of the non-learned / weak baselines on the corpus."""
    videos = load_corpus(media)
    rng = np.random.default_rng(seed)
    samples = build_window_sets(videos[:n_videos] if kind == "motion" else videos, seed=seed)
    labels = np.array([s.label.value for s in samples])
    if kind == "middle":
        onset_sets = {v.id: v.onsets for v in videos}
        preds = {v.id: v.duration / 2.0 for v in videos}
        for thr in (1.0, 0.25):
            click.echo(f"middle prior accuracy@{thr}: {localization_accuracy(preds, onset_sets, thr):.1f}%")
        return
    if kind == "motion":
        clips = [s.source.to_array_source().clip(s.window.center, 16.0, 16) for s in samples]
        model, hists = motion_histogram_baseline([c.frames for c in clips], labels, seed=seed)
        acc, _ = classification_accuracy(model.predict(hists.astype(np.float32)), labels)
    else:
        priors = fixed_priors(labels, seed=seed)
        predictor = priors["mode_prior"] if kind == "mode" else priors["chance"]
        acc, _ = classification_accuracy(predictor.predict(len(labels)), labels)
    click.echo(f"{kind} baseline window accuracy: {acc:.1f}% over {len(labels)} windows")


@main.command()
@click.option("--model", "model_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
@click.option("--split", type=click.Choice(["test", "all"]), default="test", show_default=True)
@click.option("--tasks", default="cls,loc,ant", show_default=True)
@click.option("--horizon", default=1.5, show_default=True)
@click.option("--seed", default=0, show_default=True)
def evaluate(model_path, media, out_dir, split, tasks, horizon, seed):
    """Run the benchmark tasks for a trained model and emit the report."""
    encoder, cfg = _encoder_from_ckpt(Path(model_path), prefix="encoder.")
    model = FinetunedModel(encoder)
    import_weights(model, model_path)
    videos = load_corpus(media)
    if split == "test":
        assignment = make_splits([v.id for v in videos], seed=seed)
        videos = [v for v in videos if assignment[v.id] == Split.TEST] or videos

    wanted = set(tasks.split(","))
    task_results: dict = {}
    eval_windows = build_window_sets(videos, seed=seed + 2, per_class=2)
    feats, labels = window_features(encoder, eval_windows)
    with torch.no_grad():
        preds = model.head(torch.from_numpy(feats).float()).argmax(1).numpy()

    if "cls" in wanted:
        acc, confusion = classification_accuracy(preds, labels)
        task_results["classification"] = {"accuracy": acc, "n": len(labels), "confusion": confusion.tolist()}
    if "loc" in wanted:
        onset_sets = {v.id: v.onsets for v in videos}
        located = localize_corpus(model, videos)
        task_results["localization"] = {
            f"accuracy@{t}": localization_accuracy(located, onset_sets, t) for t in (1.0, 0.25)
        } | {"n": len(located)}
    if "ant" in wanted:
        durations = {v.id: v.duration for v in videos}
        onset_sets = {v.id: v.onsets for v in videos}
        ant = anticipation_windows(eval_windows, durations, onset_sets, horizon)
        if ant:
            afeats, alabels = window_features(encoder, ant)
            with torch.no_grad():
                apreds = model.head(torch.from_numpy(afeats).float()).argmax(1).numpy()
            aacc, _ = classification_accuracy(apreds, alabels)
            task_results["anticipation"] = {"accuracy": aacc, "n": len(alabels), "horizon": horizon}

    report = EvalReport(
        tasks=task_results,
        meta={"model_id": str(model_path), "split": split, "seed": seed},
        distributions={
            "clip_lengths": [v.duration for v in videos],
            "onset_fracs": [v.onsets.median_onset / v.duration for v in videos],
        },
    )
    files = emit_report(report, out_dir)
    for task_name, result in task_results.items():
        click.echo(f"{task_name}: {json.dumps({k: v for k, v in result.items() if k != 'confusion'})}")
    click.echo(f"report files: {', '.join(str(f) for f in files)}")


@main.command("report")
@click.option("--report", "report_path", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def report_cmd(report_path, out_dir):
    """Re-render plots from an existing report.json."""
    report = report_from_json(Path(report_path).read_text())
    files = emit_report(report, out_dir)
    click.echo(f"wrote {len(files)} files to {out_dir}")


@main.command()
@click.option("--config", "config_path", type=click.Path(exists=True, path_type=Path), required=True)
def run(config_path):
    """Run the full pipeline from a declarative job config (cached stages)."""
    artifacts = run_pipeline(JobConfig.load(config_path))
    for name, value in artifacts.items():
        click.echo(f"{name}: {value}")


@main.command()
@click.option("--media", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--store", "store_path", type=click.Path(path_type=Path), default=None,
              help="defaults to $FUMBLE_STORE or <media>/annotations.jsonl")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8008, show_default=True)
@click.option("--static", "static_dir", type=click.Path(path_type=Path), default=None,
              help="frontend bundle to serve at /")
def serve(media, store_path, host, port, static_dir):
    """Start the annotation service."""
    import uvicorn

    from fumble.service.api import ServiceConfig, create_app

    store_path = store_path or os.environ.get("FUMBLE_STORE") or Path(media) / "annotations.jsonl"
    config = ServiceConfig.from_media_dir(media, store_path, static_dir=static_dir)
    click.echo(f"serving {len(config.videos)} videos; store at {store_path}")
    uvicorn.run(create_app(config), host=host, port=port)


if __name__ == "__main__":
    main()
