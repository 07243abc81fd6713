import hashlib

import numpy as np
import pytest
import torch

from fumble.benchmark import anticipation_windows, build_window_sets, load_corpus, window_features
from fumble.data.synthetic import write_synthetic_corpus
from fumble.encoder.model import EncoderConfig, build_encoder
from fumble.pretext.train import PretrainConfig, TrainingDiverged, pretrain
from fumble.transfer.finetune import FinetuneConfig, finetune
from fumble.transfer.probe import fit_linear_probe


SMOKE_CONFIG = EncoderConfig(stage_widths=(4, 8, 8, 16), stage_blocks=(1, 1, 1, 1), frames=8, size=32)


@pytest.fixture(scope="module")
def corpus(tmp_path_factory):
    out = tmp_path_factory.mktemp("ft_media")
    write_synthetic_corpus(out, n=8, seed=1, duration_range=(6.0, 7.0), size=32)
    return load_corpus(out, clip_size=32)


def _state_digest(module):
    h = hashlib.sha256()
    for name, tensor in sorted(module.state_dict().items()):
        h.update(name.encode())
        h.update(tensor.numpy().tobytes())
    return h.hexdigest()


def test_frozen_path_matches_probe_and_leaves_encoder_untouched(corpus):
    encoder = build_encoder(SMOKE_CONFIG, seed=0)
    samples = build_window_sets(corpus, seed=2, per_class=2)
    before = _state_digest(encoder)
    model, report = finetune(encoder, samples, FinetuneConfig(freeze_encoder=True, seed=0))
    assert _state_digest(encoder) == before  # probe isolation

    feats, labels = window_features(encoder, samples)
    probe = fit_linear_probe(feats, labels, lam=1e-4, balanced=True)
    probe_acc = (probe.predict(feats) == labels).mean()
    assert report["accuracy"] == pytest.approx(probe_acc, abs=1e-6)
    with torch.no_grad():
        head_pred = model.head(torch.from_numpy(feats).float()).argmax(1).numpy()
    assert (head_pred == probe.predict(feats)).mean() > 0.99


def test_full_finetune_runs_and_checkpoints(corpus, tmp_path):
    encoder = build_encoder(SMOKE_CONFIG, seed=0)
    samples = build_window_sets(corpus, seed=3, per_class=2)
    cfg = FinetuneConfig(epochs=2, batch_size=8, lr=1e-3, seed=0, checkpoint_dir=tmp_path / "ck")
    model, report = finetune(encoder, samples, cfg)
    assert len(report["loss_curve"]) == 2
    assert np.isfinite(report["loss_curve"]).all()
    assert sorted(p.name for p in (tmp_path / "ck").iterdir()) == [
        "finetune_epoch000.npz",
        "finetune_epoch001.npz",
    ]


def test_anticipation_horizon_zero_is_classification(corpus):
    samples = build_window_sets(corpus, seed=4, per_class=2)
    durations = {v.id: v.duration for v in corpus}
    onset_sets = {v.id: v.onsets for v in corpus}
    shifted = anticipation_windows(samples, durations, onset_sets, horizon=0.0)
    assert len(shifted) == len(samples)
    for a, b in zip(samples, shifted):
        assert a.window == b.window
        assert a.label == b.label


def test_anticipation_drops_out_of_range(corpus):
    samples = build_window_sets(corpus, seed=5, per_class=2)
    durations = {v.id: v.duration for v in corpus}
    onset_sets = {v.id: v.onsets for v in corpus}
    shifted = anticipation_windows(samples, durations, onset_sets, horizon=2.0)
    assert 0 < len(shifted) < len(samples)
    for s in shifted:
        assert s.window.end + 2.0 <= durations[s.window.asset_id] + 1e-9


def test_pretrain_divergence_aborts_with_checkpoint(corpus, tmp_path):
    cfg = PretrainConfig(
        encoder=SMOKE_CONFIG,
        epochs=3,
        batch_size=4,
        lr=1e14,  # guaranteed blow-up
        seed=0,
        checkpoint_dir=tmp_path / "ck",
    )
    sources = [v.source for v in corpus[:4]]
    with pytest.raises(TrainingDiverged):
        pretrain("speed", sources, cfg)


def test_pretrain_smoke_speed_task(corpus, tmp_path):
    cfg = PretrainConfig(encoder=SMOKE_CONFIG, epochs=1, batch_size=8, samples_per_video=2, seed=0,
                         checkpoint_dir=tmp_path / "ck")
    encoder, heads, report = pretrain("speed", [v.source for v in corpus], cfg)
    assert report.epochs == 1
    assert len(report.loss_curve) == 1
    assert np.isfinite(report.loss_curve).all()
    assert (tmp_path / "ck" / "ckpt_epoch000.npz").exists()
    assert 0.0 <= report.final_accuracy <= 1.0
