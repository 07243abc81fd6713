import json

import pytest

from fumble.errors import ConfigError
from fumble.evaluation.report import report_from_json
from fumble.service.pipeline import JobConfig, run_pipeline


def tiny_config(tmp_path):
    return JobConfig(
        workdir=tmp_path / "work",
        seed=0,
        profile="desk",
        synth={"n": 6, "duration_range": (5.0, 6.0)},
        pretrain={"task": "speed", "epochs": 1, "batch_size": 4, "samples_per_video": 2},
        probe={"per_class": 2},
        evaluate={},
    )


@pytest.mark.slow
def test_pipeline_end_to_end_and_cache(tmp_path):
    cfg = tiny_config(tmp_path)
    artifacts = run_pipeline(cfg)
    assert artifacts["report_json"].exists()
    report = report_from_json(artifacts["report_json"].read_text())
    assert "classification" in report.tasks
    assert "localization" in report.tasks
    assert set(artifacts["cache_hits"].values()) == {False}

    again = run_pipeline(tiny_config(tmp_path))
    assert all(again["cache_hits"].values()), again["cache_hits"]
    assert again["report_json"] == artifacts["report_json"]


def test_missing_media_dir_fails_before_work(tmp_path):
    cfg_path = tmp_path / "job.json"
    cfg_path.write_text(
        json.dumps(
            {
                "workdir": str(tmp_path / "w"),
                "synth": {"media_dir": str(tmp_path / "does_not_exist")},
            }
        )
    )
    with pytest.raises(ConfigError):
        JobConfig.load(cfg_path)
    assert not (tmp_path / "w").exists()


def test_bad_profile_rejected(tmp_path):
    cfg = tiny_config(tmp_path)
    cfg.profile = "gpu-farm"
    with pytest.raises(ConfigError):
        run_pipeline(cfg)
