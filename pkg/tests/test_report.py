import numpy as np
import pytest

from fumble.evaluation.report import EvalReport, emit_report, report_from_json, report_to_json


def sample_report():
    return EvalReport(
        tasks={
            "classification": {
                "accuracy": 61.25,
                "n": 480,
                "confusion": [
                    [62.2, 10.2, 27.6],
                    [22.9, 43.9, 33.2],
                    [23.3, 9.3, 67.4],
                ],
            },
            "localization": {"accuracy@1.0": 65.3, "accuracy@0.25": 36.6, "n": 120},
        },
        meta={"model_id": "enc-1", "split": "test", "seed": 0},
        distributions={
            "clip_lengths": [7.6, 9.4, 8.0, 10.5],
            "onset_fracs": [0.4, 0.55, 0.62],
            "worker_stdevs": [0.3, 0.5, 0.7],
        },
    )


def test_same_report_byte_identical(tmp_path):
    r = sample_report()
    a = emit_report(r, tmp_path / "a")[0].read_bytes()
    b = emit_report(r, tmp_path / "b")[0].read_bytes()
    assert a == b


def test_roundtrip_lossless():
    r = sample_report()
    back = report_from_json(report_to_json(r))
    assert back.tasks == r.tasks
    assert back.meta == r.meta
    assert back.distributions == r.distributions


def test_numpy_values_normalized():
    r = EvalReport(tasks={"t": {"accuracy": np.float64(50.0), "confusion": 100.0 * np.eye(3)}})
    assert isinstance(r.tasks["t"]["accuracy"], float)
    assert isinstance(r.tasks["t"]["confusion"], list)
    report_from_json(report_to_json(r))  # serializes cleanly


def test_emit_renders_confusion_and_hists(tmp_path):
    files = emit_report(sample_report(), tmp_path)
    names = {f.name for f in files}
    assert "report.json" in names
    assert "confusion_classification.png" in names
    assert "clip_length_hist.png" in names
    assert "onset_position_hist.png" in names
    assert "worker_stdev_hist.png" in names
    for f in files:
        assert f.stat().st_size > 0


def test_missing_sections_omitted(tmp_path):
    r = EvalReport(tasks={"localization": {"accuracy@1.0": 50.0}}, meta={"seed": 1})
    files = emit_report(r, tmp_path)
    assert {f.name for f in files} == {"report.json"}
    report_from_json((tmp_path / "report.json").read_text())


def test_bad_confusion_rows_rejected(tmp_path):
    r = EvalReport(tasks={"t": {"confusion": [[50.0, 10.0, 10.0]] * 3}})
    with pytest.raises(ValueError):
        emit_report(r, tmp_path)


def test_unknown_schema_rejected():
    with pytest.raises(ValueError):
        report_from_json('{"schema": "bogus/9", "tasks": {}, "meta": {}}')
