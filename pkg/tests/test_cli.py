import json

import pytest

from cli import build_parser, main
from encoders import load_encoded


@pytest.fixture
def xor_config_file(xor_config, tmp_path):
    path = tmp_path / "xor.json"
    path.write_text(json.dumps(xor_config.model_dump(mode='json')))
    return str(path)


def test_parser_requires_a_command():
    with pytest.raises(SystemExit) as exc:
        build_parser().parse_args([])
    assert exc.value.code == 2


def test_config_and_preset_are_exclusive():
    with pytest.raises(SystemExit):
        build_parser().parse_args(["train", "--preset", "xor", "--config", "x.json"])
    with pytest.raises(SystemExit):
        build_parser().parse_args(["train", "--preset", "not-a-preset"])


def test_train(test_db, xor_config_file, tmp_path, capsys):
    out_dir = tmp_path / "out"
    assert main(["train", "--config", xor_config_file, "--seed", "5", "--out-dir", str(out_dir)]) == 0
    assert "test accuracy" in capsys.readouterr().out

    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["config"]["seed"] == 5
    assert (out_dir / "metrics.csv").exists()
    assert (out_dir / "checkpoint_run0_fold0.json").exists()

    job = test_db.execute("SELECT status, kind FROM run_jobs").fetchone()
    assert (job["status"], job["kind"]) == ("completed", "train")


def test_eval_from_checkpoint(test_db, xor_config_file, tmp_path, capsys):
    train_dir = tmp_path / "train"
    assert main(["train", "--config", xor_config_file, "--out-dir", str(train_dir)]) == 0
    checkpoint = str(train_dir / "checkpoint_run0_fold0.json")

    eval_dir = tmp_path / "eval"
    assert main(["eval", "--checkpoint", checkpoint, "--out-dir", str(eval_dir)]) == 0
    assert "accuracy" in capsys.readouterr().out
    report = json.loads((eval_dir / "eval.json").read_text())
    assert report["checkpoint"] == checkpoint
    assert report["result"]["n_samples"] == 4


def test_eval_rejects_bare_checkpoint(tmp_path, capsys):
    bogus = tmp_path / "bogus.json"
    bogus.write_text("{}")
    assert main(["eval", "--checkpoint", str(bogus)]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_encode(xor_config_file, tmp_path):
    out_dir = tmp_path / "enc"
    assert main(["encode", "--config", xor_config_file, "--out-dir", str(out_dir)]) == 0
    samples, header = load_encoded(str(out_dir / "encoded_train.json"))
    assert header["n_inputs"] == 3
    assert [s.label for s in samples] == [0, 1, 1, 0]
    assert not (out_dir / "encoded_test.json").exists()


def test_sweep(test_db, xor_config_file, tmp_path, capsys):
    out_dir = tmp_path / "sweep"
    assert main(["sweep", "--config", xor_config_file, "--grid", "eta0=0.1,0.5", "--out-dir", str(out_dir)]) == 0
    assert "2 sweep point(s)" in capsys.readouterr().out
    assert (out_dir / "sweep.csv").exists()


def test_invalid_config_reports_error(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"dataset": "xor"}))
    assert main(["train", "--config", str(path)]) == 1
    assert "Invalid experiment config" in capsys.readouterr().err


def test_missing_dataset_reports_error(tmp_path, capsys):
    assert main(["encode", "--preset", "iris", "--data-dir", str(tmp_path)]) == 1
    assert capsys.readouterr().err.startswith("error:")


def test_train_requires_a_config_source(capsys):
    assert main(["train"]) == 1
    assert "train needs --config, --preset or --resume" in capsys.readouterr().err


def test_train_resumes_from_checkpoint(test_db, xor_config_file, tmp_path):
    first = tmp_path / "first"
    assert main(["train", "--config", xor_config_file, "--out-dir", str(first)]) == 0

    resumed = tmp_path / "resumed"
    assert main(["train", "--resume", str(first / "checkpoint_run0_fold0.json"), "--out-dir", str(resumed)]) == 0
    doc = json.loads((resumed / "checkpoint_run0_fold0.json").read_text())
    assert doc["optimizer"]["updates"] == 6
    assert doc["extra"]["epoch"] == 6
    summary = json.loads((resumed / "summary.json").read_text())
    assert summary["runs"][0]["start_iteration"] == 3


def test_train_from_cached_encoding(test_db, xor_config_file, tmp_path):
    encoded = tmp_path / "enc"
    assert main(["encode", "--config", xor_config_file, "--out-dir", str(encoded)]) == 0

    cached, fresh = tmp_path / "cached", tmp_path / "fresh"
    assert main(["train", "--config", xor_config_file, "--encoded", str(encoded), "--out-dir", str(cached)]) == 0
    assert main(["train", "--config", xor_config_file, "--out-dir", str(fresh)]) == 0

    cached_doc = json.loads((cached / "checkpoint_run0_fold0.json").read_text())
    fresh_doc = json.loads((fresh / "checkpoint_run0_fold0.json").read_text())
    assert cached_doc["extra"]["config"]["encoded_dir"] == str(encoded)
    assert cached_doc["network"]["weights"] == fresh_doc["network"]["weights"]
    assert "Using cached latency encoding" in (cached / "run.log").read_text()
