import csv
import json

import pytest

from qnnx.cli import main


def _rows(path):
    with open(path) as fh:
        assert fh.readline().startswith("# config_hash=")
        return list(csv.reader(fh))


def test_train_writes_artifacts(tmp_path):
    assert main(["train", "--variant", "qnn-a", "--function", "f1v3", "--seed", "7",
                 "--epochs", "20", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["seed"] == 7 and "wall_seconds" not in report
    assert "wall_seconds" in json.loads((tmp_path / "timing.json").read_text())
    rows = _rows(tmp_path / "fit.csv")
    assert rows[0] == ["x0", "y_true", "y_pred"] and len(rows) == 201
    assert (tmp_path / "fit.svg").read_text().startswith("<?xml")


def test_train_reports_identical_across_runs(tmp_path):
    args = ["train", "--variant", "qnn-exc2", "--function", "f1v1", "--epochs", "10"]
    main(args + ["--out", str(tmp_path / "a")])
    main(args + ["--out", str(tmp_path / "b")])
    for name in ("report.json", "fit.csv", "fit.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_zero_epochs(tmp_path):
    assert main(["train", "--variant", "qnn-a", "--function", "f1v3", "--epochs", "0", "--out", str(tmp_path)]) == 0
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["train_mae"] == report["initial_train_mae"]


@pytest.mark.parametrize("argv", [
    ["train", "--variant", "bogus", "--function", "f1v1"],
    ["train", "--variant", "qnn-a"],
    ["train", "--variant", "qnn-a", "--function", "f1v1", "--lr", "-1"],
    ["frobnicate"],
])
def test_config_errors_exit_2(argv, tmp_path):
    assert main(argv + (["--out", str(tmp_path)] if argv[0] == "train" else [])) == 2


def test_config_file_with_override(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"variant": "qnn-a", "function": "f1v1", "epochs": 3, "seed": 5}))
    assert main(["train", "--config", str(cfg), "--seed", "6", "--out", str(tmp_path / "o")]) == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["seed"] == 6 and report["epochs"] == 3
    cfg.write_text(json.dumps({"variant": "qnn-a", "function": "f1v1", "colour": "red"}))
    assert main(["train", "--config", str(cfg)]) == 2


def test_divergence_exit_3(tmp_path, monkeypatch):
    import qnnx.trainer as tr
    monkeypatch.setattr(tr, "loss_and_gradient", lambda *a, **k: (float("inf"), None))
    assert main(["train", "--variant", "qnn-a", "--function", "f1v1", "--out", str(tmp_path)]) == 3


def test_ablate_single_cell(tmp_path):
    assert main(["ablate", "--function", "f1v1", "--variants", "qnn-a", "--seeds", "0",
                 "--epochs", "5", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "table1.csv")
    assert rows[0] == ["variant", "function", "seed", "train_mae", "test_mae", "ratio_vs_qnn_a"]
    assert len(rows) == 2 and rows[1][5] == "1"


def test_oracle_rank_rows(tmp_path):
    assert main(["oracle", "--only", "rank", "--max-qubits", "3", "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "oracle.csv")
    assert [r[1] for r in rows[1:]] == ["3", "9", "27"]


def test_oracle_default_passes(tmp_path):
    assert main(["oracle", "--out", str(tmp_path)]) == 0


def test_oracle_dropped_basis_fails(tmp_path):
    assert main(["oracle", "--only", "span", "--drop-basis", "sin x1 sin x2", "--trials", "5",
                 "--out", str(tmp_path)]) == 1
    assert main(["oracle", "--drop-basis", "tan x", "--out", str(tmp_path)]) == 2


def test_variance_fixed_seed(tmp_path):
    assert main(["variance", "--variant", "qnn-a", "--function", "f1v1", "--runs", "2", "--fixed-seed",
                 "--epochs", "5", "--out", str(tmp_path)]) == 0
    with open(tmp_path / "hist.csv") as fh:
        assert fh.readline().split()[-1] == "variance=0"
    assert (tmp_path / "hist.svg").exists() and (tmp_path / "runs.csv").exists()
