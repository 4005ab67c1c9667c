"""End-to-end command line flows, driven in-process through main()."""

import numpy as np
import pytest

from ldbkit.cli import main
from ldbkit.dataset import load_dataset, read_csv, save_dataset
from ldbkit.experiment import METHOD_ROWS, parse_csv

EX3_GEN = ["gen", "--example", "ex3", "--seed", "0", "--realization", "0",
           "--train-per-class", "15", "--test-per-class", "5"]


@pytest.fixture(scope="module")
def ex3_files(tmp_path_factory):
    root = tmp_path_factory.mktemp("cli")
    train = root / "train.ldb"
    test = root / "test.csv"
    rc = main(EX3_GEN + ["--out-train", str(train), "--out-test", str(test)])
    assert rc == 0
    return train, test


def test_gen_writes_both_formats(ex3_files, capsys):
    train, test = ex3_files
    tr = load_dataset(str(train))
    te = read_csv(str(test))
    assert tr.signals.shape == (45, 32)
    assert te.signals.shape == (15, 32)
    assert tr.class_order == te.class_order == (1, 2, 3)


def test_gen_matches_library(ex3_files, tmp_path):
    from ldbkit.datagen import RngSpec, gen_experiment
    train, _ = ex3_files
    want, _ = gen_experiment("ex3", 0, RngSpec(0), 15, 5)
    got = load_dataset(str(train))
    assert np.array_equal(got.signals, want.signals)
    assert np.array_equal(got.labels, want.labels)


def test_train_then_classify(ex3_files, tmp_path, capsys):
    train, test = ex3_files
    model = tmp_path / "model.json"
    rc = main(["train", "--data", str(train), "--measure", "lambda2",
               "--mode", "mldb", "--taps", "6", "--mu", "0.2", "--trace",
               "--out", str(model)])
    out = capsys.readouterr().out
    assert rc == 0
    assert "member oracle(s)" in out
    assert "== member: class 1 vs rest ==" in out

    preds = tmp_path / "preds.txt"
    rc = main(["classify", "--model", str(model), "--data", str(test),
               "--out", str(preds), "--score"])
    out = capsys.readouterr().out
    assert rc == 0
    lines = preds.read_text().splitlines()
    assert len(lines) == 15
    assert "rate" in out and "error" in out


def test_classify_stdout_default(ex3_files, tmp_path, capsys):
    train, test = ex3_files
    model = tmp_path / "model.json"
    main(["train", "--data", str(train), "--measure", "lambda3",
          "--mode", "ldb", "--taps", "6", "--mu", "0.2", "--out", str(model)])
    capsys.readouterr()
    rc = main(["classify", "--model", str(model), "--data", str(test)])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 15


def test_experiment_command(tmp_path, capsys):
    cfg = tmp_path / "run.ini"
    cfg.write_text("[experiment]\nexample = ex3\nseed = 0\n"
                   "realizations = 1\ntrain_per_class = 10\n"
                   "test_per_class = 5\n")
    outdir = tmp_path / "out"
    rc = main(["experiment", "--config", str(cfg), "--out", str(outdir),
               "--quiet"])
    assert rc == 0
    text = capsys.readouterr().out
    assert (outdir / "report.txt").read_text() == text
    rows = parse_csv((outdir / "report.csv").read_text())
    assert set(rows) == set(METHOD_ROWS)


def test_dump_filters(capsys):
    rc = main(["dump-filters", "--taps", "6"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "6 taps" in out
    taps = [float(v) for v in out.splitlines()[1].split()[1:]]
    assert len(taps) == 6
    assert sum(taps) == pytest.approx(np.sqrt(2.0), abs=1e-12)


def test_data_error_exits_1(tmp_path, capsys):
    bad = tmp_path / "bad.ldb"
    bad.write_bytes(b"not a dataset")
    rc = main(["train", "--data", str(bad), "--measure", "lambda1",
               "--mode", "ldb", "--out", str(tmp_path / "m.json")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_missing_file_exits_1(tmp_path, capsys):
    rc = main(["classify", "--model", str(tmp_path / "no.json"),
               "--data", str(tmp_path / "no.csv")])
    assert rc == 1
    assert "error:" in capsys.readouterr().err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["train", "--measure", "lambda9"])
    assert exc.value.code == 2
