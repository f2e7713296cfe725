import numpy as np
import pytest

from dqc import cli
from dqc.datasets import LabeledDataset
from dqc.errors import NumericalError
from dqc.io import read_dataset, write_dataset


def read_label_column(path):
    lines = path.read_text().splitlines()
    assert lines[0] == "label"
    return np.array([int(x) for x in lines[1:]])


def blob_dataset(seed=0, n=30, p=4, gap=8.0):
    rng = np.random.default_rng(seed)
    y = np.r_[np.ones(n // 2, int), np.full(n - n // 2, 2, int)]
    return LabeledDataset(rng.standard_normal((n, p)) * 0.3 + gap * (y[:, None] - 1), y)


class TestSimulate:
    def test_byte_identical_given_seed(self, tmp_path):
        args = "simulate --scenario 1 --n 20 --p 3 --seed 9 --out".split()
        assert cli.main(args + [str(tmp_path / "a")]) == 0
        assert cli.main(args + [str(tmp_path / "b")]) == 0
        assert (tmp_path / "a_train.csv").read_bytes() == (tmp_path / "b_train.csv").read_bytes()
        assert (tmp_path / "a_test.csv").read_bytes() == (tmp_path / "b_test.csv").read_bytes()

    def test_files_parse_back(self, tmp_path):
        assert cli.main(["simulate", "--scenario", "3", "--n", "16", "--p", "2", "--out", str(tmp_path / "s")]) == 0
        train = read_dataset(tmp_path / "s_train.csv")
        assert train.n == 16 and train.p == 2


class TestTrainPredict:
    def test_round_trip_on_separable_blobs(self, tmp_path):
        data = blob_dataset()
        data_path = tmp_path / "train.csv"
        write_dataset(data_path, data)
        model_path = tmp_path / "model.json"
        assert cli.main(["train", "--data", str(data_path), "--out", str(model_path), "--theta-grid", "0.5", "--seed", "1"]) == 0
        pred_path = tmp_path / "pred.csv"
        assert cli.main(["predict", "--model", str(model_path), "--data", str(data_path), "--out", str(pred_path)]) == 0
        labels = read_label_column(pred_path)
        assert np.array_equal(labels, data.y)

    @pytest.mark.parametrize("name", ["centroid", "median", "cqc"])
    def test_baseline_training(self, tmp_path, name):
        data = blob_dataset(1)
        data_path = tmp_path / "train.csv"
        write_dataset(data_path, data)
        model_path = tmp_path / f"{name}.json"
        assert cli.main(["train", "--data", str(data_path), "--classifier", name, "--out", str(model_path)]) == 0
        pred_path = tmp_path / "pred.csv"
        assert cli.main(["predict", "--model", str(model_path), "--data", str(data_path), "--out", str(pred_path)]) == 0
        assert np.array_equal(read_label_column(pred_path), data.y)

    def test_dimension_mismatch_fails_before_output(self, tmp_path, capsys):
        data = blob_dataset(2)
        write_dataset(tmp_path / "train.csv", data)
        assert cli.main(["train", "--data", str(tmp_path / "train.csv"), "--out", str(tmp_path / "m.json"), "--theta-grid", "0.5"]) == 0
        narrow = tmp_path / "narrow.csv"
        narrow.write_text("x1,x2\n1.0,2.0\n")
        out = tmp_path / "never.csv"
        assert cli.main(["predict", "--model", str(tmp_path / "m.json"), "--data", str(narrow), "--out", str(out)]) == 1
        assert not out.exists()
        assert "dimension mismatch" in capsys.readouterr().err


class TestExitCodes:
    def test_malformed_cell_is_exit_one(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,label\n1.0,1\nnope,2\n")
        assert cli.main(["train", "--data", str(bad), "--out", str(tmp_path / "m.json")]) == 1
        assert "non-numeric" in capsys.readouterr().err

    def test_missing_label_column_is_exit_one(self, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("x1,x2\n1.0,2.0\n")
        assert cli.main(["train", "--data", str(bad), "--out", str(tmp_path / "m.json")]) == 1

    def test_missing_file_is_exit_one(self, tmp_path):
        assert cli.main(["train", "--data", str(tmp_path / "absent.csv"), "--out", str(tmp_path / "m.json")]) == 1

    def test_usage_error_is_exit_one(self):
        with pytest.raises(SystemExit) as exc:
            cli.main(["train", "--bogus"])
        assert exc.value.code == 1

    def test_numerical_failure_is_exit_two(self, tmp_path, monkeypatch, capsys):
        def explode(*a, **k):
            raise NumericalError("synthetic breakdown")

        monkeypatch.setattr(cli.theory, "psi_curve", explode)
        code = cli.main(["theory-curve", "--dist-a", "normal:0,1", "--dist-b", "normal:1,1", "--out", str(tmp_path / "c.csv")])
        assert code == 2
        assert "numerical error" in capsys.readouterr().err


class TestLoo:
    def test_prints_error_rate(self, tmp_path, capsys):
        data = blob_dataset(3, n=16)
        write_dataset(tmp_path / "d.csv", data)
        assert cli.main(["loo", "--data", str(tmp_path / "d.csv"), "--classifier", "centroid"]) == 0
        assert "loo_error=0.0" in capsys.readouterr().out


class TestTheoryCurve:
    def test_writes_requested_grid(self, tmp_path):
        out = tmp_path / "curve.csv"
        assert cli.main(["theory-curve", "--dist-a", "uniform:0,1", "--dist-b", "uniform:0.5,1.5", "--grid-points", "9", "--out", str(out)]) == 0
        rows = out.read_text().strip().splitlines()
        assert rows[0] == "theta,psi"
        assert len(rows) == 10
        values = np.array([float(r.split(",")[1]) for r in rows[1:]])
        assert np.allclose(values, 0.75, atol=1e-9)

    def test_unknown_distribution_is_exit_one(self, tmp_path):
        assert cli.main(["theory-curve", "--dist-a", "cauchy:0", "--dist-b", "normal:0,1", "--out", str(tmp_path / "c.csv")]) == 1


class TestAugment:
    def test_widens_dataset(self, tmp_path):
        data = blob_dataset(4, n=12, p=5)
        write_dataset(tmp_path / "d.csv", data)
        out = tmp_path / "wide.csv"
        assert cli.main(["augment", "--data", str(tmp_path / "d.csv"), "--extra", "45", "--seed", "3", "--out", str(out)]) == 0
        wide = read_dataset(out)
        assert wide.p == 50
        assert np.array_equal(wide.y, data.y)


class TestBenchmarkCommand:
    def test_report_and_summary(self, tmp_path, capsys):
        out = tmp_path / "rep.csv"
        code = cli.main(
            ["benchmark", "--scenario", "1", "--n", "20", "--p", "3", "--shift", "60", "--reps", "2",
             "--seed", "4", "--classifiers", "centroid,median", "--out", str(out)]
        )
        assert code == 0
        assert "centroid" in capsys.readouterr().out
        text = out.read_text()
        assert "# scenario=1 n=20 p=3" in text
        assert text.count(",ok") == 4


class TestConfigFile:
    def test_file_supplies_values_and_flags_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("scenario = 1\nn = 20\np = 3\nshift = 60\nreps = 2\nseed = 4\nclassifiers = centroid\nout = " + str(tmp_path / "a.csv") + "\n")
        assert cli.main(["benchmark", "--config", str(cfg)]) == 0
        assert (tmp_path / "a.csv").exists()
        # flag wins over the file
        assert cli.main(["benchmark", "--config", str(cfg), "--out", str(tmp_path / "b.csv")]) == 0
        assert (tmp_path / "b.csv").exists()
        a = (tmp_path / "a.csv").read_text()
        b = (tmp_path / "b.csv").read_text()
        assert a == b

    def test_bad_config_line_is_exit_one(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("scenario 1\n")
        assert cli.main(["benchmark", "--config", str(cfg)]) == 1
        assert "expected 'key = value'" in capsys.readouterr().err
