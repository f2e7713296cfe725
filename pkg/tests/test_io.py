import numpy as np
import pytest

from dqc.baselines import fit_centroid, fit_cqc, fit_median
from dqc.classifier import DqcConfig, fit
from dqc.datasets import LabeledDataset
from dqc.io import (
    format_error_table,
    load_model,
    read_dataset,
    read_features,
    save_model,
    write_benchmark_report,
    write_dataset,
    write_labels,
    write_theta_curve,
)
from dqc.simbench import ScenarioConfig, run_benchmark


def small_dataset(seed=0, n=24, p=3):
    rng = np.random.default_rng(seed)
    y = np.r_[np.ones(n // 2, int), np.full(n - n // 2, 2, int)]
    return LabeledDataset(rng.standard_normal((n, p)) + y[:, None], y)


class TestDatasetRoundTrip:
    def test_exact_round_trip(self, tmp_path):
        data = small_dataset()
        path = tmp_path / "d.csv"
        write_dataset(path, data)
        back = read_dataset(path)
        assert np.array_equal(back.X, data.X)
        assert np.array_equal(back.y, data.y)

    def test_custom_label_column(self, tmp_path):
        data = small_dataset()
        path = tmp_path / "d.csv"
        write_dataset(path, data, label_col="group")
        back = read_dataset(path, label_col="group")
        assert np.array_equal(back.y, data.y)
        with pytest.raises(ValueError, match="label column 'label' not found"):
            read_dataset(path)

    def test_byte_identical_rewrites(self, tmp_path):
        data = small_dataset(3)
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        write_dataset(a, data)
        write_dataset(b, data)
        assert a.read_bytes() == b.read_bytes()

    def test_non_numeric_cell_reported_with_position(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,label\n1.0,2.0,1\noops,3.0,2\n")
        with pytest.raises(ValueError, match="row 3.*'x1'"):
            read_dataset(path)

    def test_missing_value_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,label\n1.0,1\n,2\n")
        with pytest.raises(ValueError, match="row 3"):
            read_dataset(path)

    def test_ragged_row_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,x2,label\n1.0,2.0,1\n1.0,2\n")
        with pytest.raises(ValueError, match="row 3 has 2 fields"):
            read_dataset(path)

    def test_non_integer_label_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("x1,label\n1.0,1.5\n2.0,2\n")
        with pytest.raises(ValueError, match="not an integer"):
            read_dataset(path)

    def test_read_features_without_label_column(self, tmp_path):
        path = tmp_path / "f.csv"
        path.write_text("a,b\n1.0,2.0\n3.0,4.0\n")
        X, labels = read_features(path)
        assert np.array_equal(X, [[1.0, 2.0], [3.0, 4.0]])
        assert labels is None

    def test_read_features_with_label_column(self, tmp_path):
        data = small_dataset(5)
        path = tmp_path / "f.csv"
        write_dataset(path, data)
        X, labels = read_features(path)
        assert np.array_equal(X, data.X)
        assert np.array_equal(labels, data.y)

    def test_labels_file(self, tmp_path):
        path = tmp_path / "labels.csv"
        write_labels(path, np.array([1, 2, 2, 1]))
        assert path.read_text() == "label\n1\n2\n2\n1\n"


class TestModelRoundTrip:
    def test_dqc_round_trip_bit_identical(self, tmp_path):
        data = small_dataset(1)
        model = fit(data, DqcConfig(theta_grid=(0.4, 0.5), directions_per_theta=15, seed=2))
        path = tmp_path / "model.json"
        save_model(path, model)
        back = load_model(path)
        assert back.thetas == model.thetas
        assert np.array_equal(back.directions.vectors, model.directions.vectors)
        assert np.array_equal(back.weights, model.weights)
        assert np.array_equal(back.class_quantiles, model.class_quantiles)
        assert np.array_equal(back.priors, model.priors)
        assert back.config == model.config
        pts = np.random.default_rng(0).standard_normal((50, data.p))
        assert np.array_equal(back.predict(pts), model.predict(pts))
        assert np.array_equal(back.scores(pts), model.scores(pts))

    @pytest.mark.parametrize("fitter", [fit_centroid, fit_median, lambda d: fit_cqc(d, [0.3, 0.5])])
    def test_baseline_round_trip(self, tmp_path, fitter):
        data = small_dataset(2)
        model = fitter(data)
        path = tmp_path / "model.json"
        save_model(path, model)
        back = load_model(path)
        assert back.kind == model.kind
        assert np.array_equal(back.centers, model.centers)
        assert back.theta == model.theta
        pts = np.random.default_rng(1).standard_normal((40, data.p))
        assert np.array_equal(back.predict(pts), model.predict(pts))

    def test_version_field_checked(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text('{"format_version": 99, "kind": "dqc"}')
        with pytest.raises(ValueError, match="unsupported model format version"):
            load_model(path)

    def test_garbage_rejected(self, tmp_path):
        path = tmp_path / "model.json"
        path.write_text("not json at all")
        with pytest.raises(ValueError, match="not a valid model file"):
            load_model(path)


class TestReportsAndCurves:
    def test_theta_curve_format(self, tmp_path):
        path = tmp_path / "curve.csv"
        write_theta_curve(path, np.array([[0.25, 0.6], [0.5, 0.7]]))
        assert path.read_text() == "theta,psi\n0.25,0.6\n0.5,0.7\n"

    def test_benchmark_report_round_figures(self, tmp_path):
        cfg = ScenarioConfig(scenario=1, n=20, p=2, shift=60.0, replications=2, seed=1)
        report = run_benchmark(cfg, ("centroid", "median"))
        path = tmp_path / "rep.csv"
        write_benchmark_report(path, report)
        text = path.read_text()
        assert "classifier,replication,error,status" in text
        assert text.count("centroid,") >= 2
        assert "# summary" in text

    def test_report_written_twice_is_byte_identical(self, tmp_path):
        cfg = ScenarioConfig(scenario=1, n=20, p=2, shift=60.0, replications=2, seed=1)
        a = run_benchmark(cfg, ("centroid",))
        b = run_benchmark(cfg, ("centroid",))
        pa, pb = tmp_path / "a.csv", tmp_path / "b.csv"
        write_benchmark_report(pa, a)
        write_benchmark_report(pb, b)
        assert pa.read_bytes() == pb.read_bytes()

    def test_error_table_layout(self):
        cfg10 = ScenarioConfig(scenario=1, n=20, p=10, shift=60.0, replications=1, seed=2)
        cfg20 = ScenarioConfig(scenario=1, n=20, p=20, shift=60.0, replications=1, seed=2)
        reports = [run_benchmark(c, ("centroid", "median")) for c in (cfg10, cfg20)]
        table = format_error_table(reports)
        lines = table.splitlines()
        assert lines[0].split() == ["classifier", "p=10", "p=20"]
        assert lines[1].split()[0] == "centroid"
        assert lines[2].split()[0] == "median"
