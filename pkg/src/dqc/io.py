"""File formats: delimited datasets, versioned model files, reports, curves.

All numeric output is written with ``repr`` (shortest round-trip form), so
files are byte-identical across runs with the same inputs and parse back to
exactly the same float64 values.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict

import numpy as np

from .baselines import BaselineModel
from .classifier import DqcConfig, TrainedDQC
from .datasets import LabeledDataset
from .directions import DirectionSet
from .simbench import BenchmarkReport

__all__ = [
    "MODEL_FORMAT_VERSION",
    "read_dataset",
    "read_features",
    "write_dataset",
    "write_labels",
    "save_model",
    "load_model",
    "write_theta_curve",
    "write_benchmark_report",
    "format_error_table",
]

MODEL_FORMAT_VERSION = 1


def _fmt(x: float) -> str:
    return repr(float(x))


def _parse_number(value: str, row: int, column: str) -> float:
    try:
        v = float(value)
    except (TypeError, ValueError):
        raise ValueError(f"non-numeric value {value!r} at row {row}, column {column!r}") from None
    if not np.isfinite(v):
        raise ValueError(f"missing or non-finite value {value!r} at row {row}, column {column!r}")
    return v


def read_dataset(path, label_col: str = "label") -> LabeledDataset:
    """Read a delimited dataset: header row, numeric features, one label column."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        if label_col not in header:
            raise ValueError(f"{path}: label column {label_col!r} not found (columns: {', '.join(header)})")
        label_pos = header.index(label_col)
        feature_pos = [i for i in range(len(header)) if i != label_pos]
        rows, labels = [], []
        for r, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise ValueError(f"{path}: row {r} has {len(record)} fields, expected {len(header)}")
            raw_label = _parse_number(record[label_pos], r, label_col)
            if raw_label != round(raw_label):
                raise ValueError(f"{path}: label {record[label_pos]!r} at row {r} is not an integer")
            labels.append(int(raw_label))
            rows.append([_parse_number(record[i], r, header[i]) for i in feature_pos])
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return LabeledDataset(np.array(rows, dtype=float), np.array(labels, dtype=int))


def read_features(path, label_col: str = "label"):
    """Read a delimited feature matrix; the label column is optional.

    Returns ``(X, labels)`` where ``labels`` is None when the file has no
    label column (the usual case for prediction inputs).
    """
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ValueError(f"{path}: empty file") from None
        header = [h.strip() for h in header]
        label_pos = header.index(label_col) if label_col in header else None
        feature_pos = [i for i in range(len(header)) if i != label_pos]
        if not feature_pos:
            raise ValueError(f"{path}: no feature columns")
        rows, labels = [], []
        for r, record in enumerate(reader, start=2):
            if len(record) != len(header):
                raise ValueError(f"{path}: row {r} has {len(record)} fields, expected {len(header)}")
            if label_pos is not None:
                labels.append(int(_parse_number(record[label_pos], r, label_col)))
            rows.append([_parse_number(record[i], r, header[i]) for i in feature_pos])
    if not rows:
        raise ValueError(f"{path}: no data rows")
    X = np.array(rows, dtype=float)
    return X, (np.array(labels, dtype=int) if label_pos is not None else None)


def write_dataset(path, data: LabeledDataset, label_col: str = "label") -> None:
    """Write a dataset as delimited text with features x1..xp plus the label column."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([f"x{j + 1}" for j in range(data.p)] + [label_col])
        for i in range(data.n):
            writer.writerow([_fmt(v) for v in data.X[i]] + [str(int(data.y[i]))])


def write_labels(path, labels, label_col: str = "label") -> None:
    """Write predicted labels as a single-column delimited file."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([label_col])
        for v in np.atleast_1d(labels):
            writer.writerow([str(int(v))])


def _dqc_payload(model: TrainedDQC) -> dict:
    payload = {
        "format_version": MODEL_FORMAT_VERSION,
        "kind": "dqc",
        "p": model.p,
        "n_classes": model.n_classes,
        "thetas": list(model.thetas),
        "directions": model.directions.vectors.tolist(),
        "level_index": model.directions.level_index.tolist(),
        "weights": model.weights.tolist(),
        "class_quantiles": model.class_quantiles.tolist(),
        "priors": model.priors.tolist(),
    }
    if model.config is not None:
        payload["config"] = asdict(model.config)
    if model.cv_errors:
        payload["cv_errors"] = [[t, e] for t, e in model.cv_errors]
    return payload


def save_model(path, model) -> None:
    """Write a fitted model (DQC or baseline) as a versioned structured file."""
    if isinstance(model, TrainedDQC):
        payload = _dqc_payload(model)
    elif isinstance(model, BaselineModel):
        payload = {
            "format_version": MODEL_FORMAT_VERSION,
            "kind": model.kind,
            "p": model.p,
            "n_classes": model.n_classes,
            "centers": model.centers.tolist(),
            "theta": model.theta,
        }
    else:
        raise ValueError(f"cannot serialize object of type {type(model).__name__}")
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_model(path):
    """Read back a model written by :func:`save_model`."""
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not a valid model file ({exc})") from None
    version = payload.get("format_version")
    if version != MODEL_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported model format version {version!r}")
    kind = payload.get("kind")
    if kind == "dqc":
        config = None
        if "config" in payload:
            raw = dict(payload["config"])
            raw["theta_grid"] = tuple(raw.get("theta_grid", ()))
            config = DqcConfig(**raw)
        dirs = DirectionSet(np.array(payload["directions"], dtype=float), np.array(payload["level_index"], dtype=int))
        return TrainedDQC(
            thetas=tuple(payload["thetas"]),
            directions=dirs,
            weights=np.array(payload["weights"], dtype=float),
            class_quantiles=np.array(payload["class_quantiles"], dtype=float),
            priors=np.array(payload["priors"], dtype=float),
            config=config,
            cv_errors=tuple((t, e) for t, e in payload.get("cv_errors", [])),
        )
    if kind in ("centroid", "median", "cqc"):
        return BaselineModel(kind, np.array(payload["centers"], dtype=float), payload.get("theta"))
    raise ValueError(f"{path}: unknown model kind {kind!r}")


def write_theta_curve(path, curve) -> None:
    """Write a (theta, psi) table as two-column delimited text."""
    arr = np.asarray(curve, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise ValueError("curve must be a two-column table")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["theta", "psi"])
        for t, v in arr:
            writer.writerow([_fmt(t), _fmt(v)])


def write_benchmark_report(path, report: BenchmarkReport) -> None:
    """Write per-replication rates plus a summary block as delimited text.

    Provenance (scenario settings, seeds, classifier configuration) goes into
    comment lines.  Wall times are kept out of the file so repeated runs with
    the same seed are byte-identical; use the in-memory rows for timing.
    """
    sc = report.scenario
    cfg = report.dqc_config
    lines = [
        "# benchmark report v1",
        f"# scenario={sc.scenario} n={sc.n} p={sc.p} correlated={sc.correlated} "
        f"shift={_fmt(sc.shift)} df={_fmt(sc.df)} replications={sc.replications} seed={sc.seed}",
        f"# classifiers={','.join(report.classifiers)}",
        f"# dqc: theta_grid={','.join(_fmt(t) for t in cfg.theta_grid)}",
        f"# dqc: directions_per_theta={cfg.directions_per_theta} direction_mode={cfg.direction_mode} "
        f"spread={_fmt(cfg.spread)} cv_folds={cfg.cv_folds} seed={cfg.seed} "
        f"clip_nonnegative_weights={cfg.clip_nonnegative_weights}",
        "classifier,replication,error,status",
    ]
    for row in report.rows:
        err = _fmt(row.error) if row.status == "ok" else "nan"
        lines.append(f"{row.classifier},{row.replication},{err},{row.status}")
    lines.append("# summary: classifier,mean_error,std_error,replications_ok")
    for name, (mean, sem, ok) in report.summary().items():
        lines.append(f"# {name},{_fmt(mean)},{_fmt(sem)},{ok}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def format_error_table(reports) -> str:
    """Aligned text table of mean error rates: classifiers as rows, p as columns."""
    reports = list(reports)
    if not reports:
        raise ValueError("need at least one report")
    dims = [r.scenario.p for r in reports]
    names = []
    for r in reports:
        for name in r.classifiers:
            if name not in names:
                names.append(name)
    width = max(10, max(len(n) for n in names) + 2)
    header = "classifier".ljust(width) + "".join(f"p={p}".rjust(10) for p in dims)
    lines = [header]
    for name in names:
        cells = []
        for r in reports:
            mean, _, ok = r.summary().get(name, (float("nan"), float("nan"), 0))
            cells.append((f"{mean:.3f}" if ok else "-").rjust(10))
        lines.append(name.ljust(width) + "".join(cells))
    return "\n".join(lines)
