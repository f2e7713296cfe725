"""Command line interface.

Subcommands: train, predict, benchmark, loo, theory-curve, simulate, augment.
Settings come from flags or from a flat ``key = value`` config file
(``--config``); flags win over file values.  Exit codes: 0 success, 1 usage
or data error, 2 internal numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import baselines, classifier, io, simbench, theory
from .errors import NumericalError

_DQC_KEYS = ("theta_grid", "directions", "direction_mode", "spread", "cv_folds", "clip_weights", "seed")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # usage problems are exit code 1, not argparse's default 2
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _to_bool(text: str) -> bool:
    v = text.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _to_floats(text: str) -> tuple:
    try:
        return tuple(float(x) for x in str(text).split(",") if x.strip() != "")
    except ValueError:
        raise ValueError(f"expected a comma-separated list of numbers, got {text!r}") from None


def _to_names(text: str) -> tuple:
    return tuple(x.strip() for x in str(text).split(",") if x.strip())


def read_config_file(path) -> dict:
    """Parse a flat ``key = value`` file; keys mirror the long flag names."""
    values = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value', got {raw.rstrip()!r}")
            key, _, value = line.partition("=")
            values[key.strip().replace("-", "_")] = value.strip()
    return values


class _Settings:
    """Flag values with config-file fallback (flags override the file)."""

    def __init__(self, args):
        self.args = args
        self.file = read_config_file(args.config) if getattr(args, "config", None) else {}

    def get(self, key, default=None, convert=None):
        value = getattr(self.args, key, None)
        if value is not None:
            return value
        if key in self.file:
            raw = self.file[key]
            return convert(raw) if convert else raw
        return default

    def require(self, key, convert=None):
        value = self.get(key, convert=convert)
        if value is None:
            raise ValueError(f"missing required setting {key.replace('_', '-')!r}")
        return value


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file; flags override it")
    p.add_argument("--seed", type=int, help="root random seed (default 0)")


def _add_dqc_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--theta-grid", dest="theta_grid", help="comma-separated quantile levels in (0,1)")
    p.add_argument("--directions", type=int, help="directions per quantile level (default max(n, p))")
    p.add_argument("--direction-mode", dest="direction_mode", choices=classifier.DIRECTION_MODES)
    p.add_argument("--spread", type=float, help="perturbation scale around the estimated direction")
    p.add_argument("--cv-folds", dest="cv_folds", type=int, help="cross-validation folds (default 5)")
    p.add_argument("--clip-weights", dest="clip_weights", action=argparse.BooleanOptionalAction, default=None,
                   help="zero out negative direction weights")


def _add_scenario_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", type=int, choices=(1, 2, 3))
    p.add_argument("--n", type=int, help="total sample size per dataset (n/2 per class)")
    p.add_argument("--p", type=int, help="number of features")
    p.add_argument("--correlated", action=argparse.BooleanOptionalAction, default=None,
                   help="use a random correlation matrix instead of identity scale")
    p.add_argument("--shift", type=float, help="location shift of class 2 (default 0.4)")
    p.add_argument("--df", type=float, help="t degrees of freedom (default 3)")


def build_parser() -> _Parser:
    parser = _Parser(prog="dqc", description="Directional quantile classifiers and benchmarks.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="fit a classifier and write a model file")
    p.add_argument("--data", help="training dataset (delimited text)")
    p.add_argument("--label-col", dest="label_col", help="label column name (default 'label')")
    p.add_argument("--classifier", choices=simbench.CLASSIFIER_NAMES, help="classifier to fit (default dqc)")
    p.add_argument("--out", help="model file to write")
    _add_dqc_flags(p)
    _add_common(p)

    p = sub.add_parser("predict", help="predict labels for a dataset using a model file")
    p.add_argument("--model", help="model file")
    p.add_argument("--data", help="dataset to predict (label column optional)")
    p.add_argument("--label-col", dest="label_col", help="label column name (default 'label')")
    p.add_argument("--out", help="output file for the predicted label column")
    _add_common(p)

    p = sub.add_parser("benchmark", help="run replicated scenario benchmarks")
    _add_scenario_flags(p)
    p.add_argument("--reps", type=int, help="number of replications (default 20)")
    p.add_argument("--classifiers", help="comma-separated subset of dqc,centroid,median,cqc")
    p.add_argument("--threads", type=int, help="worker processes for replications (default 1)")
    p.add_argument("--out", help="report file to write")
    _add_dqc_flags(p)
    _add_common(p)

    p = sub.add_parser("loo", help="leave-one-out error of a classifier on a dataset")
    p.add_argument("--data", help="dataset (delimited text)")
    p.add_argument("--label-col", dest="label_col", help="label column name (default 'label')")
    p.add_argument("--classifier", choices=simbench.CLASSIFIER_NAMES, help="classifier (default dqc)")
    _add_dqc_flags(p)
    _add_common(p)

    p = sub.add_parser("theory-curve", help="export the exact correct-classification curve")
    p.add_argument("--dist-a", dest="dist_a", help="first population, e.g. normal:0,1")
    p.add_argument("--dist-b", dest="dist_b", help="second population, e.g. normal:1,1")
    p.add_argument("--prior-a", dest="prior_a", type=float, help="prior of the first population (default 0.5)")
    p.add_argument("--grid-points", dest="grid_points", type=int, help="number of levels (default 199)")
    p.add_argument("--out", help="two-column (theta, psi) table to write")
    _add_common(p)

    p = sub.add_parser("simulate", help="write one scenario replication as train/test files")
    _add_scenario_flags(p)
    p.add_argument("--rep", type=int, help="replication index (default 0)")
    p.add_argument("--out", help="output prefix; writes <out>_train.csv and <out>_test.csv")
    _add_common(p)

    p = sub.add_parser("augment", help="append standard normal noise features to a dataset")
    p.add_argument("--data", help="dataset (delimited text)")
    p.add_argument("--label-col", dest="label_col", help="label column name (default 'label')")
    p.add_argument("--extra", type=int, help="number of noise columns to append")
    p.add_argument("--out", help="augmented dataset to write")
    _add_common(p)

    return parser


def _dqc_config(s: _Settings) -> classifier.DqcConfig:
    kwargs = {}
    grid = s.get("theta_grid", convert=_to_floats)
    if grid is not None:
        kwargs["theta_grid"] = tuple(grid) if not isinstance(grid, str) else _to_floats(grid)
    directions = s.get("directions", convert=int)
    if directions is not None:
        kwargs["directions_per_theta"] = int(directions)
    mode = s.get("direction_mode")
    if mode is not None:
        kwargs["direction_mode"] = mode
    spread = s.get("spread", convert=float)
    if spread is not None:
        kwargs["spread"] = float(spread)
    folds = s.get("cv_folds", convert=int)
    if folds is not None:
        kwargs["cv_folds"] = int(folds)
    clip = s.get("clip_weights", convert=_to_bool)
    if clip is not None:
        kwargs["clip_nonnegative_weights"] = bool(clip)
    kwargs["seed"] = int(s.get("seed", default=0, convert=int))
    return classifier.DqcConfig(**kwargs)


def _scenario_config(s: _Settings, default_reps: int = 20) -> simbench.ScenarioConfig:
    return simbench.ScenarioConfig(
        scenario=int(s.require("scenario", convert=int)),
        n=int(s.require("n", convert=int)),
        p=int(s.require("p", convert=int)),
        correlated=bool(s.get("correlated", default=False, convert=_to_bool)),
        shift=float(s.get("shift", default=0.4, convert=float)),
        df=float(s.get("df", default=3.0, convert=float)),
        replications=int(s.get("reps", default=default_reps, convert=int)),
        seed=int(s.get("seed", default=0, convert=int)),
    )


def _parse_distribution(spec: str) -> theory.UnivariateDistribution:
    from scipy import stats

    name, _, rest = str(spec).partition(":")
    params = [float(x) for x in rest.split(",") if x.strip() != ""] if rest else []
    name = name.strip().lower()
    if name == "normal":
        loc, scale = (params + [0.0, 1.0])[:2]
        frozen = stats.norm(loc=loc, scale=scale)
    elif name == "uniform":
        lo, hi = (params + [0.0, 1.0])[:2]
        if hi <= lo:
            raise ValueError(f"uniform needs lo < hi, got {spec!r}")
        frozen = stats.uniform(loc=lo, scale=hi - lo)
    elif name == "lognormal":
        sigma, shift = (params + [1.0, 0.0])[:2]
        frozen = stats.lognorm(s=sigma, loc=shift)
    elif name == "t":
        if not params:
            raise ValueError("t distribution needs degrees of freedom, e.g. t:3")
        df = params[0]
        loc, scale = (params[1:] + [0.0, 1.0])[:2]
        frozen = stats.t(df=df, loc=loc, scale=scale)
    else:
        raise ValueError(f"unknown distribution {spec!r}; use normal:, uniform:, lognormal:, or t:")
    return theory.from_scipy(frozen)


def _cmd_train(s: _Settings) -> int:
    data = io.read_dataset(s.require("data"), s.get("label_col", default="label"))
    name = s.get("classifier", default="dqc")
    out = s.require("out")
    if name == "dqc":
        model = classifier.fit(data, _dqc_config(s))
        extra = f" theta={model.thetas[0]}"
    elif name == "centroid":
        model = baselines.fit_centroid(data)
        extra = ""
    elif name == "median":
        model = baselines.fit_median(data)
        extra = ""
    elif name == "cqc":
        grid = s.get("theta_grid", convert=_to_floats) or classifier.DEFAULT_THETA_GRID
        model = baselines.fit_cqc(data, grid)
        extra = f" theta={model.theta}"
    else:
        raise ValueError(f"unknown classifier {name!r}")
    io.save_model(out, model)
    print(f"trained {name} on n={data.n}, p={data.p}, classes={data.n_classes}{extra} -> {out}")
    return 0


def _cmd_predict(s: _Settings) -> int:
    model = io.load_model(s.require("model"))
    label_col = s.get("label_col", default="label")
    X, _ = io.read_features(s.require("data"), label_col)
    if X.shape[1] != model.p:
        raise ValueError(f"dimension mismatch: model expects p={model.p}, data has p={X.shape[1]}")
    out = s.require("out")
    labels = model.predict(X)
    io.write_labels(out, labels, label_col)
    print(f"predicted {len(labels)} labels -> {out}")
    return 0


def _cmd_benchmark(s: _Settings) -> int:
    config = _scenario_config(s)
    names = s.get("classifiers", default=simbench.CLASSIFIER_NAMES, convert=_to_names)
    if isinstance(names, str):
        names = _to_names(names)
    workers = int(s.get("threads", default=1, convert=int))
    report = simbench.run_benchmark(config, names, _dqc_config(s), workers=workers)
    out = s.require("out")
    io.write_benchmark_report(out, report)
    print(io.format_error_table([report]))
    for name, (mean, sem, ok) in report.summary().items():
        print(f"{name}: mean_error={mean:.4f} std_error={sem:.4f} replications_ok={ok}")
    seconds = sum(r.seconds for r in report.rows)
    print(f"report -> {out} (fit+score time {seconds:.1f}s)", file=sys.stderr)
    return 0


def _cmd_loo(s: _Settings) -> int:
    data = io.read_dataset(s.require("data"), s.get("label_col", default="label"))
    name = s.get("classifier", default="dqc")
    grid = s.get("theta_grid", convert=_to_floats)
    fit_fn = simbench.make_classifier(name, _dqc_config(s), theta_grid=grid)
    err = simbench.loo_validate(data, fit_fn)
    print(f"loo_error={err!r}")
    return 0


def _cmd_theory_curve(s: _Settings) -> int:
    dist_a = _parse_distribution(s.require("dist_a"))
    dist_b = _parse_distribution(s.require("dist_b"))
    prior_a = float(s.get("prior_a", default=0.5, convert=float))
    pair = theory.PopulationPair(dist_a, dist_b, (prior_a, 1.0 - prior_a))
    points = int(s.get("grid_points", default=199, convert=int))
    if points < 1:
        raise ValueError("grid-points must be positive")
    levels = np.arange(1, points + 1) / (points + 1)
    curve = theory.psi_curve(pair, levels)
    out = s.require("out")
    io.write_theta_curve(out, curve)
    theta_star, psi_star = theory.optimal_level(pair)
    print(f"best level theta={theta_star:.6f} psi={psi_star:.6f}; curve -> {out}")
    return 0


def _cmd_simulate(s: _Settings) -> int:
    config = _scenario_config(s, default_reps=1)
    rep = int(s.get("rep", default=0, convert=int))
    train, test = simbench.generate_scenario(config, rep)
    prefix = s.require("out")
    label_col = s.get("label_col", default="label")
    train_path, test_path = f"{prefix}_train.csv", f"{prefix}_test.csv"
    io.write_dataset(train_path, train, label_col)
    io.write_dataset(test_path, test, label_col)
    print(f"scenario {config.scenario} replication {rep}: {train_path} {test_path}")
    return 0


def _cmd_augment(s: _Settings) -> int:
    label_col = s.get("label_col", default="label")
    data = io.read_dataset(s.require("data"), label_col)
    extra = int(s.require("extra", convert=int))
    seed = int(s.get("seed", default=0, convert=int))
    wide = simbench.augment_noise(data, extra, seed)
    out = s.require("out")
    io.write_dataset(out, wide, label_col)
    print(f"augmented p={data.p} -> p={wide.p} ({extra} noise columns) -> {out}")
    return 0


_COMMANDS = {
    "train": _cmd_train,
    "predict": _cmd_predict,
    "benchmark": _cmd_benchmark,
    "loo": _cmd_loo,
    "theory-curve": _cmd_theory_curve,
    "simulate": _cmd_simulate,
    "augment": _cmd_augment,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](_Settings(args))
    except (NumericalError, np.linalg.LinAlgError, FloatingPointError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def run() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    run()
