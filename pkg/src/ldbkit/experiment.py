"""Benchmark harness: train all eight method variants and tabulate rates.

A method row is one of LDB1-3 / MLDB1-3 (single-measure oracles, fixed or
re-selected basis) or the superpositions SLDB / SMLDB that pool the three
measure-specific ensembles.  Measure numbering follows the quotient
variants: 1 is the variance-normalized energy gap, 2 the signed pairwise
ratio, 3 the plain squared energy gap.

Per realization the harness generates fresh train/test splits, trains the
six base ensembles, scores all eight methods on both splits, and reports
mean and sample standard deviation over realizations.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass, replace

import numpy as np

from .classify import EnsembleSpec, make_one_vs_rest, merge_ensembles, score_dataset
from .datagen import RngSpec, gen_experiment
from .dcsa import LDB, MLDB, DcsaParams
from .errors import ConfigMismatch
from .measures import (
    LAMBDA_DOUBLE_PRIME_TAG,
    LAMBDA_PRIME_TAG,
    LAMBDA_TAG,
    MeasureKind,
)
from .wavelets import DictionarySpec

MEASURE_TAG_BY_NUMBER = {1: LAMBDA_PRIME_TAG, 2: LAMBDA_DOUBLE_PRIME_TAG,
                         3: LAMBDA_TAG}
METHOD_ROWS = ("LDB1", "MLDB1", "LDB2", "MLDB2", "LDB3", "MLDB3",
               "SLDB", "SMLDB")

_EXAMPLE_DEFAULTS = {"ex1": (18, 0.10), "ex2": (18, 0.10), "ex3": (6, 0.20)}


@dataclass(frozen=True)
class ExperimentConfig:
    """Fully resolved run description; every report embeds one of these."""

    example: str
    seed: int = 0
    realizations: int = 10
    train_per_class: int = 100
    test_per_class: int = 1000
    taps: int | None = None
    depth: int | None = None
    K: int = 5
    delta: float = 0.01
    eta: float = 0.05
    mu: float | None = None
    nu: float = 0.05
    delta_cap: float = 0.5
    regularizer: float = 1e-12
    offset: float = 0.0

    def resolved(self) -> "ExperimentConfig":
        """Fill example-dependent defaults (filter length and mu)."""
        if self.example not in _EXAMPLE_DEFAULTS:
            raise ConfigMismatch(f"unknown example {self.example!r}")
        taps, mu = _EXAMPLE_DEFAULTS[self.example]
        return replace(self,
                       taps=self.taps if self.taps is not None else taps,
                       mu=self.mu if self.mu is not None else mu)

    def dict_spec(self) -> DictionarySpec:
        cfg = self.resolved()
        return DictionarySpec(family="coiflet", taps=cfg.taps, depth=cfg.depth)

    def params_for(self, measure_number: int, mode: str) -> DcsaParams:
        cfg = self.resolved()
        return DcsaParams(
            K=cfg.K, delta=cfg.delta, eta=cfg.eta, mu=cfg.mu, nu=cfg.nu,
            mode=mode,
            measure=MeasureKind(tag=MEASURE_TAG_BY_NUMBER[measure_number],
                                regularizer=cfg.regularizer),
            delta_cap=cfg.delta_cap)

    def echo_lines(self) -> list[str]:
        cfg = self.resolved()
        keys = ("example", "seed", "realizations", "train_per_class",
                "test_per_class", "taps", "depth", "K", "delta", "eta",
                "mu", "nu", "delta_cap", "regularizer", "offset")
        return [f"{k} = {getattr(cfg, k)}" for k in keys]


_INT_KEYS = {"seed", "realizations", "train_per_class", "test_per_class",
             "taps", "depth", "K"}
_FLOAT_KEYS = {"delta", "eta", "mu", "nu", "delta_cap", "regularizer",
               "offset"}


def load_config(path: str) -> ExperimentConfig:
    """Read an INI-style config; unknown keys are rejected, missing ones
    fall back to defaults."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigMismatch(f"cannot read config file {path!r}")
    return _config_from_parser(parser, path)


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    return _config_from_parser(parser, "<string>")


def _config_from_parser(parser, origin) -> ExperimentConfig:
    values: dict = {}
    for section in parser.sections():
        if section not in ("experiment", "dictionary", "dcsa"):
            raise ConfigMismatch(f"{origin}: unknown section [{section}]")
        for key, raw in parser.items(section):
            if key == "example":
                values[key] = raw.strip()
            elif key in _INT_KEYS:
                values[key] = int(raw) if raw.strip() else None
            elif key in _FLOAT_KEYS:
                values[key] = float(raw)
            else:
                raise ConfigMismatch(f"{origin}: unknown key {key!r} in "
                                     f"[{section}]")
    if "example" not in values:
        raise ConfigMismatch(f"{origin}: required key 'example' is missing")
    return ExperimentConfig(**values).resolved()


@dataclass(frozen=True)
class MethodStats:
    """Aggregated rates of one method over all realizations."""

    name: str
    train_rate: float
    train_rate_sigma: float
    train_err: float
    train_err_sigma: float
    test_rate: float
    test_rate_sigma: float
    test_err: float
    test_err_sigma: float


@dataclass(frozen=True)
class ResultTable:
    config: ExperimentConfig
    methods: tuple[MethodStats, ...]
    # per method name: one (train_rate, train_err, test_rate, test_err)
    # tuple per realization, for traceability
    runs: dict


def _sigma(values: np.ndarray) -> float:
    if values.shape[0] < 2:
        return 0.0
    return float(values.std(ddof=1))


def aggregate(config: ExperimentConfig, runs: dict) -> ResultTable:
    methods = []
    for name in METHOD_ROWS:
        arr = np.asarray(runs[name], dtype=np.float64)
        methods.append(MethodStats(
            name=name,
            train_rate=float(arr[:, 0].mean()), train_rate_sigma=_sigma(arr[:, 0]),
            train_err=float(arr[:, 1].mean()), train_err_sigma=_sigma(arr[:, 1]),
            test_rate=float(arr[:, 2].mean()), test_rate_sigma=_sigma(arr[:, 2]),
            test_err=float(arr[:, 3].mean()), test_err_sigma=_sigma(arr[:, 3])))
    return ResultTable(config=config, methods=tuple(methods), runs=runs)


def train_methods(config: ExperimentConfig, train) -> dict[str, EnsembleSpec]:
    """The eight method ensembles for one training set."""
    cfg = config.resolved()
    dict_spec = cfg.dict_spec()
    specs: dict[str, EnsembleSpec] = {}
    for num in (1, 2, 3):
        specs[f"LDB{num}"] = make_one_vs_rest(
            train, dict_spec, cfg.params_for(num, LDB))
        specs[f"MLDB{num}"] = make_one_vs_rest(
            train, dict_spec, cfg.params_for(num, MLDB))
    specs["SLDB"] = merge_ensembles([specs[f"LDB{n}"] for n in (1, 2, 3)])
    specs["SMLDB"] = merge_ensembles([specs[f"MLDB{n}"] for n in (1, 2, 3)])
    return specs


def run_experiment(config: ExperimentConfig, progress=None) -> ResultTable:
    """Generate, train, and score all realizations; fully deterministic
    for a fixed config."""
    cfg = config.resolved()
    rng_spec = RngSpec(cfg.seed)
    runs: dict = {name: [] for name in METHOD_ROWS}
    for real in range(cfg.realizations):
        train, test = gen_experiment(cfg.example, real, rng_spec,
                                     cfg.train_per_class, cfg.test_per_class,
                                     cfg.offset)
        specs = train_methods(cfg, train)
        for name in METHOD_ROWS:
            tr = score_dataset(specs[name], train)
            te = score_dataset(specs[name], test)
            runs[name].append((tr.classification_rate, tr.error_rate,
                               te.classification_rate, te.error_rate))
        if progress is not None:
            progress(f"realization {real + 1}/{cfg.realizations} done")
    return aggregate(cfg, runs)


def emit_text(table: ResultTable) -> str:
    out = io.StringIO()
    out.write("# configuration\n")
    for line in table.config.echo_lines():
        out.write(f"#   {line}\n")
    out.write("#\n")
    out.write(f"{'method':<7} {'train rate':>12} {'(sigma)':>8} "
              f"{'train err':>11} {'(sigma)':>8} {'test rate':>11} "
              f"{'(sigma)':>8} {'test err':>10} {'(sigma)':>8}\n")
    for ms in table.methods:
        out.write(f"{ms.name:<7} {ms.train_rate:>12.2f} {ms.train_rate_sigma:>8.2f} "
                  f"{ms.train_err:>11.2f} {ms.train_err_sigma:>8.2f} "
                  f"{ms.test_rate:>11.2f} {ms.test_rate_sigma:>8.2f} "
                  f"{ms.test_err:>10.2f} {ms.test_err_sigma:>8.2f}\n")
    return out.getvalue()


_CSV_HEADER = ("method,train_rate,train_rate_sigma,train_err,train_err_sigma,"
               "test_rate,test_rate_sigma,test_err,test_err_sigma")


def emit_csv(table: ResultTable) -> str:
    lines = [f"# {line}" for line in table.config.echo_lines()]
    lines.append(_CSV_HEADER)
    for ms in table.methods:
        vals = (ms.train_rate, ms.train_rate_sigma, ms.train_err,
                ms.train_err_sigma, ms.test_rate, ms.test_rate_sigma,
                ms.test_err, ms.test_err_sigma)
        lines.append(ms.name + "," + ",".join(repr(v) for v in vals))
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> dict[str, tuple[float, ...]]:
    """Read back an emit_csv report: method name -> its eight numbers."""
    rows: dict[str, tuple[float, ...]] = {}
    for line in text.splitlines():
        if not line or line.startswith("#") or line.startswith("method,"):
            continue
        parts = line.split(",")
        rows[parts[0]] = tuple(float(v) for v in parts[1:])
    return rows


def emit_report(table: ResultTable, fmt: str) -> str:
    if fmt == "text":
        return emit_text(table)
    if fmt == "csv":
        return emit_csv(table)
    raise ConfigMismatch(f"unknown report format {fmt!r}")
