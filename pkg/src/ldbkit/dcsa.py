"""Dyadic cluster search: trains cube-list oracle classifiers.

Training projects the signals onto the best-basis feature space and then
hunts for dyadic cubes dominated by one class.  The search sweeps cubes
depth-first, growing the working dimension k = 1..K and then the error
budget in steps of delta; each qualifying cube with impurity epsilon
within the budget is stored, its points are removed, and the search
restarts.  In MLDB mode the basis is re-selected on the surviving points
whenever a post-capture sweep comes up empty; in LDB mode the initial
basis is kept throughout.

The stored records, their feature spaces, and the parameters form the
oracle; classification semantics over it live in ``classify``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .basis import Basis, FeatureSpace, best_basis, project_many, top_k_features
from .cubes import MAX_SPLIT_DEPTH, DyadicCube, root_cube, split_cube
from .dataset import Dataset
from .errors import (
    ClassTooSmall,
    ConfigMismatch,
    EmptyClass,
    InvalidParams,
    KTooLarge,
)
from .measures import (
    LAMBDA,
    LAMBDA_DOUBLE_PRIME,
    LAMBDA_PRIME,
    MeasureKind,
    score_table,
)
from .wavelets import DictionarySpec, NodeId, wpt_analyze_many

LDB = "ldb"
MLDB = "mldb"

_FORMAT_VERSION = 1

# Conventions a serialized oracle depends on; embedded in the file so a
# reader can refuse models written under different geometry rules.
_CONVENTIONS = {
    "cube_boundary": "half-open, closed at +1",
    "child_order": "binary counting, axis 0 low bit",
    "high_pass": "alternating flip",
    "indexing": "circular, child[t] = sum_i f[i] x[(2t+i) mod nb]",
}


@dataclass(frozen=True)
class DcsaParams:
    """Search parameters.

    K bounds the feature-space dimension; delta is the error-budget step;
    eta sets the leftover fractions that end the search; mu and nu set the
    relative and absolute cube population thresholds.
    """

    K: int = 5
    delta: float = 0.01
    eta: float = 0.05
    mu: float = 0.10
    nu: float = 0.05
    mode: str = MLDB
    measure: MeasureKind = LAMBDA_DOUBLE_PRIME
    delta_cap: float = 0.5

    def __post_init__(self):
        if not (isinstance(self.K, int) and self.K >= 1):
            raise InvalidParams(f"K must be a positive integer, got {self.K!r}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidParams(f"delta must be in (0,1), got {self.delta}")
        if not 0.0 <= self.eta < 1.0:
            raise InvalidParams(f"eta must be in [0,1), got {self.eta}")
        if not 0.0 < self.nu <= self.mu < 1.0:
            raise InvalidParams(
                f"need 0 < nu <= mu < 1, got nu={self.nu} mu={self.mu}")
        if self.mode not in (LDB, MLDB):
            raise InvalidParams(f"mode must be {LDB!r} or {MLDB!r}")
        if not isinstance(self.measure, MeasureKind):
            raise InvalidParams("measure must be a MeasureKind")
        if not 0.0 < self.delta_cap <= 0.5:
            raise InvalidParams(
                f"delta_cap must be in (0, 0.5], got {self.delta_cap}")


@dataclass(frozen=True)
class ClusterRecord:
    """One stored cluster: a cube, its class counts, and vote metadata.

    ``captured`` lists the training-set indices removed when the record
    was stored; ``delta_at_store`` is the error budget then in force.
    """

    cube: DyadicCube
    feature_space_id: int
    n_a: int
    n_b: int
    epsilon: float
    label: int
    frequency_base: int
    tie: bool
    delta_at_store: float
    captured: tuple[int, ...]

    @property
    def weight(self) -> float:
        """Vote weight: purity times the cluster's population frequency."""
        return (1.0 - self.epsilon) * (self.n_a + self.n_b) / self.frequency_base


@dataclass(eq=False)
class Oracle:
    """An ordered cube list plus the feature spaces the cubes live in."""

    params: DcsaParams
    dict_spec: DictionarySpec
    depth: int
    signal_length: int
    label_a: int
    label_b: int
    frequency_base: int
    records: tuple[ClusterRecord, ...]
    feature_spaces: tuple[FeatureSpace, ...]
    train_points: tuple[np.ndarray, ...] | None = None
    train_labels: np.ndarray | None = None

    def to_json(self) -> str:
        doc = {
            "format": _FORMAT_VERSION,
            "conventions": dict(_CONVENTIONS),
            "params": {
                "K": self.params.K,
                "delta": self.params.delta,
                "eta": self.params.eta,
                "mu": self.params.mu,
                "nu": self.params.nu,
                "mode": self.params.mode,
                "measure": {"tag": self.params.measure.tag,
                            "regularizer": self.params.measure.regularizer},
                "delta_cap": self.params.delta_cap,
            },
            "dictionary": {"family": self.dict_spec.family,
                           "taps": self.dict_spec.taps,
                           "depth": self.depth,
                           "signal_length": self.signal_length},
            "labels": {"a": self.label_a, "b": self.label_b},
            "frequency_base": self.frequency_base,
            "feature_spaces": [_fs_to_dict(fs) for fs in self.feature_spaces],
            "records": [_record_to_dict(r) for r in self.records],
        }
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "Oracle":
        doc = json.loads(text)
        if doc.get("format") != _FORMAT_VERSION:
            raise ConfigMismatch(f"unsupported oracle format {doc.get('format')!r}")
        if doc.get("conventions") != _CONVENTIONS:
            raise ConfigMismatch("oracle was written under different conventions")
        p = doc["params"]
        params = DcsaParams(
            K=int(p["K"]), delta=p["delta"], eta=p["eta"], mu=p["mu"],
            nu=p["nu"], mode=p["mode"],
            measure=MeasureKind(tag=p["measure"]["tag"],
                                regularizer=p["measure"]["regularizer"]),
            delta_cap=p["delta_cap"])
        d = doc["dictionary"]
        n = int(d["signal_length"])
        spaces = tuple(_fs_from_dict(f, n) for f in doc["feature_spaces"])
        records = tuple(_record_from_dict(r) for r in doc["records"])
        return cls(params=params,
                   dict_spec=DictionarySpec(family=d["family"],
                                            taps=int(d["taps"]),
                                            depth=int(d["depth"])),
                   depth=int(d["depth"]), signal_length=n,
                   label_a=int(doc["labels"]["a"]),
                   label_b=int(doc["labels"]["b"]),
                   frequency_base=int(doc["frequency_base"]),
                   records=records, feature_spaces=spaces)


def _fs_to_dict(fs: FeatureSpace) -> dict:
    return {
        "basis": {"nodes": [[nd.level, nd.block] for nd in fs.source_basis.nodes],
                  "score": fs.source_basis.score},
        "features": [[nd.level, nd.block, i] for nd, i in fs.features],
        "scores": list(fs.scores),
        "depth": fs.depth,
    }


def _fs_from_dict(d: dict, signal_length: int) -> FeatureSpace:
    nodes = tuple(NodeId(int(l), int(b)) for l, b in d["basis"]["nodes"])
    features = tuple((NodeId(int(l), int(b)), int(i))
                     for l, b, i in d["features"])
    rows = np.array([nd.level for nd, _ in features], dtype=np.intp)
    cols = np.array(
        [nd.block * (signal_length >> nd.level) + i for nd, i in features],
        dtype=np.intp)
    return FeatureSpace(
        features=features, scores=tuple(float(s) for s in d["scores"]),
        source_basis=Basis(nodes=nodes, score=float(d["basis"]["score"])),
        signal_length=signal_length, depth=int(d["depth"]),
        rows=rows, cols=cols)


def _record_to_dict(r: ClusterRecord) -> dict:
    return {
        "cube": r.cube.to_dict(),
        "feature_space": r.feature_space_id,
        "n_a": r.n_a, "n_b": r.n_b,
        "epsilon": r.epsilon,
        "label": r.label,
        "frequency_base": r.frequency_base,
        "tie": r.tie,
        "delta_at_store": r.delta_at_store,
        "captured": list(r.captured),
    }


def _record_from_dict(d: dict) -> ClusterRecord:
    return ClusterRecord(
        cube=DyadicCube.from_dict(d["cube"]),
        feature_space_id=int(d["feature_space"]),
        n_a=int(d["n_a"]), n_b=int(d["n_b"]),
        epsilon=float(d["epsilon"]), label=int(d["label"]),
        frequency_base=int(d["frequency_base"]), tie=bool(d["tie"]),
        delta_at_store=float(d["delta_at_store"]),
        captured=tuple(int(i) for i in d["captured"]))


def _ceil_count(x: float) -> int:
    # ceil of a mu*count product; the tiny backoff stops float excess like
    # 0.05 * 200 -> 10.000000000000002 from bumping the threshold to 11
    return max(0, math.ceil(x - 1e-9))


class _Trainer:
    def __init__(self, train: Dataset, dict_spec: DictionarySpec,
                 params: DcsaParams):
        if len(train.class_order) != 2:
            raise ConfigMismatch(
                f"cluster search is two-class; got labels {train.class_order}")
        self.params = params
        self.dict_spec = dict_spec
        self.label_a, self.label_b = train.class_order
        self.is_a = train.labels == self.label_a
        self.labels = np.asarray(train.labels)
        self.m = len(train)
        ja0 = int(self.is_a.sum())
        jb0 = self.m - ja0
        if ja0 == 0 or jb0 == 0:
            raise EmptyClass("both classes must be nonempty")
        need = params.measure.min_class_size
        if ja0 < need or jb0 < need:
            raise ClassTooSmall(
                f"measure {params.measure.tag} needs {need} signals per class")
        n = train.signal_length
        if params.K > n:
            raise KTooLarge(f"K={params.K} exceeds signal length {n}")
        self.qmf = dict_spec.filters()
        self.depth = dict_spec.resolve_depth(n)
        self.tables = wpt_analyze_many(train.signals, self.qmf, self.depth)
        self.alive = np.ones(self.m, dtype=bool)
        self.beta = _ceil_count(params.nu * self.m)
        self.gamma_a = _ceil_count(params.eta * ja0)
        self.gamma_b = _ceil_count(params.eta * jb0)
        self.feature_spaces: list[FeatureSpace] = []
        self.points: list[np.ndarray] = []
        self.records: list[ClusterRecord] = []

    def class_sizes(self) -> tuple[int, int]:
        ja = int((self.alive & self.is_a).sum())
        return ja, int(self.alive.sum()) - ja

    def select(self) -> None:
        """Choose the feature space on the surviving points and project.

        LDB keeps the first space forever.  MLDB re-selects, except when a
        surviving class is too small for the measure, where the previous
        space is kept (re-scoring would be undefined).
        """
        if self.feature_spaces:
            if self.params.mode == LDB:
                return
            ja, jb = self.class_sizes()
            need = self.params.measure.min_class_size
            if ja < need or jb < need:
                return
        a_tab = self.tables[self.alive & self.is_a]
        b_tab = self.tables[self.alive & ~self.is_a]
        table = score_table(a_tab, b_tab, self.params.measure)
        fs = top_k_features(best_basis(table), table, self.params.K)
        # projections of unit-norm signals lie in [-1,1]; the clip removes
        # last-ulp float overshoot so the root cube always holds everything
        pts = np.clip(project_many(self.tables, fs, self.params.K), -1.0, 1.0)
        self.feature_spaces.append(fs)
        self.points.append(np.ascontiguousarray(pts))

    def sweep(self, k: int, delta_now: float) -> bool:
        """One depth-first pass over dimension-k cubes; True iff a cluster
        was stored (the caller then restarts at k=1)."""
        alive_a = (self.alive & self.is_a).astype(np.uint8)
        alive_b = (self.alive & ~self.is_a).astype(np.uint8)
        ja = int(alive_a.sum())
        jb = int(alive_b.sum())
        need = max(_ceil_count(self.params.mu * (ja + jb)), self.beta)
        fs_id = len(self.feature_spaces) - 1
        pts = self.points[fs_id]
        stack: list[tuple[DyadicCube, int, int]] = [(root_cube(k), ja, jb)]
        while stack:
            cube, na, nb = stack.pop()
            if na + nb < need:
                continue
            eps = min(na, nb) / (na + nb)
            if eps <= delta_now:
                self._store(cube, na, nb, eps, delta_now, fs_id, pts)
                return True
            if cube.depth >= MAX_SPLIT_DEPTH:
                continue
            lo, hi, closed = cube.bounds()
            ca, cb = _kernels.split_counts(pts, alive_a, pts, alive_b,
                                           lo, hi, closed)
            children = split_cube(cube)
            # empty children can never qualify; dropping them here does not
            # change which cubes get visited, split, or stored
            for c in range(len(children) - 1, -1, -1):
                if ca[c] + cb[c] > 0:
                    stack.append((children[c], int(ca[c]), int(cb[c])))
        return False

    def _store(self, cube: DyadicCube, na: int, nb: int, eps: float,
               delta_now: float, fs_id: int, pts: np.ndarray) -> None:
        lo, hi, closed = cube.bounds()
        mask = _kernels.cube_mask(pts, self.alive.astype(np.uint8),
                                  lo, hi, closed)
        captured = np.nonzero(mask)[0]
        assert captured.size == na + nb
        self.records.append(ClusterRecord(
            cube=cube, feature_space_id=fs_id, n_a=na, n_b=nb,
            epsilon=eps,
            label=self.label_a if na >= nb else self.label_b,
            frequency_base=self.m, tie=(na == nb),
            delta_at_store=delta_now,
            captured=tuple(int(i) for i in captured)))
        self.alive[captured] = False

    def run(self) -> Oracle:
        self.select()
        k = 1
        esc = 0
        delta_now = 0.0
        found = False
        while True:
            ja, jb = self.class_sizes()
            if ja <= self.gamma_a and jb <= self.gamma_b:
                break
            if self.sweep(k, delta_now):
                k, esc, delta_now, found = 1, 0, 0.0, True
            elif found:
                self.select()
                k, esc, delta_now, found = 1, 0, 0.0, False
            elif k < self.params.K:
                k += 1
            elif delta_now >= self.params.delta_cap:
                break
            else:
                esc += 1
                delta_now = min(esc * self.params.delta, self.params.delta_cap)
                k = 1
        return Oracle(
            params=self.params, dict_spec=self.dict_spec, depth=self.depth,
            signal_length=self.tables.shape[2],
            label_a=self.label_a, label_b=self.label_b,
            frequency_base=self.m,
            records=tuple(self.records),
            feature_spaces=tuple(self.feature_spaces),
            train_points=tuple(self.points),
            train_labels=self.labels)


def run_dcsa(train: Dataset, dict_spec: DictionarySpec,
             params: DcsaParams) -> Oracle:
    """Train a two-class oracle on the given dataset."""
    return _Trainer(train, dict_spec, params).run()


@dataclass(frozen=True)
class TraceRow:
    index: int
    cube_depth: int
    dim: int
    n_a: int
    n_b: int
    epsilon: float
    feature_space_id: int
    label: int
    tie: bool


@dataclass(frozen=True)
class TrainingTrace:
    rows: tuple[TraceRow, ...]
    classification_rate: float
    error_rate: float

    def render(self) -> str:
        lines = ["idx  dim  depth  n_a  n_b  epsilon   space  label"]
        for r in self.rows:
            tie = " tie" if r.tie else ""
            lines.append(
                f"{r.index:<4d} {r.dim:<4d} {r.cube_depth:<6d} {r.n_a:<4d} "
                f"{r.n_b:<4d} {r.epsilon:<9.6f} {r.feature_space_id:<6d} "
                f"{r.label}{tie}")
        lines.append(f"training classification rate: {self.classification_rate:.4f}")
        lines.append(f"training error rate: {self.error_rate:.4f}")
        return "\n".join(lines)


def training_trace(oracle: Oracle) -> TrainingTrace:
    """Per-record summary plus the oracle's own training-set rates.

    The rates replay first-match classification over the retained training
    projections, so they match a later ``classify`` run on the same data.
    """
    if oracle.train_points is None or oracle.train_labels is None:
        raise ConfigMismatch("oracle was loaded without training state")
    rows = tuple(TraceRow(index=i, cube_depth=r.cube.depth, dim=r.cube.dim,
                          n_a=r.n_a, n_b=r.n_b, epsilon=r.epsilon,
                          feature_space_id=r.feature_space_id,
                          label=r.label, tie=r.tie)
                 for i, r in enumerate(oracle.records))
    m = oracle.train_labels.shape[0]
    unassigned = np.ones(m, dtype=bool)
    predicted = np.zeros(m, dtype=np.int64)
    for rec in oracle.records:
        pts = oracle.train_points[rec.feature_space_id]
        lo, hi, closed = rec.cube.bounds()
        mask = _kernels.cube_mask(pts, unassigned.astype(np.uint8),
                                  lo, hi, closed).astype(bool)
        predicted[mask] = rec.label
        unassigned &= ~mask
    classified = int(m - unassigned.sum())
    if classified:
        wrong = int((predicted[~unassigned] !=
                     oracle.train_labels[~unassigned]).sum())
        err = 100.0 * wrong / classified
    else:
        err = 0.0
    return TrainingTrace(rows=rows,
                         classification_rate=100.0 * classified / m,
                         error_rate=err)
