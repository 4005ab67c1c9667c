"""Weighted-vote classification with oracles and their superpositions.

A single oracle votes by scanning its records in discovery order and
returning the first cube that contains the signal's feature projection,
weighted by (1 - epsilon) * cluster_size / training_size.  Ensembles sum
the weights of their members' votes per class and take the argmax; a
sample no member matched comes back Undetermined (label ``None``), and an
exact tie at the top resolves to the earliest class in the ensemble's
class order.

One-vs-rest wrappers cover n > 2 classes: member i is trained on class i
against everything else.  A member's vote for its "rest" side is a vote
against class i, so its weight is credited to every other class; this is
what keeps samples that resemble no single class classifiable by
elimination.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .basis import project_many
from .dataset import Dataset
from .dcsa import DcsaParams, Oracle, run_dcsa
from .errors import ConfigMismatch, EmptyDataset
from .wavelets import DictionarySpec, wpt_analyze_many

UNDETERMINED = None

_CHUNK = 256


@dataclass(frozen=True)
class Vote:
    """One oracle's opinion on one signal; Undetermined carries weight 0."""

    label: int | None
    weight: float


@dataclass(frozen=True, eq=False)
class EnsembleMember:
    """An oracle plus the class it speaks for.

    positive_label None means both of the oracle's labels count directly
    (plain two-class use).  Otherwise the member is a one-vs-rest voter:
    a match on its positive label backs that class, and a match on the
    artificial "rest" label backs every other class in the ensemble.
    """

    oracle: Oracle
    positive_label: int | None = None


@dataclass(frozen=True, eq=False)
class EnsembleSpec:
    """A weighted-majority ensemble over one or more member oracles."""

    members: tuple[EnsembleMember, ...]

    def __post_init__(self):
        if not self.members:
            raise ConfigMismatch("ensemble needs at least one member")
        lengths = {m.oracle.signal_length for m in self.members}
        if len(lengths) != 1:
            raise ConfigMismatch(
                f"members disagree on signal length: {sorted(lengths)}")

    @property
    def signal_length(self) -> int:
        return self.members[0].oracle.signal_length

    def vote_classes(self) -> tuple[int, ...]:
        """All labels the ensemble can emit, in first-appearance order."""
        seen: list[int] = []
        for m in self.members:
            labels = ([m.positive_label] if m.positive_label is not None
                      else [m.oracle.label_a, m.oracle.label_b])
            for c in labels:
                if c not in seen:
                    seen.append(c)
        return tuple(seen)

    def to_json(self) -> str:
        doc = {"format": 1,
               "members": [{"positive_label": m.positive_label,
                            "oracle": json.loads(m.oracle.to_json())}
                           for m in self.members]}
        return json.dumps(doc, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "EnsembleSpec":
        doc = json.loads(text)
        if doc.get("format") != 1:
            raise ConfigMismatch(f"unsupported ensemble format {doc.get('format')!r}")
        members = tuple(
            EnsembleMember(
                oracle=Oracle.from_json(json.dumps(m["oracle"])),
                positive_label=(None if m["positive_label"] is None
                                else int(m["positive_label"])))
            for m in doc["members"])
        return cls(members=members)


def ensemble_of(oracle: Oracle) -> EnsembleSpec:
    return EnsembleSpec(members=(EnsembleMember(oracle=oracle),))


def merge_ensembles(specs) -> EnsembleSpec:
    """Superposition: pool every member of every spec into one ensemble."""
    members = tuple(m for spec in specs for m in spec.members)
    return EnsembleSpec(members=members)


def oracle_votes(oracle: Oracle, tables: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """First-match votes for a batch of precomputed coefficient tables.

    Returns (labels, weights, determined); labels are meaningful only
    where determined is True.
    """
    m = tables.shape[0]
    if tables.shape[2] != oracle.signal_length or tables.shape[1] <= oracle.depth:
        raise ConfigMismatch(
            f"tables shaped {tables.shape} do not fit oracle "
            f"(length {oracle.signal_length}, depth {oracle.depth})")
    labels = np.zeros(m, dtype=np.int64)
    weights = np.zeros(m, dtype=np.float64)
    unassigned = np.ones(m, dtype=bool)
    pts_cache: dict[int, np.ndarray] = {}
    for rec in oracle.records:
        if not unassigned.any():
            break
        pts = pts_cache.get(rec.feature_space_id)
        if pts is None:
            fs = oracle.feature_spaces[rec.feature_space_id]
            pts = np.ascontiguousarray(
                np.clip(project_many(tables, fs), -1.0, 1.0))
            pts_cache[rec.feature_space_id] = pts
        lo, hi, closed = rec.cube.bounds()
        hit = _kernels.cube_mask(pts, unassigned.astype(np.uint8),
                                 lo, hi, closed).astype(bool)
        labels[hit] = rec.label
        weights[hit] = rec.weight
        unassigned &= ~hit
    return labels, weights, ~unassigned


def _member_tables(spec: EnsembleSpec, signals: np.ndarray) -> dict[tuple, np.ndarray]:
    # one transform per distinct dictionary config among members
    tables: dict[tuple, np.ndarray] = {}
    for m in spec.members:
        key = (m.oracle.dict_spec.family, m.oracle.dict_spec.taps, m.oracle.depth)
        if key not in tables:
            tables[key] = wpt_analyze_many(signals, m.oracle.dict_spec.filters(),
                                           m.oracle.depth)
    return tables


def member_votes(spec: EnsembleSpec, signals: np.ndarray) -> list[list[Vote]]:
    """Raw votes of every member for every signal: result[i][j] is member
    j's first-match vote on signal i.  One-vs-rest "rest" votes keep their
    stored label and weight; aggregation decides what they mean.  A member
    that matched nothing votes Undetermined with weight 0."""
    signals = np.ascontiguousarray(signals, dtype=np.float64)
    out: list[list[Vote]] = [[] for _ in range(signals.shape[0])]
    for start in range(0, signals.shape[0], _CHUNK):
        chunk = signals[start:start + _CHUNK]
        tables = _member_tables(spec, chunk)
        for member in spec.members:
            key = (member.oracle.dict_spec.family, member.oracle.dict_spec.taps,
                   member.oracle.depth)
            labels, weights, determined = oracle_votes(member.oracle, tables[key])
            for i in range(chunk.shape[0]):
                if not determined[i]:
                    vote = Vote(UNDETERMINED, 0.0)
                else:
                    vote = Vote(int(labels[i]), float(weights[i]))
                out[start + i].append(vote)
    return out


def classify_sample(oracle: Oracle, signal: np.ndarray) -> Vote:
    """First-match vote of a single oracle on a single signal."""
    signal = np.ascontiguousarray(signal, dtype=np.float64)
    tables = wpt_analyze_many(signal[None, :], oracle.dict_spec.filters(),
                              oracle.depth)
    labels, weights, determined = oracle_votes(oracle, tables)
    if not determined[0]:
        return Vote(UNDETERMINED, 0.0)
    return Vote(int(labels[0]), float(weights[0]))


def classify_ensemble(spec: EnsembleSpec, signal: np.ndarray) -> int | None:
    """Weighted-majority label for one signal, or Undetermined."""
    labels, _ = classify_batch(spec, np.asarray(signal)[None, :])
    return labels[0]


def classify_batch(spec: EnsembleSpec, signals: np.ndarray) -> tuple[list, np.ndarray]:
    """Ensemble labels for a batch; returns (labels list, class weight sums).

    labels[i] is an int, or None when no member matched the sample.  The
    weight matrix has one column per spec.vote_classes() entry.  A
    one-vs-rest member's "rest" vote adds its weight to every class except
    the member's own.  Exact ties at the top go to the earliest class in
    vote_classes() order.
    """
    signals = np.ascontiguousarray(signals, dtype=np.float64)
    if signals.ndim != 2 or signals.shape[1] != spec.signal_length:
        raise ConfigMismatch(
            f"signals shaped {signals.shape} do not match length "
            f"{spec.signal_length}")
    classes = spec.vote_classes()
    col = {c: j for j, c in enumerate(classes)}
    m = signals.shape[0]
    totals = np.zeros((m, len(classes)), dtype=np.float64)
    for start in range(0, m, _CHUNK):
        chunk = signals[start:start + _CHUNK]
        tables = _member_tables(spec, chunk)
        for member in spec.members:
            key = (member.oracle.dict_spec.family, member.oracle.dict_spec.taps,
                   member.oracle.depth)
            labels, weights, determined = oracle_votes(member.oracle, tables[key])
            block = totals[start:start + chunk.shape[0]]
            if member.positive_label is None:
                for c in np.unique(labels[determined]):
                    sel = determined & (labels == c)
                    block[sel, col[int(c)]] += weights[sel]
            else:
                pos = determined & (labels == member.positive_label)
                block[pos, col[member.positive_label]] += weights[pos]
                rest = determined & ~pos
                for c in classes:
                    if c != member.positive_label:
                        block[rest, col[c]] += weights[rest]
    out: list = []
    for i in range(m):
        row = totals[i]
        best = row.max() if row.size else 0.0
        if best <= 0.0:
            out.append(UNDETERMINED)
        else:
            out.append(classes[int(row.argmax())])
    return out, totals


@dataclass(frozen=True)
class ScoreReport:
    """Dataset-level tallies of an ensemble's decisions."""

    total: int
    classified: int
    undetermined: int
    correct: int
    wrong: int
    classification_rate: float
    error_rate: float
    confusion: dict

    def summary(self) -> str:
        return (f"classified {self.classified}/{self.total} "
                f"(rate {self.classification_rate:.2f}%), "
                f"errors {self.wrong} (error rate {self.error_rate:.2f}%)")


def score_dataset(spec: EnsembleSpec, data: Dataset) -> ScoreReport:
    """Classification rate (share assigned any label) and error rate
    (share wrong among those assigned)."""
    if len(data) == 0:
        raise EmptyDataset("nothing to score")
    labels, _ = classify_batch(spec, data.signals)
    confusion: dict = {}
    correct = wrong = undet = 0
    for truth, pred in zip(data.labels, labels):
        confusion[(int(truth), pred)] = confusion.get((int(truth), pred), 0) + 1
        if pred is UNDETERMINED:
            undet += 1
        elif pred == truth:
            correct += 1
        else:
            wrong += 1
    classified = correct + wrong
    return ScoreReport(
        total=len(data), classified=classified, undetermined=undet,
        correct=correct, wrong=wrong,
        classification_rate=100.0 * classified / len(data),
        error_rate=(100.0 * wrong / classified) if classified else 0.0,
        confusion=confusion)


def make_one_vs_rest(train: Dataset, dict_spec: DictionarySpec,
                     params: DcsaParams) -> EnsembleSpec:
    """Train an n-class ensemble; n = 2 degenerates to a single oracle."""
    classes = train.class_order
    if len(classes) == 2:
        return ensemble_of(run_dcsa(train, dict_spec, params))
    rest = min(classes) - 1
    members = []
    for c in classes:
        rel = train.relabel_one_vs_rest(c, rest_label=rest)
        members.append(EnsembleMember(oracle=run_dcsa(rel, dict_spec, params),
                                      positive_label=c))
    return EnsembleSpec(members=tuple(members))


def dump_predictions(spec: EnsembleSpec, signals: np.ndarray) -> list[str]:
    """One text line per sample: id, label, winning weight, member votes."""
    labels, totals = classify_batch(spec, signals)
    votes = member_votes(spec, signals)
    classes = spec.vote_classes()
    col = {c: j for j, c in enumerate(classes)}
    lines = []
    for i, label in enumerate(labels):
        if label is UNDETERMINED:
            head = f"{i}\tUNDETERMINED\t0.0"
        else:
            head = f"{i}\t{label}\t{float(totals[i, col[label]])!r}"
        parts = []
        for member, v in zip(spec.members, votes[i]):
            if v.label is UNDETERMINED:
                parts.append("UNDETERMINED")
            elif (member.positive_label is not None
                  and v.label != member.positive_label):
                parts.append(f"not-{member.positive_label}:{v.weight!r}")
            else:
                parts.append(f"{v.label}:{v.weight!r}")
        lines.append(head + "\t" + "\t".join(parts))
    return lines
