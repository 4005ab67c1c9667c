"""Labeled signal collections and their on-disk formats.

The binary format is little-endian throughout: a fixed header (magic,
version, signal length, class count, per-class label/count pairs)
followed by one record per signal (int32 label, then float64 samples).
A CSV export (label in column 0, shortest round-trip float repr) is
provided for interoperability.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import EmptyDataset

_MAGIC = b"LDBD"
_VERSION = 1


@dataclass(frozen=True)
class Dataset:
    """Signals with integer class labels.

    class_order fixes the canonical label ordering used by reports and
    one-vs-rest decompositions; it is the sorted set of distinct labels
    unless constructed otherwise.
    """

    signals: np.ndarray
    labels: np.ndarray
    class_order: tuple[int, ...]

    def __post_init__(self):
        if self.signals.ndim != 2 or self.signals.shape[0] != self.labels.shape[0]:
            raise EmptyDataset("signals and labels disagree on sample count")
        if self.signals.shape[0] == 0:
            raise EmptyDataset("dataset has no signals")
        self.signals.setflags(write=False)
        self.labels.setflags(write=False)

    def __len__(self) -> int:
        return self.signals.shape[0]

    @property
    def signal_length(self) -> int:
        return self.signals.shape[1]

    def by_class(self, label: int) -> np.ndarray:
        return self.signals[self.labels == label]

    def class_sizes(self) -> dict[int, int]:
        return {c: int((self.labels == c).sum()) for c in self.class_order}

    def relabel_one_vs_rest(self, target: int, rest_label: int = 0) -> "Dataset":
        """Binary view: ``target`` keeps its label, everything else gets
        ``rest_label``.  Signal order is preserved."""
        labels = np.where(self.labels == target, target, rest_label)
        return Dataset(signals=self.signals, labels=labels,
                       class_order=(target, rest_label))


def make_dataset(signals: np.ndarray, labels) -> Dataset:
    signals = np.ascontiguousarray(signals, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.int64)
    order = tuple(sorted(int(c) for c in np.unique(labels)))
    return Dataset(signals=signals, labels=labels, class_order=order)


def concat(parts: list[Dataset]) -> Dataset:
    return make_dataset(np.concatenate([p.signals for p in parts]),
                        np.concatenate([p.labels for p in parts]))


def save_dataset(ds: Dataset, path: str) -> None:
    sizes = ds.class_sizes()
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<III", _VERSION, ds.signal_length, len(ds.class_order)))
        for c in ds.class_order:
            fh.write(struct.pack("<iI", c, sizes[c]))
        for i in range(len(ds)):
            fh.write(struct.pack("<i", int(ds.labels[i])))
            fh.write(ds.signals[i].astype("<f8").tobytes())


def load_dataset(path: str) -> Dataset:
    with open(path, "rb") as fh:
        if fh.read(4) != _MAGIC:
            raise EmptyDataset(f"{path}: not a dataset file (bad magic)")
        version, n, n_classes = struct.unpack("<III", fh.read(12))
        if version != _VERSION:
            raise EmptyDataset(f"{path}: unsupported version {version}")
        order = []
        total = 0
        for _ in range(n_classes):
            c, count = struct.unpack("<iI", fh.read(8))
            order.append(c)
            total += count
        labels = np.empty(total, dtype=np.int64)
        signals = np.empty((total, n), dtype=np.float64)
        for i in range(total):
            (labels[i],) = struct.unpack("<i", fh.read(4))
            signals[i] = np.frombuffer(fh.read(8 * n), dtype="<f8")
    return Dataset(signals=signals, labels=labels, class_order=tuple(order))


def export_csv(ds: Dataset, path: str) -> None:
    with open(path, "w") as fh:
        for i in range(len(ds)):
            row = ",".join(repr(float(v)) for v in ds.signals[i])
            fh.write(f"{int(ds.labels[i])},{row}\n")


def read_csv(path: str) -> Dataset:
    labels, rows = [], []
    with open(path) as fh:
        for line in fh:
            parts = line.strip().split(",")
            if not parts or parts == [""]:
                continue
            labels.append(int(parts[0]))
            rows.append([float(v) for v in parts[1:]])
    if not rows:
        raise EmptyDataset(f"{path}: no rows")
    return make_dataset(np.array(rows), labels)
