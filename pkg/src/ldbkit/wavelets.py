"""Quadrature-mirror filters and the periodized wavelet-packet tree.

The dictionary is the binary tree of subspaces obtained by recursively
splitting each node with a low-pass/high-pass convolve-then-decimate
pair under periodic (circular) boundary handling, which keeps the
transform exactly orthonormal at every dyadic length.

Conventions (fixed; serialized models depend on them):
  * zero-based circular indexing: child[t] = sum_i f[i] * x[(2t+i) % nb]
  * high-pass by alternating flip: hi[i] = (-1)^i * lo[taps-1-i]
  * node (l, b) has children (l+1, 2b) = low and (l+1, 2b+1) = high
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels
from .errors import (
    DepthExceedsLog2N,
    IndexOutOfRange,
    LengthNotDyadic,
    UnsupportedFilter,
)

# Standard published coiflet taps (orders 1 and 3). Correctness is
# enforced by the QmfPair invariant tests, not by trusting these digits.
_COIFLET_LOWPASS = {
    6: (
        0.038580777748,
        -0.126969125396,
        -0.077161555496,
        0.607491641386,
        0.745687558934,
        0.226584265197,
    ),
    18: (
        -0.003793512864,
        0.007782596426,
        0.023452696142,
        -0.065771911281,
        -0.061123390003,
        0.405176902410,
        0.793777222626,
        0.428483476378,
        -0.071799821619,
        -0.082301927106,
        0.034555027573,
        0.015880544864,
        -0.009007976137,
        -0.002574517688,
        0.001117518771,
        0.000466216960,
        -0.000070983303,
        -0.000034599773,
    ),
}


class NodeId(NamedTuple):
    """Position of one subspace in the binary dictionary tree."""

    level: int
    block: int


@dataclass(frozen=True)
class QmfPair:
    """An orthonormal low-pass/high-pass analysis filter pair."""

    family: str
    taps: int
    low_pass: np.ndarray
    high_pass: np.ndarray

    def __post_init__(self):
        self.low_pass.setflags(write=False)
        self.high_pass.setflags(write=False)


def build_filter(family: str, taps: int) -> QmfPair:
    """Return the QMF pair for the given family and filter length.

    Only coiflets with 6 or 18 taps are provided; anything else raises
    UnsupportedFilter.
    """
    if family != "coiflet" or taps not in _COIFLET_LOWPASS:
        raise UnsupportedFilter(f"no filter for family={family!r} taps={taps}")
    lo = np.asarray(_COIFLET_LOWPASS[taps], dtype=np.float64)
    hi = np.empty_like(lo)
    for i in range(taps):
        hi[i] = lo[taps - 1 - i] if i % 2 == 0 else -lo[taps - 1 - i]
    return QmfPair(family=family, taps=taps, low_pass=lo, high_pass=hi)


@dataclass(frozen=True)
class DictionarySpec:
    """Which dictionary a model was built in: filter plus tree depth.

    depth=None means full depth (log2 of the signal length, capped at 10),
    resolved once the signal length is known.
    """

    family: str = "coiflet"
    taps: int = 18
    depth: int | None = None

    def filters(self) -> QmfPair:
        return build_filter(self.family, self.taps)

    def resolve_depth(self, signal_length: int) -> int:
        full = _log2_exact(signal_length)
        if self.depth is None:
            return min(full, 10)
        if self.depth > full:
            raise DepthExceedsLog2N(
                f"depth {self.depth} exceeds log2({signal_length})"
            )
        return self.depth

    def to_dict(self) -> dict:
        return {"family": self.family, "taps": self.taps, "depth": self.depth}

    @classmethod
    def from_dict(cls, d: dict) -> "DictionarySpec":
        return cls(family=d["family"], taps=int(d["taps"]),
                   depth=None if d["depth"] is None else int(d["depth"]))


def _log2_exact(n: int) -> int:
    if n < 2 or n & (n - 1):
        raise LengthNotDyadic(f"signal length {n} is not a power of two >= 2")
    return n.bit_length() - 1


class CoefficientTree:
    """Wavelet-packet coefficients of one signal over the full tree.

    Level l of ``table`` holds the 2^l blocks of that level concatenated,
    so node (l, b) occupies columns [b * n/2^l, (b+1) * n/2^l).
    """

    __slots__ = ("table", "signal_length", "depth")

    def __init__(self, table: np.ndarray, depth: int):
        self.table = table
        self.signal_length = table.shape[1]
        self.depth = depth
        table.setflags(write=False)

    def block(self, node: NodeId) -> np.ndarray:
        level, block = node
        if not (0 <= level <= self.depth and 0 <= block < (1 << level)):
            raise IndexOutOfRange(f"node {node} outside tree of depth {self.depth}")
        width = self.signal_length >> level
        return self.table[level, block * width:(block + 1) * width]

    def coordinate(self, node: NodeId, index: int) -> float:
        """One dictionary coordinate: the inner product of the signal with
        basis vector ``index`` of subspace ``node``."""
        blk = self.block(node)
        if not 0 <= index < blk.shape[0]:
            raise IndexOutOfRange(f"index {index} outside node {node}")
        return float(blk[index])


def _analyze_table(signals: np.ndarray, qmf: QmfPair, depth: int) -> np.ndarray:
    """(m, n) signals -> (m, depth+1, n) coefficient tables."""
    m, n = signals.shape
    out = np.empty((m, depth + 1, n), dtype=np.float64)
    out[:, 0, :] = signals
    lo, hi = qmf.low_pass, qmf.high_pass
    for level in range(depth):
        width = n >> level
        half = width >> 1
        for b in range(1 << level):
            parent = np.ascontiguousarray(
                out[:, level, b * width:(b + 1) * width])
            c_lo, c_hi = _kernels.wpt_level(parent, lo, hi)
            out[:, level + 1, 2 * b * half:(2 * b + 1) * half] = c_lo
            out[:, level + 1, (2 * b + 1) * half:(2 * b + 2) * half] = c_hi
    return out


def wpt_analyze(signal: np.ndarray, qmf: QmfPair, depth: int) -> CoefficientTree:
    """Full wavelet-packet analysis of one signal down to ``depth``."""
    signal = np.asarray(signal, dtype=np.float64)
    if signal.ndim != 1:
        raise LengthNotDyadic("expected a 1-D signal")
    n = signal.shape[0]
    full = _log2_exact(n)
    if depth < 1:
        raise DepthExceedsLog2N("depth must be >= 1")
    if depth > full:
        raise DepthExceedsLog2N(f"depth {depth} exceeds log2({n}) = {full}")
    table = _analyze_table(signal[None, :], qmf, depth)[0]
    return CoefficientTree(table, depth)


def wpt_analyze_many(signals: np.ndarray, qmf: QmfPair, depth: int) -> np.ndarray:
    """Analyze a batch of signals; returns the raw (m, depth+1, n) tables.

    Row r of the result is the ``table`` of wpt_analyze(signals[r]);
    the batched and single-signal paths are bit-identical.
    """
    signals = np.ascontiguousarray(signals, dtype=np.float64)
    if signals.ndim != 2:
        raise LengthNotDyadic("expected an (m, n) batch of signals")
    n = signals.shape[1]
    full = _log2_exact(n)
    if depth < 1 or depth > full:
        raise DepthExceedsLog2N(f"depth {depth} invalid for length {n}")
    return _analyze_table(signals, qmf, depth)


def node_positions(node: NodeId, signal_length: int) -> tuple[int, int]:
    """Column span [start, stop) of a node inside a level row."""
    width = signal_length >> node.level
    return node.block * width, node.block * width + width


def all_nodes(depth: int) -> list[NodeId]:
    return [NodeId(l, b) for l in range(depth + 1) for b in range(1 << l)]
