"""Discriminant best-basis search and top-K feature projection.

Because the per-coordinate scores are additive, the best tiling of the
dictionary tree (the basis maximizing the summed score) is found exactly
by one bottom-up sweep: each node keeps itself if its own coordinates
score at least as much as the best combination of its two subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidParams, KTooLarge
from .measures import ScoreTable
from .wavelets import NodeId, node_positions

__all__ = ["Basis", "FeatureSpace", "best_basis", "top_k_features",
           "project", "project_many"]


@dataclass(frozen=True)
class Basis:
    """An antichain of tree nodes that tiles the signal axis exactly once."""

    nodes: tuple[NodeId, ...]
    score: float

    def __post_init__(self):
        cover = sum(2.0 ** -nd.level for nd in self.nodes)
        if abs(cover - 1.0) > 1e-9:
            raise InvalidParams(f"nodes do not tile the axis (cover {cover})")


def best_basis(table: ScoreTable, depth: int | None = None) -> Basis:
    """Highest-scoring tiling of the tree, ties resolved toward the parent."""
    if depth is None:
        depth = table.depth
    # best[l] holds, per block of level l, the best achievable subtree score
    # and whether the block keeps itself (True) or splits (False).
    best = [np.empty(1 << l) for l in range(depth + 1)]
    keep = [np.empty(1 << l, dtype=bool) for l in range(depth + 1)]
    for b in range(1 << depth):
        best[depth][b] = table.node_total(NodeId(depth, b))
        keep[depth][b] = True
    for l in range(depth - 1, -1, -1):
        for b in range(1 << l):
            own = table.node_total(NodeId(l, b))
            combined = best[l + 1][2 * b] + best[l + 1][2 * b + 1]
            if own >= combined:
                best[l][b], keep[l][b] = own, True
            else:
                best[l][b], keep[l][b] = combined, False
    nodes: list[NodeId] = []
    stack = [NodeId(0, 0)]
    while stack:
        nd = stack.pop()
        if keep[nd.level][nd.block]:
            nodes.append(nd)
        else:
            stack.append(NodeId(nd.level + 1, 2 * nd.block + 1))
            stack.append(NodeId(nd.level + 1, 2 * nd.block))
    nodes.sort()
    return Basis(nodes=tuple(nodes), score=float(best[0][0]))


@dataclass(frozen=True, eq=False)
class FeatureSpace:
    """The K best-basis coordinates ranked by descending score.

    ``rows``/``cols`` address the features inside a coefficient table, so
    projection is a single fancy-indexing gather.
    """

    features: tuple[tuple[NodeId, int], ...]
    scores: tuple[float, ...]
    source_basis: Basis
    signal_length: int
    depth: int
    rows: np.ndarray
    cols: np.ndarray

    @property
    def k(self) -> int:
        return len(self.features)

    @property
    def flat_ids(self) -> tuple[int, ...]:
        """Stable integer ids: level * signal_length + table column."""
        return tuple(int(r) * self.signal_length + int(c)
                     for r, c in zip(self.rows, self.cols))


def top_k_features(basis: Basis, table: ScoreTable, k: int) -> FeatureSpace:
    """Pick the K highest-scoring coordinates of the basis, in rank order.

    Ties are broken by (level, block, index) so the ranking is total.
    """
    n = table.signal_length
    if not 1 <= k <= n:
        raise KTooLarge(f"K={k} outside [1, {n}]")
    ranked = []
    for nd in basis.nodes:
        start, _ = node_positions(nd, n)
        scores = table.node_scores(nd)
        for i in range(scores.shape[0]):
            ranked.append((-float(scores[i]), nd.level, nd.block, i, start + i))
    ranked.sort()
    chosen = ranked[:k]
    features = tuple((NodeId(l, b), i) for _, l, b, i, _ in chosen)
    rows = np.array([l for _, l, _, _, _ in chosen], dtype=np.intp)
    cols = np.array([c for _, _, _, _, c in chosen], dtype=np.intp)
    return FeatureSpace(
        features=features,
        scores=tuple(-neg for neg, _, _, _, _ in chosen),
        source_basis=basis,
        signal_length=n,
        depth=table.depth,
        rows=rows,
        cols=cols,
    )


def project(tree, fs: FeatureSpace, k: int | None = None) -> np.ndarray:
    """Coordinates of one signal in the first k features of fs."""
    table = tree.table if hasattr(tree, "table") else np.asarray(tree)
    return project_many(table[None, :, :], fs, k)[0]


def project_many(tables: np.ndarray, fs: FeatureSpace,
                 k: int | None = None) -> np.ndarray:
    """(m, depth+1, n) tables -> (m, k) feature points."""
    if k is None:
        k = fs.k
    if not 1 <= k <= fs.k:
        raise DimensionMismatch(f"k={k} outside [1, {fs.k}]")
    if tables.ndim != 3 or tables.shape[1] <= fs.depth or tables.shape[2] != fs.signal_length:
        raise DimensionMismatch(
            f"tables shaped {tables.shape} do not match feature space "
            f"(depth {fs.depth}, length {fs.signal_length})")
    return np.ascontiguousarray(tables[:, fs.rows[:k], fs.cols[:k]])
