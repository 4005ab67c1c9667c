"""Per-coordinate class statistics and additive discrimination measures.

Given the wavelet-packet tables of two labelled signal classes, each
dictionary coordinate m carries a nonnegative score saying how well that
single coordinate separates the classes.  Scores are additive over
coordinates, which is what makes the fast best-basis search applicable.

Three measures are provided:
  * lambda:              squared distance of class mean energies
  * lambda-prime:        the same distance, variance-normalized
  * lambda-double-prime: mean cross-class gap of signed coordinates over
                         mean within-class spread (sign sensitive)

All statistics are plain empirical moments with uniform sample weights.
Within-class pair averages run over ordered distinct pairs, which yields
the closed form E[(Z-Z')^2] = 2*(J/(J-1))*Var[Z].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ClassTooSmall, EmptyClass, InvalidParams
from .wavelets import NodeId, node_positions

LAMBDA_TAG = "lambda"
LAMBDA_PRIME_TAG = "lambda-prime"
LAMBDA_DOUBLE_PRIME_TAG = "lambda-double-prime"
_TAGS = (LAMBDA_TAG, LAMBDA_PRIME_TAG, LAMBDA_DOUBLE_PRIME_TAG)


@dataclass(frozen=True)
class MeasureKind:
    """Which discrimination measure to use, with its regularizer.

    The regularizer is added to denominators so that zero-dispersion
    coordinates give large finite scores instead of infinities.
    """

    tag: str
    regularizer: float = 1e-12

    def __post_init__(self):
        if self.tag not in _TAGS:
            raise InvalidParams(f"unknown measure tag {self.tag!r}")
        if not self.regularizer > 0:
            raise InvalidParams("regularizer must be positive")

    @property
    def min_class_size(self) -> int:
        """Smallest class size the measure is defined for."""
        return 2 if self.tag == LAMBDA_DOUBLE_PRIME_TAG else 1


LAMBDA = MeasureKind(LAMBDA_TAG)
LAMBDA_PRIME = MeasureKind(LAMBDA_PRIME_TAG)
LAMBDA_DOUBLE_PRIME = MeasureKind(LAMBDA_DOUBLE_PRIME_TAG)


@dataclass(frozen=True)
class CoordinateStats:
    """Empirical per-coordinate moments for two classes.

    Each field is a pair of arrays (class 1, class 2) shaped like the
    coefficient table, (depth+1, n).  Variances are population variances
    unless built with ddof=1, and are clamped at zero against rounding.
    """

    mean_z: tuple[np.ndarray, np.ndarray]
    mean_z2: tuple[np.ndarray, np.ndarray]
    var_z2: tuple[np.ndarray, np.ndarray]
    var_z: tuple[np.ndarray, np.ndarray]
    sizes: tuple[int, int]


def table_moments(tables: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Mean of Z, Z^2, Z^4 over a (J, depth+1, n) batch of tables."""
    if tables.shape[0] == 0:
        raise EmptyClass("cannot take moments of an empty class")
    sq = tables * tables
    return tables.mean(axis=0), sq.mean(axis=0), (sq * sq).mean(axis=0)


def _variance(m_low: np.ndarray, m_high: np.ndarray, j: int, ddof: int) -> np.ndarray:
    # Var[X] from E[X] and E[X^2]; unbiased variant rescales by J/(J-1).
    v = np.maximum(m_high - m_low * m_low, 0.0)
    if ddof == 1:
        if j < 2:
            raise ClassTooSmall("sample variance needs at least two signals")
        v = v * (j / (j - 1))
    return v


def coordinate_stats(tables1: np.ndarray, tables2: np.ndarray,
                     ddof: int = 0) -> CoordinateStats:
    """Per-coordinate moments of both classes from their packet tables."""
    j1, j2 = tables1.shape[0], tables2.shape[0]
    if j1 == 0 or j2 == 0:
        raise EmptyClass("both classes must be nonempty")
    m1a, m2a, m4a = table_moments(tables1)
    m1b, m2b, m4b = table_moments(tables2)
    return CoordinateStats(
        mean_z=(m1a, m1b),
        mean_z2=(m2a, m2b),
        var_z2=(_variance(m2a, m4a, j1, ddof), _variance(m2b, m4b, j2, ddof)),
        var_z=(_variance(m1a, m2a, j1, ddof), _variance(m1b, m2b, j2, ddof)),
        sizes=(j1, j2),
    )


def energy_map(tables: np.ndarray, norms: np.ndarray | None = None) -> np.ndarray:
    """Class energy distribution over dictionary coordinates.

    Entry m is sum_j (w_m . x_j)^2 / sum_j ||x_j||^2.  For unit-norm
    signals this is the per-coordinate mean squared coordinate.
    """
    if tables.shape[0] == 0:
        raise EmptyClass("energy map of an empty class")
    if norms is None:
        norms = np.sqrt((tables[:, 0, :] ** 2).sum(axis=1))
    total = float((np.asarray(norms) ** 2).sum())
    return (tables * tables).sum(axis=0) / total


def score_lambda(stats: CoordinateStats, m) -> float:
    """Squared gap of class mean energies at coordinate m."""
    d = stats.mean_z2[0][m] - stats.mean_z2[1][m]
    return float(d * d)


def score_lambda_prime(stats: CoordinateStats, m,
                       regularizer: float = 1e-12) -> float:
    """Variance-normalized squared energy gap at coordinate m."""
    d = stats.mean_z2[0][m] - stats.mean_z2[1][m]
    return float(d * d / (stats.var_z2[0][m] + stats.var_z2[1][m] + regularizer))


def score_lambda_double_prime(coords1: np.ndarray, coords2: np.ndarray,
                              regularizer: float = 1e-12) -> float:
    """Signed-separation score from raw coordinate samples of one m.

    Ratio of the root mean squared cross-class difference to the summed
    root mean squared within-class differences, pair averages taken over
    ordered distinct pairs via their closed forms.
    """
    z1 = np.asarray(coords1, dtype=np.float64)
    z2 = np.asarray(coords2, dtype=np.float64)
    j1, j2 = z1.shape[0], z2.shape[0]
    if j1 < 2 or j2 < 2:
        raise ClassTooSmall("within-class pairs need at least two signals")
    m1a, m2a = z1.mean(), (z1 * z1).mean()
    m1b, m2b = z2.mean(), (z2 * z2).mean()
    cross = max(m2a - 2.0 * m1a * m1b + m2b, 0.0)
    within1 = 2.0 * (j1 / (j1 - 1)) * max(m2a - m1a * m1a, 0.0)
    within2 = 2.0 * (j2 / (j2 - 1)) * max(m2b - m1b * m1b, 0.0)
    return float(np.sqrt(cross) /
                 (np.sqrt(within1) + np.sqrt(within2) + regularizer))


def scores_from_moments(kind: MeasureKind,
                        j1: int, m1a, m2a, m4a,
                        j2: int, m1b, m2b, m4b,
                        ddof: int = 0) -> np.ndarray:
    """Vectorized per-coordinate scores from raw class moments.

    Inputs are E[Z], E[Z^2], E[Z^4] arrays of any common shape.  This is
    the one scoring path; score_table and the cluster-search reselection
    both call it, so their scores agree bitwise.
    """
    if j1 < kind.min_class_size or j2 < kind.min_class_size:
        raise ClassTooSmall(
            f"measure {kind.tag} needs classes of size >= {kind.min_class_size}")
    if kind.tag == LAMBDA_TAG:
        d = m2a - m2b
        return d * d
    if kind.tag == LAMBDA_PRIME_TAG:
        d = m2a - m2b
        va = _variance(m2a, m4a, j1, ddof)
        vb = _variance(m2b, m4b, j2, ddof)
        return d * d / (va + vb + kind.regularizer)
    cross = np.maximum(m2a - 2.0 * m1a * m1b + m2b, 0.0)
    within1 = 2.0 * (j1 / (j1 - 1)) * np.maximum(m2a - m1a * m1a, 0.0)
    within2 = 2.0 * (j2 / (j2 - 1)) * np.maximum(m2b - m1b * m1b, 0.0)
    return np.sqrt(cross) / (np.sqrt(within1) + np.sqrt(within2)
                             + kind.regularizer)


@dataclass(frozen=True)
class ScoreTable:
    """Per-coordinate discrimination scores over the whole tree.

    ``values`` mirrors the coefficient-table layout: row l holds the
    2^l blocks of level l side by side.
    """

    values: np.ndarray
    kind: MeasureKind

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def depth(self) -> int:
        return self.values.shape[0] - 1

    @property
    def signal_length(self) -> int:
        return self.values.shape[1]

    def node_scores(self, node: NodeId) -> np.ndarray:
        start, stop = node_positions(node, self.signal_length)
        return self.values[node.level, start:stop]

    def node_total(self, node: NodeId) -> float:
        return float(self.node_scores(node).sum())

    def basis_score(self, nodes) -> float:
        return float(sum(self.node_total(nd) for nd in nodes))


def score_table(tables1: np.ndarray, tables2: np.ndarray, kind: MeasureKind,
                ddof: int = 0) -> ScoreTable:
    """Score every dictionary coordinate for separating the two classes."""
    if tables1.shape[0] == 0 or tables2.shape[0] == 0:
        raise EmptyClass("both classes must be nonempty")
    if tables1.shape[1:] != tables2.shape[1:]:
        raise EmptyClass("classes disagree on table shape")
    m1a, m2a, m4a = table_moments(tables1)
    m1b, m2b, m4b = table_moments(tables2)
    vals = scores_from_moments(kind, tables1.shape[0], m1a, m2a, m4a,
                               tables2.shape[0], m1b, m2b, m4b, ddof)
    return ScoreTable(values=np.ascontiguousarray(vals), kind=kind)


def interval_overlap(stats: CoordinateStats, coordinates) -> float:
    """Diagnostic: total overlap length of the per-class energy intervals.

    At each coordinate, class y spans [E[Z^2] - sqrt(Var[Z^2]),
    E[Z^2] + sqrt(Var[Z^2])]; the overlaps are summed over the given
    (level, column) coordinates.
    """
    total = 0.0
    for m in coordinates:
        lo1 = stats.mean_z2[0][m] - np.sqrt(stats.var_z2[0][m])
        hi1 = stats.mean_z2[0][m] + np.sqrt(stats.var_z2[0][m])
        lo2 = stats.mean_z2[1][m] - np.sqrt(stats.var_z2[1][m])
        hi2 = stats.mean_z2[1][m] + np.sqrt(stats.var_z2[1][m])
        total += max(0.0, min(hi1, hi2) - max(lo1, lo2))
    return float(total)
