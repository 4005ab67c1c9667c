"""Discrimination measures: moments, closed forms, and score tables."""

import numpy as np
import pytest

from ldbkit.errors import ClassTooSmall, EmptyClass, InvalidParams
from ldbkit.measures import (LAMBDA, LAMBDA_DOUBLE_PRIME, LAMBDA_PRIME,
                             CoordinateStats, MeasureKind, coordinate_stats,
                             energy_map, interval_overlap, score_lambda,
                             score_lambda_double_prime, score_lambda_prime,
                             score_table, scores_from_moments, table_moments)
from ldbkit.wavelets import NodeId, build_filter, wpt_analyze_many


def pairwise_double_prime_oracle(z1, z2, reg):
    """Brute force over ordered distinct pairs, straight from the definition."""
    def mean_pairs(a, b, exclude_same_index):
        total, count = 0.0, 0
        for i in range(len(a)):
            for j in range(len(b)):
                if exclude_same_index and i == j:
                    continue
                total += (a[i] - b[j]) ** 2
                count += 1
        return total / count

    cross = mean_pairs(z1, z2, False)
    within1 = mean_pairs(z1, z1, True)
    within2 = mean_pairs(z2, z2, True)
    return np.sqrt(cross) / (np.sqrt(within1) + np.sqrt(within2) + reg)


class TestMeasureKind:
    def test_known_tags(self):
        assert LAMBDA.tag == "lambda"
        assert LAMBDA_PRIME.tag == "lambda-prime"
        assert LAMBDA_DOUBLE_PRIME.tag == "lambda-double-prime"

    def test_min_class_size(self):
        assert LAMBDA.min_class_size == 1
        assert LAMBDA_PRIME.min_class_size == 1
        assert LAMBDA_DOUBLE_PRIME.min_class_size == 2

    def test_validation(self):
        with pytest.raises(InvalidParams):
            MeasureKind(tag="entropy")
        with pytest.raises(InvalidParams):
            MeasureKind(tag="lambda", regularizer=-1.0)


def tiny_tables(rng, j, depth=2, n=8):
    sigs = rng.standard_normal((j, n))
    sigs /= np.linalg.norm(sigs, axis=1, keepdims=True)
    return wpt_analyze_many(sigs, build_filter("coiflet", 6), depth)


def test_table_moments_match_numpy():
    rng = np.random.default_rng(0)
    t = tiny_tables(rng, 9)
    m1, m2, m4 = table_moments(t)
    assert np.allclose(m1, t.mean(axis=0), atol=1e-15)
    assert np.allclose(m2, (t ** 2).mean(axis=0), atol=1e-15)
    assert np.allclose(m4, (t ** 4).mean(axis=0), atol=1e-15)
    with pytest.raises(EmptyClass):
        table_moments(t[:0])


def test_coordinate_stats_match_numpy():
    rng = np.random.default_rng(1)
    a, b = tiny_tables(rng, 8), tiny_tables(rng, 5)
    st = coordinate_stats(a, b)
    assert np.allclose(st.var_z[0], a.var(axis=0), atol=1e-12)
    assert np.allclose(st.var_z2[1], (b ** 2).var(axis=0), atol=1e-12)
    assert st.sizes == (8, 5)
    st1 = coordinate_stats(a, b, ddof=1)
    assert np.allclose(st1.var_z[0], a.var(axis=0, ddof=1), atol=1e-12)
    with pytest.raises(ClassTooSmall):
        coordinate_stats(a[:1], b, ddof=1)


def test_lambda_closed_form():
    rng = np.random.default_rng(2)
    a, b = tiny_tables(rng, 6), tiny_tables(rng, 7)
    st = coordinate_stats(a, b)
    d = (a ** 2).mean(axis=0) - (b ** 2).mean(axis=0)
    for m in [(0, 0), (1, 3), (2, 7)]:
        assert abs(score_lambda(st, m) - d[m] ** 2) < 1e-14


def test_lambda_prime_closed_form():
    rng = np.random.default_rng(3)
    a, b = tiny_tables(rng, 6), tiny_tables(rng, 7)
    st = coordinate_stats(a, b)
    d = (a ** 2).mean(axis=0) - (b ** 2).mean(axis=0)
    v = (a ** 2).var(axis=0) + (b ** 2).var(axis=0)
    m = (1, 5)
    expected = d[m] ** 2 / (v[m] + 1e-12)
    assert abs(score_lambda_prime(st, m, 1e-12) - expected) < 1e-12


@pytest.mark.parametrize("j1,j2", [(2, 2), (3, 5), (7, 4), (12, 12)])
def test_double_prime_matches_pairwise_oracle(j1, j2):
    rng = np.random.default_rng(j1 * 31 + j2)
    z1 = rng.standard_normal(j1)
    z2 = rng.standard_normal(j2)
    got = score_lambda_double_prime(z1, z2, 1e-12)
    want = pairwise_double_prime_oracle(z1, z2, 1e-12)
    assert abs(got - want) < 1e-10


def test_double_prime_needs_pairs():
    with pytest.raises(ClassTooSmall):
        score_lambda_double_prime(np.array([1.0]), np.array([0.5, 0.2]), 1e-12)


def test_double_prime_sign_sensitivity():
    # identical magnitudes with opposite signs: lambda sees nothing,
    # lambda'' sees everything
    z = np.full(10, 0.8)
    a = np.zeros((10, 1, 1)); a[:, 0, 0] = z
    b = np.zeros((10, 1, 1)); b[:, 0, 0] = -z
    st = coordinate_stats(a, b)
    assert score_lambda(st, (0, 0)) == 0.0
    assert score_lambda_prime(st, (0, 0), 1e-12) == 0.0
    assert score_lambda_double_prime(a[:, 0, 0], b[:, 0, 0], 1e-12) > 1e5


def test_constant_coordinate_scores_zero_not_nan():
    a = np.full((4, 1, 2), 0.3)
    b = np.full((5, 1, 2), 0.3)
    st = coordinate_stats(a, b)
    assert score_lambda_prime(st, (0, 0), 1e-12) == 0.0
    assert score_lambda_double_prime(a[:, 0, 0], b[:, 0, 0], 1e-12) == 0.0


def test_scores_from_moments_agrees_with_direct():
    rng = np.random.default_rng(9)
    a, b = tiny_tables(rng, 10), tiny_tables(rng, 6)
    st = coordinate_stats(a, b)
    m1a, m2a, m4a = table_moments(a)
    m1b, m2b, m4b = table_moments(b)
    for kind in (LAMBDA, LAMBDA_PRIME, LAMBDA_DOUBLE_PRIME):
        vals = scores_from_moments(kind, 10, m1a, m2a, m4a, 6, m1b, m2b, m4b)
        m = (2, 3)
        if kind is LAMBDA:
            want = score_lambda(st, m)
        elif kind is LAMBDA_PRIME:
            want = score_lambda_prime(st, m, kind.regularizer)
        else:
            want = score_lambda_double_prime(a[:, 2, 3], b[:, 2, 3],
                                             kind.regularizer)
        assert abs(vals[m] - want) < 1e-10


def test_score_table_structure():
    rng = np.random.default_rng(10)
    a, b = tiny_tables(rng, 8), tiny_tables(rng, 8)
    st = score_table(a, b, LAMBDA_PRIME)
    assert st.values.shape == (3, 8)
    assert st.depth == 2 and st.signal_length == 8
    assert st.kind is LAMBDA_PRIME
    node = NodeId(1, 1)
    assert np.array_equal(st.node_scores(node), st.values[1, 4:8])
    assert abs(st.node_total(node) - st.values[1, 4:8].sum()) < 1e-15
    cover = [NodeId(1, 0), NodeId(2, 2), NodeId(2, 3)]
    want = st.values[1, :4].sum() + st.values[2, 4:6].sum() + st.values[2, 6:8].sum()
    assert abs(st.basis_score(cover) - want) < 1e-12
    with pytest.raises((ValueError, RuntimeError)):
        st.values[0, 0] = 1.0


def test_score_table_min_class_size():
    rng = np.random.default_rng(11)
    a, b = tiny_tables(rng, 1), tiny_tables(rng, 4)
    score_table(a, b, LAMBDA)  # one signal is enough for lambda
    with pytest.raises(ClassTooSmall):
        score_table(a, b, LAMBDA_DOUBLE_PRIME)


def test_energy_map_rows_sum_to_one_for_unit_norm():
    rng = np.random.default_rng(12)
    t = tiny_tables(rng, 9)
    gamma = energy_map(t)
    # every level of the table carries the full (unit) energy
    assert np.allclose(gamma.sum(axis=1), 1.0, atol=1e-9)


def test_interval_overlap_hand_case():
    mz = (np.zeros((1, 1)), np.zeros((1, 1)))
    mz2 = (np.array([[1.0]]), np.array([[1.5]]))
    vz2 = (np.array([[0.25]]), np.array([[0.25]]))  # sqrt = 0.5
    vz = (np.zeros((1, 1)), np.zeros((1, 1)))
    st = CoordinateStats(mean_z=mz, mean_z2=mz2, var_z2=vz2, var_z=vz,
                         sizes=(3, 3))
    # [0.5, 1.5] vs [1.0, 2.0] overlap 0.5
    assert abs(interval_overlap(st, [(0, 0)]) - 0.5) < 1e-12
