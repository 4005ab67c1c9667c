"""Oracle votes, ensemble aggregation, one-vs-rest, scoring."""

import dataclasses

import numpy as np
import pytest

from ldbkit.classify import (UNDETERMINED, EnsembleMember, EnsembleSpec, Vote,
                             classify_batch, classify_ensemble, classify_sample,
                             dump_predictions, ensemble_of, make_one_vs_rest,
                             member_votes, merge_ensembles, score_dataset)
from ldbkit.dataset import make_dataset
from ldbkit.dcsa import DcsaParams, run_dcsa
from ldbkit.errors import ConfigMismatch, EmptyDataset
from ldbkit.measures import LAMBDA, LAMBDA_DOUBLE_PRIME, LAMBDA_PRIME
from ldbkit.wavelets import DictionarySpec

SPEC6 = DictionarySpec(family="coiflet", taps=6)
N = 32


def basis_vec(n=N, j=0, sign=1.0):
    v = np.zeros(n)
    v[j] = sign
    return v


def sign_toy(labels=(1, 2), j=50):
    sigs = np.vstack([np.tile(basis_vec(), (j, 1)),
                      np.tile(-basis_vec(), (j, 1))])
    lab = np.array([labels[0]] * j + [labels[1]] * j)
    return make_dataset(sigs, lab)


def toy_oracle(labels=(1, 2)):
    return run_dcsa(sign_toy(labels), SPEC6,
                    DcsaParams(measure=LAMBDA_DOUBLE_PRIME))


def three_class_data(rng, per_class=25, test_per_class=30):
    """Bumps at three distinct coordinates plus noise: easily separable."""
    def gen(count):
        sigs, labels = [], []
        for c, coord in ((1, 2), (2, 9), (3, 20)):
            for _ in range(count):
                v = 0.25 * rng.standard_normal(N)
                v[coord] += 3.0
                sigs.append(v / np.linalg.norm(v))
                labels.append(c)
        return make_dataset(np.array(sigs), np.array(labels))
    return gen(per_class), gen(test_per_class)


class TestSingleOracle:
    def test_classify_sample_votes(self):
        oracle = toy_oracle()
        assert classify_sample(oracle, basis_vec()) == Vote(1, 0.5)
        assert classify_sample(oracle, -basis_vec()) == Vote(2, 0.5)

    def test_first_match_order(self):
        oracle = toy_oracle()
        # drop the root record: +w then matches nothing at all
        truncated = dataclasses.replace(oracle, records=oracle.records[:1])
        assert classify_sample(truncated, basis_vec()).label is UNDETERMINED
        assert classify_sample(truncated, -basis_vec()).label == 2

    def test_empty_oracle_undetermined(self):
        oracle = toy_oracle()
        empty = dataclasses.replace(oracle, records=())
        vote = classify_sample(empty, basis_vec())
        assert vote == Vote(UNDETERMINED, 0.0)


class TestEnsembleSpec:
    def test_needs_members(self):
        with pytest.raises(ConfigMismatch):
            EnsembleSpec(members=())

    def test_signal_length_consistency(self):
        a = toy_oracle()
        short = run_dcsa(
            make_dataset(np.vstack([np.tile(basis_vec(8), (4, 1)),
                                    np.tile(-basis_vec(8), (4, 1))]),
                         np.array([1] * 4 + [2] * 4)),
            SPEC6, DcsaParams(K=2, measure=LAMBDA))
        with pytest.raises(ConfigMismatch):
            EnsembleSpec(members=(EnsembleMember(a), EnsembleMember(short)))

    def test_vote_classes_order(self):
        # class order within a member is sorted; across members it is
        # first appearance
        spec = merge_ensembles([ensemble_of(toy_oracle((3, 1))),
                                ensemble_of(toy_oracle((2, 3)))])
        assert spec.vote_classes() == (1, 3, 2)

    def test_json_roundtrip(self):
        spec = ensemble_of(toy_oracle())
        text = spec.to_json()
        back = EnsembleSpec.from_json(text)
        assert back.to_json() == text
        with pytest.raises(ConfigMismatch):
            EnsembleSpec.from_json(text.replace('"format": 1', '"format": 7'))


class TestAggregation:
    def test_weighted_majority(self):
        # two plain members trained with swapped labels vote for opposite
        # classes with equal weight; a third breaks the symmetry
        a = ensemble_of(toy_oracle((1, 2)))
        b = ensemble_of(toy_oracle((2, 1)))  # sees +w as class 2
        c = ensemble_of(toy_oracle((1, 2)))
        spec = merge_ensembles([a, b, c])
        assert classify_ensemble(spec, basis_vec()) == 1  # 1.0 vs 0.5

    def test_exact_tie_goes_to_earliest_class(self):
        a = ensemble_of(toy_oracle((1, 2)))
        b = ensemble_of(toy_oracle((2, 1)))
        spec = merge_ensembles([a, b])
        # +w: member a votes 1 (0.5), member b votes 2 (0.5) -> tie -> class 1
        assert classify_ensemble(spec, basis_vec()) == 1
        # vote_classes order decides, not label magnitude: here class 2
        # appears before class 1
        spec_rev = merge_ensembles([ensemble_of(toy_oracle((2, 3))),
                                    ensemble_of(toy_oracle((1, 2)))])
        assert spec_rev.vote_classes() == (2, 3, 1)
        # +w: first member votes 2 (0.5), second votes 1 (0.5) -> tie -> 2
        assert classify_ensemble(spec_rev, basis_vec()) == 2

    def test_no_votes_is_undetermined(self):
        oracle = toy_oracle()
        empty = dataclasses.replace(oracle, records=())
        spec = ensemble_of(empty)
        assert classify_ensemble(spec, basis_vec()) is UNDETERMINED

    def test_batch_matches_manual_aggregation(self):
        rng = np.random.default_rng(0)
        train, test = three_class_data(rng)
        spec = make_one_vs_rest(train, SPEC6, DcsaParams(mu=0.2))
        labels, totals = classify_batch(spec, test.signals)
        votes = member_votes(spec, test.signals)
        classes = spec.vote_classes()
        for i in range(len(test)):
            want = np.zeros(len(classes))
            for member, v in zip(spec.members, votes[i]):
                if v.label is UNDETERMINED:
                    continue
                if member.positive_label is None or v.label == member.positive_label:
                    want[classes.index(v.label)] += v.weight
                else:
                    # a "rest" vote backs every other class
                    for j, c in enumerate(classes):
                        if c != member.positive_label:
                            want[j] += v.weight
            assert np.allclose(totals[i], want, atol=1e-12)
            if want.max() > 0:
                assert labels[i] == classes[int(want.argmax())]
            else:
                assert labels[i] is UNDETERMINED

    def test_batch_validates_length(self):
        spec = ensemble_of(toy_oracle())
        with pytest.raises(ConfigMismatch):
            classify_batch(spec, np.zeros((2, 16)))


class TestOneVsRest:
    def test_two_class_degenerates_to_single_oracle(self):
        spec = make_one_vs_rest(sign_toy(), SPEC6,
                                DcsaParams(measure=LAMBDA_DOUBLE_PRIME))
        assert len(spec.members) == 1
        assert spec.members[0].positive_label is None

    def test_three_class_members(self):
        rng = np.random.default_rng(1)
        train, _ = three_class_data(rng)
        spec = make_one_vs_rest(train, SPEC6, DcsaParams(mu=0.2))
        assert [m.positive_label for m in spec.members] == [1, 2, 3]
        assert spec.vote_classes() == (1, 2, 3)
        for m in spec.members:
            labs = {m.oracle.label_a, m.oracle.label_b}
            assert m.positive_label in labs
            assert 0 in labs  # the artificial rest label

    def test_rest_label_avoids_collision(self):
        rng = np.random.default_rng(2)
        train, _ = three_class_data(rng)
        shifted = make_dataset(train.signals, train.labels - 1)  # classes 0,1,2
        spec = make_one_vs_rest(shifted, SPEC6, DcsaParams(mu=0.2))
        for m in spec.members:
            rest = ({m.oracle.label_a, m.oracle.label_b}
                    - {m.positive_label}).pop()
            assert rest == -1  # min(classes) - 1, clear of the real class 0

    def test_separable_three_class_problem(self):
        rng = np.random.default_rng(3)
        train, test = three_class_data(rng)
        spec = make_one_vs_rest(train, SPEC6, DcsaParams(mu=0.2))
        rep = score_dataset(spec, test)
        assert rep.classification_rate == 100.0
        assert rep.error_rate <= 5.0


class TestScoreReport:
    def test_counts_and_confusion(self):
        data = sign_toy()
        spec = ensemble_of(toy_oracle())
        rep = score_dataset(spec, data)
        assert rep.total == 100
        assert rep.classified == 100
        assert rep.undetermined == 0
        assert rep.correct == 100 and rep.wrong == 0
        assert rep.classification_rate == 100.0
        assert rep.error_rate == 0.0
        assert rep.confusion[(1, 1)] == 50
        assert rep.confusion[(2, 2)] == 50
        assert "rate 100.00%" in rep.summary()

    def test_undetermined_counted_against_rate(self):
        oracle = toy_oracle()
        truncated = dataclasses.replace(oracle, records=oracle.records[:1])
        rep = score_dataset(ensemble_of(truncated), sign_toy())
        assert rep.classified == 50
        assert rep.undetermined == 50
        assert rep.classification_rate == 50.0
        assert rep.error_rate == 0.0  # the classified half is all correct
        assert rep.confusion[(1, None)] == 50



def test_dump_predictions_format():
    rng = np.random.default_rng(4)
    train, test = three_class_data(rng, per_class=20, test_per_class=2)
    spec = make_one_vs_rest(train, SPEC6, DcsaParams(mu=0.2))
    lines = dump_predictions(spec, test.signals)
    assert len(lines) == len(test)
    for i, line in enumerate(lines):
        cols = line.split("\t")
        assert cols[0] == str(i)
        assert len(cols) == 3 + len(spec.members)
        for cell in cols[3:]:
            assert (cell == "UNDETERMINED" or cell.startswith("not-")
                    or cell.split(":")[0].isdigit())
