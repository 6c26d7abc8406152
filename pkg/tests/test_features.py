"""Tests for informativeness scores, list membership, and distributions."""

import math
import random
from collections import Counter

import pytest

from transvar.errors import FocalMismatchError, NotBinaryError
from transvar.features import (
    DEFAULT_K,
    FeatureScore,
    MIFList,
    distribution,
    example_contexts,
    feature_score,
    membership,
    top_features,
)
from transvar.model import train
from transvar.representation import ngram_key

from conftest import make_instance


def binary_model(x_counts, y_counts, order=1, labels=("X", "Y")):
    features = {
        labels[0]: [Counter(x_counts)],
        labels[1]: [Counter(y_counts)],
    }
    return train(features, "POS", order)


def random_binary_model(rng, vocab=8, order=1):
    grams = [(f"T{i}",) for i in range(vocab)]
    x = {g: rng.randrange(0, 9) for g in grams}
    y = {g: rng.randrange(0, 9) for g in grams}
    x[grams[0]] = max(x[grams[0]], 1)
    y[grams[0]] = max(y[grams[0]], 1)
    return binary_model(x, y, order=order)


class TestFeatureScore:
    def test_hand_case_log_ten(self):
        cm = binary_model({("A", "B"): 9}, {("C", "D"): 9}, order=2)
        assert cm.vocab_size == 2
        got = feature_score(cm, ("A", "B"), "X", "Y")
        assert got == pytest.approx(math.log(10), abs=1e-12)
        got = feature_score(cm, ("C", "D"), "X", "Y")
        assert got == pytest.approx(-math.log(10), abs=1e-12)

    def test_identical_models_score_zero(self):
        counts = {("A",): 3, ("B",): 1}
        cm = binary_model(counts, counts)
        assert feature_score(cm, ("A",), "X", "Y") == 0.0
        assert feature_score(cm, ("B",), "X", "Y") == 0.0

    def test_antisymmetry(self):
        # exact: float subtraction negates cleanly
        rng = random.Random(101)
        for _ in range(200):
            cm = random_binary_model(rng)
            for i in range(8):
                gram = (f"T{i}",)
                fwd = feature_score(cm, gram, "X", "Y")
                rev = feature_score(cm, gram, "Y", "X")
                assert fwd == -rev

    def test_unseen_gram_still_scored(self):
        # smoothing covers the whole union vocabulary
        cm = binary_model({("A",): 4}, {("B",): 4})
        got = feature_score(cm, ("B",), "X", "Y")
        assert got == pytest.approx(math.log(1 / 5), abs=1e-12)

    def test_rank_stability_of_unsmoothed_ratios(self):
        # the count-ratio score is exactly scale-free, so scaling every
        # count and total by the same integer cannot reorder grams whose
        # scores differ by more than float noise
        rng = random.Random(202)
        checked = 0
        for _ in range(200):
            vocab = [(f"T{i}",) for i in range(6)]
            x = {g: rng.randrange(1, 9) for g in vocab}
            y = {g: rng.randrange(1, 9) for g in vocab}
            k = rng.choice([2, 3, 7, 10])
            nx, ny = sum(x.values()), sum(y.values())

            def ratio(counts_x, counts_y, tx, ty, g):
                return math.log(counts_x[g] / tx) - math.log(counts_y[g] / ty)

            base = {g: ratio(x, y, nx, ny, g) for g in vocab}
            xs = {g: k * c for g, c in x.items()}
            ys = {g: k * c for g, c in y.items()}
            scaled = {g: ratio(xs, ys, k * nx, k * ny, g) for g in vocab}
            for a in vocab:
                for b in vocab:
                    if base[a] - base[b] > 1e-9:
                        assert scaled[a] > scaled[b]
                        checked += 1
        assert checked > 100


class TestTopFeatures:
    def test_hand_case_orientations(self):
        cm = binary_model({("A", "B"): 9}, {("C", "D"): 9}, order=2)
        for_x, for_y = top_features(cm, k=1)
        assert for_x.label == "X" and for_y.label == "Y"
        assert for_x.task == ("X", "Y") and for_y.task == ("X", "Y")
        assert for_x.grams() == [("A", "B")]
        assert for_y.grams() == [("C", "D")]
        assert for_x.entries[0].score == pytest.approx(math.log(10), abs=1e-12)

    def test_identical_models_pick_smallest_keys(self):
        counts = {(t,): 2 for t in "EDCBA"}
        cm = binary_model(counts, counts)
        for_x, _ = top_features(cm, k=3)
        assert for_x.grams() == [("A",), ("B",), ("C",)]
        assert all(e.score == 0.0 for e in for_x.entries)

    def test_k_larger_than_vocabulary(self):
        cm = binary_model({("A",): 1}, {("B",): 1})
        for_x, for_y = top_features(cm, k=50)
        assert len(for_x.entries) == 2
        assert len(for_y.entries) == 2

    def test_default_k(self):
        counts_x = {(f"T{i:02d}",): i + 1 for i in range(30)}
        counts_y = {(f"T{i:02d}",): 31 - i for i in range(30)}
        cm = binary_model(counts_x, counts_y)
        for_x, _ = top_features(cm)
        assert DEFAULT_K == 20
        assert len(for_x.entries) == 20

    def test_sorted_by_score_then_key(self):
        rng = random.Random(303)
        for _ in range(50):
            cm = random_binary_model(rng)
            for lst in top_features(cm, k=8):
                entries = lst.entries
                for left, right in zip(entries, entries[1:]):
                    assert (-left.score, ngram_key(left.gram)) < (
                        -right.score,
                        ngram_key(right.gram),
                    )

    def test_lists_are_mirror_ranked(self):
        # the Y list is the X list scored with flipped sign
        cm = binary_model({("A",): 5, ("B",): 1}, {("A",): 1, ("B",): 5})
        for_x, for_y = top_features(cm, k=2)
        assert for_x.grams() == [("A",), ("B",)]
        assert for_y.grams() == [("B",), ("A",)]
        assert for_x.entries[0].score == -for_y.entries[1].score

    def test_rejects_non_binary_model(self):
        features = {c: [Counter({(c,): 1})] for c in "ABC"}
        cm = train(features, "POS", 1)
        with pytest.raises(NotBinaryError, match="2 classes"):
            top_features(cm)

    def test_rejects_bad_k(self):
        cm = binary_model({("A",): 1}, {("B",): 1})
        with pytest.raises(ValueError, match="k"):
            top_features(cm, k=0)


def make_list(label, grams, task=("X", "Y")):
    entries = [FeatureScore(g, label, "other", 0.0) for g in grams]
    return MIFList(task, label, entries)


class TestMembership:
    def test_six_identical_lists(self):
        grams = [(f"T{i:02d}",) for i in range(20)]
        lists = [make_list("X", grams) for _ in range(6)]
        report = membership("X", lists)
        assert report.histogram == {6: 20}
        assert report.total == 20

    def test_six_disjoint_lists(self):
        lists = [
            make_list("X", [(f"T{j}_{i}",) for i in range(20)])
            for j in range(6)
        ]
        report = membership("X", lists)
        assert report.histogram == {1: 120}
        assert report.total == 120

    def test_mixed_multiplicities(self):
        shared = [("S",)]
        lists = [
            make_list("X", shared + [("A",)]),
            make_list("X", shared + [("B",)]),
            make_list("X", shared + [("C",)]),
        ]
        report = membership("X", lists)
        assert report.histogram == {3: 1, 1: 3}
        assert report.total == 4

    def test_histogram_keys_descend(self):
        lists = [
            make_list("X", [("A",), ("B",)]),
            make_list("X", [("A",), ("C",)]),
        ]
        report = membership("X", lists)
        assert list(report.histogram) == sorted(report.histogram, reverse=True)

    def test_duplicate_gram_within_list_counts_once(self):
        lists = [make_list("X", [("A",), ("A",)])]
        report = membership("X", lists)
        assert report.histogram == {1: 1}

    def test_conservation_law(self):
        # sum of m * histogram[m] equals total distinct (gram, list) pairs
        rng = random.Random(404)
        for _ in range(100):
            lists = []
            for _ in range(rng.randrange(1, 7)):
                grams = [
                    (f"T{rng.randrange(12)}",)
                    for _ in range(rng.randrange(1, 10))
                ]
                lists.append(make_list("X", grams))
            report = membership("X", lists)
            weighted = sum(m * n for m, n in report.histogram.items())
            assert weighted == sum(len(set(l.grams())) for l in lists)
            assert sum(report.histogram.values()) == report.total

    def test_focal_mismatch(self):
        lists = [make_list("X", [("A",)]), make_list("Y", [("B",)])]
        with pytest.raises(FocalMismatchError, match="'X'"):
            membership("X", lists)


class TestDistribution:
    def test_exact_frequencies(self):
        pools = {
            "FIC": [make_instance(["T1", "T1", "T2"], genre="FIC")],
            "TOU": [make_instance(["T2", "T2", "T2"], genre="TOU")],
        }
        rows = distribution([("T1",), ("T2",)], pools, "POS", 1)
        assert [r.gram for r in rows] == [("T1",), ("T2",)]
        t1, t2 = rows
        assert t1.per_class["FIC"] == pytest.approx(1000 * 2 / 3, abs=1e-9)
        assert t1.per_class["TOU"] == 0.0
        assert t2.per_class["TOU"] == 1000.0

    def test_absent_gram_is_zero(self):
        pools = {"FIC": [make_instance(["T1"])]}
        (row,) = distribution([("T9",)], pools, "POS", 1)
        assert row.per_class["FIC"] == 0.0

    def test_single_gram_class_hits_ceiling(self):
        pools = {"FIC": [make_instance(["T1"] * 10)]}
        (row,) = distribution([("T1", "T1", "T1")], pools, "POS", 3)
        assert row.per_class["FIC"] == 1000.0

    def test_full_vocabulary_sums_to_1000(self):
        rng = random.Random(505)
        tags = [f"T{rng.randrange(5)}" for _ in range(60)]
        pools = {"FIC": [make_instance(tags[i : i + 6]) for i in range(0, 60, 6)]}
        merged = Counter()
        for inst in pools["FIC"]:
            for i in range(len(inst.tokens) - 1):
                merged[(inst.tokens[i].pos, inst.tokens[i + 1].pos)] += 1
        rows = distribution(list(merged), pools, "POS", 2)
        total = sum(r.per_class["FIC"] for r in rows)
        assert total == pytest.approx(1000.0, abs=1e-9)

    def test_rows_sorted_by_canonical_key(self):
        pools = {"FIC": [make_instance(["T1"])]}
        rows = distribution([("T3",), ("T1",), ("T2",)], pools, "POS", 1)
        assert [r.gram for r in rows] == [("T1",), ("T2",), ("T3",)]

    def test_duplicate_grams_collapse(self):
        pools = {"FIC": [make_instance(["T1"])]}
        rows = distribution([("T1",), ("T1",)], pools, "POS", 1)
        assert len(rows) == 1

    def test_class_without_ngrams_scores_zero(self):
        # one-token sentences yield no bigrams at all
        pools = {"FIC": [make_instance(["T1"])]}
        (row,) = distribution([("T1", "T1")], pools, "POS", 2)
        assert row.per_class["FIC"] == 0.0


class TestExampleContexts:
    def test_collects_surface_forms(self):
        insts = [make_instance(["ART", "NN"], stem="a")]
        found = example_contexts([("ART", "NN")], insts, "POS", 2)
        assert found[("ART", "NN")] == ["a0_ART a1_NN"]

    def test_distinct_surfaces_only(self):
        insts = [make_instance(["ART", "NN"], stem="a") for _ in range(4)]
        found = example_contexts([("ART", "NN")], insts, "POS", 2)
        assert found[("ART", "NN")] == ["a0_ART a1_NN"]

    def test_limit_respected(self):
        insts = [
            make_instance(["ART", "NN"], stem=s) for s in "abcde"
        ]
        found = example_contexts([("ART", "NN")], insts, "POS", 2, limit=3)
        assert found[("ART", "NN")] == [
            "a0_ART a1_NN",
            "b0_ART b1_NN",
            "c0_ART c1_NN",
        ]

    def test_multiple_windows_in_one_instance(self):
        inst = make_instance(["ART", "NN", "ART", "NN"])
        found = example_contexts([("ART", "NN")], [inst], "POS", 2)
        assert found[("ART", "NN")] == ["w0_ART w1_NN", "w2_ART w3_NN"]

    def test_absent_gram_empty(self):
        insts = [make_instance(["ART", "NN"])]
        found = example_contexts([("KOUS", "ADV")], insts, "POS", 2)
        assert found[("KOUS", "ADV")] == []

    def test_semi_mode_windows(self):
        # nouns collapse to the placeholder before matching
        inst = make_instance(["ART", "NN"])
        found = example_contexts([("w0_ART", "PLH")], [inst], "SEMI", 2)
        assert found[("w0_ART", "PLH")] == ["w0_ART w1_NN"]
