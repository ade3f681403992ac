import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cnemci.features import (
    HONORE_SENTINEL,
    LEXICAL_NAMES,
    FeatureMatrix,
    Vocabulary,
    bow_fit,
    bow_matrix,
    bow_transform,
    fit_standardizer,
    lexical_features,
    standardize,
)
from cnemci.preprocess import TokenSequence


def seq(tokens, breaks=()):
    return TokenSequence("t", "x", tuple(tokens), tuple(breaks))


class TestBow:
    def test_union_sorted(self):
        vocab = bow_fit([["cookie", "jar"], ["cookie", "stool"]])
        assert vocab.terms == ("cookie", "jar", "stool")

    def test_empty_doc_ignored(self):
        assert bow_fit([[], ["b", "a"]]).terms == ("a", "b")

    def test_distinct(self):
        assert bow_fit([["a", "a", "b"]]).terms == ("a", "b")

    def test_counts(self):
        vocab = Vocabulary(("cookie", "jar", "stool"))
        np.testing.assert_array_equal(bow_transform(["cookie", "cookie", "jar"], vocab), [2, 1, 0])

    def test_oov_and_empty(self):
        vocab = Vocabulary(("cookie", "jar"))
        np.testing.assert_array_equal(bow_transform(["x", "y"], vocab), [0, 0])
        np.testing.assert_array_equal(bow_transform([], vocab), [0, 0])

    def test_token_sequence_accepted(self):
        vocab = bow_fit([seq(["b", "a"])])
        np.testing.assert_array_equal(bow_transform(seq(["a", "a"]), vocab), [2, 0])

    def test_duplicate_terms_rejected(self):
        with pytest.raises(ValueError):
            Vocabulary(("a", "a"))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.lists(st.sampled_from("abcdefg"), max_size=15), min_size=1, max_size=6))
def test_bow_reconstructs_counts(docs):
    vocab = bow_fit(docs)
    X = bow_matrix(docs, vocab)
    for doc, row in zip(docs, X):
        assert row.sum() == len(doc)
        for term, count in zip(vocab.terms, row):
            assert doc.count(term) == count


class TestLexical:
    def test_all_distinct(self):
        f = lexical_features(seq("abcd"))
        assert f["type_token_ratio"] == 1.0
        assert f["honore_statistic"] == HONORE_SENTINEL and f["honore_undefined"] == 1.0

    def test_single_type(self):
        f = lexical_features(seq("aaaa"))
        assert f["type_token_ratio"] == 0.25
        assert f["honore_statistic"] == pytest.approx(138.6294, abs=1e-4)
        assert f["honore_undefined"] == 0.0
        assert f["brunet_index"] == pytest.approx(4.0)  # V = 1, so W = N

    def test_honore_reference(self):
        # N = 100, V = 50, V1 = 20: 20 hapaxes, 29 doubles, one type seen 22 times
        tokens = [f"h{i}" for i in range(20)]
        tokens += [f"d{i}" for i in range(29) for _ in range(2)]
        tokens += ["z"] * 22
        assert len(tokens) == 100 and len(set(tokens)) == 50
        f = lexical_features(seq(tokens))
        assert f["honore_statistic"] == pytest.approx(767.5284, abs=1e-4)

    def test_punctuation_not_counted(self):
        f = lexical_features(seq(["a", "b", ".", "a", "."], breaks=(3,)))
        assert f["type_token_ratio"] == pytest.approx(2 / 3)
        assert f["sentence_count"] == 2.0
        assert f["words_per_sentence"] == 1.5

    def test_brunet_decreases_with_types(self):
        n = 60
        values = []
        for v in range(1, 31):
            tokens = [f"w{i % v}" for i in range(n)]
            values.append(lexical_features(seq(tokens))["brunet_index"])
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_names_and_order(self):
        assert tuple(lexical_features(seq("ab"))) == LEXICAL_NAMES

    def test_no_words(self):
        with pytest.raises(ValueError):
            lexical_features(seq([".", ","]))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.sampled_from("abcdef"), min_size=1, max_size=40))
def test_ttr_range(tokens):
    f = lexical_features(seq(tokens))
    assert 0 < f["type_token_ratio"] <= 1
    assert f["honore_statistic"] <= HONORE_SENTINEL
    assert all(math.isfinite(v) for v in f.values())


def fm(values, ids=None):
    values = np.asarray(values, dtype=float)
    ids = ids or [f"r{i}" for i in range(len(values))]
    return FeatureMatrix(ids, [f"c{j}" for j in range(values.shape[1])], values, "LM")


class TestStandardize:
    def test_centered(self):
        out = standardize(fm([[1], [2], [3]]), fm([[2]]))
        assert out.values[0, 0] == 0.0

    def test_constant_column(self):
        out = standardize(fm([[4, 1], [4, 2]]), fm([[4, 9], [7, 1]]))
        np.testing.assert_array_equal(out.values[:, 0], [0, 0])

    def test_population_std(self):
        assert standardize(fm([[0], [10]]), fm([[10]])).values[0, 0] == 1.0

    def test_columns_must_match(self):
        a = fm([[1, 2]])
        b = FeatureMatrix(["r0"], ["x", "y"], [[1, 2]], "LM")
        with pytest.raises(ValueError):
            standardize(a, b)

    def test_train_only_statistics(self):
        s = fit_standardizer(fm([[0.0], [2.0]]))
        assert s.mean[0] == 1.0 and s.scale[0] == 1.0


class TestFeatureMatrix:
    def test_csv_round_trip(self, tmp_path):
        vals = np.array([[0.1, 1 / 3], [1e-17, -2.5]])
        m = FeatureMatrix(["a", "b"], ["x", "y"], vals, "CN", ["mci", "control"])
        m.to_csv(tmp_path / "m.csv")
        back = FeatureMatrix.from_csv(tmp_path / "m.csv", "CN")
        assert back.ids == m.ids and back.columns == m.columns and back.labels == m.labels
        np.testing.assert_array_equal(back.values, vals)

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            FeatureMatrix(["a"], ["x", "x"], [[1, 2]], "CN")
        with pytest.raises(ValueError):
            FeatureMatrix(["a", "b"], ["x"], [[1], [2]], "CN", ["l"])

    def test_rows(self):
        m = fm([[1], [2], [3]])
        sub = m.rows([2, 0])
        assert sub.ids == ("r2", "r0")
        np.testing.assert_array_equal(sub.values[:, 0], [3, 1])
