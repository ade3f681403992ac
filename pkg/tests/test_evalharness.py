from collections import Counter

import numpy as np
import pytest

from cnemci.corpus import prepare_corpus
from cnemci.errors import ConfigError, SplitError
from cnemci.evalharness import (
    DATASET_PRESETS,
    ENSEMBLE,
    EvalConfig,
    cross_validate,
    fit_fold,
    multiview_combinations,
    stratified_kfold,
    threshold_sweep,
)
from cnemci.preprocess import RawTranscript, default_fillers, default_stopwords
from cnemci.synthetic import synthetic_corpus, synthetic_embeddings

FAST = dict(epochs=30, max_passes=50)


class TestStratifiedKFold:
    def test_ten_samples(self):
        labels = ["A"] * 5 + ["B"] * 5
        split = stratified_kfold(labels, k=5, seed=0)
        for fold in split.folds:
            assert Counter(labels[i] for i in fold) == {"A": 1, "B": 1}

    def test_eighty_six(self):
        labels = ["mci"] * 43 + ["control"] * 43
        split = stratified_kfold(labels, k=5, seed=3)
        assert sorted((len(f) for f in split.folds), reverse=True) == [18, 17, 17, 17, 17]
        for cls in ("mci", "control"):
            per_fold = [sum(labels[i] == cls for i in f) for f in split.folds]
            assert max(per_fold) - min(per_fold) <= 1

    def test_partition(self):
        labels = list("AABBBABABBBAAAB")
        split = stratified_kfold(labels, k=3, seed=1)
        members = [i for f in split.folds for i in f]
        assert sorted(members) == list(range(len(labels)))

    def test_too_small(self):
        with pytest.raises(SplitError):
            stratified_kfold(["A", "A", "B", "B"], k=5)

    def test_seeded(self):
        labels = ["A"] * 9 + ["B"] * 11
        assert stratified_kfold(labels, 5, 7) == stratified_kfold(labels, 5, 7)
        assert stratified_kfold(labels, 5, 7) != stratified_kfold(labels, 5, 8)

    def test_ids_and_indices(self):
        ids = ["a", "b", "c", "d"]
        split = stratified_kfold(["x", "y", "x", "y"], k=2, ids=ids)
        for train, test in split.indices(ids):
            assert sorted(train + test) == [0, 1, 2, 3]


class TestConfig:
    def test_combinations_drop_cn_next_to_cne(self):
        combos = multiview_combinations(["CN", "CNE", "BOW"])
        assert combos == [("CNE", "BOW")]

    def test_all_four(self):
        names = ["-".join(c) for c in multiview_combinations(["CN", "CNE", "LM", "BOW"])]
        assert names == ["CNE-LM", "CNE-BOW", "LM-BOW", "CNE-LM-BOW"]

    def test_columns(self):
        cfg = EvalConfig(spaces=("cne", "bow"))
        assert cfg.columns == ["CNE", "BOW", "CNE-BOW"]
        assert cfg.rows[-1] == ENSEMBLE

    @pytest.mark.parametrize("kw", [dict(spaces=("XYZ",)), dict(models=("forest",)),
                                    dict(threshold=0.0), dict(k=1),
                                    dict(spaces=("CN",), combinations=(("CN", "LM"),))])
    def test_invalid(self, kw):
        with pytest.raises(ConfigError):
            EvalConfig(**kw)

    def test_presets(self):
        assert DATASET_PRESETS["cookie-theft"]["threshold"] == 0.7
        assert DATASET_PRESETS["cinderella"]["threshold"] == 0.4
        assert DATASET_PRESETS["abcd"]["threshold"] == 0.4


class TestCrossValidate:
    def test_layout_and_two_member_cells(self, small_corpus):
        cfg = EvalConfig(spaces=("CNE", "BOW"), k=3, threshold=0.5, **FAST)
        rep = cross_validate(small_corpus, cfg)
        for m in cfg.models:
            assert rep.accuracy(m, "CNE-BOW") is None  # two members, no tie rule
        assert rep.accuracy(ENSEMBLE, "CNE-BOW") is not None  # eight members
        assert "--" in rep.to_csv()
        for cell in rep.cells.values():
            if cell is not None:
                assert 0 <= cell.mean <= 1
                assert cell.mean == pytest.approx(np.mean(cell.fold_accuracies), abs=1e-12)
                assert sum(cell.total) == len(small_corpus)

    def test_forced_tie_rule_fills_cells(self, small_corpus):
        cfg = EvalConfig(spaces=("LM", "BOW"), models=("gnb",), k=3, ensemble=False,
                         force_tie_rule=True)
        rep = cross_validate(small_corpus, cfg)
        assert rep.accuracy("gnb", "LM-BOW") is not None

    def test_deterministic(self, small_corpus):
        cfg = EvalConfig(spaces=("CN", "CNE", "LM"), k=3, threshold=0.6, **FAST)
        a = cross_validate(small_corpus, cfg)
        b = cross_validate(small_corpus, cfg)
        assert a.to_csv() == b.to_csv() and a.to_json() == b.to_json()

    def test_cne_needs_embeddings(self):
        raws, _ = synthetic_corpus(5, seed=1)
        corpus = prepare_corpus(raws, default_stopwords("en"), default_fillers("en"))
        with pytest.raises(ConfigError):
            cross_validate(corpus, EvalConfig(spaces=("CNE",)))


class TestSweep:
    def test_single_threshold(self, small_corpus):
        cfg = EvalConfig(spaces=("CNE",), models=("svm_rbf",), ensemble=False, k=3, **FAST)
        res = threshold_sweep(small_corpus, [0.55], cfg)
        assert res.best_threshold == 0.55 and len(res.curve) == 1

    def test_complete_and_reproducible(self, small_corpus):
        cfg = EvalConfig(spaces=("CNE",), models=("svm_rbf",), ensemble=False, k=3, **FAST)
        ts = [0.3, 0.5, 0.7, 0.9]
        a = threshold_sweep(small_corpus, ts, cfg)
        b = threshold_sweep(small_corpus, ts, cfg)
        assert [t for t, _ in a.curve] == ts
        assert a.curve == b.curve and a.to_csv() == b.to_csv()
        best = max(acc for _, acc in a.curve)
        assert a.best_threshold == max(t for t, acc in a.curve if acc == best)

    @pytest.mark.parametrize("ts", [[], [0.5, 0.3], [0.0, 0.5], [0.5, 1.5]])
    def test_bad_thresholds(self, small_corpus, ts):
        with pytest.raises(ConfigError):
            threshold_sweep(small_corpus, ts, EvalConfig(spaces=("CNE",)))


# --- leakage -------------------------------------------------------------------

def _fold_state(fit):
    state = {"vocab": fit.vocabulary.terms if fit.vocabulary else None}
    for space, s in fit.standardizers.items():
        state[f"mean:{space}"] = s.mean.tolist()
        state[f"scale:{space}"] = s.scale.tolist()
    for key, model in fit.models.items():
        state[key] = model.to_dict()
    return state


def test_no_leakage_from_test_fold():
    raws, vocab = synthetic_corpus(10, seed=2)
    emb = synthetic_embeddings(vocab, seed=2, extra_words=["zzsentinel"])
    stop, fill = default_stopwords("en"), default_fillers("en")
    cfg = EvalConfig(k=5, threshold=0.5, **FAST)
    base = prepare_corpus(raws, stop, fill, emb)
    split = stratified_kfold(base.labels, cfg.k, cfg.seed, ids=base.ids)
    train, test = split.indices(base.ids)[0]
    victim = base.ids[test[0]]

    tampered = [RawTranscript(r.id, r.label, r.sentences + ("zzsentinel zzsentinel .",))
                if r.id == victim else r for r in raws]
    other = prepare_corpus(tampered, stop, fill, emb)
    assert other.ids == base.ids
    assert "zzsentinel" in other.items[test[0]].content.tokens

    before = _fold_state(fit_fold(base, train, cfg))
    after = _fold_state(fit_fold(other, train, cfg))
    assert "zzsentinel" not in before["vocab"] and "zzsentinel" not in after["vocab"]
    assert before == after

    # dropping the test transcript altogether changes nothing either
    dropped = prepare_corpus([r for r in raws if r.id != victim], stop, fill, emb)
    pos = {x: i for i, x in enumerate(dropped.ids)}
    train2 = [pos[base.ids[i]] for i in train]
    assert _fold_state(fit_fold(dropped, train2, cfg)) == before
