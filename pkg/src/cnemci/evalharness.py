"""Stratified k-fold evaluation, voting combiners and the threshold sweep.

Report layout follows the usual results table: one row per classifier plus
an ``ensemble`` row, one column per feature space followed by the
multi-view combinations (``CNE-LM``, ``CNE-LM-BOW`` ...).

* classifier x space: that classifier trained on that space.
* classifier x combination: majority vote of that classifier trained
  separately on each space of the combination (multi-view).
* ensemble x space: majority vote of all classifiers on that space.
* ensemble x combination: majority vote over every classifier/space pair.

A vote with exactly two members is only a coin flip between them, so those
cells are left empty (``--``) unless ``force_tie_rule`` is set.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import asdict, dataclass, field
from typing import Sequence

import numpy as np

from .classify import MODEL_KINDS, TrainedModel, majority_vote, train_model
from .corpus import Corpus
from .errors import ConfigError, SplitError, TrainingError
from .features import SPACES, Standardizer, Vocabulary, bow_fit, fit_standardizer

__all__ = [
    "ENSEMBLE",
    "DATASET_PRESETS",
    "FoldSplit",
    "EvalConfig",
    "CellResult",
    "EvalReport",
    "FoldFit",
    "SweepResult",
    "stratified_kfold",
    "multiview_combinations",
    "fit_fold",
    "cross_validate",
    "threshold_sweep",
]

ENSEMBLE = "ensemble"

# language and enrichment threshold per dataset; data is user-supplied
DATASET_PRESETS = {
    "cookie-theft": {"language": "en", "threshold": 0.7},
    "cinderella": {"language": "pt", "threshold": 0.4},
    "abcd": {"language": "pt", "threshold": 0.4},
}


@dataclass(frozen=True)
class FoldSplit:
    folds: tuple[tuple, ...]   # test-fold members (ids, or indices when no ids given)
    seed: int

    @property
    def k(self) -> int:
        return len(self.folds)

    def indices(self, ids: Sequence) -> list[tuple[list[int], list[int]]]:
        """(train, test) row indices of every fold, in ``ids`` order."""
        pos = {x: i for i, x in enumerate(ids)}
        out = []
        for f in range(self.k):
            test = sorted(pos[x] for x in self.folds[f])
            held = set(test)
            out.append(([i for i in range(len(ids)) if i not in held], test))
        return out


def stratified_kfold(labels: Sequence, k: int = 5, seed: int = 0,
                     ids: Sequence | None = None) -> FoldSplit:
    """Shuffle each class with ``seed`` and deal its members round-robin.

    Dealing continues where the previous class stopped, so fold sizes differ
    by at most one overall as well as per class.
    """
    labels = list(labels)
    ids = list(range(len(labels))) if ids is None else list(ids)
    if len(ids) != len(labels):
        raise SplitError("ids and labels differ in length")
    if k < 2:
        raise SplitError("k must be at least 2")
    rng = np.random.default_rng(seed)
    folds: list[list] = [[] for _ in range(k)]
    cursor = 0
    for cls in sorted(set(labels)):
        members = [ids[i] for i, lab in enumerate(labels) if lab == cls]
        if len(members) < k:
            raise SplitError(f"class {cls!r} has {len(members)} samples, fewer than k={k}")
        for m in rng.permutation(len(members)):
            folds[cursor % k].append(members[m])
            cursor += 1
    return FoldSplit(tuple(tuple(f) for f in folds), seed)


def multiview_combinations(spaces: Sequence[str]) -> list[tuple[str, ...]]:
    """Every combination of two or more spaces, in canonical order.

    CN is left out of combinations when CNE is also present (it is the same
    measurement without enrichment).
    """
    spaces = [s for s in SPACES if s in spaces]
    if "CNE" in spaces and "CN" in spaces:
        spaces.remove("CN")
    return [c for r in range(2, len(spaces) + 1) for c in itertools.combinations(spaces, r)]


@dataclass(frozen=True)
class EvalConfig:
    spaces: tuple[str, ...] = SPACES
    models: tuple[str, ...] = MODEL_KINDS
    combinations: tuple[tuple[str, ...], ...] | None = None  # None -> multiview_combinations
    ensemble: bool = True
    k: int = 5
    seed: int = 0
    threshold: float = 0.7
    standardize: bool = True
    force_tie_rule: bool = False
    knn_k: int = 3
    C: float = 1.0
    gamma: float | None = None
    epochs: int = 200
    max_passes: int = 200

    def __post_init__(self):
        object.__setattr__(self, "spaces", tuple(s.upper() for s in self.spaces))
        object.__setattr__(self, "models", tuple(self.models))
        unknown = [s for s in self.spaces if s not in SPACES]
        if unknown:
            raise ConfigError(f"unknown feature space(s) {unknown}; expected {SPACES}")
        bad = [m for m in self.models if m not in MODEL_KINDS]
        if bad:
            raise ConfigError(f"unknown model(s) {bad}; expected {MODEL_KINDS}")
        if not self.spaces or not self.models:
            raise ConfigError("need at least one space and one model")
        if not (0.0 < self.threshold <= 1.0):
            raise ConfigError(f"threshold must be in (0, 1], got {self.threshold}")
        if self.k < 2:
            raise ConfigError("k must be >= 2")
        combos = (multiview_combinations(self.spaces) if self.combinations is None
                  else [tuple(s.upper() for s in c) for c in self.combinations])
        for c in combos:
            if len(c) < 2 or any(s not in self.spaces for s in c):
                raise ConfigError(f"combination {'-'.join(c)} must use >= 2 requested spaces")
        object.__setattr__(self, "combinations", tuple(combos))

    @property
    def columns(self) -> list[str]:
        return list(self.spaces) + ["-".join(c) for c in self.combinations]

    @property
    def rows(self) -> list[str]:
        return list(self.models) + ([ENSEMBLE] if self.ensemble else [])

    def echo(self) -> dict:
        d = asdict(self)
        d["combinations"] = ["-".join(c) for c in self.combinations]
        return d


@dataclass(frozen=True)
class CellResult:
    correct: tuple[int, ...]
    total: tuple[int, ...]
    tie_rule_used: int = 0   # test items whose vote fell back to confidence sums

    @property
    def fold_accuracies(self) -> list[float]:
        return [c / t for c, t in zip(self.correct, self.total)]

    @property
    def mean(self) -> float:
        acc = self.fold_accuracies
        return sum(acc) / len(acc)


@dataclass
class EvalReport:
    rows: list[str]
    columns: list[str]
    cells: dict[tuple[str, str], CellResult | None]
    config: dict
    folds: list[list[str]] = field(default_factory=list)

    def accuracy(self, row: str, col: str) -> float | None:
        cell = self.cells.get((row, col))
        return None if cell is None else cell.mean

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["classifier", *self.columns])
        for r in self.rows:
            vals = []
            for c in self.columns:
                acc = self.accuracy(r, c)
                vals.append("--" if acc is None else f"{acc:.4f}")
            w.writerow([r, *vals])
        return buf.getvalue()

    def to_json(self) -> str:
        cells = {}
        for (r, c), cell in self.cells.items():
            cells[f"{r}|{c}"] = None if cell is None else {
                "mean_accuracy": cell.mean,
                "fold_accuracies": cell.fold_accuracies,
                "correct": list(cell.correct),
                "total": list(cell.total),
                "tie_rule_used": cell.tie_rule_used,
            }
        doc = {"rows": self.rows, "columns": self.columns, "config": self.config,
               "folds": self.folds, "cells": cells}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"

    def format_table(self) -> str:
        width = max(len(c) for c in self.columns + ["classifier"]) + 2
        lines = ["classifier".ljust(12) + "".join(c.rjust(width) for c in self.columns)]
        for r in self.rows:
            vals = []
            for c in self.columns:
                acc = self.accuracy(r, c)
                vals.append(("--" if acc is None else f"{100 * acc:.1f}").rjust(width))
            lines.append(r.ljust(12) + "".join(vals))
        return "\n".join(lines)


@dataclass
class FoldFit:
    """Everything learned from one training fold."""
    vocabulary: Vocabulary | None
    standardizers: dict[str, Standardizer]
    models: dict[tuple[str, str], TrainedModel]


def _space_rows(corpus: Corpus, space: str, rows, threshold, vocab) -> np.ndarray:
    if space == "BOW":
        return corpus.bow(vocab, rows).values
    return corpus.fixed_space(space, threshold).values[rows]


def fit_fold(corpus: Corpus, train: Sequence[int], config: EvalConfig,
             fold: int = 0) -> FoldFit:
    """Fit vocabulary, standardisation and every model on ``train`` rows only."""
    train = list(train)
    y = [corpus.labels[i] for i in train]
    vocab = bow_fit([corpus.items[i].content for i in train]) if "BOW" in config.spaces else None
    scalers, models = {}, {}
    for space in config.spaces:
        X = _space_rows(corpus, space, train, config.threshold, vocab)
        if config.standardize:
            scalers[space] = fit_standardizer(X)
            X = scalers[space].transform(X)
        for kind in config.models:
            try:
                models[(kind, space)] = train_model(
                    kind, X, y, k=config.knn_k, C=config.C, gamma=config.gamma,
                    epochs=config.epochs, max_passes=config.max_passes,
                    seed=config.seed + fold)
            except TrainingError as exc:
                raise TrainingError(f"{kind} x {space}, fold {fold}: {exc}") from exc
    return FoldFit(vocab, scalers, models)


def _vote_cell(members, preds, n_test, truth, allow_two):
    if len(members) < 2 or (len(members) == 2 and not allow_two):
        return None
    correct = ties = 0
    for j in range(n_test):
        vote = majority_vote([(preds[m][0][j], preds[m][1][j]) for m in members])
        ties += vote.tie_rule_used
        correct += vote.label == truth[j]
    return correct, ties


def cross_validate(corpus: Corpus, config: EvalConfig | None = None,
                   split: FoldSplit | None = None) -> EvalReport:
    """k-fold accuracy of every configured cell.

    Vocabulary, standardisation and models are fitted per fold on the
    training part only.
    """
    config = config or EvalConfig()
    if "CNE" in config.spaces and not corpus.has_embeddings:
        raise ConfigError("CNE requested but the corpus has no embeddings")
    if split is None:
        split = stratified_kfold(corpus.labels, config.k, config.seed, ids=corpus.ids)
    rows, columns = config.rows, config.columns
    correct = {(r, c): [] for r in rows for c in columns}
    totals: list[int] = []
    ties = {key: 0 for key in correct}
    available = {key: True for key in correct}

    for f, (train, test) in enumerate(split.indices(corpus.ids)):
        fit = fit_fold(corpus, train, config, fold=f)
        truth = [corpus.labels[i] for i in test]
        totals.append(len(test))
        preds = {}
        for space in config.spaces:
            X = _space_rows(corpus, space, test, config.threshold, fit.vocabulary)
            if config.standardize:
                X = fit.standardizers[space].transform(X)
            for kind in config.models:
                preds[(kind, space)] = fit.models[(kind, space)].predict_with_confidence(X)

        def record(key, members):
            if len(members) == 1:
                got = sum(a == b for a, b in zip(preds[members[0]][0], truth)), 0
            else:
                got = _vote_cell(members, preds, len(test), truth, config.force_tie_rule)
            if got is None:
                available[key] = False
            else:
                correct[key].append(int(got[0]))
                ties[key] += got[1]

        for kind in config.models:
            for space in config.spaces:
                record((kind, space), [(kind, space)])
            for combo in config.combinations:
                record((kind, "-".join(combo)), [(kind, s) for s in combo])
        if config.ensemble:
            for space in config.spaces:
                record((ENSEMBLE, space), [(m, space) for m in config.models])
            for combo in config.combinations:
                record((ENSEMBLE, "-".join(combo)), [(m, s) for s in combo for m in config.models])

    cells = {
        key: CellResult(tuple(correct[key]), tuple(totals), ties[key]) if available[key] else None
        for key in correct
    }
    echo = config.echo()
    echo["n_transcripts"] = len(corpus)
    echo["excluded"] = [list(e) for e in corpus.excluded]
    return EvalReport(rows, columns, cells, echo, [list(f) for f in split.folds])


@dataclass
class SweepResult:
    best_threshold: float
    curve: list[tuple[float, float]]
    reference: tuple[str, str]
    reports: dict[float, EvalReport] = field(default_factory=dict, repr=False)

    def to_csv(self) -> str:
        lines = ["threshold,accuracy"]
        lines += [f"{t:g},{acc:.4f}" for t, acc in self.curve]
        return "\n".join(lines) + "\n"


def threshold_sweep(corpus: Corpus, thresholds: Sequence[float],
                    config: EvalConfig | None = None,
                    reference: tuple[str, str] = ("svm_rbf", "CNE")) -> SweepResult:
    """Cross-validate once per threshold and keep the best reference cell.

    The same fold split is used for every threshold.  Ties go to the larger
    threshold, i.e. the sparser enrichment.
    """
    thresholds = [float(t) for t in thresholds]
    if not thresholds:
        raise ConfigError("empty threshold list")
    if any(not (0.0 < t <= 1.0) for t in thresholds):
        raise ConfigError("thresholds must lie in (0, 1]")
    if thresholds != sorted(thresholds):
        raise ConfigError("thresholds must be sorted ascending")
    config = config or EvalConfig()
    row, col = reference
    if row not in config.rows or col not in config.columns:
        raise ConfigError(f"reference cell {row} x {col} is not part of the configuration")
    split = stratified_kfold(corpus.labels, config.k, config.seed, ids=corpus.ids)
    curve, reports = [], {}
    for t in thresholds:
        cfg = EvalConfig(**{**_fields(config), "threshold": t})
        rep = cross_validate(corpus, cfg, split)
        acc = rep.accuracy(row, col)
        if acc is None:
            raise ConfigError(f"reference cell {row} x {col} is unavailable")
        curve.append((t, acc))
        reports[t] = rep
    best_acc = max(a for _, a in curve)
    best = max(t for t, a in curve if a == best_acc)
    return SweepResult(best, curve, (row, col), reports)


def _fields(config: EvalConfig) -> dict:
    return {f: getattr(config, f) for f in config.__dataclass_fields__}
