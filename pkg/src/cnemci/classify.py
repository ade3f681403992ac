"""Binary classifiers written from scratch, and majority voting.

Every trained model exposes ``predict(X) -> labels`` and
``predict_with_confidence(X) -> (labels, confidence)``.  Labels are the
original class values (usually strings); the SVMs map the sorted pair of
classes to -1/+1 internally.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, ClassVar, NamedTuple, Sequence

import numpy as np

from .errors import TrainingError, VoteError

__all__ = [
    "MODEL_KINDS",
    "TrainedModel",
    "GaussianNBModel",
    "KNNModel",
    "LinearSVMModel",
    "RBFSVMModel",
    "train_gnb",
    "train_knn",
    "train_svm_linear",
    "train_svm_rbf",
    "train_model",
    "rbf_kernel",
    "Vote",
    "VoteConfig",
    "majority_vote",
    "save_model",
    "load_model",
]

MODEL_KINDS = ("svm_linear", "svm_rbf", "knn", "gnb")
VAR_FLOOR = 1e-9
FORMAT_NAME = "cnemci-model"
FORMAT_VERSION = 1


def _check_xy(X, y, require_binary=True):
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise TrainingError(f"X must be 2-D, got shape {X.shape}")
    y = list(y)
    if len(y) != X.shape[0]:
        raise TrainingError(f"{X.shape[0]} rows but {len(y)} labels")
    if X.shape[0] == 0:
        raise TrainingError("no training samples")
    if not np.all(np.isfinite(X)):
        raise TrainingError("non-finite feature value")
    classes = tuple(sorted(set(y)))
    if require_binary and len(classes) != 2:
        raise TrainingError(f"need exactly two classes, got {list(classes)}")
    return X, y, classes


@dataclass(frozen=True, eq=False)
class TrainedModel:
    kind: ClassVar[str] = ""
    classes: tuple
    columns: tuple | None

    def decision(self, X) -> tuple[list, np.ndarray]:
        raise NotImplementedError

    def _prep(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[None, :]
        if X.shape[1] != self.n_features:
            raise ValueError(f"expected {self.n_features} features, got {X.shape[1]}")
        return X

    def predict_with_confidence(self, X) -> tuple[list, np.ndarray]:
        return self.decision(self._prep(X))

    def predict(self, X) -> list:
        return self.predict_with_confidence(X)[0]

    def to_dict(self) -> dict:
        params = {}
        for f in fields(self):
            val = getattr(self, f.name)
            params[f.name] = val.tolist() if isinstance(val, np.ndarray) else val
        return {"format": FORMAT_NAME, "version": FORMAT_VERSION, "kind": self.kind, "params": params}


@dataclass(frozen=True, eq=False)
class GaussianNBModel(TrainedModel):
    kind: ClassVar[str] = "gnb"
    means: np.ndarray = None       # (classes, features)
    variances: np.ndarray = None
    log_priors: np.ndarray = None

    @property
    def n_features(self):
        return self.means.shape[1]

    def joint_log_likelihood(self, X) -> np.ndarray:
        X = self._prep(X)
        out = np.empty((X.shape[0], len(self.classes)))
        for c in range(len(self.classes)):
            var = self.variances[c]
            ll = -0.5 * (np.log(2 * np.pi * var) + (X - self.means[c]) ** 2 / var).sum(axis=1)
            out[:, c] = self.log_priors[c] + ll
        return out

    def predict_proba(self, X) -> np.ndarray:
        jll = self.joint_log_likelihood(X)
        jll -= jll.max(axis=1, keepdims=True)
        p = np.exp(jll)
        return p / p.sum(axis=1, keepdims=True)

    def decision(self, X):
        proba = self.predict_proba(X)
        best = proba.argmax(axis=1)
        return [self.classes[i] for i in best], proba[np.arange(len(best)), best]


def train_gnb(X, y, classes: Sequence | None = None, columns=None) -> GaussianNBModel:
    """Per-class Gaussian per feature, variances floored at 1e-9."""
    X, y, found = _check_xy(X, y, require_binary=classes is None)
    if classes is not None:
        classes = tuple(classes)
        missing = [c for c in classes if c not in found]
        if missing:
            raise TrainingError(f"class(es) absent from training data: {missing}")
        if set(found) - set(classes):
            raise TrainingError(f"unexpected labels {sorted(set(found) - set(classes))}")
    else:
        classes = found
    y_arr = np.array(y, dtype=object)
    means, variances, priors = [], [], []
    for c in classes:
        Xc = X[y_arr == c]
        means.append(Xc.mean(axis=0))
        variances.append(np.maximum(Xc.var(axis=0), VAR_FLOOR))
        priors.append(len(Xc) / len(X))
    return GaussianNBModel(classes, _cols(columns), np.array(means),
                           np.array(variances), np.log(np.array(priors)))


@dataclass(frozen=True, eq=False)
class KNNModel(TrainedModel):
    kind: ClassVar[str] = "knn"
    X: np.ndarray = None
    y: tuple = ()
    k: int = 3

    @property
    def n_features(self):
        return self.X.shape[1]

    def decision(self, X):
        labels, conf = [], []
        for q in X:
            d = np.sqrt(((self.X - q) ** 2).sum(axis=1))
            order = np.argsort(d, kind="stable")[: self.k]  # ties -> lower row index
            near = [self.y[i] for i in order]
            votes = Counter(near)
            top = max(votes.values())
            # first tied label in distance order, i.e. the nearest one
            winner = next(lab for lab in near if votes[lab] == top)
            labels.append(winner)
            conf.append(top / self.k)
        return labels, np.array(conf)


def train_knn(X, y, k: int = 3, columns=None) -> KNNModel:
    X, y, classes = _check_xy(X, y, require_binary=False)
    if not 1 <= k <= len(y):
        raise TrainingError(f"k={k} must be in [1, {len(y)}]")
    return KNNModel(classes, _cols(columns), X.copy(), tuple(y), int(k))


def _signed(y, classes) -> np.ndarray:
    return np.where(np.array(y, dtype=object) == classes[1], 1.0, -1.0)


@dataclass(frozen=True, eq=False)
class LinearSVMModel(TrainedModel):
    kind: ClassVar[str] = "svm_linear"
    w: np.ndarray = None
    b: float = 0.0

    @property
    def n_features(self):
        return self.w.shape[0]

    def decision_function(self, X) -> np.ndarray:
        return self._prep(X) @ self.w + self.b

    def decision(self, X):
        f = X @ self.w + self.b
        return [self.classes[1] if v > 0 else self.classes[0] for v in f], np.abs(f)


def train_svm_linear(X, y, C: float = 1.0, epochs: int = 200, seed: int = 0,
                     columns=None) -> LinearSVMModel:
    """Pegasos sub-gradient descent on the primal hinge loss.

    lambda = 1 / (n C), step 1 / (lambda t).  The bias is learned as the
    weight of a constant feature.  Each epoch visits every sample once in a
    seeded random order.
    """
    X, y, classes = _check_xy(X, y)
    if C <= 0:
        raise TrainingError("C must be positive")
    n, d = X.shape
    ys = _signed(y, classes)
    Xa = np.hstack([X, np.ones((n, 1))])
    lam = 1.0 / (n * C)
    radius = 1.0 / np.sqrt(lam)
    w = np.zeros(d + 1)
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            margin = ys[i] * (Xa[i] @ w)
            w *= 1.0 - eta * lam
            if margin < 1.0:
                w += eta * ys[i] * Xa[i]
            norm = np.linalg.norm(w)
            if norm > radius:
                w *= radius / norm
    return LinearSVMModel(classes, _cols(columns), w[:-1].copy(), float(w[-1]))


def rbf_kernel(A, B, gamma: float) -> np.ndarray:
    """exp(-gamma |a - b|^2) for every row pair."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    return np.exp(-gamma * np.maximum(sq, 0.0))


@dataclass(frozen=True, eq=False)
class RBFSVMModel(TrainedModel):
    kind: ClassVar[str] = "svm_rbf"
    support_vectors: np.ndarray = None
    coef: np.ndarray = None  # alpha_i * y_i of each support vector
    b: float = 0.0
    gamma: float = 1.0
    converged: bool = True

    @property
    def n_features(self):
        return self.support_vectors.shape[1]

    def decision_function(self, X) -> np.ndarray:
        X = self._prep(X)
        if len(self.coef) == 0:
            return np.full(X.shape[0], self.b)
        return rbf_kernel(X, self.support_vectors, self.gamma) @ self.coef + self.b

    def decision(self, X):
        f = self.decision_function(X)
        return [self.classes[1] if v > 0 else self.classes[0] for v in f], np.abs(f)


def train_svm_rbf(X, y, C: float = 1.0, gamma: float | None = None,
                  max_passes: int = 200, tol: float = 1e-3, seed: int = 0,
                  columns=None) -> RBFSVMModel:
    """Simplified SMO on the dual with an RBF kernel.

    Sweeps over all multipliers, pairing each KKT violator with a randomly
    chosen partner.  Converges when a whole sweep changes nothing; after
    ``max_passes`` sweeps the model is returned with ``converged=False``.
    ``gamma`` defaults to 1 / n_features.
    """
    X, y, classes = _check_xy(X, y)
    if C <= 0:
        raise TrainingError("C must be positive")
    n, d = X.shape
    if gamma is None:
        gamma = 1.0 / d
    if gamma <= 0:
        raise TrainingError("gamma must be positive")
    ys = _signed(y, classes)
    K = rbf_kernel(X, X, gamma)
    alpha = np.zeros(n)
    b = 0.0
    rng = np.random.default_rng(seed)
    eps = 1e-12
    converged = False
    for _ in range(max_passes):
        changed = 0
        for i in range(n):
            Ei = (alpha * ys) @ K[:, i] + b - ys[i]
            if not ((ys[i] * Ei < -tol and alpha[i] < C) or (ys[i] * Ei > tol and alpha[i] > 0)):
                continue
            j = int(rng.integers(n - 1))
            j += j >= i
            Ej = (alpha * ys) @ K[:, j] + b - ys[j]
            ai, aj = alpha[i], alpha[j]
            if ys[i] != ys[j]:
                lo, hi = max(0.0, aj - ai), min(C, C + aj - ai)
            else:
                lo, hi = max(0.0, ai + aj - C), min(C, ai + aj)
            if hi - lo < eps:
                continue
            eta = 2.0 * K[i, j] - K[i, i] - K[j, j]
            if eta >= -eps:
                continue
            new_aj = min(hi, max(lo, aj - ys[j] * (Ei - Ej) / eta))
            if abs(new_aj - aj) < 1e-7:
                continue
            new_ai = ai + ys[i] * ys[j] * (aj - new_aj)
            b1 = b - Ei - ys[i] * (new_ai - ai) * K[i, i] - ys[j] * (new_aj - aj) * K[i, j]
            b2 = b - Ej - ys[i] * (new_ai - ai) * K[i, j] - ys[j] * (new_aj - aj) * K[j, j]
            if 0 < new_ai < C:
                b = b1
            elif 0 < new_aj < C:
                b = b2
            else:
                b = (b1 + b2) / 2.0
            alpha[i], alpha[j] = new_ai, new_aj
            changed += 1
        if changed == 0:
            converged = True
            break
    sv = alpha > 1e-10
    return RBFSVMModel(classes, _cols(columns), X[sv].copy(), (alpha * ys)[sv],
                       float(b), float(gamma), converged)


def _cols(columns):
    return None if columns is None else tuple(columns)


def train_model(kind: str, X, y, *, k: int = 3, C: float = 1.0, gamma: float | None = None,
                epochs: int = 200, max_passes: int = 200, seed: int = 0, columns=None) -> TrainedModel:
    """Dispatch on ``kind`` (one of :data:`MODEL_KINDS`)."""
    if kind == "gnb":
        return train_gnb(X, y, columns=columns)
    if kind == "knn":
        return train_knn(X, y, k=k, columns=columns)
    if kind == "svm_linear":
        return train_svm_linear(X, y, C=C, epochs=epochs, seed=seed, columns=columns)
    if kind == "svm_rbf":
        return train_svm_rbf(X, y, C=C, gamma=gamma, max_passes=max_passes, seed=seed, columns=columns)
    raise ValueError(f"unknown model kind {kind!r}; expected one of {MODEL_KINDS}")


# --- voting -----------------------------------------------------------------

class Vote(NamedTuple):
    label: Any
    tie_rule_used: bool   # label counts tied, resolved by confidence sums
    unresolved: bool      # confidence sums tied too; first member's label


@dataclass(frozen=True, eq=False)
class VoteConfig:
    members: tuple[tuple[str, str], ...]  # (model kind, feature space)
    allow_tie_rule: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(tuple(m) for m in self.members))
        if len(self.members) < 2 or (len(self.members) == 2 and not self.allow_tie_rule):
            raise VoteError("majority voting needs >= 3 members (or 2 with allow_tie_rule)")


def majority_vote(predictions: Sequence[tuple[Any, float]]) -> Vote:
    """Most frequent label; ties go to the larger summed confidence."""
    if not predictions:
        raise VoteError("no predictions to vote on")
    counts: Counter = Counter()
    conf: dict = {}
    for label, c in predictions:
        counts[label] += 1
        conf[label] = conf.get(label, 0.0) + float(c)
    top = max(counts.values())
    tied = [lab for lab in counts if counts[lab] == top]  # first-seen order
    if len(tied) == 1:
        return Vote(tied[0], False, False)
    best = max(conf[lab] for lab in tied)
    leaders = [lab for lab in tied if conf[lab] == best]
    if len(leaders) == 1:
        return Vote(leaders[0], True, False)
    first = predictions[0][0]
    return Vote(first if first in leaders else leaders[0], True, True)


# --- persistence --------------------------------------------------------------

_KINDS = {cls.kind: cls for cls in (GaussianNBModel, KNNModel, LinearSVMModel, RBFSVMModel)}
_ARRAY_FIELDS = {"means", "variances", "log_priors", "X", "w", "support_vectors", "coef"}


def save_model(model: TrainedModel, path) -> None:
    """JSON text; floats round-trip exactly."""
    Path(path).write_text(json.dumps(model.to_dict(), sort_keys=True) + "\n", encoding="utf-8")


def load_model(path) -> TrainedModel:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    if data.get("format") != FORMAT_NAME:
        raise ValueError("not a saved model")
    if data.get("version") != FORMAT_VERSION:
        raise ValueError(f"unsupported model format version {data.get('version')}")
    cls = _KINDS[data["kind"]]
    params = dict(data["params"])
    for key, val in params.items():
        if key in _ARRAY_FIELDS:
            params[key] = np.array(val, dtype=float)
        elif isinstance(val, list):
            params[key] = tuple(val)
    return cls(**params)
