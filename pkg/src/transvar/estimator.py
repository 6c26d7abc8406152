"""Scikit-learn style wrappers around the n-gram classifier.

Samples are token sequences (anything iterable of objects with ``form``
and ``pos`` attributes), not numeric arrays, so validation here checks
structure rather than dtype and shape.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .corpus import Sentence, Token
from .model import (
    ClassifierModel,
    check_prior,
    check_smoothing,
    classify,
    load_model_file,
    save_model_file,
    score,
    train,
)
from .representation import (
    check_mode,
    check_order,
    delexicalize,
    extract_ngrams,
    featurize_instance,
)


def check_token_sequences(X: Iterable[Sequence[Token]]) -> list[Sentence]:
    """Validate and materialize X as a list of token tuples."""
    if isinstance(X, (str, bytes)):
        raise TypeError("X must be a sequence of token sequences, not text")
    rows: list[Sentence] = []
    for i, row in enumerate(X):
        if isinstance(row, (str, bytes)):
            raise TypeError(f"sample {i} is a string, expected tokens")
        try:
            tokens = tuple(row)
        except TypeError:
            raise TypeError(f"sample {i} is not iterable") from None
        for tok in tokens:
            if not hasattr(tok, "form") or not hasattr(tok, "pos"):
                raise TypeError(
                    f"sample {i} contains {tok!r}, which has no form/pos"
                )
        rows.append(tokens)
    return rows


def check_labels(y: Iterable[str], n_samples: int) -> list[str]:
    labels = [str(label) for label in y]
    if len(labels) != n_samples:
        raise ValueError(
            f"X has {n_samples} samples but y has {len(labels)} labels"
        )
    return labels


class Delexicalizer(TransformerMixin, BaseEstimator):
    """Map token sequences to symbol sequences for one representation mode.

    Stateless: fit only validates parameters.
    """

    def __init__(self, mode: str = "POS"):
        self.mode = mode

    def fit(self, X=None, y=None):
        check_mode(self.mode)
        return self

    def transform(self, X) -> list[list[str]]:
        check_mode(self.mode)
        return [delexicalize(row, self.mode) for row in check_token_sequences(X)]


class NGramExtractor(TransformerMixin, BaseEstimator):
    """Count sliding-window n-grams of symbol sequences.

    Stateless: fit only validates parameters.
    """

    def __init__(self, order: int = 3):
        self.order = order

    def fit(self, X=None, y=None):
        check_order(self.order)
        return self

    def transform(self, X):
        check_order(self.order)
        return [extract_ngrams(list(row), self.order) for row in X]


class LikelihoodEstimationClassifier(ClassifierMixin, BaseEstimator):
    """N-gram likelihood classifier over delexicalized token sequences.

    Parameters
    ----------
    mode : str, default "POS"
        Representation mode: "LEX", "SEMI", or "POS".
    order : int, default 3
        N-gram order, 1 to 4.
    smoothing : str, default "laplace"
        "laplace" for add-one smoothing, or "none" for the unsmoothed
        unigram baseline (order 1 only).
    prior : str, default "uniform"
        "uniform" or "empirical" class priors.

    Attributes
    ----------
    classes_ : ndarray of str
        Class labels in sorted order.
    model_ : ClassifierModel
        The trained per-class count tables.
    """

    def __init__(
        self,
        mode: str = "POS",
        order: int = 3,
        smoothing: str = "laplace",
        prior: str = "uniform",
    ):
        self.mode = mode
        self.order = order
        self.smoothing = smoothing
        self.prior = prior

    def _check_params(self) -> None:
        check_mode(self.mode)
        check_order(self.order)
        check_smoothing(self.smoothing, self.order)
        check_prior(self.prior)

    def fit(self, X, y):
        """Fit one count table per class from labeled token sequences."""
        self._check_params()
        rows = check_token_sequences(X)
        labels = check_labels(y, len(rows))
        grouped: dict[str, list] = {}
        for tokens, label in zip(rows, labels):
            grouped.setdefault(label, []).append(
                featurize_instance(tokens, self.mode, self.order)
            )
        self.model_ = train(
            grouped, self.mode, self.order, self.smoothing, self.prior
        )
        self.classes_ = np.asarray(self.model_.labels, dtype=object)
        return self

    def predict(self, X) -> np.ndarray:
        check_is_fitted(self)
        rows = check_token_sequences(X)
        return np.asarray(
            [classify(self.model_, self._featurize(row)) for row in rows],
            dtype=object,
        )

    def log_scores(self, X) -> np.ndarray:
        """Raw per-class log scores, columns ordered like classes_."""
        check_is_fitted(self)
        rows = check_token_sequences(X)
        out = np.empty((len(rows), len(self.classes_)), dtype=float)
        for i, row in enumerate(rows):
            s = score(self.model_, self._featurize(row))
            out[i] = [s[label] for label in self.classes_]
        return out

    def predict_log_proba(self, X) -> np.ndarray:
        """Posterior log-probabilities, normalized over the classes."""
        raw = self.log_scores(X)
        peak = raw.max(axis=1, keepdims=True)
        norm = peak + np.log(np.exp(raw - peak).sum(axis=1, keepdims=True))
        return raw - norm

    def predict_proba(self, X) -> np.ndarray:
        return np.exp(self.predict_log_proba(X))

    def _featurize(self, tokens: Sentence):
        return featurize_instance(tokens, self.model_.mode, self.model_.order)

    def save(self, path: str) -> None:
        """Write the fitted model to a model file."""
        check_is_fitted(self)
        save_model_file(self.model_, path)

    @classmethod
    def from_model(cls, cm: ClassifierModel) -> "LikelihoodEstimationClassifier":
        """Wrap an already-trained ClassifierModel as a fitted estimator."""
        est = cls(
            mode=cm.mode,
            order=cm.order,
            smoothing=cm.smoothing,
        )
        est.model_ = cm
        est.classes_ = np.asarray(cm.labels, dtype=object)
        return est

    @classmethod
    def load(cls, path: str) -> "LikelihoodEstimationClassifier":
        """Load a model file as a fitted estimator."""
        return cls.from_model(load_model_file(path))
