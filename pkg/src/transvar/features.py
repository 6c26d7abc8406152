"""Most-informative n-grams, list-membership aggregation, distributions.

For a binary model, a gram's informativeness for class c against c' is its
smoothed log-likelihood ratio, i.e. the per-occurrence contribution the
gram makes to the decision margin between the two classes. Aggregations
count how often grams recur across a focal class's binary-task lists and
report corpus frequencies normalized per 1000 n-gram tokens.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .corpus import LabeledInstance
from .errors import FocalMismatchError, NotBinaryError
from .model import ClassifierModel, laplace_prob, model_vocabulary
from .representation import (
    NGram,
    delexicalize,
    featurize_instance,
    ngram_key,
)

DEFAULT_K = 20


@dataclass(frozen=True)
class FeatureScore:
    gram: NGram
    target: str
    other: str
    score: float


@dataclass
class MIFList:
    """Top-scored grams for one class within one binary task."""

    task: tuple[str, str]
    label: str
    entries: list[FeatureScore]

    def grams(self) -> list[NGram]:
        return [e.gram for e in self.entries]


def feature_score(
    cm: ClassifierModel, gram: NGram, target: str, other: str
) -> float:
    """Smoothed log-likelihood ratio of ``gram`` for target vs other."""
    p = laplace_prob(cm.models[target], gram, cm.vocab_size)
    q = laplace_prob(cm.models[other], gram, cm.vocab_size)
    return math.log(p) - math.log(q)


def top_features(cm: ClassifierModel, k: int = DEFAULT_K) -> tuple[MIFList, MIFList]:
    """Rank the union vocabulary for each side of a binary model.

    Returns one list per class orientation, each sorted by score
    descending with ties broken by ascending canonical gram string and
    truncated to ``k`` entries.
    """
    if len(cm.models) != 2:
        raise NotBinaryError(
            f"need exactly 2 classes, model has {len(cm.models)}"
        )
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    a, b = cm.labels
    task = (a, b)
    vocab = model_vocabulary(cm)
    lists = []
    for target, other in ((a, b), (b, a)):
        scored = [
            FeatureScore(g, target, other, feature_score(cm, g, target, other))
            for g in vocab
        ]
        scored.sort(key=lambda e: (-e.score, ngram_key(e.gram)))
        lists.append(MIFList(task, target, scored[:k]))
    return lists[0], lists[1]


@dataclass
class MembershipReport:
    """How often gram types recur across one class's task lists.

    histogram[m] counts the gram types that appear in exactly m lists.
    """

    focal: str
    histogram: dict[int, int]
    total: int


def membership(focal: str, lists: Sequence[MIFList]) -> MembershipReport:
    """Histogram of list-membership multiplicity over ``lists``.

    All lists must belong to the focal class.
    """
    for lst in lists:
        if lst.label != focal:
            raise FocalMismatchError(
                f"list for task {lst.task} has class {lst.label!r}, "
                f"expected {focal!r}"
            )
    counts: Counter[NGram] = Counter()
    for lst in lists:
        for gram in set(lst.grams()):
            counts[gram] += 1
    histogram = Counter(counts.values())
    return MembershipReport(
        focal=focal,
        histogram=dict(sorted(histogram.items(), reverse=True)),
        total=len(counts),
    )


@dataclass
class DistributionRow:
    gram: NGram
    per_class: dict[str, float]


def distribution(
    grams: Iterable[NGram],
    pools: Mapping[str, Sequence[LabeledInstance]],
    mode: str,
    order: int,
) -> list[DistributionRow]:
    """Per-class frequency of each gram per 1000 n-gram tokens.

    A gram absent from a class scores 0. Rows come back sorted by
    canonical gram string; class columns follow sorted label order.
    """
    labels = sorted(pools)
    class_counts: dict[str, Counter[NGram]] = {}
    class_totals: dict[str, int] = {}
    for label in labels:
        merged: Counter[NGram] = Counter()
        for inst in pools[label]:
            merged.update(featurize_instance(inst, mode, order))
        class_counts[label] = merged
        class_totals[label] = sum(merged.values())
    rows = []
    for gram in sorted(set(grams), key=ngram_key):
        per_class = {}
        for label in labels:
            total = class_totals[label]
            count = class_counts[label].get(gram, 0)
            per_class[label] = 1000.0 * count / total if total else 0.0
        rows.append(DistributionRow(gram, per_class))
    return rows


def example_contexts(
    grams: Iterable[NGram],
    instances: Iterable[LabeledInstance],
    mode: str,
    order: int,
    limit: int = 3,
) -> dict[NGram, list[str]]:
    """Collect up to ``limit`` surface realizations of each gram.

    A realization is the run of token forms under the matching window, in
    corpus order. Supports the manual reading of ranked patterns.
    """
    wanted = set(grams)
    found: dict[NGram, list[str]] = {g: [] for g in wanted}
    open_count = len(wanted)
    for inst in instances:
        if not open_count:
            break
        values = delexicalize(inst.tokens, mode)
        for i in range(len(values) - order + 1):
            window = tuple(values[i : i + order])
            if window in wanted:
                hits = found[window]
                if len(hits) < limit:
                    surface = " ".join(
                        tok.form for tok in inst.tokens[i : i + order]
                    )
                    if surface not in hits:
                        hits.append(surface)
                        if len(hits) == limit:
                            open_count -= 1
    return found
