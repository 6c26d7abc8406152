"""Experiment protocols: splits, confusion matrices, metrics, pairwise runs.

Two designs are covered. The one-vs-one setup trains on per-class pools
split into fixed train/test sizes by a seeded shuffle. The all-pairs setup
runs one binary experiment per unordered genre pair and collects the 21
accuracies into an upper-triangular table against a 0.5 random baseline.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Mapping, Sequence, TypeVar

import numpy as np

from .corpus import (
    COARSE_METHODS,
    GENRES,
    METHODS,
    LabeledInstance,
    coarsen_method,
)
from .errors import InsufficientDataError, ModeMismatchError
from .model import ClassifierModel, classify, train
from .representation import check_mode, check_order, featurize_instance
from .seeding import derive_seed

T = TypeVar("T")

DIMENSIONS = ("genre", "method-fine", "method-coarse")

DEFAULT_SEED = 42


def check_dimension(dim: str) -> str:
    if dim not in DIMENSIONS:
        raise ValueError(f"dim must be one of {DIMENSIONS}, got {dim!r}")
    return dim


def instance_label(inst: LabeledInstance, dim: str) -> str:
    """Read an instance's label along one dimension."""
    check_dimension(dim)
    if dim == "genre":
        return inst.genre
    if dim == "method-fine":
        return inst.method
    return coarsen_method(inst.method)


def fine_method(inst: LabeledInstance) -> str:
    """Stratum key: the instance's fine method label."""
    return inst.method


def infer_dimension(labels: Iterable[str]) -> str:
    """Recover the label dimension a set of class labels belongs to."""
    labels = set(labels)
    if labels <= set(GENRES):
        return "genre"
    if labels <= set(METHODS):
        return "method-fine"
    if labels <= set(COARSE_METHODS):
        return "method-coarse"
    raise ValueError(f"cannot infer label dimension from {sorted(labels)}")


def group_instances(
    instances: Iterable[LabeledInstance], dim: str
) -> dict[str, list[LabeledInstance]]:
    """Bucket instances by their label along ``dim``, keys sorted."""
    check_dimension(dim)
    pools: dict[str, list[LabeledInstance]] = {}
    for inst in instances:
        pools.setdefault(instance_label(inst, dim), []).append(inst)
    return {label: pools[label] for label in sorted(pools)}


@dataclass(frozen=True)
class SplitSpec:
    """Per-class train/test sizes plus the shuffle seed."""

    per_class_train: int
    per_class_test: int
    seed: int = DEFAULT_SEED

    def __post_init__(self) -> None:
        if self.per_class_train < 1 or self.per_class_test < 1:
            raise ValueError(
                f"split sizes must be >= 1, got "
                f"({self.per_class_train}, {self.per_class_test})"
            )


@dataclass
class Split:
    train: dict[str, list]
    test: dict[str, list]


def _apportion(quota: int, sizes: Mapping[str, int]) -> dict[str, int]:
    """Largest-remainder allocation of ``quota`` proportional to sizes.

    Remainder ties break by key order, so the allocation is deterministic.
    """
    total = sum(sizes.values())
    shares = {k: quota * n / total for k, n in sizes.items()}
    alloc = {k: int(shares[k]) for k in sizes}
    left = quota - sum(alloc.values())
    order = sorted(sizes, key=lambda k: (alloc[k] - shares[k], k))
    for k in order[:left]:
        alloc[k] += 1
    return alloc


def make_split(
    pools: Mapping[str, Sequence[T]],
    spec: SplitSpec,
    stratum_of: Callable[[T], str] | None = None,
) -> Split:
    """Seeded shuffle then prefix split of each class pool.

    Each class is handled with its own derived seed, so the partition of
    one class never depends on which other classes are present. With
    ``stratum_of``, each class pool is first partitioned into strata and
    quotas are apportioned across them (equal when sizes divide evenly,
    largest-remainder otherwise), keeping stratum composition stable.
    """
    want = spec.per_class_train + spec.per_class_test
    train: dict[str, list] = {}
    test: dict[str, list] = {}
    for label in sorted(pools):
        pool = list(pools[label])
        if len(pool) < want:
            raise InsufficientDataError(
                f"class {label!r} has {len(pool)} instances, "
                f"need {want} (train {spec.per_class_train} + "
                f"test {spec.per_class_test})"
            )
        if stratum_of is None:
            strata = {"": pool}
        else:
            strata = {}
            for item in pool:
                strata.setdefault(stratum_of(item), []).append(item)
            strata = {k: strata[k] for k in sorted(strata)}
        sizes = {k: len(v) for k, v in strata.items()}
        combined = _apportion(want, sizes)
        train_alloc = _apportion(spec.per_class_train, combined)
        train[label] = []
        test[label] = []
        for k, items in strata.items():
            rng = random.Random(derive_seed(spec.seed, "split", label, k))
            shuffled = list(items)
            rng.shuffle(shuffled)
            t = train_alloc[k]
            c = combined[k]
            train[label].extend(shuffled[:t])
            test[label].extend(shuffled[t:c])
    return Split(train, test)


def make_folds(
    pools: Mapping[str, Sequence[T]], k: int, seed: int = DEFAULT_SEED
) -> list[Split]:
    """Seeded k-fold partition of per-class pools.

    An alternative protocol to the single fixed split: each fold serves
    once as the test side. Fold sizes differ by at most one per class.
    """
    if k < 2:
        raise ValueError(f"need k >= 2 folds, got {k}")
    chunks: dict[str, list[list]] = {}
    for label in sorted(pools):
        pool = list(pools[label])
        if len(pool) < k:
            raise InsufficientDataError(
                f"class {label!r} has {len(pool)} instances, need >= {k}"
            )
        rng = random.Random(derive_seed(seed, "fold", label))
        rng.shuffle(pool)
        chunks[label] = [pool[i::k] for i in range(k)]
    folds = []
    for i in range(k):
        train = {
            label: [x for j, chunk in enumerate(parts) if j != i for x in chunk]
            for label, parts in chunks.items()
        }
        test = {label: list(parts[i]) for label, parts in chunks.items()}
        folds.append(Split(train, test))
    return folds


@dataclass(eq=False)
class ConfusionMatrix:
    """Counts of (true class, predicted class) pairs.

    Rows index the true class, columns the predicted class.
    """

    classes: tuple[str, ...]
    cells: np.ndarray

    @classmethod
    def from_pairs(
        cls, classes: Sequence[str], pairs: Iterable[tuple[str, str]]
    ) -> "ConfusionMatrix":
        classes = tuple(classes)
        index = {c: i for i, c in enumerate(classes)}
        cells = np.zeros((len(classes), len(classes)), dtype=np.int64)
        for true, pred in pairs:
            cells[index[true], index[pred]] += 1
        return cls(classes, cells)

    def count(self, true: str, pred: str) -> int:
        i = self.classes.index(true)
        j = self.classes.index(pred)
        return int(self.cells[i, j])

    @property
    def total(self) -> int:
        return int(self.cells.sum())

    def accuracy(self) -> float:
        total = self.total
        return float(np.trace(self.cells)) / total if total else 0.0


def evaluate(
    cm: ClassifierModel,
    test: Iterable[LabeledInstance],
    mode: str | None = None,
    order: int | None = None,
    dim: str | None = None,
) -> ConfusionMatrix:
    """Classify each test instance once and tally the confusion matrix.

    ``mode`` and ``order`` are cross-checks: when given they must match
    what the model was trained with. The label dimension is inferred from
    the model's class labels unless passed explicitly.
    """
    if mode is not None and check_mode(mode) != cm.mode:
        raise ModeMismatchError(
            f"model was trained with mode {cm.mode}, asked to test with {mode}"
        )
    if order is not None and check_order(order) != cm.order:
        raise ModeMismatchError(
            f"model was trained with n={cm.order}, asked to test with n={order}"
        )
    if dim is None:
        dim = infer_dimension(cm.labels)
    classes = cm.labels
    known = set(classes)
    pairs = []
    for inst in test:
        true = instance_label(inst, dim)
        if true not in known:
            raise ValueError(
                f"instance from {inst.doc_id!r} has label {true!r}, "
                f"not among model classes {classes}"
            )
        features = featurize_instance(inst, cm.mode, cm.order)
        pairs.append((true, classify(cm, features)))
    return ConfusionMatrix.from_pairs(classes, pairs)


@dataclass
class MetricsReport:
    """Per-class and macro-averaged precision/recall/F1 plus accuracy."""

    classes: tuple[str, ...]
    precision: dict[str, float]
    recall: dict[str, float]
    f1: dict[str, float]
    macro_precision: float
    macro_recall: float
    macro_f1: float
    accuracy: float


def metrics(cmx: ConfusionMatrix) -> MetricsReport:
    """Standard metrics off a confusion matrix, zero-guarded.

    precision_i is the i-th diagonal cell over its column sum, recall_i
    over its row sum; empty denominators give 0. F1 is the harmonic mean,
    0 when P + R = 0. Macro values are unweighted class means.
    """
    cells = cmx.cells
    classes = cmx.classes
    precision = {}
    recall = {}
    f1 = {}
    for i, c in enumerate(classes):
        col = float(cells[:, i].sum())
        row = float(cells[i, :].sum())
        hit = float(cells[i, i])
        p = hit / col if col else 0.0
        r = hit / row if row else 0.0
        precision[c] = p
        recall[c] = r
        f1[c] = 2 * p * r / (p + r) if p + r else 0.0
    k = len(classes)
    return MetricsReport(
        classes=classes,
        precision=precision,
        recall=recall,
        f1=f1,
        macro_precision=sum(precision.values()) / k,
        macro_recall=sum(recall.values()) / k,
        macro_f1=sum(f1.values()) / k,
        accuracy=cmx.accuracy(),
    )


@dataclass
class PairwiseTable:
    """Upper-triangular genre-pair accuracies with the chance baseline."""

    genres: tuple[str, ...]
    accuracy: dict[tuple[str, str], float]
    baseline: float = 0.5


def run_experiment(
    pools: Mapping[str, Sequence[LabeledInstance]],
    mode: str,
    order: int,
    spec: SplitSpec,
    smoothing: str = "laplace",
    prior: str = "uniform",
    stratum_of: Callable[[LabeledInstance], str] | None = None,
    dim: str | None = None,
) -> ConfusionMatrix:
    """Split, train, and evaluate one experiment over labeled pools."""
    split = make_split(pools, spec, stratum_of)
    features = {
        label: [featurize_instance(i, mode, order) for i in insts]
        for label, insts in split.train.items()
    }
    cm = train(features, mode, order, smoothing, prior)
    flat_test = [inst for insts in split.test.values() for inst in insts]
    if dim is None:
        dim = infer_dimension(cm.labels)
    return evaluate(cm, flat_test, dim=dim)


def _pair_task(args) -> tuple[tuple[str, str], float]:
    pair, pools, mode, order, spec, smoothing, prior = args
    try:
        cmx = run_experiment(pools, mode, order, spec, smoothing, prior)
    except InsufficientDataError as exc:
        raise InsufficientDataError(f"pair {pair[0]}-{pair[1]}: {exc}") from None
    return pair, cmx.accuracy()


def pairwise_genres(
    instances: Iterable[LabeledInstance],
    mode: str,
    order: int,
    spec: SplitSpec,
    smoothing: str = "laplace",
    prior: str = "uniform",
    jobs: int = 1,
) -> PairwiseTable:
    """Run the 21 binary genre experiments and collect their accuracies.

    Tasks are independent; with jobs > 1 they run in a process pool, and
    the result table is identical either way.
    """
    pools = group_instances(instances, "genre")
    tasks = []
    for a, b in combinations(GENRES, 2):
        pair_pools = {g: pools.get(g, []) for g in (a, b)}
        tasks.append(((a, b), pair_pools, mode, order, spec, smoothing, prior))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_pair_task, tasks))
    else:
        results = [_pair_task(t) for t in tasks]
    accuracy = dict(sorted(results))
    return PairwiseTable(GENRES, accuracy)
