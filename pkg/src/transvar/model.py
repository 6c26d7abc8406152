"""Per-class n-gram language models and the likelihood classifier.

Training keeps one n-gram count table per class. Scoring a test instance
against class L computes

    score(L) = log P(L) + sum over test n-grams g of count(g) * log P(g|L)

with add-one smoothing

    P(g|L) = (C(g|L) + 1) / (N_L + B)

where N_L is the class's total n-gram occurrences and B the number of
distinct n-gram types observed across all classes together. B is shared, so
scores stay comparable across classes. The predicted class is the argmax;
exact ties go to the lexicographically smallest label.

The bag-of-words regime (smoothing "none", unigrams only) reproduces the
reference baseline instead: unsmoothed relative frequencies, with unseen
test unigrams skipped rather than zeroing the product.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import (
    CorruptModelError,
    EmptyClassError,
    EmptyInstanceError,
    MinClassesError,
    VersionMismatchError,
)
from .representation import (
    NGram,
    check_mode,
    check_order,
    merge_features,
    ngram_key,
    parse_ngram_key,
)

SMOOTHING_KINDS = ("laplace", "none")
PRIOR_KINDS = ("uniform", "empirical")

MODEL_MAGIC = "#transvar-model"
MODEL_VERSION = "v1"


def check_smoothing(smoothing: str, order: int) -> str:
    if smoothing not in SMOOTHING_KINDS:
        raise ValueError(
            f"smoothing must be one of {SMOOTHING_KINDS}, got {smoothing!r}"
        )
    if smoothing == "none" and order != 1:
        raise ValueError("smoothing 'none' is only defined for order 1")
    return smoothing


def check_prior(prior: str) -> str:
    if prior not in PRIOR_KINDS:
        raise ValueError(f"prior must be one of {PRIOR_KINDS}, got {prior!r}")
    return prior


@dataclass
class NGramModel:
    """Count table for one class: n-gram type -> occurrence count."""

    label: str
    order: int
    counts: dict[NGram, int]
    total: int


@dataclass
class ClassifierModel:
    """A full classifier: one NGramModel per class plus shared context."""

    mode: str
    order: int
    smoothing: str
    vocab_size: int
    models: dict[str, NGramModel]
    priors: dict[str, float]

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(self.models)


def train(
    features_by_class: Mapping[str, Sequence[Mapping[NGram, int]]],
    mode: str,
    order: int,
    smoothing: str = "laplace",
    prior: str = "uniform",
) -> ClassifierModel:
    """Build a classifier from per-class instance feature counts.

    ``features_by_class`` maps each class label to the feature multisets of
    its training instances. Needs at least two classes, and every class
    must contribute at least one n-gram occurrence.
    """
    check_mode(mode)
    check_order(order)
    check_smoothing(smoothing, order)
    check_prior(prior)

    labels = sorted(features_by_class)
    if len(labels) < 2:
        raise MinClassesError(
            f"need at least 2 classes, got {len(labels)}"
        )

    models: dict[str, NGramModel] = {}
    instance_counts: dict[str, int] = {}
    vocabulary: set[NGram] = set()
    for label in labels:
        instances = features_by_class[label]
        merged = merge_features(instances)
        total = sum(merged.values())
        if total == 0:
            raise EmptyClassError(f"class {label!r} has no n-gram occurrences")
        for gram in merged:
            if len(gram) != order:
                raise ValueError(
                    f"class {label!r} has an n-gram of length {len(gram)}, "
                    f"expected {order}"
                )
        vocabulary.update(merged)
        models[label] = NGramModel(label, order, dict(merged), total)
        instance_counts[label] = len(instances)

    if prior == "uniform":
        priors = {label: 1.0 / len(labels) for label in labels}
    else:
        grand = sum(instance_counts.values())
        priors = {
            label: instance_counts[label] / grand for label in labels
        }

    return ClassifierModel(
        mode=mode,
        order=order,
        smoothing=smoothing,
        vocab_size=len(vocabulary),
        models=models,
        priors=priors,
    )


def laplace_prob(model: NGramModel, gram: NGram, vocab_size: int) -> float:
    """Add-one probability of ``gram`` under one class model."""
    if vocab_size < 1:
        raise ValueError(f"vocab_size must be >= 1, got {vocab_size}")
    return (model.counts.get(gram, 0) + 1) / (model.total + vocab_size)


def model_vocabulary(cm: ClassifierModel) -> set[NGram]:
    """Union of the n-gram types observed by any class."""
    vocab: set[NGram] = set()
    for m in cm.models.values():
        vocab.update(m.counts)
    return vocab


def score(
    cm: ClassifierModel, features: Mapping[NGram, int]
) -> dict[str, float]:
    """Log-score ``features`` against every class.

    Returns label -> log score in label order. An instance with no n-gram
    occurrences cannot be scored.
    """
    if not features or sum(features.values()) == 0:
        raise EmptyInstanceError("instance has no n-grams to score")
    scores: dict[str, float] = {}
    for label, m in cm.models.items():
        terms = [math.log(cm.priors[label])]
        if cm.smoothing == "laplace":
            for gram, cnt in features.items():
                terms.append(cnt * math.log(laplace_prob(m, gram, cm.vocab_size)))
        else:
            for gram, cnt in features.items():
                c = m.counts.get(gram, 0)
                if c:
                    terms.append(cnt * math.log(c / m.total))
        scores[label] = math.fsum(terms)
    return scores


def classify(cm: ClassifierModel, features: Mapping[NGram, int]) -> str:
    """Predict the argmax class; ties break to the smallest label."""
    scores = score(cm, features)
    best = None
    for label in cm.models:
        if best is None or scores[label] > scores[best]:
            best = label
    assert best is not None
    return best


# Model file checksum: CRC-64, ECMA-182 polynomial, not reflected, zero
# init and xor-out. Hand-rolled because the stdlib stops at CRC-32.
_CRC64_POLY = 0x42F0E1EBA9EA3693
_MASK64 = (1 << 64) - 1


def _crc64_table() -> list[int]:
    table = []
    for byte in range(256):
        crc = byte << 56
        for _ in range(8):
            if crc & (1 << 63):
                crc = ((crc << 1) ^ _CRC64_POLY) & _MASK64
            else:
                crc = (crc << 1) & _MASK64
        table.append(crc)
    return table


_CRC64_TABLE = _crc64_table()


def crc64(data: bytes) -> int:
    crc = 0
    for b in data:
        crc = ((crc << 8) & _MASK64) ^ _CRC64_TABLE[(crc >> 56) ^ b]
    return crc


_HEADER_RE = re.compile(
    r"^#transvar-model (?P<version>\S+) mode=(?P<mode>\S+) n=(?P<n>\d+) "
    r"smoothing=(?P<smoothing>\S+) B=(?P<B>\d+)$"
)
_CLASS_RE = re.compile(
    r"^#class (?P<label>\S+) total=(?P<total>\d+) prior=(?P<prior>\S+)$"
)


def save_model(cm: ClassifierModel) -> bytes:
    """Serialize a classifier to the versioned model file format.

    Count lines are sorted by n-gram key within each class and classes by
    label, so equal models serialize to identical bytes. Reloading gives
    bit-identical scores: counts and totals are integers, priors are
    written with full repr precision.
    """
    lines = [
        f"{MODEL_MAGIC} {MODEL_VERSION} mode={cm.mode} n={cm.order} "
        f"smoothing={cm.smoothing.upper()} B={cm.vocab_size}"
    ]
    for label in cm.labels:
        m = cm.models[label]
        lines.append(
            f"#class {label} total={m.total} prior={cm.priors[label]!r}"
        )
        rows = sorted((ngram_key(g), c) for g, c in m.counts.items())
        for key, cnt in rows:
            lines.append(f"{cnt}\t{key}")
    body = ("\n".join(lines) + "\n").encode("utf-8")
    return body + f"#checksum {crc64(body):016x}\n".encode("ascii")


def load_model(data: bytes) -> ClassifierModel:
    """Parse and verify a serialized model.

    Rejects unknown format versions, checksum mismatches, and any
    internal inconsistency (totals, priors, vocabulary size, duplicate
    entries, order mismatches).
    """
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise CorruptModelError(f"not valid UTF-8: {exc}") from None
    if not text.endswith("\n"):
        raise CorruptModelError("truncated file: no final newline")
    lines = text.split("\n")[:-1]
    if not lines or not lines[0].startswith(MODEL_MAGIC + " "):
        raise CorruptModelError("missing model header")

    header = _HEADER_RE.match(lines[0])
    if header is None:
        version = lines[0].split()[1] if len(lines[0].split()) > 1 else "?"
        if version != MODEL_VERSION:
            raise VersionMismatchError(
                f"unsupported model version {version!r}"
            )
        raise CorruptModelError(f"malformed header: {lines[0]!r}")
    if header["version"] != MODEL_VERSION:
        raise VersionMismatchError(
            f"unsupported model version {header['version']!r}"
        )

    if len(lines) < 2 or not lines[-1].startswith("#checksum "):
        raise CorruptModelError("missing checksum line")
    stated = lines[-1][len("#checksum "):].strip()
    body = ("\n".join(lines[:-1]) + "\n").encode("utf-8")
    try:
        stated_crc = int(stated, 16)
    except ValueError:
        raise CorruptModelError(f"bad checksum value {stated!r}") from None
    actual = crc64(body)
    if actual != stated_crc:
        raise CorruptModelError(
            f"checksum mismatch: stated {stated_crc:016x}, "
            f"computed {actual:016x}"
        )

    try:
        mode = check_mode(header["mode"])
        order = check_order(int(header["n"]))
    except ValueError as exc:
        raise CorruptModelError(str(exc)) from None
    smoothing = header["smoothing"].lower()
    try:
        check_smoothing(smoothing, order)
    except ValueError as exc:
        raise CorruptModelError(str(exc)) from None
    vocab_size = int(header["B"])

    models: dict[str, NGramModel] = {}
    priors: dict[str, float] = {}
    label: str | None = None
    counts: dict[NGram, int] = {}
    total_stated = 0

    def close_class() -> None:
        if label is None:
            return
        if sum(counts.values()) != total_stated:
            raise CorruptModelError(
                f"class {label!r}: counts sum to {sum(counts.values())}, "
                f"header says {total_stated}"
            )
        models[label] = NGramModel(label, order, dict(counts), total_stated)

    for lineno, line in enumerate(lines[1:-1], start=2):
        if line.startswith("#class "):
            close_class()
            m = _CLASS_RE.match(line)
            if m is None:
                raise CorruptModelError(f"line {lineno}: bad class header")
            label = m["label"]
            if label in models:
                raise CorruptModelError(
                    f"line {lineno}: duplicate class {label!r}"
                )
            total_stated = int(m["total"])
            try:
                priors[label] = float(m["prior"])
            except ValueError:
                raise CorruptModelError(
                    f"line {lineno}: bad prior {m['prior']!r}"
                ) from None
            counts = {}
        else:
            if label is None:
                raise CorruptModelError(
                    f"line {lineno}: count line before any #class"
                )
            cnt_s, sep, key = line.partition("\t")
            if not sep:
                raise CorruptModelError(f"line {lineno}: missing tab")
            try:
                cnt = int(cnt_s)
                gram = parse_ngram_key(key)
            except ValueError as exc:
                raise CorruptModelError(f"line {lineno}: {exc}") from None
            if cnt < 1:
                raise CorruptModelError(
                    f"line {lineno}: nonpositive count {cnt}"
                )
            if len(gram) != order:
                raise CorruptModelError(
                    f"line {lineno}: n-gram arity {len(gram)}, expected {order}"
                )
            if gram in counts:
                raise CorruptModelError(
                    f"line {lineno}: duplicate n-gram {key!r}"
                )
            counts[gram] = cnt
    close_class()

    if len(models) < 2:
        raise CorruptModelError(f"model has {len(models)} class(es), need >= 2")
    if abs(sum(priors.values()) - 1.0) > 1e-12:
        raise CorruptModelError(
            f"priors sum to {sum(priors.values())!r}, expected 1"
        )
    if any(p <= 0 for p in priors.values()):
        raise CorruptModelError("nonpositive class prior")
    union = len(set().union(*(m.counts.keys() for m in models.values())))
    if vocab_size < union:
        raise CorruptModelError(
            f"stated B={vocab_size} smaller than observed vocabulary {union}"
        )

    ordered = {lab: models[lab] for lab in sorted(models)}
    return ClassifierModel(
        mode=mode,
        order=order,
        smoothing=smoothing,
        vocab_size=vocab_size,
        models=ordered,
        priors={lab: priors[lab] for lab in ordered},
    )


def save_model_file(cm: ClassifierModel, path: str) -> None:
    with open(path, "wb") as fh:
        fh.write(save_model(cm))


def load_model_file(path: str) -> ClassifierModel:
    with open(path, "rb") as fh:
        return load_model(fh.read())
