"""Seeded synthetic tagged corpora with controllable class separation.

Each class is a first-order Markov chain over a declared tag alphabet.
Token forms are synthesized as ``w_<tag>_<k>`` (lemmas ``l_<tag>_<k>``) so
every representation mode sees usable material. Generation is driven by
``random.Random`` using only its ``random()`` method and inverse-CDF
lookups, a fixed portable scheme: the same spec and seed reproduce the
same corpus bytes on any platform. Per-document seeds are derived from
the spec seed and document index, so documents can be generated in any
order, or in parallel, with identical results.

The separation report is analytic, not sampled: symmetrized KL divergence
between the chains' stationary bigram distributions (stationary mass
times transition row), with an infinite sentinel for disjoint supports.
"""

from __future__ import annotations

import math
import random
from bisect import bisect_right
from dataclasses import dataclass, replace
from itertools import accumulate, combinations
from typing import Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .corpus import (
    DEFAULT_MAX_LEN,
    DEFAULT_MIN_LEN,
    Document,
    Token,
    check_genre,
    check_method,
    write_vertical,
)
from .errors import InvalidSpecError, NonErgodicChainError
from .seeding import derive_seed

GENERATOR_NAME = "mt19937-invcdf"

FORMS_PER_TAG = 5

_PROB_TOL = 1e-9


@dataclass(frozen=True)
class ClassChainSpec:
    """One class: its labels and its tag chain."""

    name: str
    genre: str
    method: str
    tags: tuple[str, ...]
    initial: tuple[float, ...]
    transition: tuple[tuple[float, ...], ...]


@dataclass(frozen=True)
class GeneratorSpec:
    classes: tuple[ClassChainSpec, ...]
    min_len: int = DEFAULT_MIN_LEN
    max_len: int = DEFAULT_MAX_LEN
    docs_per_class: int = 600
    sentences_per_doc: int = 1
    seed: int = 0


def _check_distribution(probs: Sequence[float], what: str) -> None:
    if any(p < 0 for p in probs):
        raise InvalidSpecError(f"{what} has a negative probability")
    total = sum(probs)
    if abs(total - 1.0) > _PROB_TOL:
        raise InvalidSpecError(f"{what} sums to {total!r}, expected 1")


def validate_spec(spec: GeneratorSpec) -> GeneratorSpec:
    """Check structural validity; raises InvalidSpec on any violation."""
    if not spec.classes:
        raise InvalidSpecError("spec declares no classes")
    names = [c.name for c in spec.classes]
    if len(set(names)) != len(names):
        raise InvalidSpecError(f"duplicate class names in {names}")
    if spec.min_len < 1:
        raise InvalidSpecError(f"min_len must be >= 1, got {spec.min_len}")
    if spec.max_len < spec.min_len:
        raise InvalidSpecError(
            f"max_len {spec.max_len} < min_len {spec.min_len}"
        )
    if spec.docs_per_class < 1:
        raise InvalidSpecError("docs_per_class must be >= 1")
    if spec.sentences_per_doc < 1:
        raise InvalidSpecError("sentences_per_doc must be >= 1")
    for cls in spec.classes:
        if not cls.name or any(ch.isspace() for ch in cls.name):
            raise InvalidSpecError(f"bad class name {cls.name!r}")
        try:
            check_genre(cls.genre)
            check_method(cls.method)
        except Exception as exc:
            raise InvalidSpecError(f"class {cls.name!r}: {exc}") from None
        if not cls.tags:
            raise InvalidSpecError(f"class {cls.name!r} has an empty alphabet")
        if len(set(cls.tags)) != len(cls.tags):
            raise InvalidSpecError(f"class {cls.name!r} has duplicate tags")
        for tag in cls.tags:
            if not tag or any(ch.isspace() for ch in tag) or tag.startswith("#"):
                raise InvalidSpecError(
                    f"class {cls.name!r} has unusable tag {tag!r}"
                )
        k = len(cls.tags)
        if len(cls.initial) != k:
            raise InvalidSpecError(
                f"class {cls.name!r}: initial distribution has "
                f"{len(cls.initial)} entries for {k} tags"
            )
        _check_distribution(cls.initial, f"class {cls.name!r} initial")
        if len(cls.transition) != k:
            raise InvalidSpecError(
                f"class {cls.name!r}: transition matrix has "
                f"{len(cls.transition)} rows for {k} tags"
            )
        for tag, row in zip(cls.tags, cls.transition):
            if len(row) != k:
                raise InvalidSpecError(
                    f"class {cls.name!r}: row for {tag} has {len(row)} entries"
                )
            _check_distribution(row, f"class {cls.name!r} row {tag}")
    return spec


def _cumulative(probs: Sequence[float]) -> tuple[float, ...]:
    return tuple(accumulate(probs))


def _draw(rng: random.Random, cum: Sequence[float]) -> int:
    # inverse CDF; clamp guards the float case where cum[-1] < 1
    return min(bisect_right(cum, rng.random()), len(cum) - 1)


def _make_token(rng: random.Random, tag: str) -> Token:
    k = int(rng.random() * FORMS_PER_TAG)
    return Token(f"w_{tag}_{k}", tag, f"l_{tag}_{k}")


def generate_document(
    spec: GeneratorSpec, cls: ClassChainSpec, index: int
) -> Document:
    """Generate one document deterministically from its derived seed."""
    rng = random.Random(derive_seed(spec.seed, "doc", cls.name, index))
    init_cum = _cumulative(cls.initial)
    row_cum = [_cumulative(row) for row in cls.transition]
    span = spec.max_len - spec.min_len + 1
    sentences = []
    for _ in range(spec.sentences_per_doc):
        length = spec.min_len + min(int(rng.random() * span), span - 1)
        state = _draw(rng, init_cum)
        tokens = [_make_token(rng, cls.tags[state])]
        for _ in range(length - 1):
            state = _draw(rng, row_cum[state])
            tokens.append(_make_token(rng, cls.tags[state]))
        sentences.append(tuple(tokens))
    return Document(
        id=f"{cls.name}-{index:04d}",
        genre=cls.genre,
        method=cls.method,
        sentences=tuple(sentences),
    )


def generate(spec: GeneratorSpec) -> list[Document]:
    """Generate the full corpus: classes in spec order, then doc index."""
    validate_spec(spec)
    return [
        generate_document(spec, cls, i)
        for cls in spec.classes
        for i in range(spec.docs_per_class)
    ]


def generate_vertical(spec: GeneratorSpec) -> str:
    """Generate and serialize, recording generator identity and seed."""
    docs = generate(spec)
    comments = (f"generator={GENERATOR_NAME} seed={spec.seed}",)
    return write_vertical(docs, comments)


def stationary_distribution(
    transition: Sequence[Sequence[float]],
) -> np.ndarray:
    """Unique stationary distribution of a transition matrix.

    Uniqueness holds exactly when the chain has a single closed
    communicating class; anything else is reported, not guessed.
    """
    P = np.asarray(transition, dtype=float)
    k = P.shape[0]
    graph = csr_matrix((P > 0).astype(np.int8))
    n_comp, labels = connected_components(graph, directed=True, connection="strong")
    closed = set(range(n_comp))
    for i in range(k):
        for j in np.nonzero(P[i])[0]:
            if labels[i] != labels[j]:
                closed.discard(labels[i])
    if len(closed) != 1:
        raise NonErgodicChainError(
            f"chain has {len(closed)} closed communicating classes, need 1"
        )
    A = np.vstack([P.T - np.eye(k), np.ones((1, k))])
    b = np.zeros(k + 1)
    b[-1] = 1.0
    pi, _, rank, _ = np.linalg.lstsq(A, b, rcond=None)
    if rank < k:
        raise NonErgodicChainError("stationary system is rank-deficient")
    pi[np.abs(pi) < 1e-12] = 0.0
    if (pi < 0).any():
        raise NonErgodicChainError("stationary solve left negative mass")
    return pi / pi.sum()


def bigram_distribution(cls: ClassChainSpec) -> dict[tuple[str, str], float]:
    """Analytic tag-bigram distribution: stationary mass times row."""
    pi = stationary_distribution(cls.transition)
    dist = {}
    for i, a in enumerate(cls.tags):
        for j, b in enumerate(cls.tags):
            mass = float(pi[i] * cls.transition[i][j])
            if mass > 0:
                dist[(a, b)] = mass
    return dist


def _sym_kl(
    p: dict[tuple[str, str], float], q: dict[tuple[str, str], float]
) -> float:
    if set(p) != set(q):
        return math.inf
    forward = sum(pv * math.log(pv / q[g]) for g, pv in p.items())
    backward = sum(qv * math.log(qv / p[g]) for g, qv in q.items())
    return forward + backward


@dataclass
class SeparationReport:
    """Symmetrized KL divergence per class pair, keyed by sorted names."""

    pairs: dict[tuple[str, str], float]

    def get(self, a: str, b: str) -> float:
        return self.pairs[tuple(sorted((a, b)))]


def separation(spec: GeneratorSpec) -> SeparationReport:
    """Analytic pairwise separation of the spec's chains."""
    validate_spec(spec)
    dists = {cls.name: bigram_distribution(cls) for cls in spec.classes}
    pairs = {}
    for a, b in combinations(sorted(dists), 2):
        pairs[(a, b)] = _sym_kl(dists[a], dists[b])
    return SeparationReport(pairs)


def with_seed(spec: GeneratorSpec, seed: int) -> GeneratorSpec:
    return replace(spec, seed=seed)


# Spec file format: tab-separated lines, '##' comments allowed.
#   param\t<name>\t<value>        min_len, max_len, docs_per_class,
#                                 sentences_per_doc, seed
#   class\t<name>\t<genre>\t<method>
#   tags\t<name>\t<tag> <tag> ...
#   init\t<name>\t<p> <p> ...
#   trans\t<name>\t<tag>\t<p> <p> ...
_PARAMS = ("min_len", "max_len", "docs_per_class", "sentences_per_doc", "seed")


def format_generator_spec(spec: GeneratorSpec) -> str:
    """Serialize a spec; parse_generator_spec inverts this exactly."""
    lines = []
    for name in _PARAMS:
        lines.append(f"param\t{name}\t{getattr(spec, name)}")
    for cls in spec.classes:
        lines.append(f"class\t{cls.name}\t{cls.genre}\t{cls.method}")
        lines.append(f"tags\t{cls.name}\t{' '.join(cls.tags)}")
        lines.append(f"init\t{cls.name}\t{' '.join(repr(p) for p in cls.initial)}")
        for tag, row in zip(cls.tags, cls.transition):
            lines.append(
                f"trans\t{cls.name}\t{tag}\t{' '.join(repr(p) for p in row)}"
            )
    return "\n".join(lines) + "\n"


def parse_generator_spec(text: str) -> GeneratorSpec:
    """Parse the spec file format; raises InvalidSpec on any defect."""
    params: dict[str, int] = {}
    order: list[str] = []
    meta: dict[str, tuple[str, str]] = {}
    tags: dict[str, tuple[str, ...]] = {}
    init: dict[str, tuple[float, ...]] = {}
    rows: dict[str, dict[str, tuple[float, ...]]] = {}

    def probs(value: str, lineno: int) -> tuple[float, ...]:
        try:
            return tuple(float(p) for p in value.split())
        except ValueError:
            raise InvalidSpecError(
                f"line {lineno}: bad probability list {value!r}"
            ) from None

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        if not line or line.startswith("##"):
            continue
        fields = line.split("\t")
        kind = fields[0]
        if kind == "param" and len(fields) == 3:
            name, value = fields[1], fields[2]
            if name not in _PARAMS:
                raise InvalidSpecError(f"line {lineno}: unknown param {name!r}")
            try:
                params[name] = int(value)
            except ValueError:
                raise InvalidSpecError(
                    f"line {lineno}: bad integer {value!r}"
                ) from None
        elif kind == "class" and len(fields) == 4:
            name = fields[1]
            if name in meta:
                raise InvalidSpecError(f"line {lineno}: duplicate class {name!r}")
            order.append(name)
            meta[name] = (fields[2], fields[3])
            rows[name] = {}
        elif kind == "tags" and len(fields) == 3:
            tags[fields[1]] = tuple(fields[2].split())
        elif kind == "init" and len(fields) == 3:
            init[fields[1]] = probs(fields[2], lineno)
        elif kind == "trans" and len(fields) == 4:
            rows.setdefault(fields[1], {})[fields[2]] = probs(fields[3], lineno)
        else:
            raise InvalidSpecError(f"line {lineno}: unrecognized line {line!r}")

    classes = []
    for name in order:
        if name not in tags or name not in init:
            raise InvalidSpecError(f"class {name!r} is missing tags or init")
        missing = [t for t in tags[name] if t not in rows[name]]
        if missing:
            raise InvalidSpecError(
                f"class {name!r} is missing transition rows for {missing}"
            )
        extra = [t for t in rows[name] if t not in tags[name]]
        if extra:
            raise InvalidSpecError(
                f"class {name!r} has transition rows for unknown tags {extra}"
            )
        genre, method = meta[name]
        classes.append(
            ClassChainSpec(
                name=name,
                genre=genre,
                method=method,
                tags=tags[name],
                initial=init[name],
                transition=tuple(rows[name][t] for t in tags[name]),
            )
        )
    orphans = set(tags) | set(init) | set(rows)
    orphans -= set(order)
    if orphans:
        raise InvalidSpecError(f"data for undeclared classes {sorted(orphans)}")
    return validate_spec(GeneratorSpec(classes=tuple(classes), **params))
