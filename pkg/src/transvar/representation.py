"""Delexicalization and n-gram feature extraction.

Three representation modes, ordered by how much lexical material survives:

    LEX   surface forms unchanged
    SEMI  surface forms, but noun tokens collapse to one placeholder
    POS   part-of-speech tags only

Features are sliding-window n-grams over one sentence at a time; windows
never cross a sentence boundary and no padding symbols are added, so a
sentence of L tokens yields max(0, L - n + 1) n-grams. Punctuation tokens
count like any other token.
"""

from __future__ import annotations

import re
from collections import Counter
from typing import Iterable, Sequence

from .corpus import Token
from .errors import OrderOutOfRangeError

MODES = ("LEX", "SEMI", "POS")
MIN_ORDER = 1
MAX_ORDER = 4

NOUN_TAGS = frozenset({"NN", "NE"})
PLACEHOLDER = "PLH"

NGram = tuple[str, ...]

_WHITESPACE = re.compile(r"\s")


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


def check_order(order: int) -> int:
    if not isinstance(order, int) or isinstance(order, bool):
        raise OrderOutOfRangeError(f"order must be an integer, got {order!r}")
    if not MIN_ORDER <= order <= MAX_ORDER:
        raise OrderOutOfRangeError(
            f"order must be in [{MIN_ORDER}, {MAX_ORDER}], got {order}"
        )
    return order


def clean_value(value: str) -> str:
    """Normalize one token value: internal whitespace becomes underscore."""
    if not value:
        raise ValueError("empty token value")
    return _WHITESPACE.sub("_", value)


def delexicalize(tokens: Sequence[Token], mode: str) -> list[str]:
    """Map a token sequence to the symbol sequence for ``mode``."""
    check_mode(mode)
    if mode == "POS":
        return [clean_value(tok.pos) for tok in tokens]
    if mode == "SEMI":
        return [
            PLACEHOLDER if tok.pos in NOUN_TAGS else clean_value(tok.form)
            for tok in tokens
        ]
    return [clean_value(tok.form) for tok in tokens]


def extract_ngrams(values: Sequence[str], order: int) -> Counter[NGram]:
    """Count the sliding-window n-grams of one symbol sequence."""
    check_order(order)
    grams: Counter[NGram] = Counter()
    for i in range(len(values) - order + 1):
        grams[tuple(values[i : i + order])] += 1
    return grams


def featurize_instance(inst, mode: str, order: int) -> Counter[NGram]:
    """Delexicalize then count n-grams for one instance.

    Accepts a LabeledInstance or a bare token sequence.
    """
    tokens: Sequence[Token] = getattr(inst, "tokens", inst)
    return extract_ngrams(delexicalize(tokens, mode), order)


def merge_features(counters: Iterable[Counter[NGram]]) -> Counter[NGram]:
    merged: Counter[NGram] = Counter()
    for c in counters:
        merged.update(c)
    return merged


def ngram_key(gram: NGram) -> str:
    """Canonical string for an n-gram: parts joined by single spaces."""
    return " ".join(gram)


def parse_ngram_key(key: str) -> NGram:
    """Inverse of ngram_key for keys built from cleaned values."""
    gram = tuple(key.split(" "))
    if not all(gram):
        raise ValueError(f"bad n-gram key {key!r}")
    return gram
