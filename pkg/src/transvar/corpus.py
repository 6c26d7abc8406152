"""Vertical corpus format: parsing, serialization, instance extraction.

A corpus is a sequence of labeled documents in a one-token-per-line format:

    #doc id=<id> genre=<genre> method=<method>
    <form>\t<pos>\t<lemma>
    ...
                                    <- blank line: sentence boundary
    ## free-text comment, ignored

The ``#doc`` header carries exactly the three keys, in any order. Token
lines have exactly two tabs; an empty lemma field is read as ``<unknown>``.
Consecutive blank lines collapse into one boundary, and a new header closes
the current sentence and document.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (
    MalformedLineError,
    MissingHeaderError,
    UnknownLabelError,
)

logger = logging.getLogger(__name__)

GENRES = ("ESS", "FIC", "INS", "POP", "SHA", "SPE", "TOU")
METHODS = ("PT1", "PT2", "RBMT", "SMT1", "SMT2")
COARSE_METHODS = ("HUMAN", "MACHINE")

_COARSE_OF = {
    "PT1": "HUMAN",
    "PT2": "HUMAN",
    "RBMT": "MACHINE",
    "SMT1": "MACHINE",
    "SMT2": "MACHINE",
}

UNKNOWN_LEMMA = "<unknown>"

DEFAULT_MIN_LEN = 12
DEFAULT_MAX_LEN = 24


@dataclass(frozen=True)
class Token:
    form: str
    pos: str
    lemma: str = UNKNOWN_LEMMA


Sentence = tuple[Token, ...]


@dataclass(frozen=True)
class Document:
    id: str
    genre: str
    method: str
    sentences: tuple[Sentence, ...] = field(default_factory=tuple)


@dataclass(frozen=True)
class LabeledInstance:
    """One classification unit: a single sentence plus its document labels.

    sentence_index is the sentence's 0-based position within its document.
    """

    tokens: Sentence
    genre: str
    method: str
    doc_id: str
    sentence_index: int = 0


def coarsen_method(method: str) -> str:
    """Map a fine method label to HUMAN or MACHINE."""
    try:
        return _COARSE_OF[method]
    except KeyError:
        raise UnknownLabelError(f"unknown method label: {method!r}") from None


def check_genre(genre: str) -> str:
    if genre not in GENRES:
        raise UnknownLabelError(f"unknown genre label: {genre!r}")
    return genre


def check_method(method: str) -> str:
    if method not in METHODS:
        raise UnknownLabelError(f"unknown method label: {method!r}")
    return method


def _parse_header(line: str, lineno: int) -> tuple[str, str, str]:
    fields = line.split()[1:]
    seen: dict[str, str] = {}
    for item in fields:
        key, sep, value = item.partition("=")
        if not sep or key in seen:
            raise MalformedLineError(lineno, f"bad header field {item!r}")
        seen[key] = value
    if set(seen) != {"id", "genre", "method"}:
        raise MalformedLineError(
            lineno, "header needs exactly the keys id, genre, method"
        )
    if not seen["id"]:
        raise MalformedLineError(lineno, "empty document id")
    try:
        check_genre(seen["genre"])
        check_method(seen["method"])
    except UnknownLabelError as exc:
        raise UnknownLabelError(f"line {lineno}: {exc}") from None
    return seen["id"], seen["genre"], seen["method"]


def _parse_token(line: str, lineno: int) -> Token:
    parts = line.split("\t")
    if len(parts) != 3:
        raise MalformedLineError(
            lineno, f"expected form<TAB>pos<TAB>lemma, got {len(parts)} field(s)"
        )
    form, pos, lemma = parts
    if not form:
        raise MalformedLineError(lineno, "empty form field")
    if not pos:
        raise MalformedLineError(lineno, "empty pos field")
    return Token(form, pos, lemma if lemma else UNKNOWN_LEMMA)


def parse_vertical(source: str | Iterable[str]) -> list[Document]:
    """Parse vertical-format text into documents.

    ``source`` is either one string or an iterable of lines. Parsed
    documents come back in input order. Duplicate document ids, token
    material before the first header, and any line that fits neither the
    header, token, comment, nor blank pattern are errors.
    """
    if isinstance(source, str):
        lines: Iterable[str] = source.splitlines()
    else:
        lines = source

    docs: list[Document] = []
    ids: set[str] = set()
    header: tuple[str, str, str] | None = None
    sentences: list[Sentence] = []
    current: list[Token] = []

    def close_sentence() -> None:
        if current:
            sentences.append(tuple(current))
            current.clear()

    def close_document() -> None:
        nonlocal header
        if header is None:
            return
        close_sentence()
        doc_id, genre, method = header
        if not sentences:
            logger.warning("document %s has no sentences", doc_id)
        docs.append(Document(doc_id, genre, method, tuple(sentences)))
        sentences.clear()
        header = None

    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip():
            if header is None:
                continue
            close_sentence()
        elif line.startswith("#doc ") or line == "#doc":
            close_document()
            header = _parse_header(line, lineno)
            if header[0] in ids:
                raise MalformedLineError(
                    lineno, f"duplicate document id {header[0]!r}"
                )
            ids.add(header[0])
        elif line.startswith("##"):
            continue
        elif line.startswith("#"):
            raise MalformedLineError(lineno, f"unrecognized directive {line!r}")
        else:
            if header is None:
                raise MissingHeaderError(
                    f"line {lineno}: token before any #doc header"
                )
            current.append(_parse_token(line, lineno))

    close_document()
    return docs


def _check_field(value: str, what: str) -> str:
    if "\t" in value or "\n" in value or "\r" in value:
        raise ValueError(f"{what} {value!r} contains tab or newline")
    return value


def write_vertical(
    docs: Sequence[Document], comments: Sequence[str] = ()
) -> str:
    """Serialize documents back to vertical format.

    ``comments`` become ``##`` lines before the first document. Serializing
    then reparsing yields equal documents; tokens whose fields cannot
    survive that round trip (embedded tab or newline, a form starting with
    ``#``) are rejected.
    """
    out: list[str] = []
    for comment in comments:
        out.append(f"## {_check_field(comment, 'comment')}")
    for doc in docs:
        check_genre(doc.genre)
        check_method(doc.method)
        _check_field(doc.id, "document id")
        if " " in doc.id:
            raise ValueError(f"document id {doc.id!r} contains a space")
        out.append(f"#doc id={doc.id} genre={doc.genre} method={doc.method}")
        for i, sentence in enumerate(doc.sentences):
            if i:
                out.append("")
            for tok in sentence:
                if tok.form.startswith("#"):
                    raise ValueError(
                        f"form {tok.form!r} starts with '#', not representable"
                    )
                _check_field(tok.form, "form")
                _check_field(tok.pos, "pos")
                _check_field(tok.lemma, "lemma")
                if not tok.form or not tok.pos:
                    raise ValueError("empty form or pos field")
                out.append(f"{tok.form}\t{tok.pos}\t{tok.lemma}")
    out.append("")
    return "\n".join(out)


def iter_sentences(
    docs: Iterable[Document],
) -> Iterator[tuple[Document, int, Sentence]]:
    for doc in docs:
        for i, sentence in enumerate(doc.sentences):
            yield doc, i, sentence


def extract_instances(
    docs: Iterable[Document],
    min_len: int = DEFAULT_MIN_LEN,
    max_len: int = DEFAULT_MAX_LEN,
) -> list[LabeledInstance]:
    """Collect sentences inside the length window as labeled instances.

    Sentence length is its token count; the window is inclusive on both
    ends. The number of excluded sentences is logged, since corpus-size
    drift between runs usually traces back to this filter.
    """
    if min_len < 1:
        raise ValueError(f"min_len must be >= 1, got {min_len}")
    if max_len < min_len:
        raise ValueError(f"max_len {max_len} < min_len {min_len}")
    instances: list[LabeledInstance] = []
    excluded = 0
    for doc, i, sentence in iter_sentences(docs):
        if min_len <= len(sentence) <= max_len:
            instances.append(
                LabeledInstance(sentence, doc.genre, doc.method, doc.id, i)
            )
        else:
            excluded += 1
    logger.info("excluded_sentences=%d", excluded)
    return instances
