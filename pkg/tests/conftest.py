"""Shared fixtures: small hand-written corpora and token builders."""

from __future__ import annotations

import pytest

from transvar.corpus import Document, LabeledInstance, Token

SAMPLE_VERTICAL = """\
#doc id=d1 genre=FIC method=PT1
Die\tART\tdie
weltweiten\tADJA\tweltweit
Investitionen\tNN\tInvestition
im\tAPPRART\tin
Bereich\tNN\tBereich
der\tART\tdie
Umwelttechnologien\tNN\tUmwelttechnologie
steigen\tVVFIN\tsteigen
.\t$.\t.

Sie\tPPER\tsie
steigen\tVVFIN\tsteigen
.\t$.\t.
#doc id=d2 genre=TOU method=SMT1
## mid-corpus comment
Das\tART\tdie
Hotel\tNN\tHotel
liegt\tVVFIN\tliegen
am\tAPPRART\tan
See\tNN\tSee
.\t$.\t.
"""


def make_tokens(tags: list[str], stem: str = "w") -> tuple[Token, ...]:
    """One token per tag, with forms derived from the tag."""
    return tuple(
        Token(f"{stem}{i}_{tag}", tag, f"l{i}_{tag}")
        for i, tag in enumerate(tags)
    )


def make_instance(
    tags: list[str],
    genre: str = "FIC",
    method: str = "PT1",
    doc_id: str = "d0",
    stem: str = "w",
) -> LabeledInstance:
    return LabeledInstance(make_tokens(tags, stem), genre, method, doc_id)


def make_doc(
    doc_id: str,
    sentence_tags: list[list[str]],
    genre: str = "FIC",
    method: str = "PT1",
) -> Document:
    return Document(
        doc_id,
        genre,
        method,
        tuple(make_tokens(tags) for tags in sentence_tags),
    )


@pytest.fixture
def sample_text() -> str:
    return SAMPLE_VERTICAL


# One pass/fail line per acceptance criterion, printed after the run
# regardless of output capturing.
ACCEPTANCE_ORDER = (
    "pairwise-render-golden-parity",
    "laplace-correctness",
    "oracle-equivalence",
    "separation-sensitivity",
    "metrics-exactness",
    "mif-consistency",
    "pipeline-determinism",
    "corpus-round-trip",
)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    statuses: dict[str, str] = {}
    for key, status in (("passed", "PASS"), ("failed", "FAIL"), ("error", "FAIL")):
        for rep in terminalreporter.stats.get(key, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py" not in nodeid:
                continue
            if key == "passed" and getattr(rep, "when", "call") != "call":
                continue
            label = nodeid.split("::")[-1].removeprefix("test_").replace("_", "-")
            statuses.setdefault(label, status)
    if not statuses:
        return
    terminalreporter.section("acceptance criteria")
    ordered = [l for l in ACCEPTANCE_ORDER if l in statuses]
    ordered += sorted(set(statuses) - set(ACCEPTANCE_ORDER))
    for label in ordered:
        terminalreporter.write_line(f"[{statuses[label]}] {label}")
