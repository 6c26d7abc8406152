"""Render evaluation and feature reports as TSV or aligned tables.

Every renderer is deterministic: fixed orderings, fixed float formats, so
identical inputs give byte-identical report text.
"""

from __future__ import annotations

from typing import Iterable, Mapping, Sequence

from .evaluation import MetricsReport, PairwiseTable
from .features import MembershipReport, MIFList
from .representation import NGram, ngram_key

RENDERS = ("tsv", "table", "records")


def check_render(render: str, allowed: Sequence[str] = RENDERS) -> str:
    if render not in allowed:
        raise ValueError(f"render must be one of {allowed}, got {render!r}")
    return render


def pct(value: float) -> str:
    return f"{100.0 * value:.2f}%"


def _tabulate(rows: Sequence[Sequence[str]], render: str) -> str:
    """Join cell rows as TSV, or space-align them for reading."""
    if render == "tsv":
        return "\n".join("\t".join(row) for row in rows) + "\n"
    widths = [
        max(len(row[i]) for row in rows if len(row) > i)
        for i in range(max(len(row) for row in rows))
    ]
    out = []
    for row in rows:
        cells = [
            cell.ljust(widths[i]) if i == 0 else cell.rjust(widths[i])
            for i, cell in enumerate(row)
        ]
        out.append("  ".join(cells).rstrip())
    return "\n".join(out) + "\n"


def render_metrics(report: MetricsReport, render: str = "tsv") -> str:
    """Per-class and macro P/R/F rows plus an accuracy row."""
    check_render(render, ("tsv", "table"))
    rows: list[Sequence[str]] = [("class", "precision", "recall", "f1")]
    for c in report.classes:
        rows.append(
            (c, pct(report.precision[c]), pct(report.recall[c]), pct(report.f1[c]))
        )
    rows.append(
        (
            "macro",
            pct(report.macro_precision),
            pct(report.macro_recall),
            pct(report.macro_f1),
        )
    )
    rows.append(("accuracy", pct(report.accuracy)))
    return _tabulate(rows, render)


def render_pairwise(table: PairwiseTable, render: str = "tsv") -> str:
    """Upper-triangular accuracy matrix, or one pair per line.

    The matrix layout puts dashes on and below the diagonal and drops the
    final all-dash row.
    """
    check_render(render)
    genres = table.genres
    if render == "records":
        lines = [
            f"{a}-{b}\t{table.accuracy[(a, b)]:.4f}"
            for (a, b) in sorted(table.accuracy)
        ]
        return "\n".join(lines) + "\n"
    rows: list[Sequence[str]] = [("Classes", *genres)]
    for i, a in enumerate(genres[:-1]):
        cells = [a]
        for j, b in enumerate(genres):
            if j <= i:
                cells.append("-")
            else:
                cells.append(pct(table.accuracy[(a, b)]))
        rows.append(tuple(cells))
    return _tabulate(rows, render)


def render_mif(
    lists: Sequence[MIFList],
    contexts: Mapping[NGram, list[str]] | None = None,
    render: str = "tsv",
) -> str:
    """Ranked feature lists: rank, class, score, ngram, example context.

    With several lists, '#task' comment lines separate the sections.
    """
    check_render(render, ("tsv", "table"))
    sections = []
    seen_tasks = []
    for lst in lists:
        if lst.task not in seen_tasks:
            seen_tasks.append(lst.task)
    for task in seen_tasks:
        rows: list[Sequence[str]] = [
            ("rank", "class", "score", "ngram", "example_context")
        ]
        for lst in lists:
            if lst.task != task:
                continue
            for rank, entry in enumerate(lst.entries, start=1):
                examples = (contexts or {}).get(entry.gram, [])
                rows.append(
                    (
                        str(rank),
                        lst.label,
                        f"{entry.score:.4f}",
                        ngram_key(entry.gram),
                        " / ".join(examples),
                    )
                )
        body = _tabulate(rows, render)
        if len(seen_tasks) > 1:
            body = f"#task {task[0]}-{task[1]}\n" + body
        sections.append(body)
    return "\n".join(sections)


def render_membership(reports: Sequence[MembershipReport], render: str = "tsv") -> str:
    """Membership histograms: lists/types rows plus a total row."""
    check_render(render, ("tsv", "table"))
    sections = []
    for rep in reports:
        rows: list[Sequence[str]] = [("lists", "types")]
        for m, count in rep.histogram.items():
            rows.append((str(m), str(count)))
        rows.append(("total", str(rep.total)))
        body = _tabulate(rows, render)
        if len(reports) > 1:
            body = f"#membership {rep.focal}\n" + body
        sections.append(body)
    return "\n".join(sections)


def render_distribution(
    rows: Sequence, labels: Sequence[str], render: str = "tsv"
) -> str:
    """Per-1000 frequencies: one row per gram, one column per class."""
    check_render(render, ("tsv", "table"))
    table: list[Sequence[str]] = [("ngram", *labels)]
    for row in rows:
        table.append(
            (
                ngram_key(row.gram),
                *(f"{row.per_class[label]:.2f}" for label in labels),
            )
        )
    return _tabulate(table, render)


def render_counts(counts: Mapping[str, int], render: str = "tsv") -> str:
    """Simple key/count listing used by corpus validation."""
    check_render(render, ("tsv", "table"))
    rows = [(str(k), str(v)) for k, v in counts.items()]
    return _tabulate(rows, render)


def render_rows(rows: Sequence[Sequence[str]], render: str = "tsv") -> str:
    """Render pre-built cell rows (first row is the header)."""
    check_render(render, ("tsv", "table"))
    return _tabulate(rows, render)
