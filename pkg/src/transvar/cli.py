"""Command-line surface: validate, train, classify, evaluate, pairwise,
mif, distribution, synth.

Exit codes: 0 success, 1 usage error, 2 data error. All randomness flows
through explicit --seed flags, and identical invocations over identical
inputs produce byte-identical reports.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations
from typing import Sequence

from . import corpus as corpus_mod
from .corpus import extract_instances, iter_sentences, parse_vertical
from .errors import TransvarError
from .evaluation import (
    DEFAULT_SEED,
    DIMENSIONS,
    SplitSpec,
    fine_method,
    group_instances,
    make_split,
    metrics,
    pairwise_genres,
    run_experiment,
)
from .features import (
    DEFAULT_K,
    distribution,
    example_contexts,
    membership,
    top_features,
)
from .model import classify, load_model_file, save_model, train
from .reports import (
    render_counts,
    render_distribution,
    render_membership,
    render_metrics,
    render_mif,
    render_pairwise,
    render_rows,
)
from .representation import (
    MAX_ORDER,
    MIN_ORDER,
    MODES,
    featurize_instance,
    merge_features,
    parse_ngram_key,
)
from .testkit import generate_vertical, parse_generator_spec, with_seed


class _Parser(argparse.ArgumentParser):
    """argparse's usage failures exit 2; this surface reserves 2 for
    data errors, so remap usage errors to exit 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(value: str) -> int:
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {value!r}") from None
    if n < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {n}")
    return n


def _default_jobs() -> int:
    raw = os.environ.get("TRANSVAR_JOBS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _read_corpus(path: str):
    try:
        return parse_vertical(_read_text(path))
    except TransvarError as exc:
        exc.args = (f"{path}: {exc}",)
        raise


def _load_instances(args):
    docs = _read_corpus(args.corpus)
    return docs, extract_instances(docs, args.min_len, args.max_len)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _pools(instances, dim):
    return group_instances(instances, dim)


def _stratum(dim):
    return fine_method if dim == "method-coarse" else None


def cmd_validate(args) -> int:
    docs = _read_corpus(args.corpus)
    sentences = 0
    tokens = 0
    kept = 0
    genre_docs: Counter[str] = Counter()
    method_docs: Counter[str] = Counter()
    for doc in docs:
        genre_docs[doc.genre] += 1
        method_docs[doc.method] += 1
    for _, _, sentence in iter_sentences(docs):
        sentences += 1
        tokens += len(sentence)
        if args.min_len <= len(sentence) <= args.max_len:
            kept += 1
    counts = {
        "documents": len(docs),
        "sentences": sentences,
        "tokens": tokens,
        "instances": kept,
        "excluded_sentences": sentences - kept,
    }
    for genre in sorted(genre_docs):
        counts[f"genre={genre}"] = genre_docs[genre]
    for method in sorted(method_docs):
        counts[f"method={method}"] = method_docs[method]
    _emit(render_counts(counts, args.render), args.out)
    return 0


def cmd_train(args) -> int:
    _, instances = _load_instances(args)
    pools = _pools(instances, args.dim)
    features = {
        label: [featurize_instance(i, args.mode, args.n) for i in insts]
        for label, insts in pools.items()
    }
    cm = train(features, args.mode, args.n)
    with open(args.out, "wb") as fh:
        fh.write(save_model(cm))
    return 0


def cmd_classify(args) -> int:
    cm = load_model_file(args.model)
    _, instances = _load_instances(args)
    rows = [("doc_id", "sentence_index", "predicted")]
    for inst in instances:
        features = featurize_instance(inst, cm.mode, cm.order)
        rows.append(
            (inst.doc_id, str(inst.sentence_index), classify(cm, features))
        )
    _emit(render_rows(rows, args.render), args.out)
    return 0


def cmd_evaluate(args) -> int:
    _, instances = _load_instances(args)
    pools = _pools(instances, args.dim)
    spec = SplitSpec(args.train, args.test, args.seed)
    cmx = run_experiment(
        pools,
        args.mode,
        args.n,
        spec,
        stratum_of=_stratum(args.dim),
        dim=args.dim,
    )
    _emit(render_metrics(metrics(cmx), args.render), args.out)
    return 0


def cmd_pairwise(args) -> int:
    _, instances = _load_instances(args)
    spec = SplitSpec(args.train, args.test, args.seed)
    table = pairwise_genres(
        instances, args.mode, args.n, spec, jobs=args.jobs
    )
    _emit(render_pairwise(table, args.render), args.out)
    return 0


def _mif_task(task):
    pair, features, mode, n, k = task
    cm = train(features, mode, n)
    return pair, top_features(cm, k)


def cmd_mif(args) -> int:
    _, instances = _load_instances(args)
    pools = _pools(instances, args.dim)
    labels = sorted(pools)
    feature_pools = {
        label: [featurize_instance(i, args.mode, args.n) for i in insts]
        for label, insts in pools.items()
    }
    tasks = [
        ((a, b), {a: feature_pools[a], b: feature_pools[b]}, args.mode, args.n, args.k)
        for a, b in combinations(labels, 2)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = dict(pool.map(_mif_task, tasks))
    else:
        results = dict(_mif_task(t) for t in tasks)

    lists = []
    by_focal: dict[str, list] = {label: [] for label in labels}
    for pair in sorted(results):
        first, second = results[pair]
        lists.extend([first, second])
        by_focal[first.label].append(first)
        by_focal[second.label].append(second)
    grams = {e.gram for lst in lists for e in lst.entries}
    contexts = example_contexts(grams, instances, args.mode, args.n)
    out = render_mif(lists, contexts, args.render)
    if len(labels) > 2:
        memberships = [
            membership(label, by_focal[label]) for label in labels
        ]
        out += "\n" + render_membership(memberships, args.render)
    _emit(out, args.out)
    return 0


def cmd_distribution(args) -> int:
    _, instances = _load_instances(args)
    pools = _pools(instances, args.dim)
    if args.spec:
        grams = []
        for line in _read_text(args.spec).splitlines():
            line = line.strip()
            if line and not line.startswith("##"):
                grams.append(parse_ngram_key(line))
    else:
        merged = merge_features(
            featurize_instance(i, args.mode, args.n) for i in instances
        )
        grams = list(merged)
    rows = distribution(grams, pools, args.mode, args.n)
    _emit(render_distribution(rows, sorted(pools), args.render), args.out)
    return 0


def cmd_synth(args) -> int:
    try:
        spec = parse_generator_spec(_read_text(args.spec))
    except TransvarError as exc:
        exc.args = (f"{args.spec}: {exc}",)
        raise
    if args.seed is not None:
        spec = with_seed(spec, args.seed)
    _emit(generate_vertical(spec), args.out)
    return 0


def _add_common(
    p,
    *,
    dim=None,
    split=None,
    model_flags=True,
    jobs=False,
    k=False,
    out_help="output path (default stdout)",
    out_required=False,
    renders=("tsv", "table"),
):
    p.add_argument("--corpus", required=True, help="vertical corpus file")
    if dim is not None:
        p.add_argument(
            "--dim", choices=DIMENSIONS, default=dim, help="label dimension"
        )
    if model_flags:
        p.add_argument("--mode", choices=MODES, default="POS", help="representation mode")
        p.add_argument(
            "--n",
            type=int,
            choices=range(MIN_ORDER, MAX_ORDER + 1),
            default=3,
            help="n-gram order",
        )
    if split is not None:
        p.add_argument(
            "--train", type=_positive, default=split[0], help="training instances per class"
        )
        p.add_argument(
            "--test", type=_positive, default=split[1], help="test instances per class"
        )
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help="split seed")
    if k:
        p.add_argument("--k", type=_positive, default=DEFAULT_K, help="list length")
    p.add_argument(
        "--min-len", type=_positive, default=corpus_mod.DEFAULT_MIN_LEN,
        help="shortest sentence kept",
    )
    p.add_argument(
        "--max-len", type=_positive, default=corpus_mod.DEFAULT_MAX_LEN,
        help="longest sentence kept",
    )
    if jobs:
        p.add_argument(
            "--jobs", type=_positive, default=_default_jobs(),
            help="worker processes (TRANSVAR_JOBS)",
        )
    p.add_argument("--out", required=out_required, help=out_help)
    if renders:
        p.add_argument(
            "--render", choices=renders, default="tsv", help="output format"
        )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="transvar",
        description="Genre and translation-method classification toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.ArgumentDefaultsHelpFormatter

    p = sub.add_parser("validate", formatter_class=fmt,
                       help="parse a corpus and report its composition")
    _add_common(p, model_flags=False)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("train", formatter_class=fmt,
                       help="train a model on every instance of a corpus")
    _add_common(p, dim="method-coarse", out_help="model file to write",
                out_required=True, renders=None)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("classify", formatter_class=fmt,
                       help="label corpus instances with a trained model")
    p.add_argument("--model", required=True, help="model file from train")
    _add_common(p, model_flags=False)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("evaluate", formatter_class=fmt,
                       help="split, train, and report P/R/F and accuracy")
    _add_common(p, dim="method-coarse", split=(400, 200))
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("pairwise", formatter_class=fmt,
                       help="binary genre experiments over the 21 pairs")
    _add_common(p, split=(300, 200), jobs=True,
                renders=("tsv", "table", "records"))
    p.set_defaults(func=cmd_pairwise)

    p = sub.add_parser("mif", formatter_class=fmt,
                       help="most-informative n-grams per binary task")
    _add_common(p, dim="method-coarse", jobs=True, k=True)
    p.set_defaults(func=cmd_mif)

    p = sub.add_parser("distribution", formatter_class=fmt,
                       help="per-1000 n-gram frequencies per class")
    _add_common(p, dim="genre")
    p.add_argument("--spec", help="file listing n-grams (default: full vocabulary)")
    p.set_defaults(func=cmd_distribution)

    p = sub.add_parser("synth", formatter_class=fmt,
                       help="generate a synthetic corpus from a chain spec")
    p.add_argument("--spec", required=True, help="generator spec file")
    p.add_argument("--seed", type=int, help="override the spec's seed")
    p.add_argument("--out", help="output path (default stdout)")
    p.set_defaults(func=cmd_synth)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (TransvarError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
