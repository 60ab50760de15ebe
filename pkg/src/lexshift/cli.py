"""Command-line entry point; one subcommand per pipeline concern.

Subcommands: build-lm, train-doc-clf, train-token-clf, transfer, eval,
kappa, ttest. Every output is written atomically (temp file + rename) and
every run is reproducible: same argv + same seed = byte-identical outputs.
The seed defaults to the PGST_SEED environment variable when set.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

from . import doc_classifier, token_classifier
from .corpus import (
    GenderLabel,
    Split,
    load_jsonl,
    load_stopwords,
    preprocess,
)
from .errors import LexshiftError
from .fileio import atomic_write
from .metrics import (
    FACETS,
    PairedSample,
    build_contingency,
    build_report,
    bleu,
    kappa,
    load_annotations,
    paired_t_test,
)
from .ngrams import add_boundaries, build_table, load_table_tsv, save_table_tsv
from .embeddings import load_vec_text
from .tagging import TagScope, load_lexicon
from .transfer import TransferConfig, transfer_corpus, write_transferred_jsonl


def _default_seed():
    env = os.environ.get("PGST_SEED")
    return int(env) if env else 0


def _load_corpus(path, stopword_path=None, split=None):
    stopwords = load_stopwords(stopword_path) if stopword_path else set()
    docs = [preprocess(doc, stopwords) for doc in load_jsonl(path)]
    if split is not None and split != "all":
        wanted = Split(split)
        docs = [d for d in docs if d.split is wanted]
    return docs


def _train_config(module, args):
    config = module.desk_config(args.seed) if args.desk_scale else module.default_config(args.seed)
    if args.epochs is not None:
        config = replace(config, epochs=args.epochs)
    return config


def _write_json(payload, path):
    with atomic_write(path) as fh:
        json.dump(payload, fh, ensure_ascii=False, sort_keys=True, indent=2)
        fh.write("\n")


def _cmd_build_lm(args):
    docs = [d for d in _load_corpus(args.corpus, args.stopwords) if d.split is Split.TRAIN]
    docs = [d for d in docs if not d.degenerate]
    wrapped = [replace(d, tokens=tuple(add_boundaries(d.tokens))) for d in docs]
    table = build_table(wrapped)
    save_table_tsv(table, args.out)
    print(f"counted {table.total_unigrams} tokens from {len(wrapped)} documents -> {args.out}")
    return 0


def _cmd_train_doc_clf(args):
    docs = _load_corpus(args.corpus, args.stopwords, split="train")
    config = _train_config(doc_classifier, args)
    model = doc_classifier.train(docs, config)
    doc_classifier.save_doc_model(model, args.out)
    print(
        f"trained doc classifier on {len(docs)} documents, "
        f"final epoch loss {model.training_losses[-1]:.4f} -> {args.out}"
    )
    return 0


def _cmd_train_token_clf(args):
    docs = _load_corpus(args.corpus, args.stopwords, split="train")
    tagger = load_lexicon(args.lexicon)
    scope = TagScope.parse(args.tags)
    training_set = token_classifier.build_training_set(docs, tagger, scope)
    config = _train_config(token_classifier, args)
    model = token_classifier.train_token_model(training_set, config)
    token_classifier.save_token_model(model, args.out)
    print(
        f"trained token classifier on {len(training_set)} tokens, "
        f"final epoch loss {model.training_losses[-1]:.4f} -> {args.out}"
    )
    return 0


def _cmd_transfer(args):
    docs = _load_corpus(args.input, args.stopwords, split=args.split)
    store = load_vec_text(args.embedding)
    table = load_table_tsv(args.lm)
    token_model = token_classifier.load_token_model(args.tokclf)
    tagger = load_lexicon(args.lexicon)
    config = TransferConfig(
        tag_scope=TagScope.parse(args.tags),
        top_n=args.topn,
        beam_width=args.beam_width,
        similarity_clamp=args.clamp,
    )
    target = args.target if args.target == "opposite" else GenderLabel(args.target)
    results = transfer_corpus(
        docs, store, token_model, table, tagger, target, config, jobs=args.jobs
    )
    write_transferred_jsonl(results, args.out)
    changed = sum(1 for _, trace in results if trace)
    print(f"transferred {len(results)} documents ({changed} changed) -> {args.out}")
    return 0


def _aligned_pairs(source_docs, transferred_docs):
    if [d.id for d in source_docs] != [d.id for d in transferred_docs]:
        raise LexshiftError("source and transferred files are not id-aligned")
    return list(zip(source_docs, transferred_docs))


def _cmd_eval(args):
    source = _load_corpus(args.source, args.stopwords)
    transferred = load_jsonl(args.transferred)
    pairs = _aligned_pairs(source, transferred)
    model = doc_classifier.load_doc_model(args.docclf)
    sets = build_contingency(model, source, transferred)
    scores = [
        bleu(s.tokens, t.tokens) for s, t in pairs if s.tokens and t.tokens
    ]
    bleu_mean = sum(scores) / len(scores) if scores else None
    perplexity_mean = None
    if args.lm:
        table = load_table_tsv(args.lm)
        ppls = [
            table.perplexity(replace(t, tokens=tuple(add_boundaries(t.tokens))))
            for t in transferred
            if t.tokens
        ]
        perplexity_mean = sum(ppls) / len(ppls) if ppls else None
    report = build_report(sets, bleu_mean=bleu_mean, perplexity_mean=perplexity_mean, seed=args.seed)
    _write_json(report, args.out)
    print(
        f"n={report['n']} f={report['f']} h={report['h']} "
        f"trade_off={report['trade_off']:.2f} -> {args.out}"
    )
    return 0


def _cmd_ttest(args):
    source = _load_corpus(args.source, args.stopwords)
    transferred = load_jsonl(args.transferred)
    pairs = _aligned_pairs(source, transferred)
    model = doc_classifier.load_doc_model(args.docclf)

    def true_label_probability(doc):
        prob_female = model.predict_proba(doc.tokens)
        return prob_female if doc.label is GenderLabel.FEMALE else 1.0 - prob_female

    samples = [
        PairedSample(before=true_label_probability(s), after=true_label_probability(t))
        for s, t in pairs
    ]
    result = paired_t_test(samples, mu0=args.mu0)
    payload = {
        "t": result.t,
        "p_two_sided": result.p_two_sided,
        "df": result.df,
        "mu0": args.mu0,
        "n": len(samples),
        "seed": args.seed,
    }
    _write_json(payload, args.out)
    print(f"t={result.t:.4f} p={result.p_two_sided:.6g} df={result.df} -> {args.out}")
    return 0


def _cmd_kappa(args):
    records = load_annotations(args.annotations)
    facets = [args.facet] if args.facet else list(FACETS)
    payload = {facet: kappa(records, facet) for facet in facets}
    payload["n_documents"] = len({r.doc_id for r in records})
    _write_json(payload, args.out)
    for facet in facets:
        print(f"{facet}: K={payload[facet]:.4f}")
    return 0


def _add_seed(parser):
    parser.add_argument("--seed", type=int, default=_default_seed())


def build_parser():
    parser = argparse.ArgumentParser(prog="lexshift")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-lm", help="count 1..4-grams over the train split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stopwords")
    p.set_defaults(func=_cmd_build_lm)

    for name, helptext, func in (
        ("train-doc-clf", "train the document gender classifier", _cmd_train_doc_clf),
        ("train-token-clf", "train the character token classifier", _cmd_train_token_clf),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--corpus", required=True)
        p.add_argument("--out", required=True)
        p.add_argument("--stopwords")
        p.add_argument("--desk-scale", action="store_true")
        p.add_argument("--epochs", type=int)
        _add_seed(p)
        if name == "train-token-clf":
            p.add_argument("--lexicon", required=True)
            p.add_argument("--tags", default="adj,adv,verb,noun")
        p.set_defaults(func=func)

    p = sub.add_parser("transfer", help="rewrite documents into the target gender style")
    p.add_argument("--input", required=True)
    p.add_argument("--embedding", required=True)
    p.add_argument("--lm", required=True)
    p.add_argument("--tokclf", required=True)
    p.add_argument("--lexicon", required=True)
    p.add_argument("--tags", default="adj,adv,verb,noun")
    p.add_argument("--topn", type=int, default=10)
    p.add_argument("--beam-width", type=int, default=5)
    p.add_argument("--clamp", type=float, default=0.01)
    p.add_argument("--target", required=True, choices=["male", "female", "opposite"])
    p.add_argument("--split", default="all", choices=["train", "dev", "test", "all"])
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--stopwords")
    p.add_argument("--out", required=True)
    _add_seed(p)
    p.set_defaults(func=_cmd_transfer)

    p = sub.add_parser("eval", help="score a transfer run against the source set")
    p.add_argument("--source", required=True)
    p.add_argument("--transferred", required=True)
    p.add_argument("--docclf", required=True)
    p.add_argument("--lm", help="optional n-gram table for the perplexity mean")
    p.add_argument("--stopwords")
    p.add_argument("--out", required=True)
    _add_seed(p)
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("ttest", help="paired t-test on true-label probabilities")
    p.add_argument("--source", required=True)
    p.add_argument("--transferred", required=True)
    p.add_argument("--docclf", required=True)
    p.add_argument("--mu0", type=float, default=0.0)
    p.add_argument("--stopwords")
    p.add_argument("--out", required=True)
    _add_seed(p)
    p.set_defaults(func=_cmd_ttest)

    p = sub.add_parser("kappa", help="three-annotator agreement per facet")
    p.add_argument("--annotations", required=True)
    p.add_argument("--facet", choices=list(FACETS))
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_kappa)

    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (LexshiftError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    raise SystemExit(main())
