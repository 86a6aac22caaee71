"""Command-line interface.

One executable with a subcommand per pipeline stage. Global flags:
``--seed`` (root seed for any randomized stage), ``--config FILE``
(key=value lines applied as defaults for the subcommand's options), and
``--manifest OUT`` (write a run manifest with input hashes and stage
stats). Exit status is 0 on success, non-zero with a single-line
diagnostic on failure.
"""

from __future__ import annotations

import argparse
import shlex
import sys
from dataclasses import asdict
from pathlib import Path

from . import __version__, classifier, corpus, harness, subword, synthdata, tagging, textmetrics, toymt


# ---------------------------------------------------------------------------
# Helpers
# ---------------------------------------------------------------------------


def _read_lines(path: str) -> list[str]:
    return corpus.read_mono(path).items


def _write_lines(lines, path: str | None) -> None:
    if path is None:
        for line in lines:
            print(line)
    else:
        corpus.write_mono(corpus.Corpus.mono(lines), path)


def _emit_stats(stats: corpus.FilterStats, path: str | None) -> None:
    report = stats.format_report()
    if path:
        Path(path).write_text(report + "\n", encoding="utf-8")
    else:
        print(report)


def _load_lexicon(path: str) -> dict[str, str]:
    lexicon = {}
    for lineno, line in enumerate(_read_lines(path), start=1):
        if not line.strip():
            continue
        cols = line.split("\t")
        if len(cols) != 2:
            raise ValueError(f"{path}:{lineno}: lexicon lines are 'token<TAB>token'")
        lexicon[cols[0]] = cols[1]
    return lexicon


def _make_translator(args, prefix: str, direction: str, seed: int):
    cmd = getattr(args, f"{prefix}_cmd", None)
    lex = getattr(args, f"{prefix}_lexicon", None)
    if (cmd is None) == (lex is None):
        raise ValueError(f"exactly one of --{prefix}-cmd or --{prefix}-lexicon is required")
    if cmd is not None:
        return synthdata.SubprocessTranslator(shlex.split(cmd), direction=direction)
    return synthdata.ToyTranslator(
        lexicon=_load_lexicon(lex),
        direction=direction,
        reorder=args.toy_reorder,
        dropout=args.toy_dropout,
        seed=seed,
    )


def _function_words(args) -> textmetrics.FunctionWordList:
    if getattr(args, "fw", None):
        return textmetrics.load_function_words(args.fw)
    return textmetrics.english_function_words()


def _parse_policy(descriptor: str, args) -> tagging.TagPolicy:
    """Policy descriptors: none | all | length-ratio:RHO |
    lexical-density[:CUTOFF] | classifier:CKPT[:THRESHOLD]."""
    head, _, rest = descriptor.partition(":")
    if head in ("none", "untagged"):
        return tagging.UntaggedPolicy()
    if head in ("all", "all-tagged"):
        return tagging.AllTaggedPolicy()
    if head == "length-ratio":
        if not rest:
            raise ValueError("length-ratio policy needs a threshold: length-ratio:RHO")
        return tagging.LengthRatioPolicy(rho=float(rest))
    if head == "lexical-density":
        cutoff = float(rest) if rest else 0.5
        return tagging.LexicalDensityPolicy(fw=_function_words(args), cutoff=cutoff)
    if head == "classifier":
        if not rest:
            raise ValueError("classifier policy needs a checkpoint: classifier:CKPT[:THRESHOLD]")
        ckpt_path, _, thr = rest.partition(":")
        if not getattr(args, "bpe", None):
            raise ValueError("classifier policy requires --bpe")
        model = classifier.load_classifier(ckpt_path, subword.BpeModel.load(args.bpe))
        return tagging.ClassifierPolicy(model, threshold=float(thr) if thr else 0.5)
    raise ValueError(f"unknown policy descriptor {descriptor!r}")


def _toy_config(args) -> toymt.ToyMtConfig:
    return toymt.ToyMtConfig(
        embed_dim=args.embed_dim,
        hidden_dim=args.hidden_dim,
        max_decode_len=args.max_decode_len,
        learning_rate=args.learning_rate,
        initial_accumulator=args.initial_accumulator,
        clip_norm=args.clip_norm,
        ema_decay=args.ema_decay,
        batch_size=args.batch_size,
        epochs=args.epochs,
        eval_every=args.eval_every,
        seed=args.seed,
    )


def _add_toy_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--embed-dim", type=int, default=32)
    p.add_argument("--hidden-dim", type=int, default=64)
    p.add_argument("--max-decode-len", type=int, default=24)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--initial-accumulator", type=float, default=0.1)
    p.add_argument("--clip-norm", type=float, default=1.0)
    p.add_argument("--ema-decay", type=float, default=0.995)
    p.add_argument("--batch-size", type=int, default=16)
    p.add_argument("--epochs", type=int, default=6)
    p.add_argument("--eval-every", type=int, default=500)


# ---------------------------------------------------------------------------
# Subcommand handlers; each returns a stats dict for the manifest.
# ---------------------------------------------------------------------------


def cmd_filter(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    if args.kind == "mono":
        data = corpus.read_mono(args.input)
        filtered, stats = corpus.filter_mono(data, args.max_tokens, args.max_chars)
        corpus.write_mono(filtered, args.output)
    elif args.kind == "bitext":
        if not args.bpe:
            raise ValueError("filter --kind bitext requires --bpe")
        if manifest:
            manifest.add_input(args.bpe)
        model = subword.BpeModel.load(args.bpe)
        data = corpus.read_parallel_tsv(args.input)
        filtered, stats = corpus.filter_bitext(data, model.segment, args.max_subwords, args.max_ratio)
        corpus.write_parallel_tsv(filtered, args.output)
    elif args.kind == "backtranslated":
        data = corpus.read_parallel_tsv(args.input)
        filtered, stats = corpus.filter_backtranslated(data, args.max_src_tokens, args.max_src_chars)
        corpus.write_parallel_tsv(filtered, args.output)
    else:  # language
        if not args.src_sample or not args.trg_sample:
            raise ValueError("filter --kind language requires --src-sample and --trg-sample")
        src_pred = corpus.CharFrequencyLanguageId.fit(
            _read_lines(args.src_sample), min_coverage=args.min_coverage
        )
        trg_pred = corpus.CharFrequencyLanguageId.fit(
            _read_lines(args.trg_sample), min_coverage=args.min_coverage
        )
        data = corpus.read_parallel_tsv(args.input)
        filtered, stats = corpus.filter_language(data, src_pred, trg_pred)
        corpus.write_parallel_tsv(filtered, args.output)
    _emit_stats(stats, args.stats)
    return {"input": stats.input_count, "kept": stats.kept_count, "dropped": stats.dropped_by_rule}


def cmd_dedup(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    if args.kind == "mono":
        data = corpus.read_mono(args.input)
        deduped, stats = corpus.dedup(data)
        corpus.write_mono(deduped, args.output)
    else:
        data = corpus.read_parallel_tsv(args.input)
        deduped, stats = corpus.dedup(data)
        corpus.write_parallel_tsv(deduped, args.output)
    _emit_stats(stats, args.stats)
    return {"input": stats.input_count, "kept": stats.kept_count}


def cmd_learn_bpe(args, manifest) -> dict:
    lines = []
    for path in args.input:
        if manifest:
            manifest.add_input(path)
        lines.extend(_read_lines(path))
    for path in args.tsv_input:
        if manifest:
            manifest.add_input(path)
        for pair in corpus.read_parallel_tsv(path).items:
            lines.append(pair.source)
            lines.append(pair.target)
    model = subword.learn_bpe(lines, args.vocab_size, reserved=args.reserved)
    model.save(args.output)
    return {"merges": len(model.merges), "vocab": len(model.vocab)}


def cmd_apply_bpe(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    lines = _read_lines(args.input)
    if args.reverse:
        out = [subword.remove_bpe(line) for line in lines]
    else:
        if manifest:
            manifest.add_input(args.model)
        model = subword.BpeModel.load(args.model)
        out = [subword.apply_bpe(model, line) for line in lines]
    _write_lines(out, args.output)
    return {"lines": len(out)}


def cmd_build_ft(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.src_mono)
        manifest.add_input(args.trg_mono)
    translator = _make_translator(args, "mt", "s2t", args.seed)
    dataset = synthdata.build_ft_dataset(
        corpus.read_mono(args.src_mono), corpus.read_mono(args.trg_mono), translator
    )
    synthdata.write_labeled(dataset, args.output)
    return {"sentences": len(dataset)}


def cmd_build_rtt(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.trg_mono)
    t2s = _make_translator(args, "t2s", "t2s", args.seed)
    s2t = _make_translator(args, "s2t", "s2t", args.seed)
    dataset = synthdata.build_rtt_dataset(corpus.read_mono(args.trg_mono), t2s, s2t)
    synthdata.write_labeled(dataset, args.output)
    return {"sentences": len(dataset)}


def cmd_train_classifier(args, manifest) -> dict:
    for path in (args.train, args.dev, args.bpe):
        if manifest:
            manifest.add_input(path)
    bpe = subword.BpeModel.load(args.bpe)
    config = classifier.ClassifierConfig(
        embed_dim=args.embed_dim,
        conv_widths=tuple(int(w) for w in args.widths.split(",")),
        filters=args.filters,
        dropout=args.dropout,
        learning_rate=args.learning_rate,
        batch_size=args.batch_size,
        epochs=args.epochs,
        eval_every=args.eval_every,
        seed=args.seed,
    )
    model, log = classifier.train_classifier(
        synthdata.read_labeled(args.train), synthdata.read_labeled(args.dev), bpe, config
    )
    classifier.save_classifier(model, args.output)
    print(f"best dev F1 {log.best_f1:.4f} at step {log.best_step}")
    return {"best_f1": log.best_f1, "best_step": log.best_step, "steps": len(log.losses)}


def cmd_classify(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.model)
        manifest.add_input(args.bpe)
        manifest.add_input(args.input)
    model = classifier.load_classifier(args.model, subword.BpeModel.load(args.bpe))
    out = []
    for line in _read_lines(args.input):
        p = classifier.predict(model, line)
        label = classifier.Label.ORIGINAL if p > args.threshold else classifier.Label.TRANSLATED
        out.append(f"{p:.6f}\t{label.value}")
    _write_lines(out, args.output)
    return {"lines": len(out)}


def cmd_eval_classifier(args, manifest) -> dict:
    for path in (args.model, args.bpe, args.test):
        if manifest:
            manifest.add_input(path)
    model = classifier.load_classifier(args.model, subword.BpeModel.load(args.bpe))
    stats = classifier.evaluate(model, synthdata.read_labeled(args.test), args.threshold)
    print(f"precision\t{stats.precision:.4f}")
    print(f"recall\t{stats.recall:.4f}")
    print(f"f1\t{stats.f1:.4f}")
    print(f"confusion\ttp={stats.tp} fp={stats.fp} fn={stats.fn} tn={stats.tn}")
    return {"f1": stats.f1, "precision": stats.precision, "recall": stats.recall}


def cmd_length_threshold(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.src_mono)
        manifest.add_input(args.trg_mono)
    rho = tagging.compute_length_threshold(
        corpus.read_mono(args.src_mono), corpus.read_mono(args.trg_mono)
    )
    print(f"{rho:.6f}")
    return {"rho": rho}


def cmd_tag(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    policy = _parse_policy(args.policy, args)
    data = tagging.read_tagged(args.input)
    tagged, stats = tagging.apply_policy(data, policy)
    tagging.write_tagged(tagged, args.output, inline=args.inline)
    print(stats.format())
    return {"total": stats.total, "tagged": stats.tagged}


def cmd_upsample(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    data = tagging.read_tagged(args.input)
    balanced = tagging.upsample_balance(data)
    tagging.write_tagged(balanced, args.output, inline=args.inline)
    return {"input": len(data.items), "output": len(balanced.items)}


def cmd_merge_bt(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.bitext)
        manifest.add_input(args.bt)
    policy = _parse_policy(args.bt_policy, args)
    merged, stats = tagging.merge_bt(tagging.read_tagged(args.bitext), tagging.read_tagged(args.bt), policy)
    tagging.write_tagged(merged, args.output, inline=args.inline)
    for name, s in stats.items():
        print(f"{name}\t{s.format()}")
    return {name: {"total": s.total, "tagged": s.tagged} for name, s in stats.items()}


def cmd_metrics(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.input)
    lines = _read_lines(args.input)
    sources = _read_lines(args.sources) if args.sources else None
    report = textmetrics.compute_report(lines, _function_words(args), sources=sources)
    if args.json:
        import json

        print(json.dumps(report.as_dict(), sort_keys=True, indent=2))
    else:
        print(report.as_text())
    return report.as_dict()


def cmd_bleu(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.hypotheses)
        manifest.add_input(args.references)
    details = textmetrics.bleu_details(_read_lines(args.hypotheses), _read_lines(args.references))
    print(details.format())
    print(textmetrics.BleuConfig().signature(args.lang_pair, args.test_set))
    return {"bleu": details.score}


def cmd_gen_quadrants(args, manifest) -> dict:
    spec = toymt.QuadrantSpec(
        vocab_size=args.vocab_size,
        p_syn=args.p_syn,
        reorder=args.reorder,
        min_len=args.min_len,
        max_len=args.max_len,
        src_orig_count=args.src_orig,
        trg_orig_count=args.trg_orig,
        zero_shot_count=args.zero_shot,
        seed=args.seed,
    )
    data = toymt.generate_quadrant_data(spec)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus.write_parallel_tsv(data.src_original, outdir / "src_orig.tsv")
    corpus.write_parallel_tsv(data.trg_original, outdir / "trg_orig.tsv")
    tagging.write_tagged(harness.quadrant_training_corpus(data), outdir / "train.tsv")
    _write_lines(data.zero_shot.sources, str(outdir / "zero_shot.src"))
    _write_lines(data.zero_shot.literal_refs, str(outdir / "zero_shot.lit"))
    _write_lines(data.zero_shot.natural_refs, str(outdir / "zero_shot.nat"))
    spec_lines = [f"{key} = {value}" for key, value in sorted(asdict(spec).items())]
    (outdir / "spec.cfg").write_text("\n".join(spec_lines) + "\n", encoding="utf-8")
    return asdict(spec)


def cmd_toy_train(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.train)
        manifest.add_input(args.dev)
    model, log = toymt.train_toymt(
        tagging.read_tagged(args.train), tagging.read_tagged(args.dev), _toy_config(args)
    )
    toymt.save_toymt(model, args.output)
    print(f"best dev BLEU {log.best_score:.2f} at step {log.best_step}")
    return {"best_score": log.best_score, "best_step": log.best_step, "steps": len(log.losses)}


def cmd_toy_decode(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.model)
        manifest.add_input(args.input)
    model = toymt.load_toymt(args.model)
    out = [
        toymt.decode(model, line, natural=args.natural, beam=args.beam)
        for line in _read_lines(args.input)
    ]
    _write_lines(out, args.output)
    return {"lines": len(out)}


def cmd_grid_eval(args, manifest) -> dict:
    if manifest:
        manifest.add_input(args.model)
        manifest.add_input(args.test)
    model = toymt.load_toymt(args.model)
    alt = _read_lines(args.alt_refs) if args.alt_refs else None
    report = harness.run_grid_eval(
        model,
        corpus.read_parallel_tsv(args.test),
        fw=_function_words(args),
        alt_references=alt,
        beam=args.beam,
    )
    print(report.render_text())
    if args.json:
        Path(args.json).write_text(report.to_json() + "\n", encoding="utf-8")
    return {"combined_matched": report.combined_matched}


def cmd_compare_policies(args, manifest) -> dict:
    if manifest:
        for path in (args.train, args.dev, args.test):
            manifest.add_input(path)
    policies = [_parse_policy(d, args) for d in args.policy]
    spec = harness.PolicyEvalSpec(
        dev=tagging.read_tagged(args.dev),
        test=corpus.read_parallel_tsv(args.test),
        config=_toy_config(args),
        fw=_function_words(args),
        alt_references=_read_lines(args.alt_refs) if args.alt_refs else None,
    )
    comparison = harness.compare_policies(tagging.read_tagged(args.train), policies, spec)
    print(comparison.render_text())
    if args.json:
        Path(args.json).write_text(
            __import__("json").dumps(comparison.as_dict(), sort_keys=True, indent=2) + "\n",
            encoding="utf-8",
        )
    return {"policies": [row.policy_name for row in comparison.rows]}


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="transtag",
        description="Detect, measure, and control translationese in MT data.",
    )
    parser.add_argument("--version", action="version", version=f"transtag {__version__}")
    parser.add_argument("--seed", type=int, default=0, help="root seed for randomized stages")
    parser.add_argument("--config", help="key=value file applied as subcommand defaults")
    parser.add_argument("--manifest", help="write a run manifest to this path")
    subparsers = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    def sub(name: str, func, help_text: str) -> argparse.ArgumentParser:
        p = subparsers.add_parser(name, help=help_text)
        p.set_defaults(func=func)
        registry[name] = p
        return p

    p = sub("filter", cmd_filter, "apply one corpus-cleaning filter")
    p.add_argument("--kind", required=True, choices=["bitext", "mono", "backtranslated", "language"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--stats", help="write the rule/count report here instead of stdout")
    p.add_argument("--bpe", help="subword model (bitext kind)")
    p.add_argument("--max-subwords", type=int, default=250)
    p.add_argument("--max-ratio", type=float, default=2.0)
    p.add_argument("--max-tokens", type=int, default=70)
    p.add_argument("--max-chars", type=int, default=500)
    p.add_argument("--max-src-tokens", type=int, default=75)
    p.add_argument("--max-src-chars", type=int, default=550)
    p.add_argument("--src-sample", help="sample text of the source language (language kind)")
    p.add_argument("--trg-sample", help="sample text of the target language (language kind)")
    p.add_argument("--min-coverage", type=float, default=0.8)

    p = sub("dedup", cmd_dedup, "remove exact duplicates")
    p.add_argument("--kind", required=True, choices=["mono", "parallel"])
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--stats")

    p = sub("learn-bpe", cmd_learn_bpe, "learn a subword model")
    p.add_argument("--input", action="append", default=[], help="monolingual text file (repeatable)")
    p.add_argument("--tsv-input", action="append", default=[], help="parallel TSV, both sides used")
    p.add_argument("--vocab-size", type=int, default=32000)
    p.add_argument("--reserved", action="append", default=[tagging.TAG_TOKEN])
    p.add_argument("--output", required=True)

    p = sub("apply-bpe", cmd_apply_bpe, "segment text (or reverse segmentation)")
    p.add_argument("--model", help="subword model (not needed with --reverse)")
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--reverse", action="store_true", help="undo segmentation instead")

    p = sub("build-ft", cmd_build_ft, "build a forward-translation classifier dataset")
    p.add_argument("--src-mono", required=True)
    p.add_argument("--trg-mono", required=True)
    p.add_argument("--mt-cmd", help="external source-to-target translator command")
    p.add_argument("--mt-lexicon", help="toy translator lexicon TSV")
    p.add_argument("--toy-reorder", default="none", choices=["none", "reverse", "swap"])
    p.add_argument("--toy-dropout", type=float, default=0.0)
    p.add_argument("--output", required=True)

    p = sub("build-rtt", cmd_build_rtt, "build a round-trip-translation classifier dataset")
    p.add_argument("--trg-mono", required=True)
    p.add_argument("--t2s-cmd")
    p.add_argument("--t2s-lexicon")
    p.add_argument("--s2t-cmd")
    p.add_argument("--s2t-lexicon")
    p.add_argument("--toy-reorder", default="none", choices=["none", "reverse", "swap"])
    p.add_argument("--toy-dropout", type=float, default=0.0)
    p.add_argument("--output", required=True)

    p = sub("train-classifier", cmd_train_classifier, "train the original-vs-translated classifier")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--bpe", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--embed-dim", type=int, default=64)
    p.add_argument("--widths", default="3,4,5")
    p.add_argument("--filters", type=int, default=64)
    p.add_argument("--dropout", type=float, default=0.0)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--eval-every", type=int, default=200)

    p = sub("classify", cmd_classify, "score lines with a trained classifier")
    p.add_argument("--model", required=True)
    p.add_argument("--bpe", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub("eval-classifier", cmd_eval_classifier, "evaluate a classifier on a labeled set")
    p.add_argument("--model", required=True)
    p.add_argument("--bpe", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--threshold", type=float, default=0.5)

    p = sub("length-threshold", cmd_length_threshold, "mean-length ratio of two monolingual corpora")
    p.add_argument("--src-mono", required=True)
    p.add_argument("--trg-mono", required=True)

    p = sub("tag", cmd_tag, "tag a parallel corpus by policy")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--policy", required=True)
    p.add_argument("--bpe", help="needed for classifier policies")
    p.add_argument("--fw", help="function word list (lexical-density policy)")
    p.add_argument("--inline", action="store_true", help="write the NMT-ready inline form")

    p = sub("upsample", cmd_upsample, "balance tagged/untagged subset sizes")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--inline", action="store_true")

    p = sub("merge-bt", cmd_merge_bt, "tag back-translated data and append it to bitext")
    p.add_argument("--bitext", required=True)
    p.add_argument("--bt", required=True)
    p.add_argument("--bt-policy", required=True)
    p.add_argument("--bpe")
    p.add_argument("--fw")
    p.add_argument("--output", required=True)
    p.add_argument("--inline", action="store_true")

    p = sub("metrics", cmd_metrics, "translationese metrics over output lines")
    p.add_argument("--input", required=True)
    p.add_argument("--sources", help="aligned source lines, enables length variety")
    p.add_argument("--fw")
    p.add_argument("--json", action="store_true")

    p = sub("bleu", cmd_bleu, "corpus BLEU with the fixed scoring signature")
    p.add_argument("--hypotheses", required=True)
    p.add_argument("--references", required=True)
    p.add_argument("--lang-pair")
    p.add_argument("--test-set")

    p = sub("gen-quadrants", cmd_gen_quadrants, "generate the synthetic quadrant corpora")
    p.add_argument("--outdir", required=True)
    p.add_argument("--vocab-size", type=int, default=50)
    p.add_argument("--p-syn", type=float, default=0.5)
    p.add_argument("--reorder", default="reverse", choices=["reverse", "identity"])
    p.add_argument("--min-len", type=int, default=4)
    p.add_argument("--max-len", type=int, default=12)
    p.add_argument("--src-orig", type=int, default=2000)
    p.add_argument("--trg-orig", type=int, default=2000)
    p.add_argument("--zero-shot", type=int, default=200)

    p = sub("toy-train", cmd_toy_train, "train the tag-controlled toy translator")
    p.add_argument("--train", required=True, help="tagged parallel TSV")
    p.add_argument("--dev", required=True)
    p.add_argument("--output", required=True)
    _add_toy_config_args(p)

    p = sub("toy-decode", cmd_toy_decode, "decode raw lines with a toy model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True)
    p.add_argument("--output")
    p.add_argument("--natural", action="store_true", help="decode in the original-text domain")
    p.add_argument("--beam", type=int, default=1)

    p = sub("grid-eval", cmd_grid_eval, "2x2 origin-by-decode-mode evaluation grid")
    p.add_argument("--model", required=True)
    p.add_argument("--test", required=True, help="parallel TSV with origin labels")
    p.add_argument("--alt-refs", help="aligned alternate reference lines")
    p.add_argument("--fw")
    p.add_argument("--beam", type=int, default=1)
    p.add_argument("--json", help="also write the report as JSON here")

    p = sub("compare-policies", cmd_compare_policies, "train and evaluate one model per policy")
    p.add_argument("--train", required=True)
    p.add_argument("--dev", required=True)
    p.add_argument("--test", required=True)
    p.add_argument("--policy", action="append", required=True, help="repeatable policy descriptor")
    p.add_argument("--bpe")
    p.add_argument("--fw")
    p.add_argument("--alt-refs")
    p.add_argument("--json")
    _add_toy_config_args(p)

    return parser, registry


def _apply_config_file(path: str, sub: argparse.ArgumentParser) -> None:
    pairs = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        pairs[key.replace("-", "_")] = value
    known = {action.dest: action for action in sub._actions}
    for key, value in pairs.items():
        action = known.get(key)
        if action is None:
            raise ValueError(f"{path}: unknown option {key!r} for this subcommand")
        if isinstance(action, argparse._StoreTrueAction):
            sub.set_defaults(**{key: value.lower() in ("1", "true", "yes")})
        elif action.type is not None:
            sub.set_defaults(**{key: action.type(value)})
        else:
            sub.set_defaults(**{key: value})


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser, registry = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.config:
            _apply_config_file(args.config, registry[args.command])
            args = parser.parse_args(argv)
        manifest = None
        if args.manifest:
            from .harness import RunManifest

            config = {
                k: v
                for k, v in vars(args).items()
                if k not in ("func", "config", "manifest") and not callable(v)
            }
            manifest = RunManifest(command=args.command, root_seed=args.seed, config=config)
        stats = args.func(args, manifest)
        if manifest is not None:
            manifest.stage_stats[args.command] = stats or {}
            manifest.save(args.manifest)
    except BrokenPipeError:
        return 1
    except Exception as exc:  # single-line diagnostic, non-zero exit
        message = str(exc).replace("\n", " ").strip() or exc.__class__.__name__
        print(f"error: {message}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
