#!/usr/bin/env python3
"""Tagging-volatility comparison: train one toy model per tagging policy on
identical data and put their evaluation grids side by side.

The policies compared: a trained classifier (fit on held-out slices of the
generated targets), the length-ratio heuristic (which has no usable signal
in the toy world, every pair maps token for token), the lexical-density
heuristic, tag-everything, and no tagging.

Example:
    python scripts/compare_tagging_policies.py --outdir runs/policies --seed 0
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from transtag.classifier import ClassifierConfig, Label, LabeledSentence, train_classifier
from transtag.corpus import Corpus, SentencePair
from transtag.harness import PolicyEvalSpec, RunManifest, compare_policies
from transtag.subword import learn_bpe
from transtag.tagging import (
    AllTaggedPolicy,
    ClassifierPolicy,
    LengthRatioPolicy,
    LexicalDensityPolicy,
    UntaggedPolicy,
)
from transtag.textmetrics import english_function_words
from transtag.toymt import QuadrantSpec, ToyMtConfig, generate_quadrant_data


def char_inventory(lines) -> int:
    symbols = set()
    for line in lines:
        for word in line.split():
            symbols.update(word[:-1])
            symbols.add(word[-1] + "</w>")
    return len(symbols)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--outdir", type=Path, required=True)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--pairs-per-quadrant", type=int, default=1000)
    parser.add_argument("--epochs", type=int, default=6)
    args = parser.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    spec = QuadrantSpec(
        src_orig_count=args.pairs_per_quadrant,
        trg_orig_count=args.pairs_per_quadrant,
        zero_shot_count=1,
        seed=args.seed,
    )
    data = generate_quadrant_data(spec)
    corpus = Corpus.parallel(
        [
            SentencePair(p.source, p.target, p.origin)
            for p in list(data.src_original.items) + list(data.trg_original.items)
        ]
    )

    print("training the translationese classifier on generated targets ...")
    half = args.pairs_per_quadrant // 2
    clf_train = [
        *(LabeledSentence(p.target, Label.ORIGINAL) for p in data.trg_original.items[:half]),
        *(LabeledSentence(p.target, Label.TRANSLATED) for p in data.src_original.items[:half]),
    ]
    clf_dev = [
        *(LabeledSentence(p.target, Label.ORIGINAL) for p in data.trg_original.items[half : half + 100]),
        *(LabeledSentence(p.target, Label.TRANSLATED) for p in data.src_original.items[half : half + 100]),
    ]
    lines = [s.text for s in clf_train]
    bpe = learn_bpe(lines, char_inventory(lines) + 80)
    clf, clf_log = train_classifier(
        clf_train,
        clf_dev,
        bpe,
        ClassifierConfig(embed_dim=16, conv_widths=(3,), filters=8, epochs=2, eval_every=20, seed=args.seed),
    )
    print(f"classifier dev F1 {clf_log.best_f1:.3f}")

    def labeled_split(seed, per_half):
        d = generate_quadrant_data(
            QuadrantSpec(src_orig_count=per_half, trg_orig_count=per_half, zero_shot_count=1, seed=seed)
        )
        return Corpus.parallel(list(d.src_original.items) + list(d.trg_original.items))

    policies = [
        ClassifierPolicy(clf),
        LengthRatioPolicy(rho=1.0),
        LexicalDensityPolicy(fw=english_function_words()),
        AllTaggedPolicy(),
        UntaggedPolicy(),
    ]
    eval_spec = PolicyEvalSpec(
        dev=labeled_split(args.seed + 9000, 25),
        test=labeled_split(args.seed + 9100, 50),
        config=ToyMtConfig(hidden_dim=64, epochs=args.epochs, eval_every=10**9, seed=args.seed),
    )
    print(f"training {len(policies)} models, one per policy ...")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")  # degenerate policies are single-domain
        comparison = compare_policies(corpus, policies, eval_spec)

    print()
    print(comparison.render_text())
    (args.outdir / "comparison.json").write_text(
        json.dumps(comparison.as_dict(), indent=2, sort_keys=True) + "\n"
    )
    manifest = RunManifest(
        command="compare_tagging_policies",
        root_seed=args.seed,
        config=vars(args) | {"outdir": str(args.outdir)},
    )
    manifest.stage_stats["classifier_dev_f1"] = {"f1": clf_log.best_f1}
    manifest.save(args.outdir / "manifest.json")
    print(f"\nwrote comparison and manifest to {args.outdir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
