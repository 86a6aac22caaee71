"""Tagging parallel corpora by predicted target-side origin.

A tag policy decides per pair whether its target looks like original text;
tagged pairs get the reserved ``<TRG_ORIG>`` token prepended to their source
when written in the NMT-ready form. Policies: a trained classifier above a
probability threshold, the length-ratio heuristic against an empirically
computed threshold, the lexical-density heuristic, tag-everything, and
tag-nothing. All comparisons are strict.

Note the length-ratio policy's semantics are inverted relative to the
others: near-source-length targets tend to be translationese, so its tag
effectively means "produce translationese". That is a property of the
heuristic, surfaced in reports, not a separate code path.
"""

from __future__ import annotations

import abc
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .classifier import ClassifierModel, predict
from .corpus import Corpus, CorpusKind, Origin, SentencePair
from .textmetrics import FunctionWordList, lexical_density

TAG_TOKEN = "<TRG_ORIG>"


@dataclass
class TagStats:
    total: int
    tagged: int

    @property
    def fraction_tagged(self) -> float:
        return self.tagged / self.total if self.total else 0.0

    def format(self) -> str:
        return f"{self.total} / {self.tagged} / {self.fraction_tagged:.4f}"


class TagPolicy(abc.ABC):
    name: str = "policy"

    @abc.abstractmethod
    def should_tag(self, pair: SentencePair) -> bool: ...


@dataclass
class ClassifierPolicy(TagPolicy):
    model: ClassifierModel
    threshold: float = 0.5
    name: str = "classifier"

    def should_tag(self, pair: SentencePair) -> bool:
        return predict(self.model, pair.target) > self.threshold


@dataclass
class LengthRatioPolicy(TagPolicy):
    rho: float
    name: str = "length_ratio"

    def should_tag(self, pair: SentencePair) -> bool:
        src_tokens = len(pair.source.split())
        trg_tokens = len(pair.target.split())
        if trg_tokens == 0:
            raise ValueError("length ratio undefined for a zero-length target")
        return src_tokens / trg_tokens > self.rho


@dataclass
class LexicalDensityPolicy(TagPolicy):
    fw: FunctionWordList
    cutoff: float = 0.5
    name: str = "lexical_density"

    def should_tag(self, pair: SentencePair) -> bool:
        return lexical_density([pair.target], self.fw) > self.cutoff


class AllTaggedPolicy(TagPolicy):
    name = "all_tagged"

    def should_tag(self, pair: SentencePair) -> bool:
        return True


class UntaggedPolicy(TagPolicy):
    name = "untagged"

    def should_tag(self, pair: SentencePair) -> bool:
        return False


def compute_length_threshold(mono_x: Corpus, mono_y: Corpus) -> float:
    """Ratio of mean sentence lengths (in whitespace tokens) of two
    monolingual corpora: mean(|x|) / mean(|y|)."""
    mono_x.require_kind(CorpusKind.MONO, "compute_length_threshold")
    mono_y.require_kind(CorpusKind.MONO, "compute_length_threshold")
    if not mono_x.items or not mono_y.items:
        raise ValueError("length threshold requires two non-empty corpora")
    mean_x = sum(len(line.split()) for line in mono_x.items) / len(mono_x.items)
    mean_y = sum(len(line.split()) for line in mono_y.items) / len(mono_y.items)
    if mean_y == 0:
        raise ValueError("target corpus has no tokens")
    return mean_x / mean_y


def apply_policy(corpus: Corpus, policy: TagPolicy) -> tuple[Corpus, TagStats]:
    """Set each pair's tag bit according to the policy."""
    corpus.require_kind(CorpusKind.PARALLEL, "apply_policy")
    tagged_pairs = []
    tagged = 0
    for pair in corpus.items:
        bit = policy.should_tag(pair)
        tagged += bit
        tagged_pairs.append(replace(pair, tagged=bit))
    return Corpus.parallel(tagged_pairs), TagStats(len(tagged_pairs), tagged)


def tag_by_origin(corpus: Corpus) -> Corpus:
    """Oracle tagging for corpora with known origin labels: tag exactly the
    pairs whose target side is original."""
    corpus.require_kind(CorpusKind.PARALLEL, "tag_by_origin")
    return Corpus.parallel(
        replace(p, tagged=p.origin is Origin.TARGET_ORIGINAL) for p in corpus.items
    )


def upsample_balance(corpus: Corpus) -> Corpus:
    """Replicate the smaller of the tagged/untagged subsets until the two
    are the same size: whole-set repetition plus a prefix for the
    remainder, appended after the original corpus in corpus order."""
    corpus.require_kind(CorpusKind.PARALLEL, "upsample_balance")
    tagged = [p for p in corpus.items if p.tagged]
    untagged = [p for p in corpus.items if not p.tagged]
    if not tagged or not untagged:
        raise ValueError("both the tagged and untagged subsets must be non-empty to balance")
    if len(tagged) == len(untagged):
        return corpus
    smaller = tagged if len(tagged) < len(untagged) else untagged
    deficit = abs(len(tagged) - len(untagged))
    extras = smaller * (deficit // len(smaller)) + smaller[: deficit % len(smaller)]
    return Corpus.parallel(list(corpus.items) + extras)


def merge_bt(bitext: Corpus, bt: Corpus, bt_policy: TagPolicy) -> tuple[Corpus, dict[str, TagStats]]:
    """Tag a back-translated corpus by policy and append it to the (already
    tagged) bitext. AllTaggedPolicy on the BT side reproduces plain tagged
    back-translation: every synthetic pair tagged, bitext untouched."""
    bitext.require_kind(CorpusKind.PARALLEL, "merge_bt")
    bt.require_kind(CorpusKind.PARALLEL, "merge_bt")
    tagged_bt, bt_stats = apply_policy(bt, bt_policy) if bt.items else (bt, TagStats(0, 0))
    bitext_stats = TagStats(len(bitext.items), sum(1 for p in bitext.items if p.tagged))
    merged = Corpus.parallel(list(bitext.items) + list(tagged_bt.items))
    return merged, {"bitext": bitext_stats, "bt": bt_stats}


# ---------------------------------------------------------------------------
# Tagged corpus files
#
# Explicit form: source<TAB>target<TAB>origin<TAB>tag with tag in {0, 1}.
# NMT-ready (inline) form: source<TAB>target[<TAB>origin], with the tag
# token prepended to the source of tagged pairs. Readers accept both.
# ---------------------------------------------------------------------------


def inline_tag(pair: SentencePair) -> str:
    return f"{TAG_TOKEN} {pair.source}" if pair.tagged else pair.source


def write_tagged(corpus: Corpus, path: str | Path, inline: bool = False) -> None:
    corpus.require_kind(CorpusKind.PARALLEL, "write_tagged")
    include_origin = any(p.origin is not Origin.UNKNOWN for p in corpus.items)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pair in corpus.items:
            if "\t" in pair.source or "\t" in pair.target:
                raise ValueError("tagged corpora must not contain tab characters in text")
            if inline:
                cols = [inline_tag(pair), pair.target]
                if include_origin:
                    cols.append(pair.origin.value)
            else:
                cols = [pair.source, pair.target, pair.origin.value, str(int(pair.tagged))]
            f.write("\t".join(cols) + "\n")


def _parse_origin(text: str) -> Origin:
    for origin in Origin:
        if origin.value == text:
            return origin
    raise ValueError(f"unknown origin label: {text!r}")


def read_tagged(path: str | Path) -> Corpus:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) == 4:
                if cols[3] not in ("0", "1"):
                    raise ValueError(f"{path}:{lineno}: tag column must be 0 or 1")
                pairs.append(
                    SentencePair(cols[0], cols[1], _parse_origin(cols[2]), cols[3] == "1")
                )
            elif len(cols) in (2, 3):
                source = cols[0]
                tagged = source.startswith(TAG_TOKEN + " ")
                if tagged:
                    source = source[len(TAG_TOKEN) + 1 :]
                origin = _parse_origin(cols[2]) if len(cols) == 3 else Origin.UNKNOWN
                pairs.append(SentencePair(source, cols[1], origin, tagged))
            else:
                raise ValueError(f"{path}:{lineno}: expected 2-4 tab-separated columns")
    return Corpus.parallel(pairs)
