"""Corpus containers, deduplication, and the cleaning filters applied to
monolingual and parallel data before training.

All filters are pure, per-item, and order-preserving: they only ever delete
items, and every decision depends on the item alone. Each returns a new
corpus plus a FilterStats record whose per-rule drop counts reconcile with
the input size.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable, Sequence


class Origin(Enum):
    """Which side of a bitext pair was authored first."""

    SOURCE_ORIGINAL = "src_orig"
    TARGET_ORIGINAL = "trg_orig"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SentencePair:
    """One bitext example. Both sides must be non-empty after trimming."""

    source: str
    target: str
    origin: Origin = Origin.UNKNOWN
    tagged: bool = False

    def __post_init__(self):
        if not self.source.strip():
            raise ValueError("sentence pair has an empty source side")
        if not self.target.strip():
            raise ValueError("sentence pair has an empty target side")


class CorpusKind(Enum):
    PARALLEL = "parallel"
    MONO = "mono"


@dataclass
class Corpus:
    """An ordered sequence of sentence pairs (parallel) or text lines (mono)."""

    kind: CorpusKind
    items: list

    @classmethod
    def mono(cls, lines: Iterable[str]) -> "Corpus":
        return cls(CorpusKind.MONO, [str(x) for x in lines])

    @classmethod
    def parallel(cls, pairs: Iterable[SentencePair]) -> "Corpus":
        return cls(CorpusKind.PARALLEL, list(pairs))

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)

    def require_kind(self, kind: CorpusKind, op: str) -> None:
        if self.kind is not kind:
            raise ValueError(f"{op} requires a {kind.value} corpus, got {self.kind.value}")


@dataclass
class FilterStats:
    """Bookkeeping for one filter pass: kept + sum(dropped) = input."""

    input_count: int
    kept_count: int
    dropped_by_rule: dict[str, int] = field(default_factory=dict)

    @property
    def dropped_count(self) -> int:
        return sum(self.dropped_by_rule.values())

    def format_report(self) -> str:
        lines = [f"input\t{self.input_count}", f"kept\t{self.kept_count}"]
        for rule in sorted(self.dropped_by_rule):
            lines.append(f"dropped.{rule}\t{self.dropped_by_rule[rule]}")
        return "\n".join(lines)


def _run_filter(corpus: Corpus, classify: Callable[[object], str | None]) -> tuple[Corpus, FilterStats]:
    """Apply a per-item rule classifier; None keeps the item, a rule name drops it."""
    kept = []
    dropped: Counter = Counter()
    for item in corpus.items:
        rule = classify(item)
        if rule is None:
            kept.append(item)
        else:
            dropped[rule] += 1
    stats = FilterStats(len(corpus.items), len(kept), dict(dropped))
    return Corpus(corpus.kind, kept), stats


def dedup(corpus: Corpus) -> tuple[Corpus, FilterStats]:
    """Remove exact-duplicate items, keeping the first occurrence."""
    seen = set()

    def classify(item):
        if item in seen:
            return "duplicate"
        seen.add(item)
        return None

    return _run_filter(corpus, classify)


def filter_bitext(
    corpus: Corpus,
    segment: Callable[[str], Sequence[str]],
    max_subwords: int = 250,
    max_ratio: float = 2.0,
) -> tuple[Corpus, FilterStats]:
    """Drop pairs that are too long in subword tokens or too unbalanced.

    The length rule (either side exceeding ``max_subwords``) is checked
    before the ratio rule (max/min subword-length ratio strictly above
    ``max_ratio``), and both counts are reported.
    """
    corpus.require_kind(CorpusKind.PARALLEL, "filter_bitext")

    def classify(pair: SentencePair):
        n_src = len(segment(pair.source))
        n_trg = len(segment(pair.target))
        if n_src == 0 or n_trg == 0:
            raise ValueError("length ratio undefined for a pair with an empty side")
        if n_src > max_subwords or n_trg > max_subwords:
            return "length"
        if max(n_src, n_trg) / min(n_src, n_trg) > max_ratio:
            return "ratio"
        return None

    return _run_filter(corpus, classify)


def filter_mono(corpus: Corpus, max_tokens: int = 70, max_chars: int = 500) -> tuple[Corpus, FilterStats]:
    """Drop monolingual lines with more than ``max_tokens`` whitespace tokens
    or more than ``max_chars`` Unicode scalar values."""
    corpus.require_kind(CorpusKind.MONO, "filter_mono")

    def classify(line: str):
        if len(line.split()) > max_tokens:
            return "tokens"
        if len(line) > max_chars:
            return "chars"
        return None

    return _run_filter(corpus, classify)


def filter_backtranslated(
    corpus: Corpus, max_src_tokens: int = 75, max_src_chars: int = 550
) -> tuple[Corpus, FilterStats]:
    """Drop pairs whose synthetic (back-translated) source side is too long."""
    corpus.require_kind(CorpusKind.PARALLEL, "filter_backtranslated")

    def classify(pair: SentencePair):
        if len(pair.source.split()) > max_src_tokens:
            return "src_tokens"
        if len(pair.source) > max_src_chars:
            return "src_chars"
        return None

    return _run_filter(corpus, classify)


def filter_language(
    corpus: Corpus,
    src_pred: Callable[[str], bool],
    trg_pred: Callable[[str], bool],
) -> tuple[Corpus, FilterStats]:
    """Keep pairs whose sides both pass their language predicates.

    Pairs whose source and target are verbatim identical are dropped
    unconditionally: they are copy noise, not translations.
    """
    corpus.require_kind(CorpusKind.PARALLEL, "filter_language")

    def classify(pair: SentencePair):
        if pair.source == pair.target:
            return "identical_sides"
        if not src_pred(pair.source):
            return "src_language"
        if not trg_pred(pair.target):
            return "trg_language"
        return None

    return _run_filter(corpus, classify)


@dataclass(frozen=True)
class CharFrequencyLanguageId:
    """Naive language predicate: accept text whose characters mostly come
    from the character inventory of a sample of the language.

    Good enough to separate scripts and synthetic alphabets; real language
    identification should be plugged in as a custom predicate.
    """

    known_chars: frozenset
    min_coverage: float = 0.8

    @classmethod
    def fit(
        cls,
        sample_lines: Iterable[str],
        inventory_mass: float = 0.999,
        min_coverage: float = 0.8,
    ) -> "CharFrequencyLanguageId":
        counts = Counter(c for line in sample_lines for c in line if not c.isspace())
        if not counts:
            raise ValueError("cannot fit a language model on an empty sample")
        total = sum(counts.values())
        keep = set()
        acc = 0
        for ch, n in counts.most_common():
            keep.add(ch)
            acc += n
            if acc / total >= inventory_mass:
                break
        return cls(frozenset(keep), min_coverage)

    def __call__(self, text: str) -> bool:
        chars = [c for c in text if not c.isspace()]
        if not chars:
            return False
        hits = sum(1 for c in chars if c in self.known_chars)
        return hits / len(chars) >= self.min_coverage


# ---------------------------------------------------------------------------
# File formats
#
# Monolingual: UTF-8, LF line endings, one sentence per line.
# Parallel: two aligned one-sentence-per-line files, or a single TSV with
# columns source<TAB>target[<TAB>origin], origin in {src_orig, trg_orig,
# unknown}.
# ---------------------------------------------------------------------------


def read_mono(path: str | Path) -> Corpus:
    with open(path, encoding="utf-8") as f:
        lines = [line.rstrip("\n").rstrip("\r") for line in f]
    return Corpus.mono(lines)


def write_mono(corpus: Corpus, path: str | Path) -> None:
    corpus.require_kind(CorpusKind.MONO, "write_mono")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for line in corpus.items:
            if "\n" in line:
                raise ValueError("monolingual lines must not contain newlines")
            f.write(line + "\n")


def _parse_origin(text: str) -> Origin:
    for origin in Origin:
        if origin.value == text:
            return origin
    raise ValueError(f"unknown origin label: {text!r}")


def read_parallel(src_path: str | Path, trg_path: str | Path) -> Corpus:
    src = read_mono(src_path).items
    trg = read_mono(trg_path).items
    if len(src) != len(trg):
        raise ValueError(
            f"aligned files differ in length: {len(src)} source lines vs {len(trg)} target lines"
        )
    return Corpus.parallel(SentencePair(s, t) for s, t in zip(src, trg))


def write_parallel(corpus: Corpus, src_path: str | Path, trg_path: str | Path) -> None:
    corpus.require_kind(CorpusKind.PARALLEL, "write_parallel")
    write_mono(Corpus.mono(p.source for p in corpus.items), src_path)
    write_mono(Corpus.mono(p.target for p in corpus.items), trg_path)


def read_parallel_tsv(path: str | Path) -> Corpus:
    pairs = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) == 2:
                pairs.append(SentencePair(cols[0], cols[1]))
            elif len(cols) == 3:
                pairs.append(SentencePair(cols[0], cols[1], _parse_origin(cols[2])))
            else:
                raise ValueError(f"{path}:{lineno}: expected 2 or 3 tab-separated columns, got {len(cols)}")
    return Corpus.parallel(pairs)


def write_parallel_tsv(corpus: Corpus, path: str | Path, include_origin: bool | None = None) -> None:
    corpus.require_kind(CorpusKind.PARALLEL, "write_parallel_tsv")
    if include_origin is None:
        include_origin = any(p.origin is not Origin.UNKNOWN for p in corpus.items)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for pair in corpus.items:
            if "\t" in pair.source or "\t" in pair.target:
                raise ValueError("TSV corpora must not contain tab characters in text")
            if include_origin:
                f.write(f"{pair.source}\t{pair.target}\t{pair.origin.value}\n")
            else:
                f.write(f"{pair.source}\t{pair.target}\n")
