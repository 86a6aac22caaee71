"""Corpus-level translationese metrics and a BLEU scorer.

The three translationese measures operate on whitespace tokens of raw
(non-segmented) text:

* lexical variety: type-token ratio over the concatenated lines;
* lexical density: fraction of tokens that are content words, where a
  content word is any token containing a letter that is not on the
  function-word stoplist;
* length variety: mean of |len(x) - len(y)| / len(x) over sentence pairs.

BLEU is corpus-level with mixed case, international tokenization (spaces
inserted around Unicode punctuation and symbol characters, digit-adjacent
punctuation kept), exponential smoothing of zero n-gram matches, one
reference per hypothesis, and the standard brevity penalty. It reproduces
the de-facto shared-task scorer for the signature
``BLEU+case.mixed+numrefs.1+smooth.exp+tok.intl+version.1.2.15`` to within
reported precision, quirks included.
"""

from __future__ import annotations

import math
import re
import sys
import unicodedata
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

_COMPAT_VERSION = "1.2.15"
_LOG_FLOOR = -9999999999


# ---------------------------------------------------------------------------
# Function words
# ---------------------------------------------------------------------------

# Closed-class English words: determiners, prepositions, pronouns,
# conjunctions, auxiliaries, particles.
_ENGLISH_FUNCTION_WORDS = """
a an the this that these those each every either neither some any no all both
half several enough such what which whose
i you he she it we they me him her us them my your his its our their mine
yours hers ours theirs myself yourself himself herself itself ourselves
yourselves themselves who whom one ones something anything nothing everything
someone anyone everyone somebody anybody nobody everybody
in on at by for with about against between into through during before after
above below to from up down of off over under again further near far
throughout beyond among within without along across behind beside besides
except toward towards upon unto onto
and but or nor so yet although because since unless while whereas if then
than as until when whenever where wherever whether though once
be am is are was were been being have has had having do does did doing will
would shall should may might must can could ought need dare
not n't to there here out just only also very too quite rather
""".split()


@dataclass(frozen=True)
class FunctionWordList:
    """A per-language stoplist of closed-class words, all lowercase."""

    language: str
    words: frozenset

    def __post_init__(self):
        if not self.words:
            raise ValueError("function word list must not be empty")
        for w in self.words:
            if not w or w != w.lower() or any(c.isspace() for c in w):
                raise ValueError(f"function word {w!r} must be lowercase without whitespace")

    def __contains__(self, token: str) -> bool:
        return token.lower() in self.words


def english_function_words() -> FunctionWordList:
    return FunctionWordList("en", frozenset(_ENGLISH_FUNCTION_WORDS))


def load_function_words(path: str | Path, language: str = "custom") -> FunctionWordList:
    """Read a stoplist file: one token per line, ``#`` comments allowed."""
    words = set()
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            words.add(line.lower())
    return FunctionWordList(language, frozenset(words))


# ---------------------------------------------------------------------------
# Translationese metrics
# ---------------------------------------------------------------------------


def lexical_variety(lines: Iterable[str], per_sentence: bool = False) -> float:
    """Type-token ratio. ``per_sentence`` averages per-line ratios instead
    of pooling tokens (sensitivity-analysis variant, not the default)."""
    if per_sentence:
        ratios = []
        for line in lines:
            tokens = line.split()
            if tokens:
                ratios.append(len(set(tokens)) / len(tokens))
        if not ratios:
            raise ValueError("lexical variety undefined for an empty corpus")
        return sum(ratios) / len(ratios)
    tokens = [t for line in lines for t in line.split()]
    if not tokens:
        raise ValueError("lexical variety undefined for an empty corpus")
    return len(set(tokens)) / len(tokens)


def _is_content_word(token: str, fw: FunctionWordList) -> bool:
    if token in fw:
        return False
    return any(unicodedata.category(c).startswith("L") for c in token)


def lexical_density(lines: Iterable[str], fw: FunctionWordList) -> float:
    """Fraction of tokens that are content words (not on the stoplist and
    containing at least one letter)."""
    tokens = [t for line in lines for t in line.split()]
    if not tokens:
        raise ValueError("lexical density undefined for an empty corpus")
    content = sum(1 for t in tokens if _is_content_word(t, fw))
    return content / len(tokens)


def length_variety(pairs) -> float:
    """Mean normalized absolute length difference over sentence pairs.

    Accepts SentencePair objects or (source, target) tuples; lengths are
    whitespace token counts of the raw text.
    """
    total = 0.0
    count = 0
    for lineno, pair in enumerate(pairs, start=1):
        if isinstance(pair, tuple):
            src, trg = pair
        else:
            src, trg = pair.source, pair.target
        nx = len(src.split())
        ny = len(trg.split())
        if nx == 0:
            raise ValueError(f"length variety undefined: empty source at line {lineno}")
        total += abs(nx - ny) / nx
        count += 1
    if count == 0:
        raise ValueError("length variety undefined for an empty corpus")
    return total / count


# ---------------------------------------------------------------------------
# BLEU
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BleuConfig:
    """Fixed scoring signature; only the n-gram order is configurable."""

    max_ngram_order: int = 4

    def signature(self, lang_pair: str | None = None, test_set: str | None = None) -> str:
        parts = ["BLEU", "case.mixed"]
        if lang_pair:
            parts.append(f"lang.{lang_pair}")
        parts.append("numrefs.1")
        parts.append("smooth.exp")
        if test_set:
            parts.append(f"test.{test_set}")
        parts.append("tok.intl")
        parts.append(f"version.{_COMPAT_VERSION}")
        return "+".join(parts)


@lru_cache(maxsize=1)
def _intl_patterns():
    # Character classes are built by raw concatenation of every code point in
    # the Unicode P*/S* categories, matching the reference scorer exactly --
    # including its quirk that the backslash (categorized Po) is consumed as
    # an escape inside the class and therefore never split on.
    punct = "".join(chr(x) for x in range(sys.maxunicode) if unicodedata.category(chr(x)).startswith("P"))
    symbol = "".join(chr(x) for x in range(sys.maxunicode) if unicodedata.category(chr(x)).startswith("S"))
    return (
        re.compile(r"([^\d])([" + punct + r"])"),
        re.compile(r"([" + punct + r"])([^\d])"),
        re.compile("([" + symbol + "])"),
    )


def tokenize_international(line: str) -> list[str]:
    """Insert spaces around punctuation and symbols, except punctuation
    between digits, then split on whitespace."""
    nondigit_punct, punct_nondigit, symbol = _intl_patterns()
    line = nondigit_punct.sub(r"\1 \2 ", line)
    line = punct_nondigit.sub(r" \1 \2", line)
    line = symbol.sub(r" \1 ", line)
    return line.split()


def _ngram_counts(tokens: Sequence[str], max_order: int) -> Counter:
    counts: Counter = Counter()
    for n in range(1, max_order + 1):
        for i in range(len(tokens) - n + 1):
            counts[tuple(tokens[i : i + n])] += 1
    return counts


@dataclass(frozen=True)
class BleuScore:
    score: float
    precisions: tuple[float, ...]
    brevity_penalty: float
    hyp_len: int
    ref_len: int
    signature: str

    def format(self) -> str:
        precisions = "/".join(f"{p:.1f}" for p in self.precisions)
        ratio = self.hyp_len / self.ref_len if self.ref_len else 0.0
        return (
            f"BLEU = {self.score:.2f} {precisions} "
            f"(BP = {self.brevity_penalty:.3f} ratio = {ratio:.3f} "
            f"hyp_len = {self.hyp_len} ref_len = {self.ref_len})"
        )


def bleu_details(
    hypotheses: Sequence[str],
    references: Sequence[str],
    cfg: BleuConfig = BleuConfig(),
) -> BleuScore:
    if len(hypotheses) != len(references):
        raise ValueError(
            f"hypothesis/reference counts differ: {len(hypotheses)} vs {len(references)}"
        )
    if not hypotheses:
        raise ValueError("cannot score an empty corpus")

    order = cfg.max_ngram_order
    correct = [0] * order
    total = [0] * order
    hyp_len = 0
    ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tokens = tokenize_international(hyp.rstrip())
        ref_tokens = tokenize_international(ref.rstrip())
        hyp_len += len(hyp_tokens)
        ref_len += len(ref_tokens)
        ref_ngrams = _ngram_counts(ref_tokens, order)
        for ngram, count in _ngram_counts(hyp_tokens, order).items():
            n = len(ngram)
            correct[n - 1] += min(count, ref_ngrams.get(ngram, 0))
            total[n - 1] += count
    if hyp_len == 0:
        raise ValueError("all hypotheses are empty after tokenization")

    precisions = [0.0] * order
    smooth = 1.0
    for n in range(1, order + 1):
        if total[n - 1] == 0:
            break
        if correct[n - 1] == 0:
            smooth *= 2.0
            precisions[n - 1] = 100.0 / (smooth * total[n - 1])
        else:
            precisions[n - 1] = 100.0 * correct[n - 1] / total[n - 1]

    if hyp_len < ref_len:
        brevity_penalty = math.exp(1 - ref_len / hyp_len)
    else:
        brevity_penalty = 1.0

    log_sum = sum(math.log(p) if p > 0.0 else _LOG_FLOOR for p in precisions)
    score = brevity_penalty * math.exp(log_sum / order)
    return BleuScore(
        score=score,
        precisions=tuple(precisions),
        brevity_penalty=brevity_penalty,
        hyp_len=hyp_len,
        ref_len=ref_len,
        signature=cfg.signature(),
    )


def bleu(
    hypotheses: Sequence[str],
    references: Sequence[str],
    cfg: BleuConfig = BleuConfig(),
) -> float:
    """Corpus BLEU in [0, 100]."""
    return bleu_details(hypotheses, references, cfg).score


# ---------------------------------------------------------------------------
# Combined report
# ---------------------------------------------------------------------------


@dataclass
class MetricReport:
    lexical_variety: float
    lexical_density: float
    length_variety: float | None
    bleu: float | None
    token_count: int
    type_count: int

    def as_dict(self) -> dict:
        return {
            "lexical_variety": self.lexical_variety,
            "lexical_density": self.lexical_density,
            "length_variety": self.length_variety,
            "bleu": self.bleu,
            "token_count": self.token_count,
            "type_count": self.type_count,
        }

    def as_text(self) -> str:
        lines = []
        for key, value in self.as_dict().items():
            if value is None:
                continue
            if isinstance(value, float):
                lines.append(f"{key}\t{value:.6f}")
            else:
                lines.append(f"{key}\t{value}")
        return "\n".join(lines)


def compute_report(
    lines: Sequence[str],
    fw: FunctionWordList,
    sources: Sequence[str] | None = None,
    bleu_score: float | None = None,
) -> MetricReport:
    """Bundle the three metrics over a set of output lines; length variety
    is included when the aligned source lines are given."""
    tokens = [t for line in lines for t in line.split()]
    if not tokens:
        raise ValueError("cannot compute metrics on an empty corpus")
    lv = None
    if sources is not None:
        if len(sources) != len(lines):
            raise ValueError("sources and lines must be aligned")
        lv = length_variety(list(zip(sources, lines)))
    return MetricReport(
        lexical_variety=len(set(tokens)) / len(tokens),
        lexical_density=lexical_density(lines, fw),
        length_variety=lv,
        bleu=bleu_score,
        token_count=len(tokens),
        type_count=len(set(tokens)),
    )
