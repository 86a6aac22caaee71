"""Classifier training data built from monolingual text and machine
translation: forward-translation (FT) and round-trip-translation (RTT)
constructions.

A translator is anything callable on a sequence of lines that returns the
same number of translated lines in order. Two implementations ship: a
subprocess bridge speaking a strict line protocol, and a toy lexicon
translator so the whole pipeline can run hermetically.
"""

from __future__ import annotations

import subprocess
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

from .classifier import Label, LabeledSentence
from .corpus import Corpus, CorpusKind
from .util import derive_rng


class Translator(Protocol):
    direction: str

    def __call__(self, lines: Sequence[str]) -> list[str]: ...


@dataclass
class ToyTranslator:
    """Per-token lexicon substitution with optional reordering and word
    dropout. Deterministic: the noise stream is derived from the seed and
    the line content, so equal inputs always translate equally.
    """

    lexicon: dict[str, str] = field(default_factory=dict)
    direction: str = "s2t"
    reorder: str = "none"  # none | reverse | swap
    dropout: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.reorder not in ("none", "reverse", "swap"):
            raise ValueError(f"unknown reorder rule {self.reorder!r}")
        if not 0.0 <= self.dropout < 1.0:
            raise ValueError("dropout must be in [0, 1)")

    def _translate_line(self, line: str) -> str:
        tokens = [self.lexicon.get(t, t) for t in line.split()]
        if self.dropout > 0.0 and tokens:
            rng = derive_rng(self.seed, "toy-translator", self.direction, line)
            keep = [t for t in tokens if rng.random() >= self.dropout]
            tokens = keep if keep else tokens[:1]
        if self.reorder == "reverse":
            tokens = tokens[::-1]
        elif self.reorder == "swap":
            for i in range(0, len(tokens) - 1, 2):
                tokens[i], tokens[i + 1] = tokens[i + 1], tokens[i]
        return " ".join(tokens)

    def __call__(self, lines: Sequence[str]) -> list[str]:
        return [self._translate_line(line) for line in lines]


@dataclass
class SubprocessTranslator:
    """Bridge to an external translator process.

    Protocol: one input sentence per line on stdin, one translation per
    line on stdout, strictly one output line per input line, flushed per
    batch. A non-zero exit status aborts the build.
    """

    command: list[str]
    direction: str = "s2t"
    batch_size: int = 64

    def __call__(self, lines: Sequence[str]) -> list[str]:
        out: list[str] = []
        for batch_index, start in enumerate(range(0, len(lines), self.batch_size)):
            batch = list(lines[start : start + self.batch_size])
            proc = subprocess.run(
                self.command,
                input="\n".join(batch) + "\n",
                capture_output=True,
                text=True,
            )
            if proc.returncode != 0:
                detail = proc.stderr.strip().splitlines()
                raise RuntimeError(
                    f"translator exited with status {proc.returncode} on batch {batch_index}"
                    + (f": {detail[0]}" if detail else "")
                )
            got = proc.stdout.splitlines()
            if len(got) != len(batch):
                raise RuntimeError(
                    f"translator returned {len(got)} lines for {len(batch)} inputs "
                    f"in batch {batch_index}"
                )
            out.extend(got)
        return out


def _require_mono(corpus: Corpus, name: str) -> list[str]:
    corpus.require_kind(CorpusKind.MONO, name)
    if not corpus.items:
        raise ValueError(f"{name} requires a non-empty corpus")
    return list(corpus.items)


def _checked_translate(translator: Translator, lines: list[str], stage: str) -> list[str]:
    translated = translator(lines)
    if len(translated) != len(lines):
        raise RuntimeError(
            f"{stage}: translator returned {len(translated)} lines for {len(lines)} inputs"
        )
    return translated


def build_ft_dataset(src_mono: Corpus, trg_mono: Corpus, mt_s2t: Translator) -> list[LabeledSentence]:
    """Forward-translation construction: machine-translated source
    monolingual text labeled Translated against genuine target monolingual
    text labeled Original, truncated to exactly balanced classes.

    Labels derive from provenance, not content: an identity translator
    still yields Translated labels.
    """
    src_lines = _require_mono(src_mono, "build_ft_dataset")
    trg_lines = _require_mono(trg_mono, "build_ft_dataset")
    n = min(len(src_lines), len(trg_lines))
    translated = _checked_translate(mt_s2t, src_lines[:n], "forward translation")
    dataset: list[LabeledSentence] = []
    for i in range(n):
        dataset.append(LabeledSentence(trg_lines[i], Label.ORIGINAL, "trg_mono", i))
        dataset.append(LabeledSentence(translated[i], Label.TRANSLATED, "src_mono", i))
    return dataset


def build_rtt_dataset(
    trg_mono: Corpus,
    mt_t2s: Translator,
    mt_s2t: Translator,
    keep_intermediate: bool = False,
):
    """Round-trip construction: each target line is labeled Original and its
    round-trip translation (target -> source -> target) labeled Translated,
    so the two classes are content-matched pair by pair.

    The intermediate source-language text is discarded unless
    ``keep_intermediate`` is set, in which case it is returned alongside.
    """
    trg_lines = _require_mono(trg_mono, "build_rtt_dataset")
    intermediate = _checked_translate(mt_t2s, trg_lines, "round trip, target to source")
    round_tripped = _checked_translate(mt_s2t, intermediate, "round trip, source to target")
    dataset: list[LabeledSentence] = []
    for i, (orig, rtt) in enumerate(zip(trg_lines, round_tripped)):
        dataset.append(LabeledSentence(orig, Label.ORIGINAL, "trg_mono", i))
        dataset.append(LabeledSentence(rtt, Label.TRANSLATED, "rtt", i))
    if keep_intermediate:
        return dataset, intermediate
    return dataset


# ---------------------------------------------------------------------------
# Labeled dataset files: TSV label<TAB>text, label in {original, translated}.
# ---------------------------------------------------------------------------


def write_labeled(dataset: Sequence[LabeledSentence], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for sent in dataset:
            if "\t" in sent.text or "\n" in sent.text:
                raise ValueError("labeled sentences must not contain tabs or newlines")
            f.write(f"{sent.label.value}\t{sent.text}\n")


def read_labeled(path: str | Path) -> list[LabeledSentence]:
    labels = {label.value: label for label in Label}
    out: list[LabeledSentence] = []
    with open(path, encoding="utf-8") as f:
        for lineno, raw in enumerate(f, start=1):
            line = raw.rstrip("\n").rstrip("\r")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) != 2 or cols[0] not in labels:
                raise ValueError(f"{path}:{lineno}: expected 'label<TAB>text' with a known label")
            out.append(LabeledSentence(cols[1], labels[cols[0]], str(path), lineno - 1))
    return out
