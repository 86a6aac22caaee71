"""Byte-pair-encoding subword segmentation.

Learning iteratively merges the most frequent adjacent symbol pair until the
vocabulary reaches its target size; equal-frequency ties go to the
lexicographically smaller pair so a model is a pure function of its corpus.

Internal representation appends an end-of-word sentinel to the word-final
symbol while merges are learned. Emitted segmentations use the inverse
convention instead: every non-final piece of a word carries a continuation
suffix (``@@``), the final piece is bare. ``remove_bpe`` inverts this exactly
for any line that contains neither marker string and has single spaces
between tokens.

Reserved control tokens are emitted verbatim as single symbols and never
participate in merges.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

from .util import sha256_bytes

END_OF_WORD = "</w>"
CONTINUATION = "@@"

_FORMAT_VERSION = "transtag-bpe/v1"


@dataclass
class BpeModel:
    """An ordered merge list plus the vocabulary it induces."""

    merges: list[tuple[str, str]]
    vocab: set[str]
    target_vocab_size: int
    reserved: frozenset[str] = frozenset()
    recorded_vocab_size: int = -1  # learned |vocab|, preserved across save/load

    def __post_init__(self):
        if self.recorded_vocab_size < 0:
            self.recorded_vocab_size = len(self.vocab)
        self._ranks = {pair: i for i, pair in enumerate(self.merges)}
        self._word_cache: dict[str, list[str]] = {}

    # -- segmentation -------------------------------------------------------

    def segment(self, line: str) -> list[str]:
        """Split a line into subword symbols (whitespace runs collapse)."""
        out: list[str] = []
        for token in line.split():
            if token in self.reserved:
                out.append(token)
                continue
            out.extend(self._encode_word(token))
        return out

    def segment_line(self, line: str) -> str:
        return " ".join(self.segment(line))

    def _encode_word(self, word: str) -> list[str]:
        cached = self._word_cache.get(word)
        if cached is not None:
            return cached
        symbols = list(word[:-1]) + [word[-1] + END_OF_WORD]
        while len(symbols) > 1:
            best_rank = None
            best_idx = -1
            for i in range(len(symbols) - 1):
                rank = self._ranks.get((symbols[i], symbols[i + 1]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
                    best_idx = i
            if best_rank is None:
                break
            a, b = self.merges[best_rank]
            symbols = _merge_once(symbols, a, b)
        pieces = [s + CONTINUATION for s in symbols[:-1]]
        pieces.append(symbols[-1].removesuffix(END_OF_WORD))
        self._word_cache[word] = pieces
        return pieces

    # -- persistence --------------------------------------------------------

    def serialize(self) -> str:
        header = "\t".join(
            [
                _FORMAT_VERSION,
                f"vocab={self.recorded_vocab_size}",
                f"target={self.target_vocab_size}",
                f"eow={END_OF_WORD}",
                f"cont={CONTINUATION}",
                "reserved=" + ",".join(sorted(self.reserved)),
            ]
        )
        lines = [header]
        lines.extend(f"{a} {b}" for a, b in self.merges)
        return "\n".join(lines) + "\n"

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.serialize(), encoding="utf-8", newline="\n")

    def content_hash(self) -> str:
        return sha256_bytes(self.serialize().encode("utf-8"))

    @classmethod
    def load(cls, path: str | Path) -> "BpeModel":
        text = Path(path).read_text(encoding="utf-8")
        lines = text.splitlines()
        if not lines or not lines[0].startswith(_FORMAT_VERSION):
            raise ValueError(f"{path}: not a {_FORMAT_VERSION} model file")
        fields = dict(item.split("=", 1) for item in lines[0].split("\t")[1:])
        reserved = frozenset(t for t in fields.get("reserved", "").split(",") if t)
        merges = []
        for lineno, line in enumerate(lines[1:], start=2):
            if not line:
                continue
            parts = line.split(" ")
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: malformed merge line {line!r}")
            merges.append((parts[0], parts[1]))
        # The vocabulary is reconstructed from the merge list; character
        # symbols that never merged are not listed, which does not affect
        # segmentation (unknown characters pass through unchanged).
        vocab = set(reserved)
        for a, b in merges:
            vocab.update((a, b, a + b))
        return cls(
            merges,
            vocab,
            int(fields.get("target", len(vocab))),
            reserved,
            recorded_vocab_size=int(fields.get("vocab", len(vocab))),
        )


def _merge_once(symbols: list[str], a: str, b: str) -> list[str]:
    """Replace left-to-right non-overlapping occurrences of (a, b) with a+b."""
    out = []
    i = 0
    n = len(symbols)
    while i < n:
        if i + 1 < n and symbols[i] == a and symbols[i + 1] == b:
            out.append(a + b)
            i += 2
        else:
            out.append(symbols[i])
            i += 1
    return out


def _word_frequencies(lines, reserved: frozenset[str]) -> Counter:
    freqs: Counter = Counter()
    for line in lines:
        for token in line.split():
            if token not in reserved:
                freqs[token] += 1
    return freqs


def learn_bpe(lines, target_vocab_size: int, reserved=()) -> BpeModel:
    """Learn a merge list from an iterable of text lines.

    For a shared vocabulary over a parallel corpus, pass both sides'
    lines. Raises if the target size is not above the initial character
    inventory, or is unreachable because the corpus runs out of pairs.
    """
    reserved = frozenset(reserved)
    for token in reserved:
        if not token or any(c.isspace() for c in token) or "," in token:
            raise ValueError(f"reserved token {token!r} must be non-empty, without whitespace or commas")

    freqs = _word_frequencies(lines, reserved)
    if not freqs:
        raise ValueError("cannot learn subwords from an empty corpus")

    # Deterministic word order: by token, once.
    words = [(list(w[:-1]) + [w[-1] + END_OF_WORD], n) for w, n in sorted(freqs.items())]

    vocab: set[str] = set(reserved)
    for symbols, _ in words:
        vocab.update(symbols)
    if target_vocab_size <= len(vocab):
        raise ValueError(
            f"target vocab size {target_vocab_size} must exceed the initial "
            f"inventory of {len(vocab)} (character symbols plus reserved tokens)"
        )

    pair_counts: Counter = Counter()
    pair_words: dict[tuple[str, str], set[int]] = {}
    for wi, (symbols, n) in enumerate(words):
        for pair in zip(symbols, symbols[1:]):
            pair_counts[pair] += n
            pair_words.setdefault(pair, set()).add(wi)

    # Lazy max-heap keyed by (-count, pair): stale entries are skipped when
    # their recorded count no longer matches the live table.
    heap = [(-count, pair) for pair, count in pair_counts.items()]
    heapq.heapify(heap)

    merges: list[tuple[str, str]] = []
    while len(vocab) < target_vocab_size:
        best = None
        while heap:
            neg, pair = heapq.heappop(heap)
            if pair_counts.get(pair, 0) == -neg and -neg > 0:
                best = pair
                break
        if best is None:
            raise ValueError(
                f"target vocab size {target_vocab_size} unreachable: no pairs left after "
                f"{len(merges)} merges (corpus too small)"
            )

        a, b = best
        merged = a + b
        changed: set[tuple[str, str]] = set()
        for wi in sorted(pair_words.get(best, ())):
            symbols, n = words[wi]
            for pair in zip(symbols, symbols[1:]):
                pair_counts[pair] -= n
                if pair_counts[pair] <= 0:
                    del pair_counts[pair]
                changed.add(pair)
                ws = pair_words.get(pair)
                if ws is not None:
                    ws.discard(wi)
            new_symbols = _merge_once(symbols, a, b)
            words[wi] = (new_symbols, n)
            for pair in zip(new_symbols, new_symbols[1:]):
                pair_counts[pair] += n
                pair_words.setdefault(pair, set()).add(wi)
                changed.add(pair)
        for pair in changed:
            count = pair_counts.get(pair, 0)
            if count > 0:
                heapq.heappush(heap, (-count, pair))

        merges.append(best)
        vocab.add(merged)

    return BpeModel(merges, vocab, target_vocab_size, reserved)


def apply_bpe(model: BpeModel, line: str) -> str:
    """Segment one line; reserved tokens pass through unsplit."""
    return model.segment_line(line)


def remove_bpe(line: str) -> str:
    """Invert apply_bpe: rejoin continuation-marked pieces into words."""
    words: list[str] = []
    current = ""
    for piece in line.split():
        if piece.endswith(CONTINUATION) and len(piece) > len(CONTINUATION):
            current += piece[: -len(CONTINUATION)]
        else:
            current += piece
            words.append(current)
            current = ""
    if current:
        words.append(current)
    return " ".join(words)
