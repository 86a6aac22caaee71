"""Independent reference implementations used only as test oracles.

These deliberately avoid the library's code paths: the BLEU oracle uses a
hand-rolled character scanner instead of compiled regex classes and tuple
arithmetic laid out differently, and the BPE oracle recounts every pair
from scratch at each step instead of maintaining incremental indexes.
"""

from __future__ import annotations

import math
import unicodedata
from collections import Counter


# ---------------------------------------------------------------------------
# BLEU oracle: mixed case, international tokenization, exponential
# smoothing, one reference, standard brevity penalty.
# ---------------------------------------------------------------------------


def _is_punct(c: str) -> bool:
    # The canonical scorer builds its punctuation class by concatenating
    # every P* code point into a regex class, where the backslash acts as
    # an escape and drops out; reproduce that quirk.
    return c != "\\" and unicodedata.category(c).startswith("P")


def _is_symbol(c: str) -> bool:
    return unicodedata.category(c).startswith("S")


def _is_digit(c: str) -> bool:
    return unicodedata.category(c) == "Nd"


def oracle_tokenize_intl(text: str) -> list[str]:
    out = []
    i = 0
    while i < len(text):
        if i + 1 < len(text) and not _is_digit(text[i]) and _is_punct(text[i + 1]):
            out += [text[i], " ", text[i + 1], " "]
            i += 2
        else:
            out.append(text[i])
            i += 1
    text = "".join(out)
    out = []
    i = 0
    while i < len(text):
        if i + 1 < len(text) and _is_punct(text[i]) and not _is_digit(text[i + 1]):
            out += [" ", text[i], " ", text[i + 1]]
            i += 2
        else:
            out.append(text[i])
            i += 1
    text = "".join(out)
    out = []
    for c in text:
        if _is_symbol(c):
            out += [" ", c, " "]
        else:
            out.append(c)
    return "".join(out).split()


def oracle_bleu(hypotheses, references, max_order: int = 4) -> float:
    assert len(hypotheses) == len(references) and hypotheses
    matches = [0] * (max_order + 1)
    candidates = [0] * (max_order + 1)
    hyp_total = 0
    ref_total = 0
    for hyp, ref in zip(hypotheses, references):
        hyp_tok = oracle_tokenize_intl(hyp.rstrip())
        ref_tok = oracle_tokenize_intl(ref.rstrip())
        hyp_total += len(hyp_tok)
        ref_total += len(ref_tok)
        for n in range(1, max_order + 1):
            hyp_ngrams = Counter(
                " ".join(hyp_tok[i : i + n]) for i in range(len(hyp_tok) - n + 1)
            )
            ref_ngrams = Counter(
                " ".join(ref_tok[i : i + n]) for i in range(len(ref_tok) - n + 1)
            )
            candidates[n] += sum(hyp_ngrams.values())
            for gram, count in hyp_ngrams.items():
                matches[n] += min(count, ref_ngrams[gram])

    log_precision_sum = 0.0
    smoothing = 1.0
    for n in range(1, max_order + 1):
        if candidates[n] == 0:
            # The canonical scorer leaves this and all higher orders at a
            # floored log precision.
            log_precision_sum += (max_order - n + 1) * -9999999999
            break
        if matches[n] == 0:
            smoothing *= 2.0
            precision = 100.0 / (smoothing * candidates[n])
        else:
            precision = 100.0 * matches[n] / candidates[n]
        log_precision_sum += math.log(precision)

    if hyp_total >= ref_total:
        bp = 1.0
    else:
        bp = math.exp(1.0 - ref_total / hyp_total)
    return bp * math.exp(log_precision_sum / max_order)


# ---------------------------------------------------------------------------
# Naive BPE learner: full recount of all adjacent pairs at every step,
# lexicographic tie-break on equal frequency.
# ---------------------------------------------------------------------------


def oracle_bpe_merges(lines, target_vocab_size: int, reserved=()) -> list[tuple[str, str]]:
    reserved = frozenset(reserved)
    word_freqs = Counter()
    for line in lines:
        for tok in line.split():
            if tok not in reserved:
                word_freqs[tok] += 1
    words = {w: list(w[:-1]) + [w[-1] + "</w>"] for w in word_freqs}
    vocab = set(reserved)
    for symbols in words.values():
        vocab.update(symbols)
    merges = []
    while len(vocab) < target_vocab_size:
        pair_counts = Counter()
        for w, symbols in words.items():
            n = word_freqs[w]
            for i in range(len(symbols) - 1):
                pair_counts[(symbols[i], symbols[i + 1])] += n
        if not pair_counts:
            raise ValueError("no pairs left")
        best_count = max(pair_counts.values())
        best = min(p for p, c in pair_counts.items() if c == best_count)
        a, b = best
        for w, symbols in words.items():
            out = []
            i = 0
            while i < len(symbols):
                if i + 1 < len(symbols) and symbols[i] == a and symbols[i + 1] == b:
                    out.append(a + b)
                    i += 2
                else:
                    out.append(symbols[i])
                    i += 1
            words[w] = out
        merges.append(best)
        vocab.add(a + b)
    return merges
