"""Desk-scale tag-controlled translation on a synthetic bilingual world.

The generator builds a closed-vocabulary language pair where the two text
domains differ in exactly two controlled ways: original-style target text
is reordered (reverse, by default) relative to the source and may use
synonyms, while translationese target text mirrors the source order and
never does. Source-original pairs therefore have translationese targets,
target-original pairs have translationese sources, and the
original-source/original-target quadrant is deliberately absent so it can
be probed zero-shot.

The model is a single-layer tanh-RNN encoder/decoder with content-based
attention and a bilinear score, written out by hand so its gradients are
finite-difference checkable. The domain tag is an ordinary encoder token
prepended to the source; it is never a legal decoder output.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from . import neural
from .corpus import Corpus, CorpusKind, Origin, SentencePair
from .tagging import TAG_TOKEN
from .textmetrics import bleu
from .util import derive_rng

BOS = "<s>"
EOS = "</s>"
UNK = "<unk>"


# ---------------------------------------------------------------------------
# Quadrant data generation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuadrantSpec:
    """Data-generating process for the synthetic quadrants."""

    vocab_size: int = 50
    p_syn: float = 0.5
    reorder: str = "reverse"  # reverse | identity
    min_len: int = 3
    max_len: int = 8
    src_orig_count: int = 2000
    trg_orig_count: int = 2000
    zero_shot_count: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.reorder not in ("reverse", "identity"):
            raise ValueError(f"unknown reorder rule {self.reorder!r}")
        if not 0.0 <= self.p_syn <= 1.0:
            raise ValueError("p_syn must be in [0, 1]")
        if min(self.src_orig_count, self.trg_orig_count, self.zero_shot_count) <= 0:
            raise ValueError("pair counts must be positive")
        if not 1 <= self.min_len <= self.max_len:
            raise ValueError("invalid sentence length range")


def default_lexicons(vocab_size: int) -> tuple[dict[str, str], dict[str, str]]:
    """Literal lexicon s_i -> t_i and synonym lexicon t_i -> u_i."""
    literal = {f"s{i}": f"t{i}" for i in range(vocab_size)}
    synonyms = {f"t{i}": f"u{i}" for i in range(vocab_size)}
    return literal, synonyms


@dataclass
class ZeroShotSet:
    """Natural-order sources with a translationese (literal) and a natural
    (reordered, synonym-eligible) reference each."""

    sources: list[str]
    literal_refs: list[str]
    natural_refs: list[str]


@dataclass
class QuadrantData:
    src_original: Corpus
    trg_original: Corpus
    zero_shot: ZeroShotSet
    spec: QuadrantSpec


def _validate_lexicons(literal: dict[str, str], synonyms: dict[str, str]) -> None:
    surfaces = list(literal.keys()) + list(literal.values()) + list(synonyms.values())
    if len(set(literal.values())) != len(literal) or len(set(synonyms.values())) != len(synonyms):
        raise ValueError("lexicon collision: mappings must be injective")
    if len(set(surfaces)) != len(surfaces):
        raise ValueError("lexicon collision: surface forms must be distinct")
    for t in synonyms:
        if t not in set(literal.values()):
            raise ValueError(f"synonym lexicon entry {t!r} is not a literal target token")


def generate_quadrant_data(
    spec: QuadrantSpec,
    literal_lexicon: dict[str, str] | None = None,
    synonym_lexicon: dict[str, str] | None = None,
) -> QuadrantData:
    """Draw all three splits, fully determined by the spec and its seed."""
    if literal_lexicon is None or synonym_lexicon is None:
        literal_lexicon, synonym_lexicon = default_lexicons(spec.vocab_size)
    _validate_lexicons(literal_lexicon, synonym_lexicon)

    source_tokens = sorted(literal_lexicon)
    target_tokens = [literal_lexicon[s] for s in source_tokens]
    synonym_tokens = [synonym_lexicon[t] for t in target_tokens]
    vocab_size = len(source_tokens)

    def reorder(ids: np.ndarray) -> np.ndarray:
        return ids[::-1] if spec.reorder == "reverse" else ids

    def draw_ids(rng) -> np.ndarray:
        length = int(rng.integers(spec.min_len, spec.max_len + 1))
        return rng.integers(0, vocab_size, size=length)

    def natural_target(ids: np.ndarray, rng) -> str:
        ordered = reorder(ids)
        toks = [
            synonym_tokens[i] if rng.random() < spec.p_syn else target_tokens[i]
            for i in ordered
        ]
        return " ".join(toks)

    rng = derive_rng(spec.seed, "quadrant", "src-original")
    src_pairs = []
    for _ in range(spec.src_orig_count):
        ids = draw_ids(rng)
        x = " ".join(source_tokens[i] for i in ids)
        y = " ".join(target_tokens[i] for i in ids)
        src_pairs.append(SentencePair(x, y, Origin.SOURCE_ORIGINAL))

    rng = derive_rng(spec.seed, "quadrant", "trg-original")
    back_map = {t: s for s, t in literal_lexicon.items()}
    back_map.update({u: back_map[t] for t, u in synonym_lexicon.items()})
    trg_pairs = []
    for _ in range(spec.trg_orig_count):
        ids = draw_ids(rng)
        y = natural_target(ids, rng)
        x = " ".join(back_map[tok] for tok in y.split())
        trg_pairs.append(SentencePair(x, y, Origin.TARGET_ORIGINAL))

    rng = derive_rng(spec.seed, "quadrant", "zero-shot")
    sources, literal_refs, natural_refs = [], [], []
    for _ in range(spec.zero_shot_count):
        ids = draw_ids(rng)
        sources.append(" ".join(source_tokens[i] for i in ids))
        literal_refs.append(" ".join(target_tokens[i] for i in ids))
        natural_refs.append(natural_target(ids, rng))

    return QuadrantData(
        src_original=Corpus.parallel(src_pairs),
        trg_original=Corpus.parallel(trg_pairs),
        zero_shot=ZeroShotSet(sources, literal_refs, natural_refs),
        spec=spec,
    )


# ---------------------------------------------------------------------------
# Model
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ToyMtConfig:
    embed_dim: int = 32
    hidden_dim: int = 64
    max_decode_len: int = 24
    learning_rate: float = 0.5
    epsilon: float = 1e-8
    initial_accumulator: float = 0.1
    clip_norm: float = 1.0  # 0 disables gradient clipping
    ema_decay: float = 0.995
    batch_size: int = 16
    epochs: int = 6
    eval_every: int = 500
    seed: int = 0


class ToyMtModel:
    """Shared-vocabulary encoder/decoder with attention."""

    def __init__(self, vocab: list[str], config: ToyMtConfig, params: neural.ParameterSet):
        self.vocab = vocab
        self.config = config
        self.params = params
        self.token_ids = {tok: i for i, tok in enumerate(vocab)}
        self.bos_id = self.token_ids[BOS]
        self.eos_id = self.token_ids[EOS]
        self.unk_id = self.token_ids[UNK]
        self.tag_id = self.token_ids[TAG_TOKEN]
        # The tag is a source-side control token, never a legal output.
        self.banned_output_ids = (self.tag_id, self.bos_id)

    def encode_ids(self, line: str, natural: bool = False) -> np.ndarray:
        tokens = line.split()
        if natural:
            tokens = [TAG_TOKEN] + tokens
        return np.array([self.token_ids.get(t, self.unk_id) for t in tokens], dtype=np.int64)

    def target_ids(self, line: str) -> np.ndarray:
        return np.array([self.token_ids.get(t, self.unk_id) for t in line.split()], dtype=np.int64)

    def checksum(self) -> str:
        return self.params.checksum()


def build_toymt(vocab: list[str], config: ToyMtConfig = ToyMtConfig()) -> ToyMtModel:
    for special in (BOS, EOS, UNK, TAG_TOKEN):
        if special not in vocab:
            raise ValueError(f"vocabulary must contain the control token {special!r}")
    params = neural.ParameterSet(config.seed, np.float32)
    v, e, h = len(vocab), config.embed_dim, config.hidden_dim
    a = 2 * h + e  # annotation: [forward state; backward state; embedding]
    params.add_embedding("embed", (v, e))
    params.add_dense("enc_fwd_x", (e, h))
    params.add_dense("enc_fwd_h", (h, h))
    params.add_zeros("enc_fwd_b", (h,))
    params.add_dense("enc_bwd_x", (e, h))
    params.add_dense("enc_bwd_h", (h, h))
    params.add_zeros("enc_bwd_b", (h,))
    params.add_dense("bridge_w", (2 * h, h))
    params.add_zeros("bridge_b", (h,))
    params.add_dense("dec_x", (e, h))
    params.add_dense("dec_h", (h, h))
    params.add_dense("dec_c", (a, h))
    params.add_zeros("dec_b", (h,))
    params.add_dense("att_w", (h, a))
    params.add_dense("comb_s", (h, h))
    params.add_dense("comb_c", (a, h))
    params.add_zeros("comb_b", (h,))
    params.add_dense("out_w", (h, v))
    params.add_zeros("out_b", (v,))
    return ToyMtModel(vocab, config, params)


def vocab_from_corpus(train: Corpus) -> list[str]:
    train.require_kind(CorpusKind.PARALLEL, "vocab_from_corpus")
    tokens = set()
    for pair in train.items:
        tokens.update(pair.source.split())
        tokens.update(pair.target.split())
    tokens.update((BOS, EOS, UNK, TAG_TOKEN))
    return sorted(tokens)


class _Encoding:
    """Cache of one bidirectional encoder pass.

    Attention operates over annotation vectors [fwd_t; bwd_t; emb_t]: the
    two recurrent directions give every position a two-sided signature (so
    attention can walk either way), and the raw embedding makes the
    attended token's identity directly visible to the readout.
    """

    __slots__ = ("emb", "fwd", "fwd_prev", "bwd", "bwd_next", "annotations", "summary")

    def __init__(self, arrays, src_ids: np.ndarray):
        e = arrays["embed"][src_ids]
        n = len(src_ids)
        hdim = arrays["enc_fwd_b"].shape[0]
        dtype = arrays["enc_fwd_b"].dtype

        fwd = np.empty((n, hdim), dtype=dtype)
        fwd_prev = []
        h = np.zeros(hdim, dtype=dtype)
        for t in range(n):
            fwd_prev.append(h)
            h = np.tanh(e[t] @ arrays["enc_fwd_x"] + h @ arrays["enc_fwd_h"] + arrays["enc_fwd_b"])
            fwd[t] = h

        bwd = np.empty((n, hdim), dtype=dtype)
        bwd_next = [None] * n
        h = np.zeros(hdim, dtype=dtype)
        for t in range(n - 1, -1, -1):
            bwd_next[t] = h
            h = np.tanh(e[t] @ arrays["enc_bwd_x"] + h @ arrays["enc_bwd_h"] + arrays["enc_bwd_b"])
            bwd[t] = h

        self.emb = e
        self.fwd = fwd
        self.fwd_prev = fwd_prev
        self.bwd = bwd
        self.bwd_next = bwd_next
        self.annotations = np.concatenate([fwd, bwd, e], axis=1)
        self.summary = np.concatenate([fwd[-1], bwd[0]])


def _decoder_step(arrays, in_emb: np.ndarray, s_prev: np.ndarray, c_prev: np.ndarray, annotations: np.ndarray):
    # Input feeding: the previous attention context enters the recurrence,
    # so the decoder state tracks where in the source it has been.
    s = np.tanh(
        in_emb @ arrays["dec_x"]
        + s_prev @ arrays["dec_h"]
        + c_prev @ arrays["dec_c"]
        + arrays["dec_b"]
    )
    q = s @ arrays["att_w"]
    scores = annotations @ q
    scores = scores - scores.max()
    alpha = np.exp(scores)
    alpha /= alpha.sum()
    context = alpha @ annotations
    readout = np.tanh(s @ arrays["comb_s"] + context @ arrays["comb_c"] + arrays["comb_b"])
    logits = readout @ arrays["out_w"] + arrays["out_b"]
    return s, q, alpha, context, readout, logits


def _log_softmax(logits: np.ndarray) -> np.ndarray:
    shifted = logits - logits.max()
    return shifted - np.log(np.exp(shifted).sum())


def _pair_loss_and_grads(params: neural.ParameterSet, model: ToyMtModel, pair: SentencePair, scale: float) -> float:
    """Teacher-forced cross-entropy for one pair; gradients are accumulated
    into ``params.grads`` scaled by ``scale``. Returns the summed loss."""
    arrays, grads = params.arrays, params.grads
    src_ids = model.encode_ids(pair.source, natural=pair.tagged)
    trg_ids = model.target_ids(pair.target)
    in_ids = np.concatenate(([model.bos_id], trg_ids))
    out_ids = np.concatenate((trg_ids, [model.eos_id]))

    enc = _Encoding(arrays, src_ids)
    bridge_pre = enc.summary @ arrays["bridge_w"] + arrays["bridge_b"]
    s0 = np.tanh(bridge_pre)

    annotations = enc.annotations
    steps = []
    loss = 0.0
    s_prev = s0
    c_prev = np.zeros(annotations.shape[1], dtype=s0.dtype)
    in_emb = arrays["embed"][in_ids]
    for j in range(len(in_ids)):
        s, q, alpha, context, readout, logits = _decoder_step(
            arrays, in_emb[j], s_prev, c_prev, annotations
        )
        logp = _log_softmax(logits)
        loss -= float(logp[out_ids[j]])
        probs = np.exp(logp)
        steps.append((s_prev, c_prev, s, q, alpha, context, readout, probs))
        s_prev = s
        c_prev = context

    d_annotations = np.zeros_like(annotations)
    ds_next = np.zeros_like(s0)
    dc_next = np.zeros(annotations.shape[1], dtype=s0.dtype)
    for j in range(len(in_ids) - 1, -1, -1):
        s_prev_j, c_prev_j, s, q, alpha, context, readout, probs = steps[j]
        d_logits = probs * scale
        d_logits[out_ids[j]] -= scale

        grads["out_w"] += np.outer(readout, d_logits)
        grads["out_b"] += d_logits
        d_readout = arrays["out_w"] @ d_logits
        d_pre_read = d_readout * (1.0 - readout * readout)
        grads["comb_s"] += np.outer(s, d_pre_read)
        grads["comb_c"] += np.outer(context, d_pre_read)
        grads["comb_b"] += d_pre_read
        ds = d_pre_read @ arrays["comb_s"].T
        d_context = d_pre_read @ arrays["comb_c"].T + dc_next

        d_alpha = annotations @ d_context
        d_annotations += np.outer(alpha, d_context)
        d_scores = alpha * (d_alpha - float(d_alpha @ alpha))
        d_q = annotations.T @ d_scores
        d_annotations += np.outer(d_scores, q)
        grads["att_w"] += np.outer(s, d_q)
        ds += d_q @ arrays["att_w"].T

        ds += ds_next
        d_pre_s = ds * (1.0 - s * s)
        grads["dec_x"] += np.outer(in_emb[j], d_pre_s)
        grads["embed"][in_ids[j]] += d_pre_s @ arrays["dec_x"].T
        grads["dec_h"] += np.outer(s_prev_j, d_pre_s)
        grads["dec_c"] += np.outer(c_prev_j, d_pre_s)
        grads["dec_b"] += d_pre_s
        ds_next = d_pre_s @ arrays["dec_h"].T
        dc_next = d_pre_s @ arrays["dec_c"].T

    d_bridge_pre = ds_next * (1.0 - s0 * s0)
    grads["bridge_w"] += np.outer(enc.summary, d_bridge_pre)
    grads["bridge_b"] += d_bridge_pre
    d_summary = d_bridge_pre @ arrays["bridge_w"].T

    hidden = enc.fwd.shape[1]
    d_fwd = d_annotations[:, :hidden].copy()
    d_bwd = d_annotations[:, hidden : 2 * hidden].copy()
    d_emb_rows = d_annotations[:, 2 * hidden :]
    d_fwd[-1] += d_summary[:hidden]
    d_bwd[0] += d_summary[hidden:]

    # forward direction: gradient carry flows toward earlier positions
    dh_carry = np.zeros(hidden, dtype=s0.dtype)
    for t in range(len(src_ids) - 1, -1, -1):
        dh = d_fwd[t] + dh_carry
        d_pre = dh * (1.0 - enc.fwd[t] * enc.fwd[t])
        grads["enc_fwd_x"] += np.outer(enc.emb[t], d_pre)
        grads["embed"][src_ids[t]] += d_pre @ arrays["enc_fwd_x"].T + d_emb_rows[t]
        grads["enc_fwd_h"] += np.outer(enc.fwd_prev[t], d_pre)
        grads["enc_fwd_b"] += d_pre
        dh_carry = d_pre @ arrays["enc_fwd_h"].T

    # backward direction: states run right-to-left, so the carry flows
    # toward later positions
    dh_carry = np.zeros(hidden, dtype=s0.dtype)
    for t in range(len(src_ids)):
        dh = d_bwd[t] + dh_carry
        d_pre = dh * (1.0 - enc.bwd[t] * enc.bwd[t])
        grads["enc_bwd_x"] += np.outer(enc.emb[t], d_pre)
        grads["embed"][src_ids[t]] += d_pre @ arrays["enc_bwd_x"].T
        grads["enc_bwd_h"] += np.outer(enc.bwd_next[t], d_pre)
        grads["enc_bwd_b"] += d_pre
        dh_carry = d_pre @ arrays["enc_bwd_h"].T

    return loss


def batch_loss_and_grads(model: ToyMtModel, pairs) -> tuple[float, dict[str, np.ndarray]]:
    """Mean per-token loss and gradients over a batch of pairs; also the
    entry point for finite-difference gradient checks."""
    params = model.params
    params.zero_grads()
    total_tokens = sum(len(p.target.split()) + 1 for p in pairs)
    scale = 1.0 / total_tokens
    loss = 0.0
    for pair in pairs:
        loss += _pair_loss_and_grads(params, model, pair, scale)
    return loss / total_tokens, params.grads


# ---------------------------------------------------------------------------
# Decoding
# ---------------------------------------------------------------------------


def decode(model: ToyMtModel, source: str, natural: bool, beam: int = 1) -> str:
    """Translate one raw source line. ``natural`` prepends the domain tag to
    the encoder input; nothing else differs between the two modes."""
    if not source.strip():
        raise ValueError("cannot decode an empty source")
    if beam < 1:
        raise ValueError("beam must be >= 1")
    arrays = model.params.arrays
    src_ids = model.encode_ids(source, natural=natural)
    enc = _Encoding(arrays, src_ids)
    s0 = np.tanh(enc.summary @ arrays["bridge_w"] + arrays["bridge_b"])
    if beam == 1:
        tokens = _greedy(model, enc.annotations, s0)
    else:
        tokens = _beam_search(model, enc.annotations, s0, beam)
    return " ".join(model.vocab[i] for i in tokens)


def _masked_logp(model: ToyMtModel, logits: np.ndarray) -> np.ndarray:
    logits = logits.astype(np.float64)
    logits[list(model.banned_output_ids)] = -np.inf
    shifted = logits - logits.max()
    return shifted - np.log(np.exp(shifted).sum())


def _greedy(model: ToyMtModel, annotations, s0) -> list[int]:
    arrays = model.params.arrays
    tokens: list[int] = []
    prev_id = model.bos_id
    s_prev = s0
    c_prev = np.zeros(annotations.shape[1], dtype=s0.dtype)
    for _ in range(model.config.max_decode_len):
        s, _, _, context, _, logits = _decoder_step(
            arrays, arrays["embed"][prev_id], s_prev, c_prev, annotations
        )
        logp = _masked_logp(model, logits)
        next_id = int(np.argmax(logp))
        if next_id == model.eos_id:
            break
        tokens.append(next_id)
        prev_id = next_id
        s_prev = s
        c_prev = context
    return tokens


def _beam_search(model: ToyMtModel, annotations, s0, beam: int) -> list[int]:
    # Finished hypotheses are ranked by length-normalized log probability
    # (normalization exponent 1.0); EOS counts toward the length.
    arrays = model.params.arrays
    live = [(0.0, (), model.bos_id, s0, np.zeros(annotations.shape[1], dtype=s0.dtype))]
    done: list[tuple[float, tuple[int, ...]]] = []
    for _ in range(model.config.max_decode_len):
        candidates = []
        for logprob, tokens, prev_id, s_prev, c_prev in live:
            s, _, _, context, _, logits = _decoder_step(
                arrays, arrays["embed"][prev_id], s_prev, c_prev, annotations
            )
            logp = _masked_logp(model, logits)
            for token_id in range(len(logp)):
                if not np.isfinite(logp[token_id]):
                    continue
                candidates.append(
                    (logprob + float(logp[token_id]), tokens + (token_id,), token_id, s, context)
                )
        candidates.sort(key=lambda c: (-c[0], c[1]))
        live = []
        for cand in candidates[: beam]:
            logprob, tokens, token_id, s, context = cand
            if token_id == model.eos_id:
                done.append((logprob / len(tokens), tokens))
            else:
                live.append(cand)
        if not live:
            break
    for logprob, tokens, _token_id, _s, _c in live:
        if tokens:
            done.append((logprob / len(tokens), tokens))
    if not done:
        return []
    done.sort(key=lambda d: (-d[0], d[1]))
    tokens = done[0][1]
    return [i for i in tokens if i != model.eos_id]


# ---------------------------------------------------------------------------
# Training
# ---------------------------------------------------------------------------


@dataclass
class ToyTrainingLog:
    losses: list[float] = field(default_factory=list)
    evals: list[tuple[int, float]] = field(default_factory=list)
    best_step: int = -1
    best_score: float = -1.0


def _dev_bleu(model: ToyMtModel, dev: Corpus) -> float:
    """Checkpoint score: BLEU over the union of natural-mode and
    translationese-mode decodes of every dev source against its reference."""
    hyps, refs = [], []
    for pair in dev.items:
        for natural in (False, True):
            hyps.append(decode(model, pair.source, natural=natural))
            refs.append(pair.target)
    if not any(h.strip() for h in hyps):
        return 0.0
    return bleu(hyps, refs)


def train_toymt(
    train: Corpus,
    dev: Corpus,
    config: ToyMtConfig = ToyMtConfig(),
) -> tuple[ToyMtModel, ToyTrainingLog]:
    train.require_kind(CorpusKind.PARALLEL, "train_toymt")
    dev.require_kind(CorpusKind.PARALLEL, "train_toymt")
    if not train.items or not dev.items:
        raise ValueError("training and dev corpora must be non-empty")
    tagged_count = sum(1 for p in train.items if p.tagged)
    if tagged_count in (0, len(train.items)):
        warnings.warn(
            "training data is single-domain; the tag will carry no information",
            stacklevel=2,
        )

    model = build_toymt(vocab_from_corpus(train), config)
    params = model.params
    state = neural.AdagradState(config.learning_rate, config.epsilon, config.initial_accumulator)
    ema = neural.EmaState.from_params(params, config.ema_decay)
    rng = derive_rng(config.seed, "toymt-train")

    log = ToyTrainingLog()
    best_arrays = None
    step = 0

    def run_dev_eval() -> None:
        nonlocal best_arrays
        raw = params.copy_arrays()
        params.load_arrays(ema.shadow)
        score = _dev_bleu(model, dev)
        params.load_arrays(raw)
        log.evals.append((step, score))
        if score > log.best_score:
            log.best_score = score
            log.best_step = step
            best_arrays = {name: arr.copy() for name, arr in ema.shadow.items()}

    pairs = list(train.items)
    for _epoch in range(config.epochs):
        order = rng.permutation(len(pairs))
        for start in range(0, len(order), config.batch_size):
            batch = [pairs[i] for i in order[start : start + config.batch_size]]
            loss, _ = batch_loss_and_grads(model, batch)
            if not math.isfinite(loss):
                raise ValueError(f"non-finite training loss at step {step + 1}")
            if config.clip_norm > 0:
                neural.clip_gradients(params, config.clip_norm)
            neural.adagrad_update(params, state)
            neural.ema_update(ema, params)
            step += 1
            log.losses.append(loss)
            if step % config.eval_every == 0:
                run_dev_eval()
    if not log.evals or log.evals[-1][0] != step:
        run_dev_eval()

    params.load_arrays(best_arrays)
    return model, log


# ---------------------------------------------------------------------------
# Checkpointing
# ---------------------------------------------------------------------------


def save_toymt(model: ToyMtModel, path: str | Path) -> None:
    config = {"kind": "toymt", "config": asdict(model.config), "vocab": model.vocab}
    neural.save_checkpoint(path, config, model.params)


def load_toymt(path: str | Path) -> ToyMtModel:
    ckpt = neural.load_checkpoint(path)
    if ckpt.config.get("kind") != "toymt":
        raise ValueError(f"{path}: not a toy translation checkpoint")
    config = ToyMtConfig(**ckpt.config["config"])
    return ToyMtModel(ckpt.config["vocab"], config, ckpt.params)
