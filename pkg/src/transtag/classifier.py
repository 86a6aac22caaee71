"""Binary original-vs-translated sentence classifier.

A small convolutional network over subword tokens: embedding layer, three
sequentially stacked ReLU convolutions over time (widths 3/4/5 by default,
same-padded), max-pool over time, and a single sigmoid output. Forward and
backward passes are written out by hand so the gradients can be verified
against finite differences.

Training uses Adagrad with class-uniform batch sampling; checkpoints are
ranked by F1 on the development set with the Original class as positive,
ties going to the earliest checkpoint.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from . import neural
from .subword import BpeModel
from .util import derive_rng


class Label(Enum):
    ORIGINAL = "original"
    TRANSLATED = "translated"


@dataclass(frozen=True)
class LabeledSentence:
    """A target-language sentence with its provenance label."""

    text: str
    label: Label
    source_name: str = ""
    line_index: int = -1

    def __post_init__(self):
        if not self.text.strip():
            raise ValueError("labeled sentence must not be empty")


@dataclass(frozen=True)
class ClassifierConfig:
    embed_dim: int = 64
    conv_widths: tuple[int, ...] = (3, 4, 5)
    filters: int = 64
    dropout: float = 0.0
    max_subwords: int = 256
    learning_rate: float = 0.1
    epsilon: float = 1e-8
    batch_size: int = 32
    epochs: int = 5
    eval_every: int = 200
    seed: int = 0


@dataclass
class EvalStats:
    precision: float
    recall: float
    f1: float
    tp: int
    fp: int
    fn: int
    tn: int

    @classmethod
    def from_counts(cls, tp: int, fp: int, fn: int, tn: int) -> "EvalStats":
        precision = tp / (tp + fp) if tp + fp > 0 else 0.0
        recall = tp / (tp + fn) if tp + fn > 0 else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        return cls(precision, recall, f1, tp, fp, fn, tn)


UNK = "<unk>"


class ClassifierModel:
    """Vocabulary plus parameters of the convolutional classifier."""

    def __init__(self, bpe: BpeModel, config: ClassifierConfig, token_ids: dict[str, int], params: neural.ParameterSet):
        self.bpe = bpe
        self.config = config
        self.token_ids = token_ids
        self.params = params

    def encode(self, text: str) -> np.ndarray:
        symbols = self.bpe.segment(text)[: self.config.max_subwords]
        unk = self.token_ids[UNK]
        return np.array([self.token_ids.get(s, unk) for s in symbols], dtype=np.int64)

    def checksum(self) -> str:
        return self.params.checksum()


def _visible_vocab(bpe: BpeModel) -> list[str]:
    from .subword import CONTINUATION, END_OF_WORD

    visible = set(bpe.reserved)
    for symbol in bpe.vocab:
        if symbol in bpe.reserved:
            continue
        if symbol.endswith(END_OF_WORD):
            visible.add(symbol[: -len(END_OF_WORD)])
        else:
            visible.add(symbol + CONTINUATION)
    visible.add(UNK)
    return sorted(visible)


def build_classifier(bpe: BpeModel, config: ClassifierConfig = ClassifierConfig()) -> ClassifierModel:
    token_ids = {symbol: i for i, symbol in enumerate(_visible_vocab(bpe))}
    params = neural.ParameterSet(config.seed, np.float32)
    params.add_embedding("embed", (len(token_ids), config.embed_dim))
    in_dim = config.embed_dim
    for li, width in enumerate(config.conv_widths):
        params.add_dense(f"conv{li}_kernel", (width, in_dim, config.filters))
        params.add_zeros(f"conv{li}_bias", (config.filters,))
        in_dim = config.filters
    params.add_dense("out_w", (config.filters, 1))
    params.add_zeros("out_b", (1,))
    return ClassifierModel(bpe, config, token_ids, params)


def _conv_forward(x: np.ndarray, kernel: np.ndarray, bias: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Same-padded convolution over time: x (T, Din) -> (T, F)."""
    width = kernel.shape[0]
    t = x.shape[0]
    left = (width - 1) // 2
    right = width - 1 - left
    padded = np.zeros((t + width - 1, x.shape[1]), dtype=x.dtype)
    padded[left : left + t] = x
    out = np.tile(bias, (t, 1)).astype(x.dtype)
    for k in range(width):
        out += padded[k : k + t] @ kernel[k]
    return out, padded


def _conv_backward(
    d_out: np.ndarray, padded: np.ndarray, kernel: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    width = kernel.shape[0]
    t = d_out.shape[0]
    left = (width - 1) // 2
    d_kernel = np.zeros_like(kernel)
    d_bias = d_out.sum(axis=0)
    d_padded = np.zeros_like(padded)
    for k in range(width):
        d_kernel[k] = padded[k : k + t].T @ d_out
        d_padded[k : k + t] += d_out @ kernel[k].T
    return d_padded[left : left + t], d_kernel, d_bias


def _forward(params: neural.ParameterSet, config: ClassifierConfig, ids: np.ndarray, dropout_rng=None):
    arrays = params.arrays
    x = arrays["embed"][ids]
    cache = {"ids": ids, "layers": []}
    for li, width in enumerate(config.conv_widths):
        z, padded = _conv_forward(x, arrays[f"conv{li}_kernel"], arrays[f"conv{li}_bias"])
        h = np.maximum(z, 0.0)
        cache["layers"].append((padded, z, h))
        x = h
    pooled = x.max(axis=0)
    argmax = x.argmax(axis=0)
    cache["argmax"] = argmax
    if dropout_rng is not None and config.dropout > 0.0:
        keep = (dropout_rng.random(pooled.shape) >= config.dropout) / (1.0 - config.dropout)
        pooled = pooled * keep.astype(pooled.dtype)
        cache["drop_mask"] = keep
    else:
        cache["drop_mask"] = None
    cache["pooled"] = pooled
    logit = float(pooled @ arrays["out_w"][:, 0] + arrays["out_b"][0])
    return logit, cache


def _backward(params: neural.ParameterSet, config: ClassifierConfig, cache: dict, d_logit: float) -> None:
    arrays, grads = params.arrays, params.grads
    pooled = cache["pooled"]
    grads["out_w"][:, 0] += pooled * d_logit
    grads["out_b"][0] += d_logit
    d_pooled = arrays["out_w"][:, 0] * d_logit
    if cache["drop_mask"] is not None:
        d_pooled = d_pooled * cache["drop_mask"].astype(d_pooled.dtype)

    last_h = cache["layers"][-1][2]
    d_h = np.zeros_like(last_h)
    d_h[cache["argmax"], np.arange(last_h.shape[1])] = d_pooled

    for li in range(len(config.conv_widths) - 1, -1, -1):
        padded, z, _h = cache["layers"][li]
        d_z = d_h * (z > 0.0)
        d_x, d_kernel, d_bias = _conv_backward(d_z, padded, arrays[f"conv{li}_kernel"])
        grads[f"conv{li}_kernel"] += d_kernel
        grads[f"conv{li}_bias"] += d_bias
        d_h = d_x

    np.add.at(grads["embed"], cache["ids"], d_h)


def _loss_and_dlogit(logit: float, y: float) -> tuple[float, float]:
    # Numerically stable binary cross-entropy on the logit.
    loss = max(logit, 0.0) - logit * y + math.log1p(math.exp(-abs(logit)))
    p = 1.0 / (1.0 + math.exp(-logit)) if logit >= 0 else math.exp(logit) / (1.0 + math.exp(logit))
    return loss, p - y


def predict(model: ClassifierModel, text: str) -> float:
    """Probability that the sentence is original target-language text."""
    if not text.strip():
        raise ValueError("cannot classify an empty sentence")
    ids = model.encode(text)
    logit, _ = _forward(model.params, model.config, ids)
    p = 1.0 / (1.0 + math.exp(-logit)) if logit >= 0 else math.exp(logit) / (1.0 + math.exp(logit))
    return min(max(p, 1e-12), 1.0 - 1e-12)


def evaluate(model: ClassifierModel, test, threshold: float = 0.5) -> EvalStats:
    """Confusion counts and P/R/F1 with Original as the positive class;
    a sentence is predicted Original when p > threshold (strict)."""
    tp = fp = fn = tn = 0
    for sent in test:
        predicted_original = predict(model, sent.text) > threshold
        actually_original = sent.label is Label.ORIGINAL
        if predicted_original and actually_original:
            tp += 1
        elif predicted_original:
            fp += 1
        elif actually_original:
            fn += 1
        else:
            tn += 1
    return EvalStats.from_counts(tp, fp, fn, tn)


@dataclass
class TrainingLog:
    losses: list[float] = field(default_factory=list)
    evals: list[tuple[int, float]] = field(default_factory=list)
    best_step: int = -1
    best_f1: float = -1.0


def _require_both_classes(sentences, name: str) -> None:
    labels = {s.label for s in sentences}
    if labels != {Label.ORIGINAL, Label.TRANSLATED}:
        raise ValueError(f"{name} set must contain both classes")


def train_classifier(
    train,
    dev,
    bpe: BpeModel,
    config: ClassifierConfig = ClassifierConfig(),
) -> tuple[ClassifierModel, TrainingLog]:
    train = list(train)
    dev = list(dev)
    _require_both_classes(train, "training")
    _require_both_classes(dev, "development")

    model = build_classifier(bpe, config)
    params = model.params
    state = neural.AdagradState(config.learning_rate, config.epsilon)
    rng = derive_rng(config.seed, "classifier-train")

    pools = {
        Label.ORIGINAL: [s for s in train if s.label is Label.ORIGINAL],
        Label.TRANSLATED: [s for s in train if s.label is Label.TRANSLATED],
    }
    encoded = {
        label: [model.encode(s.text) for s in pool] for label, pool in pools.items()
    }

    log = TrainingLog()
    best_arrays = None
    steps_per_epoch = max(1, len(train) // config.batch_size)
    total_steps = config.epochs * steps_per_epoch

    def run_dev_eval(step: int) -> None:
        nonlocal best_arrays
        stats = evaluate(model, dev)
        log.evals.append((step, stats.f1))
        if stats.f1 > log.best_f1:
            log.best_f1 = stats.f1
            log.best_step = step
            best_arrays = params.copy_arrays()

    for step in range(1, total_steps + 1):
        params.zero_grads()
        batch_loss = 0.0
        for _ in range(config.batch_size):
            label = Label.ORIGINAL if rng.integers(2) == 0 else Label.TRANSLATED
            idx = int(rng.integers(len(encoded[label])))
            ids = encoded[label][idx]
            y = 1.0 if label is Label.ORIGINAL else 0.0
            logit, cache = _forward(params, config, ids, dropout_rng=rng)
            loss, d_logit = _loss_and_dlogit(logit, y)
            batch_loss += loss
            _backward(params, config, cache, d_logit / config.batch_size)
        batch_loss /= config.batch_size
        if not math.isfinite(batch_loss):
            raise ValueError(f"non-finite training loss at step {step}")
        log.losses.append(batch_loss)
        neural.adagrad_update(params, state)
        if step % config.eval_every == 0:
            run_dev_eval(step)
    if not log.evals or log.evals[-1][0] != total_steps:
        run_dev_eval(total_steps)

    params.load_arrays(best_arrays)
    return model, log


def batch_loss_and_grads(model: ClassifierModel, batch) -> tuple[float, dict[str, np.ndarray]]:
    """Mean loss and gradients over a list of labeled sentences; used by the
    finite-difference gradient check."""
    params = model.params
    params.zero_grads()
    total = 0.0
    for sent in batch:
        ids = model.encode(sent.text)
        y = 1.0 if sent.label is Label.ORIGINAL else 0.0
        logit, cache = _forward(params, model.config, ids)
        loss, d_logit = _loss_and_dlogit(logit, y)
        total += loss
        _backward(params, model.config, cache, d_logit / len(batch))
    return total / len(batch), params.grads


# ---------------------------------------------------------------------------
# Checkpointing
# ---------------------------------------------------------------------------


def save_classifier(model: ClassifierModel, path: str | Path) -> None:
    config = {
        "kind": "classifier",
        "config": asdict(model.config),
        "token_ids": model.token_ids,
        "bpe_hash": model.bpe.content_hash(),
    }
    neural.save_checkpoint(path, config, model.params)


def load_classifier(path: str | Path, bpe: BpeModel) -> ClassifierModel:
    ckpt = neural.load_checkpoint(path)
    if ckpt.config.get("kind") != "classifier":
        raise ValueError(f"{path}: not a classifier checkpoint")
    if ckpt.config["bpe_hash"] != bpe.content_hash():
        raise ValueError(
            "subword model mismatch: checkpoint was trained with a different segmentation model"
        )
    cfg_dict = dict(ckpt.config["config"])
    cfg_dict["conv_widths"] = tuple(cfg_dict["conv_widths"])
    config = ClassifierConfig(**cfg_dict)
    return ClassifierModel(bpe, config, ckpt.config["token_ids"], ckpt.params)
