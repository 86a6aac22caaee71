"""Minimal numerical substrate for the trained models: named parameter
arrays with gradient and Adagrad accumulator slots, the Adagrad update,
exponential moving averages of parameters, finite-difference gradient
checking, and a deterministic checkpoint container.

Everything is plain numpy with hand-written backward passes in the model
modules; training in float32, gradient checks in float64. All
initialization randomness derives from one seed split per parameter name,
so creation order never changes initial values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .util import derive_rng, sha256_bytes

_CKPT_MAGIC = "transtag-ckpt/v1"


class ParameterSet:
    """Named dense arrays plus same-shaped gradient slots."""

    def __init__(self, seed: int, dtype=np.float32):
        self.seed = seed
        self.dtype = np.dtype(dtype)
        self.arrays: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}

    def _register(self, name: str, values: np.ndarray) -> np.ndarray:
        if name in self.arrays:
            raise ValueError(f"parameter {name!r} already exists")
        self.arrays[name] = values.astype(self.dtype)
        self.grads[name] = np.zeros_like(self.arrays[name])
        return self.arrays[name]

    def add_embedding(self, name: str, shape: tuple[int, ...]) -> np.ndarray:
        rng = derive_rng(self.seed, "init", name)
        return self._register(name, rng.uniform(-0.1, 0.1, size=shape))

    def add_dense(self, name: str, shape: tuple[int, ...]) -> np.ndarray:
        """Fan-in-scaled uniform init; fan-in is the product of all but the
        last axis (kernels are laid out ``(..., fan_out)``)."""
        rng = derive_rng(self.seed, "init", name)
        fan_in = int(np.prod(shape[:-1])) if len(shape) > 1 else int(shape[0])
        limit = 1.0 / np.sqrt(fan_in)
        return self._register(name, rng.uniform(-limit, limit, size=shape))

    def add_zeros(self, name: str, shape: tuple[int, ...]) -> np.ndarray:
        return self._register(name, np.zeros(shape))

    def zero_grads(self) -> None:
        for g in self.grads.values():
            g[...] = 0.0

    def names(self) -> list[str]:
        return sorted(self.arrays)

    def copy_arrays(self) -> dict[str, np.ndarray]:
        return {name: arr.copy() for name, arr in self.arrays.items()}

    def load_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        for name, arr in arrays.items():
            if name not in self.arrays:
                raise KeyError(f"unknown parameter {name!r}")
            if self.arrays[name].shape != arr.shape:
                raise ValueError(f"shape mismatch for {name!r}")
            self.arrays[name] = arr.astype(self.dtype)
            self.grads[name] = np.zeros_like(self.arrays[name])

    def astype(self, dtype) -> "ParameterSet":
        out = ParameterSet(self.seed, dtype)
        for name, arr in self.arrays.items():
            out._register(name, arr)
        return out

    def checksum(self) -> str:
        blobs = []
        for name in self.names():
            arr = np.ascontiguousarray(self.arrays[name])
            blobs.append(name.encode() + arr.tobytes())
        return sha256_bytes(b"".join(blobs))


@dataclass
class AdagradState:
    """Per-parameter sum of squared gradients, created lazily to match
    parameter shapes. ``initial_accumulator`` > 0 (the classic warm-start
    variant) softens the first updates, which otherwise jump by the full
    learning rate on every coordinate."""

    learning_rate: float
    epsilon: float = 1e-8
    initial_accumulator: float = 0.0
    accumulators: dict[str, np.ndarray] = field(default_factory=dict)


def adagrad_update(params: ParameterSet, state: AdagradState) -> None:
    """θ ← θ − lr · g / (√G + ε) with G ← G + g², elementwise."""
    if state.learning_rate <= 0:
        raise ValueError("learning rate must be positive")
    for name in params.names():
        grad = params.grads[name]
        if not np.all(np.isfinite(grad)):
            raise ValueError(f"non-finite gradient for parameter {name!r}")
        acc = state.accumulators.get(name)
        if acc is None:
            acc = np.full_like(params.arrays[name], state.initial_accumulator)
            state.accumulators[name] = acc
        acc += grad * grad
        params.arrays[name] -= state.learning_rate * grad / (np.sqrt(acc) + state.epsilon)


def clip_gradients(params: ParameterSet, max_norm: float) -> float:
    """Scale all gradients down to a global L2 norm of ``max_norm`` when they
    exceed it; returns the pre-clip norm."""
    total = 0.0
    for g in params.grads.values():
        total += float((g.astype(np.float64) ** 2).sum())
    norm = float(np.sqrt(total))
    if max_norm > 0 and norm > max_norm:
        factor = max_norm / norm
        for g in params.grads.values():
            g *= factor
    return norm


@dataclass
class EmaState:
    """Shadow copy of the parameters, updated as
    shadow ← decay·shadow + (1−decay)·params."""

    decay: float
    shadow: dict[str, np.ndarray]

    @classmethod
    def from_params(cls, params: ParameterSet, decay: float) -> "EmaState":
        if not 0.0 <= decay <= 1.0:
            raise ValueError("EMA decay must be in [0, 1]")
        return cls(decay, params.copy_arrays())


def ema_update(ema: EmaState, params: ParameterSet) -> None:
    d = ema.decay
    for name, arr in params.arrays.items():
        shadow = ema.shadow[name]
        shadow *= d
        shadow += (1.0 - d) * arr


def gradient_check(
    loss_and_grads: Callable[[ParameterSet], tuple[float, dict[str, np.ndarray]]],
    params: ParameterSet,
    step: float = 1e-4,
    min_coords: int = 200,
    seed: int = 0,
) -> float:
    """Compare analytic gradients to central finite differences on a random
    coordinate subset; returns the max relative error.

    The loss callable must be deterministic (checked by evaluating twice)
    and the parameters must be in float64.
    """
    if params.dtype != np.float64:
        raise ValueError("gradient checks require float64 parameters")
    loss1, grads = loss_and_grads(params)
    grads = {name: g.copy() for name, g in grads.items()}
    loss2, _ = loss_and_grads(params)
    if loss1 != loss2:
        raise ValueError("loss is not deterministic: two evaluations differ")

    coords = []
    for name in params.names():
        size = params.arrays[name].size
        coords.extend((name, i) for i in range(size))
    rng = derive_rng(seed, "gradient-check")
    if len(coords) > min_coords:
        idx = rng.choice(len(coords), size=min_coords, replace=False)
        coords = [coords[i] for i in sorted(idx)]

    max_rel = 0.0
    for name, flat_idx in coords:
        arr = params.arrays[name]
        orig = arr.flat[flat_idx]
        arr.flat[flat_idx] = orig + step
        loss_plus, _ = loss_and_grads(params)
        arr.flat[flat_idx] = orig - step
        loss_minus, _ = loss_and_grads(params)
        arr.flat[flat_idx] = orig
        numeric = (loss_plus - loss_minus) / (2.0 * step)
        analytic = grads[name].flat[flat_idx]
        rel = abs(analytic - numeric) / max(abs(analytic), abs(numeric), 1e-8)
        max_rel = max(max_rel, rel)
    return max_rel


# ---------------------------------------------------------------------------
# Checkpoint container
#
# Deterministic byte layout (no timestamps, sorted keys) so that re-running
# a pipeline from its manifest reproduces checkpoints bit for bit:
#
#   line 1: magic string
#   line 2: JSON header with config, seed, dtype, and the array manifest
#   then the raw little-endian array bytes, concatenated in manifest order.
# ---------------------------------------------------------------------------


@dataclass
class Checkpoint:
    config: dict
    params: ParameterSet
    adagrad: AdagradState | None
    ema: EmaState | None


def _dtype_tag(dtype: np.dtype) -> str:
    return {np.dtype(np.float32): "<f4", np.dtype(np.float64): "<f8"}[np.dtype(dtype)]


def save_checkpoint(
    path: str | Path,
    config: dict,
    params: ParameterSet,
    adagrad: AdagradState | None = None,
    ema: EmaState | None = None,
) -> None:
    sections: list[tuple[str, str, np.ndarray]] = []
    for name in params.names():
        sections.append(("param", name, params.arrays[name]))
    if adagrad is not None:
        for name in sorted(adagrad.accumulators):
            sections.append(("adagrad", name, adagrad.accumulators[name]))
    if ema is not None:
        for name in sorted(ema.shadow):
            sections.append(("ema", name, ema.shadow[name]))

    manifest = []
    blobs = []
    offset = 0
    for section, name, arr in sections:
        arr = np.ascontiguousarray(arr, dtype=arr.dtype.newbyteorder("<"))
        data = arr.tobytes()
        manifest.append(
            {
                "section": section,
                "name": name,
                "dtype": _dtype_tag(arr.dtype),
                "shape": list(arr.shape),
                "offset": offset,
                "nbytes": len(data),
            }
        )
        blobs.append(data)
        offset += len(data)

    header = {
        "config": config,
        "seed": params.seed,
        "dtype": _dtype_tag(params.dtype),
        "adagrad": None
        if adagrad is None
        else {"learning_rate": adagrad.learning_rate, "epsilon": adagrad.epsilon},
        "ema_decay": None if ema is None else ema.decay,
        "arrays": manifest,
    }
    with open(path, "wb") as f:
        f.write(_CKPT_MAGIC.encode() + b"\n")
        f.write(json.dumps(header, sort_keys=True, separators=(",", ":")).encode() + b"\n")
        for blob in blobs:
            f.write(blob)


def load_checkpoint(path: str | Path) -> Checkpoint:
    with open(path, "rb") as f:
        magic = f.readline().decode().rstrip("\n")
        if magic != _CKPT_MAGIC:
            raise ValueError(f"{path}: not a {_CKPT_MAGIC} checkpoint")
        header = json.loads(f.readline().decode())
        body = f.read()

    def read_array(entry) -> np.ndarray:
        start, n = entry["offset"], entry["nbytes"]
        arr = np.frombuffer(body[start : start + n], dtype=np.dtype(entry["dtype"]))
        return arr.reshape(entry["shape"]).copy()

    params = ParameterSet(header["seed"], np.dtype(header["dtype"]))
    adagrad = None
    if header["adagrad"] is not None:
        adagrad = AdagradState(header["adagrad"]["learning_rate"], header["adagrad"]["epsilon"])
    ema = None
    if header["ema_decay"] is not None:
        ema = EmaState(header["ema_decay"], {})
    for entry in header["arrays"]:
        arr = read_array(entry)
        if entry["section"] == "param":
            params._register(entry["name"], arr)
        elif entry["section"] == "adagrad":
            adagrad.accumulators[entry["name"]] = arr
        elif entry["section"] == "ema":
            ema.shadow[entry["name"]] = arr
        else:
            raise ValueError(f"unknown checkpoint section {entry['section']!r}")
    return Checkpoint(header["config"], params, adagrad, ema)
