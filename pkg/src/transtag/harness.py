"""Experiment orchestration: the 2x2 origin-by-decode-mode evaluation grid,
side-by-side tagging-policy comparisons, run manifests for bit-identical
re-runs, and synthetic benchmarks for the classifier.

Every stage derives its randomness from one root seed by name, so a policy
comparison holds the generated data constant across policies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import __version__
from .classifier import Label, LabeledSentence
from .corpus import Corpus, CorpusKind, Origin
from .tagging import TagPolicy, TagStats, apply_policy, tag_by_origin
from .textmetrics import (
    FunctionWordList,
    MetricReport,
    bleu,
    compute_report,
    english_function_words,
)
from .toymt import QuadrantData, ToyMtConfig, ToyMtModel, decode, train_toymt
from .util import derive_rng, sha256_file

DECODE_MODES = ("natural", "translationese")
_MATCHED_MODE = {Origin.SOURCE_ORIGINAL: "translationese", Origin.TARGET_ORIGINAL: "natural"}


@dataclass
class GridCell:
    bleu: float
    metrics: MetricReport
    alt_bleu: float | None = None

    def as_dict(self) -> dict:
        out = {"bleu": self.bleu, "metrics": self.metrics.as_dict()}
        if self.alt_bleu is not None:
            out["alt_bleu"] = self.alt_bleu
        return out


@dataclass
class GridReport:
    """Per test-half, per decode-mode scores plus the combined matched-domain
    BLEU (computed over the concatenation of matched decodes, not averaged)."""

    cells: dict[tuple[str, str], GridCell]
    combined_matched: float
    combined_matched_macro: float
    metadata: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "cells": {f"{half}/{mode}": cell.as_dict() for (half, mode), cell in sorted(self.cells.items())},
            "combined_matched": self.combined_matched,
            "combined_matched_macro": self.combined_matched_macro,
            "metadata": self.metadata,
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), sort_keys=True, indent=2)

    def render_text(self) -> str:
        rows = [["test half", "decode", "matched", "BLEU", "lex.var", "lex.den", "len.var"]]
        for (half, mode), cell in sorted(self.cells.items()):
            matched = "yes" if _MATCHED_MODE[Origin(half)] == mode else "no"
            m = cell.metrics
            rows.append(
                [
                    half,
                    mode,
                    matched,
                    f"{cell.bleu:.2f}",
                    f"{m.lexical_variety:.3f}",
                    f"{m.lexical_density:.3f}",
                    f"{m.length_variety:.3f}" if m.length_variety is not None else "-",
                ]
            )
        table = _render_table(rows)
        return (
            table
            + f"\ncombined matched BLEU (concatenated): {self.combined_matched:.2f}"
            + f"\ncombined matched BLEU (macro average): {self.combined_matched_macro:.2f}"
        )


def _render_table(rows: list[list[str]]) -> str:
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = []
    for ri, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if ri == 0:
            lines.append("  ".join("-" * widths[i] for i in range(len(widths))).rstrip())
    return "\n".join(lines)


def run_grid_eval(
    model: ToyMtModel,
    test: Corpus,
    fw: FunctionWordList | None = None,
    alt_references: Sequence[str] | None = None,
    beam: int = 1,
) -> GridReport:
    """Decode each origin half of the test set in both modes and score it.

    Each cell is scored against the half's own references; when an aligned
    list of alternate references is supplied (e.g. natural rewrites of
    translationese targets), each cell also reports BLEU against those.
    """
    test.require_kind(CorpusKind.PARALLEL, "run_grid_eval")
    if fw is None:
        fw = english_function_words()
    if any(p.origin is Origin.UNKNOWN for p in test.items):
        raise ValueError("grid evaluation requires origin labels on every test pair")
    if alt_references is not None and len(alt_references) != len(test.items):
        raise ValueError("alternate references must align with the test corpus")

    halves = {
        Origin.SOURCE_ORIGINAL: [i for i, p in enumerate(test.items) if p.origin is Origin.SOURCE_ORIGINAL],
        Origin.TARGET_ORIGINAL: [i for i, p in enumerate(test.items) if p.origin is Origin.TARGET_ORIGINAL],
    }

    cells: dict[tuple[str, str], GridCell] = {}
    matched_hyps: list[str] = []
    matched_refs: list[str] = []
    matched_bleus: list[float] = []
    for origin, indices in halves.items():
        if not indices:
            raise ValueError(f"test set has no {origin.value} half")
        sources = [test.items[i].source for i in indices]
        refs = [test.items[i].target for i in indices]
        for mode in DECODE_MODES:
            hyps = [decode(model, src, natural=(mode == "natural"), beam=beam) for src in sources]
            if not any(h.strip() for h in hyps):
                raise ValueError(f"model decodes only empty output on the {origin.value}/{mode} cell")
            cell_bleu = bleu(hyps, refs)
            alt = None
            if alt_references is not None:
                alt = bleu(hyps, [alt_references[i] for i in indices])
            metrics = compute_report(hyps, fw, sources=sources, bleu_score=cell_bleu)
            cells[(origin.value, mode)] = GridCell(cell_bleu, metrics, alt)
            if _MATCHED_MODE[origin] == mode:
                matched_hyps.extend(hyps)
                matched_refs.extend(refs)
                matched_bleus.append(cell_bleu)

    return GridReport(
        cells=cells,
        combined_matched=bleu(matched_hyps, matched_refs),
        combined_matched_macro=sum(matched_bleus) / len(matched_bleus),
        metadata={"model_checksum": model.checksum(), "beam": beam},
    )


# ---------------------------------------------------------------------------
# Policy comparison
# ---------------------------------------------------------------------------


@dataclass
class PolicyEvalSpec:
    dev: Corpus
    test: Corpus
    config: ToyMtConfig
    fw: FunctionWordList | None = None
    alt_references: Sequence[str] | None = None


@dataclass
class PolicyRow:
    policy_name: str
    tag_stats: TagStats
    grid: GridReport


@dataclass
class PolicyComparison:
    rows: list[PolicyRow]

    def render_text(self) -> str:
        table = [["policy", "tagged", "fraction", "combined", "src+nt", "src+tr", "trg+tr", "trg+nt"]]
        for row in self.rows:
            cells = row.grid.cells
            table.append(
                [
                    row.policy_name,
                    str(row.tag_stats.tagged),
                    f"{row.tag_stats.fraction_tagged:.3f}",
                    f"{row.grid.combined_matched:.2f}",
                    f"{cells[('src_orig', 'natural')].bleu:.2f}",
                    f"{cells[('src_orig', 'translationese')].bleu:.2f}",
                    f"{cells[('trg_orig', 'translationese')].bleu:.2f}",
                    f"{cells[('trg_orig', 'natural')].bleu:.2f}",
                ]
            )
        return _render_table(table)

    def as_dict(self) -> dict:
        return {
            "policies": [
                {
                    "name": row.policy_name,
                    "tag_stats": {"total": row.tag_stats.total, "tagged": row.tag_stats.tagged},
                    "grid": row.grid.as_dict(),
                }
                for row in self.rows
            ]
        }


def compare_policies(
    corpus: Corpus,
    policies: Sequence[TagPolicy],
    eval_spec: PolicyEvalSpec,
) -> PolicyComparison:
    """Train one model per tagging policy on the same corpus and evaluate
    each on the identical test set; only the training tags differ."""
    if not policies:
        raise ValueError("compare_policies requires at least one policy")
    rows = []
    for policy in policies:
        tagged_corpus, stats = apply_policy(corpus, policy)
        model, _log = train_toymt(tagged_corpus, eval_spec.dev, eval_spec.config)
        grid = run_grid_eval(
            model,
            eval_spec.test,
            fw=eval_spec.fw,
            alt_references=eval_spec.alt_references,
        )
        grid.metadata["policy"] = policy.name
        rows.append(PolicyRow(policy.name, stats, grid))
    return PolicyComparison(rows)


def quadrant_training_corpus(data: QuadrantData) -> Corpus:
    """Oracle-tagged training corpus: both generated quadrants concatenated,
    tags set from the known origin labels."""
    merged = Corpus.parallel(list(data.src_original.items) + list(data.trg_original.items))
    return tag_by_origin(merged)


# ---------------------------------------------------------------------------
# Synthetic style benchmark for the classifier
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class StyleBenchmarkSpec:
    """Two token styles with a controlled shared-vocabulary fraction; at
    zero overlap the styles are linearly separable."""

    vocab_size: int = 60
    shared_fraction: float = 0.5
    min_len: int = 5
    max_len: int = 12
    train_per_class: int = 500
    dev_per_class: int = 100
    test_per_class: int = 100
    seed: int = 0


def generate_style_dataset(
    spec: StyleBenchmarkSpec,
) -> tuple[list[LabeledSentence], list[LabeledSentence], list[LabeledSentence]]:
    if not 0.0 <= spec.shared_fraction <= 1.0:
        raise ValueError("shared_fraction must be in [0, 1]")
    vocabs = {
        Label.ORIGINAL: [f"orig{i}" for i in range(spec.vocab_size)],
        Label.TRANSLATED: [f"tran{i}" for i in range(spec.vocab_size)],
    }
    shared = [f"com{i}" for i in range(spec.vocab_size)]

    def draw_split(name: str, per_class: int) -> list[LabeledSentence]:
        rng = derive_rng(spec.seed, "style-benchmark", name)
        out = []
        for i in range(per_class):
            for label in (Label.ORIGINAL, Label.TRANSLATED):
                length = int(rng.integers(spec.min_len, spec.max_len + 1))
                tokens = []
                for _ in range(length):
                    pool = shared if rng.random() < spec.shared_fraction else vocabs[label]
                    tokens.append(pool[int(rng.integers(len(pool)))])
                out.append(LabeledSentence(" ".join(tokens), label, name, i))
        return out

    return (
        draw_split("train", spec.train_per_class),
        draw_split("dev", spec.dev_per_class),
        draw_split("test", spec.test_per_class),
    )


# ---------------------------------------------------------------------------
# Run manifests
# ---------------------------------------------------------------------------


@dataclass
class RunManifest:
    """Everything needed to re-run a pipeline stage bit-identically."""

    command: str
    root_seed: int
    config: dict = field(default_factory=dict)
    input_hashes: dict[str, str] = field(default_factory=dict)
    stage_stats: dict = field(default_factory=dict)
    toolkit_version: str = __version__

    def add_input(self, path: str | Path) -> None:
        self.input_hashes[str(path)] = sha256_file(path)

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "root_seed": self.root_seed,
                "config": self.config,
                "input_hashes": self.input_hashes,
                "stage_stats": self.stage_stats,
                "toolkit_version": self.toolkit_version,
            },
            sort_keys=True,
            indent=2,
        )

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.to_json() + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "RunManifest":
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        return cls(
            command=data["command"],
            root_seed=data["root_seed"],
            config=data["config"],
            input_hashes=data["input_hashes"],
            stage_stats=data["stage_stats"],
            toolkit_version=data["toolkit_version"],
        )
