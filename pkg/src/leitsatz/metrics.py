"""Summary scoring: ROUGE-1/2/L, embedding-based PRF, corpus aggregation.

All scores are precision/recall/F triples in [0, 1]. N-gram overlap uses
clipped counting (min of multiplicities per n-gram type); the LCS variant
runs over whole token sequences. The embedding score takes per-token vectors
from a provider and never loads a model itself.
"""

from __future__ import annotations

import csv
import json
import statistics
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .embeddings import EmbeddingProvider
from .errors import ConfigError, DataError
from .textproc import ngrams, tokenize

KNOWN_METRICS = ("rouge1", "rouge2", "rougeL", "bertscore")


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float

    @classmethod
    def from_pr(cls, precision: float, recall: float) -> "PRF":
        if precision + recall > 0:
            f1 = 2 * precision * recall / (precision + recall)
        else:
            f1 = 0.0
        return cls(precision=precision, recall=recall, f1=f1)

    def to_dict(self) -> dict:
        return {"precision": self.precision, "recall": self.recall, "f1": self.f1}


def rouge_n(candidate_tokens: Sequence[str], reference_tokens: Sequence[str], n: int) -> PRF:
    """Clipped n-gram overlap PRF; empty sides contribute 0 to that component."""
    if n < 1:
        raise DataError(f"n must be >= 1, got {n}")
    cand = ngrams(candidate_tokens, n)
    ref = ngrams(reference_tokens, n)
    overlap = sum((cand & ref).values())
    cand_total = sum(cand.values())
    ref_total = sum(ref.values())
    precision = overlap / cand_total if cand_total else 0.0
    recall = overlap / ref_total if ref_total else 0.0
    return PRF.from_pr(precision, recall)


def _lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    if not a or not b:
        return 0
    if len(b) > len(a):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        cur = [0]
        for j, y in enumerate(b, start=1):
            if x == y:
                cur.append(prev[j - 1] + 1)
            else:
                cur.append(max(prev[j], cur[j - 1]))
        prev = cur
    return prev[-1]


def rouge_l(candidate_tokens: Sequence[str], reference_tokens: Sequence[str]) -> PRF:
    """Longest-common-subsequence PRF over whole token sequences."""
    lcs = _lcs_length(candidate_tokens, reference_tokens)
    precision = lcs / len(candidate_tokens) if candidate_tokens else 0.0
    recall = lcs / len(reference_tokens) if reference_tokens else 0.0
    return PRF.from_pr(precision, recall)


def _ensure_unit_rows(emb: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(emb, axis=1)
    if np.all(np.abs(norms - 1.0) <= 1e-6):
        return emb
    safe = np.where(norms > 0, norms, 1.0)
    return emb / safe[:, None]


def bertscore(
    candidate_embeddings: np.ndarray,
    reference_embeddings: np.ndarray,
    candidate_weights: Sequence[float] | None = None,
    reference_weights: Sequence[float] | None = None,
    rescale_baseline: float | None = None,
) -> PRF:
    """Greedy-max cosine matching PRF over token embeddings.

    Precision averages, over candidate tokens, the best cosine against any
    reference token; recall is symmetric. Optional weights turn the means
    into weighted means (IDF-style); an optional baseline rescales all three
    components as (s - b) / (1 - b).
    """
    cand = np.asarray(candidate_embeddings, dtype=np.float64)
    ref = np.asarray(reference_embeddings, dtype=np.float64)
    if cand.size == 0 or ref.size == 0:
        raise DataError("embedding score needs at least one token on each side")
    if cand.ndim != 2 or ref.ndim != 2:
        raise DataError(f"embeddings must be 2-D, got shapes {cand.shape} and {ref.shape}")
    if cand.shape[1] != ref.shape[1]:
        raise DataError(
            f"embedding dimensions differ: {cand.shape[1]} vs {ref.shape[1]}"
        )
    cand = _ensure_unit_rows(cand)
    ref = _ensure_unit_rows(ref)
    sim = cand @ ref.T

    best_for_cand = sim.max(axis=1)
    best_for_ref = sim.max(axis=0)

    def _mean(values: np.ndarray, weights: Sequence[float] | None) -> float:
        if weights is None:
            return float(values.mean())
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != values.shape:
            raise DataError(f"weight length {w.shape} does not match token count {values.shape}")
        total = w.sum()
        if total <= 0:
            raise DataError("weights must have a positive sum")
        return float((values * w).sum() / total)

    precision = _mean(best_for_cand, candidate_weights)
    recall = _mean(best_for_ref, reference_weights)
    result = PRF.from_pr(precision, recall)
    if rescale_baseline is not None:
        b = float(rescale_baseline)
        if not (0.0 <= b < 1.0):
            raise ConfigError(f"rescale baseline must be in [0, 1), got {b}")

        def scale(s: float) -> float:
            return (s - b) / (1.0 - b)

        result = PRF(scale(result.precision), scale(result.recall), scale(result.f1))
    return result


@dataclass(frozen=True)
class Aggregate:
    """min/mean/max/std (sample, n-1) of per-summary F scores."""

    min: float
    mean: float
    max: float
    std: float
    count: int

    @classmethod
    def of(cls, values: Sequence[float]) -> "Aggregate":
        if not values:
            raise DataError("cannot aggregate zero values")
        std = statistics.stdev(values) if len(values) > 1 else 0.0
        return cls(
            min=min(values),
            mean=float(statistics.mean(values)),
            max=max(values),
            std=float(std),
            count=len(values),
        )

    def to_dict(self) -> dict:
        return {
            "min": self.min,
            "mean": self.mean,
            "max": self.max,
            "std": self.std,
            "count": self.count,
        }


@dataclass
class MetricsConfig:
    metrics: tuple[str, ...] = ("rouge1", "rouge2", "rougeL")
    embedding_provider: EmbeddingProvider | None = None

    def validate(self) -> None:
        for m in self.metrics:
            if m not in KNOWN_METRICS:
                raise ConfigError(f"unknown metric {m!r}; known: {', '.join(KNOWN_METRICS)}")
        if "bertscore" in self.metrics and self.embedding_provider is None:
            raise ConfigError("metric 'bertscore' needs an embedding provider")


@dataclass
class MetricReport:
    """Per-summary PRF rows plus corpus aggregates of F per (approach, metric)."""

    metrics: tuple[str, ...]
    approaches: tuple[str, ...]
    per_summary: dict = field(default_factory=dict)
    corpus: dict = field(default_factory=dict)
    excluded: list[dict] = field(default_factory=list)

    def rows(self) -> list[dict]:
        """Corpus rows ordered metric-major, then approach."""
        out = []
        for metric in self.metrics:
            for approach in self.approaches:
                agg = self.corpus.get((approach, metric))
                if agg is None:
                    continue
                out.append({"metric": metric, "approach": approach, **agg.to_dict()})
        return out

    def to_dict(self) -> dict:
        return {
            "metrics": list(self.metrics),
            "approaches": list(self.approaches),
            "per_summary": [
                {
                    "judgment_id": jid,
                    "approach": approach,
                    "metric": metric,
                    **prf.to_dict(),
                }
                for (jid, approach, metric), prf in sorted(self.per_summary.items())
            ],
            "corpus": self.rows(),
            "excluded": list(self.excluded),
        }


def _score_pair(
    metric: str,
    cand_text: str,
    gold_text: str,
    config: MetricsConfig,
    emb_cache: dict,
) -> PRF:
    if metric == "bertscore":
        if not cand_text.strip() or not gold_text.strip():
            return PRF(0.0, 0.0, 0.0)
        provider = config.embedding_provider
        missing = [t for t in (cand_text, gold_text) if t not in emb_cache]
        if missing:
            for text, emb in zip(missing, provider.embed(missing)):
                emb_cache[text] = emb
        cand_emb = emb_cache[cand_text]
        gold_emb = emb_cache[gold_text]
        if cand_emb.size == 0 or gold_emb.size == 0:
            return PRF(0.0, 0.0, 0.0)
        return bertscore(cand_emb, gold_emb)
    cand_tokens = tokenize(cand_text).tokens
    gold_tokens = tokenize(gold_text).tokens
    if metric == "rouge1":
        return rouge_n(cand_tokens, gold_tokens, 1)
    if metric == "rouge2":
        return rouge_n(cand_tokens, gold_tokens, 2)
    if metric == "rougeL":
        return rouge_l(cand_tokens, gold_tokens)
    raise ConfigError(f"unknown metric {metric!r}")


def score_corpus(summaries: Sequence, golds: Mapping[str, str], config: MetricsConfig) -> MetricReport:
    """Score every summary against its judgment's gold text.

    Summaries whose judgment has no non-empty gold are excluded and listed in
    the report. Empty candidates score zero on every metric rather than
    aborting the run.
    """
    config.validate()
    approaches: list[str] = []
    scoreable = []
    excluded: list[dict] = []
    for rec in summaries:
        gold = golds.get(rec.judgment_id, "")
        if not gold.strip():
            excluded.append(
                {
                    "judgment_id": rec.judgment_id,
                    "approach": rec.approach,
                    "reason": "empty gold",
                }
            )
            continue
        if rec.approach not in approaches:
            approaches.append(rec.approach)
        scoreable.append((rec, gold))
    if not scoreable:
        raise DataError("no scoreable (summary, gold) pairs")

    report = MetricReport(metrics=tuple(config.metrics), approaches=tuple(approaches), excluded=excluded)
    emb_cache: dict = {}
    f_values: dict[tuple[str, str], list[float]] = {}
    for rec, gold in scoreable:
        for metric in config.metrics:
            prf = _score_pair(metric, rec.text, gold, config, emb_cache)
            report.per_summary[(rec.judgment_id, rec.approach, metric)] = prf
            f_values.setdefault((rec.approach, metric), []).append(prf.f1)
    for key, values in f_values.items():
        report.corpus[key] = Aggregate.of(values)
    return report


def export_report_json(report: MetricReport, path: str | Path) -> None:
    Path(path).write_text(
        json.dumps(report.to_dict(), ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
    )


def export_report_csv(report: MetricReport, path: str | Path) -> None:
    """Corpus table as CSV, one row per (metric, approach)."""
    rows = report.rows()
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(
            fh, fieldnames=["metric", "approach", "min", "mean", "max", "std", "count"]
        )
        writer.writeheader()
        writer.writerows(rows)
