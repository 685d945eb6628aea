"""Candidate summary production: extractive baseline and remote generation.

The extractive path builds a TF-IDF cosine similarity graph over the
document's sentences, thresholds it, and ranks sentences by the stationary
distribution of the damped random walk. The generative path calls an HTTP
endpoint after truncating the input to the model's context budget.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError, DataError, TransportError
from .textproc import TokenCounter, WordTokenCounter, split_sentences, tokenize

APPROACHES = ("lexrank", "model_plain", "model_enriched", "gold")

DEFAULT_THRESHOLD = 0.1
DEFAULT_DAMPING = 0.85
DEFAULT_MAX_ITERS = 200
DEFAULT_TOL = 1e-10
DEFAULT_PROMPT_OVERHEAD = 64


@dataclass
class SummaryRecord:
    judgment_id: str
    approach: str
    text: str
    token_count: int
    sentence_count: int
    generation_params: dict | None = None
    empty: bool = False
    error: str | None = None

    def to_dict(self) -> dict:
        return {
            "judgment_id": self.judgment_id,
            "approach": self.approach,
            "text": self.text,
            "token_count": self.token_count,
            "sentence_count": self.sentence_count,
            "generation_params": self.generation_params,
            "empty": self.empty,
            "error": self.error,
        }


@dataclass
class CentralityVector:
    scores: np.ndarray

    def __post_init__(self):
        total = float(np.sum(self.scores))
        if abs(total - 1.0) > 1e-9:
            raise DataError(f"centrality scores must sum to 1, got {total!r}")
        if np.any(self.scores < 0):
            raise DataError("centrality scores must be non-negative")


def similarity_matrix(sentences: Sequence[str]) -> np.ndarray:
    """Pairwise TF-IDF cosine similarities; idf = ln(N/df) over the sentences.

    Identical token profiles give 1.0 even when every idf vanishes: two
    all-zero vectors count as perfectly similar, a zero against a non-zero
    as dissimilar. Diagonal is exactly 1.
    """
    texts = list(sentences)
    if not texts:
        raise DataError("similarity matrix needs at least one sentence")
    n = len(texts)
    token_lists = [tokenize(t).tokens for t in texts]
    vocab: dict[str, int] = {}
    for toks in token_lists:
        for tok in toks:
            if tok not in vocab:
                vocab[tok] = len(vocab)
    tf = np.zeros((n, max(len(vocab), 1)), dtype=np.float64)
    for i, toks in enumerate(token_lists):
        for tok, cnt in Counter(toks).items():
            tf[i, vocab[tok]] = cnt
    df = np.count_nonzero(tf, axis=0)
    idf = np.zeros(tf.shape[1], dtype=np.float64)
    nonzero = df > 0
    idf[nonzero] = np.log(n / df[nonzero])
    weighted = tf * idf
    norms = np.linalg.norm(weighted, axis=1)

    sim = np.zeros((n, n), dtype=np.float64)
    nz = norms > 0
    if np.any(nz):
        w = weighted[nz] / norms[nz, None]
        sim[np.ix_(nz, nz)] = w @ w.T
    zero_idx = np.where(~nz)[0]
    for i in zero_idx:
        for j in zero_idx:
            sim[i, j] = 1.0
    sim = (sim + sim.T) / 2.0
    np.fill_diagonal(sim, 1.0)
    return np.clip(sim, 0.0, 1.0)


def transition_matrix(similarity: np.ndarray, threshold: float = DEFAULT_THRESHOLD) -> np.ndarray:
    """Zero out sub-threshold similarities and renormalize rows to sum to 1.

    A row left without any mass (possible when threshold > 1) becomes
    uniform, so the result is always row-stochastic.
    """
    sim = np.asarray(similarity, dtype=np.float64)
    if sim.ndim != 2 or sim.shape[0] != sim.shape[1]:
        raise DataError(f"similarity matrix must be square, got shape {sim.shape}")
    kept = np.where(sim >= threshold, sim, 0.0)
    row_sums = kept.sum(axis=1)
    n = sim.shape[0]
    out = np.empty_like(kept)
    for i in range(n):
        if row_sums[i] > 0:
            out[i] = kept[i] / row_sums[i]
        else:
            out[i] = 1.0 / n
    return out


def power_iteration(
    transition: np.ndarray,
    damping: float = DEFAULT_DAMPING,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> CentralityVector:
    """Stationary distribution of x <- d*M^T*x + (1-d)/N, from a uniform start."""
    m = np.asarray(transition, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DataError(f"transition matrix must be square, got shape {m.shape}")
    if not (0.0 < damping < 1.0):
        raise ConfigError(f"damping must be in (0, 1), got {damping}")
    if max_iters < 1:
        raise ConfigError(f"max_iters must be >= 1, got {max_iters}")
    n = m.shape[0]
    x = np.full(n, 1.0 / n)
    teleport = (1.0 - damping) / n
    mt = m.T
    for _ in range(max_iters):
        nxt = damping * (mt @ x) + teleport
        residual = float(np.max(np.abs(nxt - x)))
        x = nxt
        if residual <= tol:
            return CentralityVector(scores=x / x.sum())
    raise DataError(
        f"power iteration did not converge after {max_iters} iterations "
        f"(residual {residual:.3e}, tol {tol:.1e})"
    )


def rank_sentences(scores: np.ndarray, k: int) -> list[int]:
    """Indices of the k best sentences, ties to the earlier position, sorted by position."""
    order = sorted(range(len(scores)), key=lambda i: (-scores[i], i))
    return sorted(order[:k])


def lexrank_summary(
    text: str,
    k: int,
    threshold: float = DEFAULT_THRESHOLD,
    damping: float = DEFAULT_DAMPING,
    judgment_id: str = "",
    counter: TokenCounter | None = None,
) -> SummaryRecord:
    """Extract the k most central sentences, emitted in document order."""
    if k < 1:
        raise ConfigError(f"sentence count k must be >= 1, got {k}")
    sentences = split_sentences(text).texts()
    if not sentences:
        raise DataError("cannot summarize an empty document")
    if len(sentences) <= k:
        chosen = list(range(len(sentences)))
    else:
        sim = similarity_matrix(sentences)
        centrality = power_iteration(transition_matrix(sim, threshold), damping)
        chosen = rank_sentences(centrality.scores, k)
    out_text = " ".join(sentences[i] for i in chosen)
    counter = counter or WordTokenCounter()
    return SummaryRecord(
        judgment_id=judgment_id,
        approach="lexrank",
        text=out_text,
        token_count=counter.count(out_text),
        sentence_count=len(chosen),
        empty=not out_text.strip(),
    )


def truncate_to_budget(
    text: str,
    context_window: int,
    generation_budget: int,
    counter: TokenCounter,
    prompt_overhead: int = DEFAULT_PROMPT_OVERHEAD,
) -> str:
    """Trim trailing tokens until the text fits the input side of the window.

    The limit is context_window - generation_budget - prompt_overhead. Cuts
    happen at word-token boundaries; the counter decides how much fits, so a
    subword counter is probed by bisection over candidate cut points.
    """
    if generation_budget >= context_window:
        raise ConfigError(
            f"generation budget {generation_budget} must be below the context window {context_window}"
        )
    limit = context_window - generation_budget - prompt_overhead
    if limit <= 0:
        raise ConfigError(
            f"no input budget left: window {context_window}, generation {generation_budget}, "
            f"overhead {prompt_overhead}"
        )
    if counter.count(text) <= limit:
        return text
    cuts = [end for _, end in tokenize(text).offsets]
    lo, hi = 0, len(cuts)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if counter.count(text[: cuts[mid - 1]]) <= limit:
            lo = mid
        else:
            hi = mid - 1
    while lo > 0 and counter.count(text[: cuts[lo - 1]]) > limit:
        lo -= 1
    return "" if lo == 0 else text[: cuts[lo - 1]]


@dataclass
class GenerationParams:
    max_new_tokens: int
    decoding: str = "greedy"
    endpoint: str = ""
    special_tokens: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "max_new_tokens": self.max_new_tokens,
            "decoding": self.decoding,
            "endpoint": self.endpoint,
            "special_tokens": list(self.special_tokens),
        }


@dataclass
class GenerationClient:
    """Client for a generation endpoint: POST {base_url}/generate.

    Transport and 5xx failures are retried with exponential backoff
    (`attempts` total tries); 4xx responses are not retried and surface as a
    recorded failure on the summary record.
    """

    base_url: str
    headers: dict = field(default_factory=dict)
    timeout: float = 120.0
    attempts: int = 3
    backoff_base: float = 0.5
    _session: object = field(default=None, repr=False)

    def generate(
        self,
        input_text: str,
        max_new_tokens: int,
        decoding: str = "greedy",
        special_tokens: Sequence[str] = (),
    ) -> str:
        import requests

        session = self._session or requests
        body = {
            "input": input_text,
            "max_new_tokens": max_new_tokens,
            "decoding": decoding,
            "special_tokens": list(special_tokens),
        }
        url = self.base_url.rstrip("/") + "/generate"
        last_error: Exception | None = None
        for attempt in range(self.attempts):
            if attempt:
                time.sleep(self.backoff_base * (2 ** (attempt - 1)))
            try:
                resp = session.post(url, json=body, headers=self.headers, timeout=self.timeout)
            except requests.RequestException as exc:
                last_error = exc
                continue
            if 400 <= resp.status_code < 500:
                raise GenerationRejected(f"HTTP {resp.status_code}: {resp.text[:200]}")
            if resp.status_code >= 500:
                last_error = TransportError(f"HTTP {resp.status_code}: {resp.text[:200]}")
                continue
            try:
                payload = resp.json()
            except ValueError as exc:
                last_error = exc
                continue
            text = payload.get("text")
            if not isinstance(text, str):
                raise GenerationRejected(f"generation endpoint returned no 'text' field: {payload!r}")
            return text
        raise TransportError(
            f"generation endpoint at {self.base_url} failed after {self.attempts} attempts: {last_error}"
        )


class GenerationRejected(Exception):
    """The endpoint answered but refused the request; not retryable."""


def generate_summary(
    client: GenerationClient,
    input_text: str,
    params: GenerationParams,
    approach: str = "model_plain",
    judgment_id: str = "",
    counter: TokenCounter | None = None,
) -> SummaryRecord:
    """Call the endpoint and record the outcome, flagging empty generations.

    Non-retryable endpoint rejections come back as a record carrying the
    error instead of raising; transport exhaustion still raises, because the
    whole run is stalled, not one item.
    """
    if approach not in APPROACHES:
        raise ConfigError(f"unknown approach {approach!r}; known: {', '.join(APPROACHES)}")
    counter = counter or WordTokenCounter()
    try:
        text = client.generate(
            input_text,
            max_new_tokens=params.max_new_tokens,
            decoding=params.decoding,
            special_tokens=params.special_tokens,
        )
    except GenerationRejected as exc:
        return SummaryRecord(
            judgment_id=judgment_id,
            approach=approach,
            text="",
            token_count=0,
            sentence_count=0,
            generation_params=params.to_dict(),
            empty=True,
            error=str(exc),
        )
    sentence_count = len(split_sentences(text)) if text.strip() else 0
    return SummaryRecord(
        judgment_id=judgment_id,
        approach=approach,
        text=text,
        token_count=counter.count(text),
        sentence_count=sentence_count,
        generation_params=params.to_dict(),
        empty=not text.strip(),
    )
