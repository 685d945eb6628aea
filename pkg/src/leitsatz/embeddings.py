"""Per-token embedding providers for similarity-based scoring.

Scoring never loads a model: embeddings come from an HTTP service or from a
file of precomputed vectors keyed by the SHA-256 of the exact text.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Sequence

import numpy as np

from .errors import DataError, TransportError


class EmbeddingProvider(Protocol):
    """Returns one (num_tokens, dim) float array per input text."""

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]: ...


def text_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


@dataclass
class RemoteEmbeddingProvider:
    """Client for an embedding service: POST {base_url}/embed {"texts": [...]}."""

    base_url: str
    timeout: float = 60.0
    _session: object = field(default=None, repr=False)

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        import requests

        session = self._session or requests
        try:
            resp = session.post(
                self.base_url.rstrip("/") + "/embed",
                json={"texts": list(texts)},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except requests.RequestException as exc:
            raise TransportError(f"embedding service at {self.base_url}: {exc}") from exc
        embeddings = payload.get("embeddings")
        if not isinstance(embeddings, list) or len(embeddings) != len(texts):
            raise TransportError(
                f"embedding service returned {len(embeddings) if isinstance(embeddings, list) else 'no'} "
                f"embeddings for {len(texts)} texts"
            )
        out: list[np.ndarray] = []
        for i, emb in enumerate(embeddings):
            arr = np.asarray(emb, dtype=np.float64)
            if arr.size and arr.ndim != 2:
                raise TransportError(
                    f"embedding {i} has shape {arr.shape}, expected (tokens, dim)"
                )
            out.append(arr.reshape(0, 0) if arr.size == 0 else arr)
        return out


@dataclass
class FileEmbeddingProvider:
    """Precomputed embeddings: JSON object mapping sha256(text) to token vectors."""

    path: str | Path
    _table: dict = field(default=None, repr=False)

    def _load(self) -> dict:
        if self._table is None:
            try:
                raw = json.loads(Path(self.path).read_text(encoding="utf-8"))
            except (OSError, json.JSONDecodeError) as exc:
                raise DataError(f"embedding file {self.path}: {exc}") from exc
            if not isinstance(raw, dict):
                raise DataError(f"embedding file {self.path}: expected a JSON object")
            self._table = raw
        return self._table

    def embed(self, texts: Sequence[str]) -> list[np.ndarray]:
        table = self._load()
        out: list[np.ndarray] = []
        for text in texts:
            key = text_hash(text)
            if key not in table:
                head = text[:40].replace("\n", " ")
                raise DataError(f"no precomputed embedding for text {key[:12]}… ({head!r})")
            arr = np.asarray(table[key], dtype=np.float64)
            out.append(arr.reshape(0, 0) if arr.size == 0 else arr)
        return out
