"""Embedding provider contracts: remote service and precomputed file."""

from __future__ import annotations

import hashlib
import json

import numpy as np
import pytest

from leitsatz.embeddings import FileEmbeddingProvider, RemoteEmbeddingProvider, text_hash
from leitsatz.errors import DataError, TransportError


def test_text_hash_is_sha256():
    assert text_hash("abc") == hashlib.sha256(b"abc").hexdigest()


class TestRemote:
    def test_returns_arrays_in_order(self, make_server):
        def embed(body):
            return 200, {"embeddings": [[[1.0, 0.0]], [[0.0, 1.0], [1.0, 0.0]]]}

        with make_server({"/embed": embed}) as url:
            got = RemoteEmbeddingProvider(url).embed(["a", "b"])
        assert got[0].shape == (1, 2)
        assert got[1].shape == (2, 2)
        assert got[1][0, 1] == 1.0

    def test_sends_texts_payload(self, make_server):
        seen = []

        def embed(body):
            seen.append(body)
            return 200, {"embeddings": [[[0.5]]]}

        with make_server({"/embed": embed}) as url:
            RemoteEmbeddingProvider(url).embed(["ein satz"])
        assert seen == [{"texts": ["ein satz"]}]

    def test_count_mismatch(self, make_server):
        def embed(body):
            return 200, {"embeddings": [[[1.0]]]}

        with make_server({"/embed": embed}) as url:
            with pytest.raises(TransportError):
                RemoteEmbeddingProvider(url).embed(["a", "b"])

    def test_non_2d_rejected(self, make_server):
        def embed(body):
            return 200, {"embeddings": [[1.0, 2.0]]}

        with make_server({"/embed": embed}) as url:
            with pytest.raises(TransportError, match="shape"):
                RemoteEmbeddingProvider(url).embed(["a"])

    def test_http_error(self, make_server):
        def embed(body):
            return 503, {"error": "down"}

        with make_server({"/embed": embed}) as url:
            with pytest.raises(TransportError):
                RemoteEmbeddingProvider(url).embed(["a"])

    def test_empty_embedding_normalized_shape(self, make_server):
        def embed(body):
            return 200, {"embeddings": [[]]}

        with make_server({"/embed": embed}) as url:
            got = RemoteEmbeddingProvider(url).embed([""])
        assert got[0].shape == (0, 0)


class TestFile:
    def _write(self, tmp_path, table):
        p = tmp_path / "emb.json"
        p.write_text(json.dumps(table), encoding="utf-8")
        return p

    def test_lookup_by_hash(self, tmp_path):
        p = self._write(tmp_path, {text_hash("hallo"): [[1.0, 0.0], [0.0, 1.0]]})
        got = FileEmbeddingProvider(p).embed(["hallo"])
        assert got[0].shape == (2, 2)
        assert np.allclose(got[0], np.eye(2))

    def test_missing_text_names_hash_and_head(self, tmp_path):
        p = self._write(tmp_path, {})
        with pytest.raises(DataError, match=text_hash("fehlt")[:12]):
            FileEmbeddingProvider(p).embed(["fehlt"])

    def test_bad_json(self, tmp_path):
        p = tmp_path / "emb.json"
        p.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(DataError, match="JSON object"):
            FileEmbeddingProvider(p).embed(["x"])

    def test_missing_file(self, tmp_path):
        with pytest.raises(DataError):
            FileEmbeddingProvider(tmp_path / "nope.json").embed(["x"])

    def test_loaded_once(self, tmp_path):
        p = self._write(tmp_path, {text_hash("a"): [[1.0]]})
        provider = FileEmbeddingProvider(p)
        provider.embed(["a"])
        p.unlink()
        assert provider.embed(["a"])[0].shape == (1, 1)
