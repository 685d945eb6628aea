"""Shared fixtures: repo paths, a stub HTTP server, verdict builders."""

from __future__ import annotations

import json
import threading
from contextlib import contextmanager
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path

import pytest

from leitsatz.evalframe import ClassVerdict

REPO = Path(__file__).resolve().parent.parent


@pytest.fixture(scope="session")
def sample_corpus_path() -> Path:
    path = REPO / "data" / "sample_corpus.jsonl"
    assert path.exists(), "bundled sample corpus missing; run scripts/make_sample_corpus.py"
    return path


@contextmanager
def stub_server(routes):
    """Serve POST routes from {path: fn(body_dict) -> (status, payload_dict)}."""

    class Handler(BaseHTTPRequestHandler):
        def do_POST(self):
            length = int(self.headers.get("content-length", 0))
            raw = self.rfile.read(length)
            try:
                body = json.loads(raw) if raw else {}
            except json.JSONDecodeError:
                body = {}
            fn = routes.get(self.path)
            if fn is None:
                self.send_response(404)
                self.end_headers()
                return
            status, payload = fn(body)
            data = json.dumps(payload).encode("utf-8")
            self.send_response(status)
            self.send_header("content-type", "application/json")
            self.send_header("content-length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)

        def log_message(self, *_args):
            pass

    server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    try:
        yield f"http://127.0.0.1:{server.server_port}"
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


@pytest.fixture
def make_server():
    return stub_server


def verdict(reviewer, judgment, approach, decisions, reasoning="", comment="", ts=""):
    if decisions[6] and not reasoning:
        reasoning = "deutlich klarer gefasst"
    return ClassVerdict(
        reviewer_id=reviewer,
        judgment_id=judgment,
        approach=approach,
        decisions=tuple(bool(d) for d in decisions),
        superiority_reasoning=reasoning,
        comment=comment,
        ts=ts,
    )


@pytest.fixture
def make_verdict():
    return verdict
