"""HTTP backend for blinded review: sessions, queues, verdicts, export.

Reviewers authenticate with static tokens, walk a per-reviewer shuffled
queue, and submit one verdict per item. Item payloads are blinded: they
carry an opaque item id, the gold text, the candidate text, and an optional
judgment excerpt; approach labels exist only server-side and in the
admin export. Verdicts persist through atomic file replacement, so a crash
never leaves a torn store.
"""

from __future__ import annotations

import hashlib
import hmac
import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Mapping, Sequence

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .errors import DataError
from .evalframe import Assignment, ClassVerdict, NUM_CLASSES, VerdictStore, export_verdicts


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _order_key(seed: int, reviewer_id: str, judgment_id: str, approach: str) -> str:
    raw = f"{seed}:{reviewer_id}:{judgment_id}:{approach}".encode("utf-8")
    return hashlib.md5(raw).hexdigest()


def _item_id(seed: int, judgment_id: str, approach: str) -> str:
    raw = f"item:{seed}:{judgment_id}:{approach}".encode("utf-8")
    return hashlib.md5(raw).hexdigest()


@dataclass(frozen=True)
class QueueItem:
    item_id: str
    judgment_id: str
    approach: str


@dataclass
class ServiceState:
    """Everything the endpoints need, assembled before the app starts."""

    reviewer_tokens: dict[str, str]
    admin_token: str
    queues: dict[str, list[QueueItem]]
    items: dict[str, QueueItem]
    assigned_reviewers: dict[str, frozenset[str]]
    candidates: dict[tuple[str, str], str]
    golds: dict[str, str]
    excerpts: dict[str, str]
    show_excerpt: bool = True
    store: VerdictStore = field(default_factory=VerdictStore)
    verdict_path: Path | None = None
    sessions: dict[str, str] = field(default_factory=dict)
    lock: threading.Lock = field(default_factory=threading.Lock)


def build_state(
    assignments: Sequence[Assignment],
    candidates: Mapping[tuple[str, str], str],
    golds: Mapping[str, str],
    excerpts: Mapping[str, str],
    reviewer_tokens: Mapping[str, str],
    admin_token: str,
    verdict_path: str | Path | None = None,
    show_excerpt: bool = True,
) -> ServiceState:
    """Wire assignments and texts into servable queues.

    reviewer_tokens maps reviewer id to that reviewer's static token. Every
    assigned summary must have a candidate text and its judgment a gold.
    """
    items: dict[str, QueueItem] = {}
    assigned: dict[str, frozenset[str]] = {}
    queues: dict[str, list[QueueItem]] = {r: [] for r in reviewer_tokens}
    seed = assignments[0].presentation_order_seed if assignments else 0
    for a in assignments:
        ref = (a.judgment_id, a.approach)
        if ref not in candidates:
            raise DataError(f"assignment for unknown summary {ref!r}")
        if a.judgment_id not in golds:
            raise DataError(f"no gold text for judgment {a.judgment_id!r}")
        item = QueueItem(
            item_id=_item_id(a.presentation_order_seed, a.judgment_id, a.approach),
            judgment_id=a.judgment_id,
            approach=a.approach,
        )
        items[item.item_id] = item
        assigned[item.item_id] = a.reviewer_ids
        for r in a.reviewer_ids:
            if r not in queues:
                raise DataError(f"assignment names reviewer {r!r} with no token configured")
            queues[r].append(item)
    for r, queue in queues.items():
        queue.sort(key=lambda it, _r=r: _order_key(seed, _r, it.judgment_id, it.approach))

    store = VerdictStore()
    vp = Path(verdict_path) if verdict_path else None
    if vp is not None and vp.exists():
        from .evalframe import import_verdicts

        store = import_verdicts(vp)
    return ServiceState(
        reviewer_tokens={token: r for r, token in reviewer_tokens.items()},
        admin_token=admin_token,
        queues=queues,
        items=items,
        assigned_reviewers=assigned,
        candidates=dict(candidates),
        golds=dict(golds),
        excerpts=dict(excerpts),
        show_excerpt=show_excerpt,
        store=store,
        verdict_path=vp,
    )


def _persist(state: ServiceState) -> None:
    if state.verdict_path is None:
        return
    state.verdict_path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(
        dir=str(state.verdict_path.parent), prefix=".verdicts-", suffix=".tmp"
    )
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            for verdict in state.store:
                fh.write(json.dumps(verdict.to_record(), ensure_ascii=False))
                fh.write("\n")
            fh.flush()
            os.fsync(fh.fileno())
        os.replace(tmp_name, state.verdict_path)
    except BaseException:
        try:
            os.unlink(tmp_name)
        except OSError:
            pass
        raise


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ApiError(400, "bad_json", "request body must be a JSON object") from None
    if not isinstance(body, dict):
        raise ApiError(400, "bad_json", "request body must be a JSON object")
    return body


def _bearer(request: Request) -> str:
    header = request.headers.get("authorization", "")
    if not header.startswith("Bearer "):
        raise ApiError(401, "unauthenticated", "missing bearer token")
    return header[len("Bearer ") :]


def _reviewer(state: ServiceState, request: Request) -> str:
    token = _bearer(request)
    reviewer = state.sessions.get(token)
    if reviewer is None:
        raise ApiError(401, "unauthenticated", "unknown or expired session token")
    return reviewer


def _progress_of(state: ServiceState, reviewer: str) -> tuple[int, int]:
    queue = state.queues.get(reviewer, [])
    done = sum(
        1
        for item in queue
        if state.store.get(reviewer, item.judgment_id, item.approach) is not None
    )
    return done, len(queue) - done


def create_app(state: ServiceState) -> FastAPI:
    app = FastAPI(title="review backend", openapi_url=None, docs_url=None, redoc_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(_request: Request, exc: ApiError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.post("/session")
    async def session(request: Request):
        body = await _json_body(request)
        token = body.get("token")
        if not isinstance(token, str) or not token:
            raise ApiError(401, "bad_token", "token is required")
        reviewer = None
        for known, rid in state.reviewer_tokens.items():
            if hmac.compare_digest(known, token):
                reviewer = rid
        if reviewer is None:
            raise ApiError(401, "bad_token", "unknown reviewer token")
        session_token = uuid.uuid4().hex
        state.sessions[session_token] = reviewer
        done, remaining = _progress_of(state, reviewer)
        return {
            "session_token": session_token,
            "reviewer_id": reviewer,
            "done": done,
            "remaining": remaining,
        }

    @app.get("/queue/next")
    async def queue_next(request: Request):
        reviewer = _reviewer(state, request)
        queue = state.queues.get(reviewer, [])
        done = 0
        current = None
        for item in queue:
            if state.store.get(reviewer, item.judgment_id, item.approach) is None:
                current = item
                break
            done += 1
        if current is None:
            return {"done": True}
        excerpt = state.excerpts.get(current.judgment_id, "") if state.show_excerpt else None
        return {
            "item_id": current.item_id,
            "gold_text": state.golds[current.judgment_id],
            "candidate_text": state.candidates[(current.judgment_id, current.approach)],
            "judgment_excerpt": excerpt,
            "position": [done + 1, len(queue)],
        }

    @app.post("/verdicts")
    async def submit_verdict(request: Request):
        reviewer = _reviewer(state, request)
        body = await _json_body(request)
        item_id = body.get("item_id")
        if not isinstance(item_id, str):
            raise ApiError(422, "bad_item", "item_id is required")
        item = state.items.get(item_id)
        if item is None or reviewer not in state.assigned_reviewers.get(item_id, frozenset()):
            raise ApiError(403, "not_assigned", "item is not assigned to this reviewer")
        decisions = body.get("decisions")
        if (
            not isinstance(decisions, list)
            or len(decisions) != NUM_CLASSES
            or not all(isinstance(d, bool) for d in decisions)
        ):
            raise ApiError(
                422, "bad_decisions", f"decisions must be a list of {NUM_CLASSES} booleans"
            )
        reasoning = body.get("reasoning", "")
        comment = body.get("comment", "")
        if not isinstance(reasoning, str) or not isinstance(comment, str):
            raise ApiError(422, "bad_fields", "reasoning and comment must be strings")
        if decisions[6] and not reasoning.strip():
            raise ApiError(
                422, "reasoning_required", "a fulfilled superiority class requires written reasoning"
            )
        with state.lock:
            if state.store.get(reviewer, item.judgment_id, item.approach) is not None:
                raise ApiError(409, "already_submitted", "verdict already submitted for this item")
            verdict = ClassVerdict(
                reviewer_id=reviewer,
                judgment_id=item.judgment_id,
                approach=item.approach,
                decisions=tuple(decisions),
                superiority_reasoning=reasoning,
                comment=comment,
                ts=datetime.now(timezone.utc).isoformat(),
            )
            state.store.add(verdict)
            _persist(state)
        done, remaining = _progress_of(state, reviewer)
        return {"ok": True, "done": done, "remaining": remaining}

    @app.get("/progress")
    async def progress(request: Request):
        reviewer = _reviewer(state, request)
        done, remaining = _progress_of(state, reviewer)
        return {"done": done, "remaining": remaining}

    @app.get("/admin/export")
    async def admin_export(request: Request):
        token = _bearer(request)
        if not state.admin_token or not hmac.compare_digest(token, state.admin_token):
            if state.sessions.get(token) is not None:
                raise ApiError(403, "forbidden", "admin credential required")
            raise ApiError(401, "unauthenticated", "unknown token")
        lines = [json.dumps(v.to_record(), ensure_ascii=False) for v in state.store]
        body = "\n".join(lines)
        if body:
            body += "\n"
        return PlainTextResponse(content=body, media_type="application/x-ndjson")

    return app
