"""Legal-entity spans: detection, tag enrichment, stripping, and audits.

Text is enriched by wrapping each entity as ``<KIND> surface </KIND>`` with
single-space padding. strip_tags inverts enrich exactly, so enriched text is
safe to ship through a generation endpoint and recover. The built-in
detector covers statute citations (GS) and court-decision citations (RS);
other kinds come from imported span files.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .errors import DataError

DEFAULT_KINDS = ("GS", "RS", "LIT", "VO", "EUN", "PER", "ORG", "LD")

_KIND_RE = re.compile(r"[A-Z][A-Z0-9_]*")
_TAG_RE = re.compile(r"</?([A-Z][A-Z0-9_]*)>")

# Statute citation: section sign(s), a numeral with optional letter suffix,
# an optional subdivision chain, then a statute abbreviation (a token with
# at least two capitals, like BGB, StGB, GewO, EGBGB).
_GS_RE = re.compile(
    r"§§?\s*"
    r"\d+[a-z]?"
    r"(?:\s*,\s*\d+[a-z]?)*"
    r"(?:\s+(?:Abs\.|Absatz|Satz|S\.|Nr\.|Nummer|Halbs\.|Alt\.)\s*\d+[a-z]?)*"
    r"\s+[A-ZÄÖÜ][a-zäöüß]*[A-ZÄÖÜ][A-Za-zÄÖÜäöüß]*"
)

_COURT = (
    r"(?:BGH|BVerfG|BVerwG|BAG|BSG|BFH|BPatG|EuGH|EGMR|RG|KG"
    r"|(?:OLG|OVG|LG|VG|AG)\s+[A-ZÄÖÜ][\wäöüß-]+)"
)
_DECISION = r"(?:Versäumnisurteil|Vorlagebeschluss|Urteil|Urt\.|Beschluss|Beschl\.)"
_MONTH = (
    r"(?:Januar|Februar|März|April|Mai|Juni|Juli|August"
    r"|September|Oktober|November|Dezember)"
)
_DATE = rf"v(?:om|\.)\s+\d{{1,2}}\.\s*(?:{_MONTH}\s+\d{{4}}|\d{{1,2}}\.\d{{4}})"
_DOCKET = r"(?:[IVX]+[a-z]?|\d+)\s+[A-Z][A-Za-z]{0,3}(?:\s*\([A-Za-zäöüß]+\))?\s+\d+/\d+"

_RS_RE = re.compile(
    rf"{_COURT},?\s+{_DECISION}"
    rf"(?P<date>\s+{_DATE})?"
    rf"(?P<docket>\s*[-–—]\s*{_DOCKET}|\s+{_DOCKET})?"
)


@dataclass(frozen=True)
class EntitySpan:
    start: int
    end: int
    kind: str
    surface: str


@dataclass
class EntityAudit:
    """Which generated entities the source document actually contains."""

    generated_entities: list[EntitySpan]
    supported: int
    unsupported: list[str]
    support_rate: float

    def to_dict(self) -> dict:
        return {
            "total": len(self.generated_entities),
            "supported": self.supported,
            "unsupported": list(self.unsupported),
            "support_rate": self.support_rate,
        }


def _check_kind(kind: str) -> str:
    if not _KIND_RE.fullmatch(kind):
        raise DataError(f"invalid entity kind {kind!r} (want uppercase identifier)")
    return kind


def validate_spans(text: str, spans: Iterable[EntitySpan]) -> list[EntitySpan]:
    """Check bounds, ordering, and overlap; fill surfaces from the text."""
    checked: list[EntitySpan] = []
    for span in spans:
        if not (0 <= span.start < span.end <= len(text)):
            raise DataError(
                f"span ({span.start}, {span.end}) out of range for text of length {len(text)}"
            )
        _check_kind(span.kind)
        surface = text[span.start : span.end]
        if span.surface and span.surface != surface:
            raise DataError(
                f"span surface {span.surface!r} does not match text {surface!r} "
                f"at ({span.start}, {span.end})"
            )
        checked.append(EntitySpan(span.start, span.end, span.kind, surface))
    ordered = sorted(checked, key=lambda s: (s.start, s.end))
    for a, b in zip(ordered, ordered[1:]):
        if b.start < a.end:
            raise DataError(
                f"overlapping spans ({a.start}, {a.end}, {a.kind}) and "
                f"({b.start}, {b.end}, {b.kind})"
            )
    return ordered


def detect_entities(text: str) -> list[EntitySpan]:
    """Find statute (GS) and court-decision (RS) citations, leftmost-longest."""
    candidates: list[EntitySpan] = []
    for m in _GS_RE.finditer(text):
        candidates.append(EntitySpan(m.start(), m.end(), "GS", m.group(0)))
    for m in _RS_RE.finditer(text):
        if not (m.group("date") or m.group("docket")):
            continue
        candidates.append(EntitySpan(m.start(), m.end(), "RS", m.group(0)))
    candidates.sort(key=lambda s: (s.start, -(s.end - s.start)))
    chosen: list[EntitySpan] = []
    last_end = -1
    for span in candidates:
        if span.start >= last_end:
            chosen.append(span)
            last_end = span.end
    return chosen


def import_spans(
    path: str | Path, texts_by_id: Mapping[str, str]
) -> dict[str, list[EntitySpan]]:
    """Read per-document spans from JSONL {"id", "spans": [{"start","end","kind"}]}."""
    p = Path(path)
    result: dict[str, list[EntitySpan]] = {}
    with p.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{p}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{where}: invalid JSON: {exc}") from exc
            doc_id = record.get("id")
            if not isinstance(doc_id, str) or not doc_id:
                raise DataError(f"{where}: missing document id")
            if doc_id not in texts_by_id:
                raise DataError(f"{where}: unknown document id {doc_id!r}")
            raw_spans = record.get("spans", [])
            if not isinstance(raw_spans, list):
                raise DataError(f"{where}: spans must be a list")
            spans = [
                EntitySpan(
                    start=int(s["start"]), end=int(s["end"]), kind=str(s["kind"]), surface=""
                )
                for s in raw_spans
            ]
            try:
                result[doc_id] = validate_spans(texts_by_id[doc_id], spans)
            except DataError as exc:
                raise DataError(f"{where}: document {doc_id!r}: {exc}") from exc
    return result


def enrich(text: str, spans: Sequence[EntitySpan]) -> str:
    """Wrap each span as <KIND> surface </KIND>, inserting right to left."""
    ordered = validate_spans(text, spans)
    out = text
    for span in reversed(ordered):
        out = (
            out[: span.start]
            + f"<{span.kind}> {span.surface} </{span.kind}>"
            + out[span.end :]
        )
    return out


def strip_tags(tagged: str) -> tuple[str, list[EntitySpan]]:
    """Invert enrich: remove tags and padding, returning text and spans."""
    pieces: list[str] = []
    out_len = 0
    spans: list[EntitySpan] = []
    open_kind: str | None = None
    open_start = 0
    pos = 0
    for m in _TAG_RE.finditer(tagged):
        chunk = tagged[pos : m.start()]
        kind = m.group(1)
        closing = m.group(0).startswith("</")
        if closing:
            if open_kind is None:
                raise DataError(f"closing tag </{kind}> without opener at position {m.start()}")
            if kind != open_kind:
                raise DataError(
                    f"mismatched tags <{open_kind}> ... </{kind}> at position {m.start()}"
                )
            if not chunk.endswith(" "):
                raise DataError(f"missing padding space before </{kind}> at position {m.start()}")
            chunk = chunk[:-1]
            pieces.append(chunk)
            out_len += len(chunk)
            surface = "".join(pieces)[open_start:out_len]
            spans.append(EntitySpan(open_start, out_len, kind, surface))
            open_kind = None
            pos = m.end()
        else:
            if open_kind is not None:
                raise DataError(f"nested tag <{kind}> at position {m.start()}")
            pieces.append(chunk)
            out_len += len(chunk)
            if m.end() >= len(tagged) or tagged[m.end()] != " ":
                raise DataError(f"missing padding space after <{kind}> at position {m.end()}")
            open_kind = kind
            open_start = out_len
            pos = m.end() + 1
    if open_kind is not None:
        raise DataError(f"unclosed tag <{open_kind}>")
    pieces.append(tagged[pos:])
    return "".join(pieces), spans


def normalize_ws(text: str) -> str:
    return " ".join(text.split())


def audit_hallucinations(
    summary: str, source_document: str, kinds: Sequence[str] | None = None
) -> EntityAudit:
    """Check every entity cited in the summary for containment in the source."""
    entities = detect_entities(summary)
    if kinds is not None:
        wanted = set(kinds)
        entities = [e for e in entities if e.kind in wanted]
    norm_source = normalize_ws(source_document)
    unsupported: list[str] = []
    supported = 0
    for ent in entities:
        if normalize_ws(ent.surface) in norm_source:
            supported += 1
        else:
            unsupported.append(ent.surface)
    rate = 1.0 if not entities else supported / len(entities)
    return EntityAudit(
        generated_entities=entities,
        supported=supported,
        unsupported=unsupported,
        support_rate=rate,
    )


def special_tokens(kinds: Sequence[str] = DEFAULT_KINDS) -> list[str]:
    """Tag vocabulary as declared to the generation endpoint."""
    tokens: list[str] = []
    for kind in kinds:
        _check_kind(kind)
        tokens.extend((f"<{kind}>", f"</{kind}>"))
    return tokens
