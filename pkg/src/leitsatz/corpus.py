"""Judgment corpus: ingestion, reasons extraction, splits, and length stats.

Canonical storage is JSONL, one judgment per line. XML directories are
normalized into the same model at ingest time. The evaluable source text of
a judgment is the reasons section minus its procedural-history subsection.
"""

from __future__ import annotations

import json
import math
import random
import re
import statistics
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError, DataError
from .textproc import TokenCounter

DEFAULT_REASONS_HEADING = "Entscheidungsgründe"

_LABEL_TRIM = " \t\r\n.):(§"


@dataclass
class Subsection:
    label: str
    body: str


@dataclass
class Section:
    heading: str
    body: str = ""
    subsections: list[Subsection] = field(default_factory=list)


@dataclass
class Judgment:
    id: str
    date: str
    court: str
    sections: list[Section]
    gold_guiding_principles: str = ""


class CorpusStore:
    """Ordered, id-unique collection of judgments."""

    def __init__(self, judgments: Iterable[Judgment] = ()):
        self._by_id: dict[str, Judgment] = {}
        for j in judgments:
            self.add(j)

    def add(self, judgment: Judgment) -> None:
        if judgment.id in self._by_id:
            raise DataError(f"duplicate judgment id: {judgment.id!r}")
        self._by_id[judgment.id] = judgment

    def get(self, judgment_id: str) -> Judgment:
        try:
            return self._by_id[judgment_id]
        except KeyError:
            raise DataError(f"unknown judgment id: {judgment_id!r}") from None

    def ids(self) -> list[str]:
        return list(self._by_id)

    def __iter__(self) -> Iterator[Judgment]:
        return iter(self._by_id.values())

    def __len__(self) -> int:
        return len(self._by_id)

    def __contains__(self, judgment_id: str) -> bool:
        return judgment_id in self._by_id


def _require_str(record: dict, key: str, where: str, default: str | None = None) -> str:
    if key not in record:
        if default is not None:
            return default
        raise DataError(f"{where}: missing field {key!r}")
    value = record[key]
    if not isinstance(value, str):
        raise DataError(f"{where}: field {key!r} must be a string, got {type(value).__name__}")
    return value


def judgment_from_record(record: dict, where: str = "record") -> Judgment:
    """Build a Judgment from one decoded JSONL record, validating the schema."""
    if not isinstance(record, dict):
        raise DataError(f"{where}: expected an object, got {type(record).__name__}")
    jid = _require_str(record, "id", where)
    if not jid:
        raise DataError(f"{where}: empty id")
    raw_sections = record.get("sections")
    if not isinstance(raw_sections, list) or not raw_sections:
        raise DataError(f"{where}: judgment {jid!r} needs at least one section")
    sections: list[Section] = []
    for si, raw in enumerate(raw_sections):
        sw = f"{where}, section {si}"
        if not isinstance(raw, dict):
            raise DataError(f"{sw}: expected an object")
        heading = _require_str(raw, "heading", sw)
        if not heading.strip():
            raise DataError(f"{sw}: empty heading")
        body = _require_str(raw, "body", sw, default="")
        subsections: list[Subsection] = []
        labels: set[str] = set()
        for bi, sub in enumerate(raw.get("subsections") or []):
            bw = f"{sw}, subsection {bi}"
            if not isinstance(sub, dict):
                raise DataError(f"{bw}: expected an object")
            label = _require_str(sub, "label", bw)
            if label in labels:
                raise DataError(f"{sw}: duplicate subsection label {label!r}")
            labels.add(label)
            subsections.append(Subsection(label=label, body=_require_str(sub, "body", bw, default="")))
        sections.append(Section(heading=heading, body=body, subsections=subsections))
    return Judgment(
        id=jid,
        date=_require_str(record, "date", where, default=""),
        court=_require_str(record, "court", where, default=""),
        sections=sections,
        gold_guiding_principles=_require_str(record, "guiding_principles", where, default=""),
    )


def judgment_to_record(j: Judgment) -> dict:
    return {
        "id": j.id,
        "date": j.date,
        "court": j.court,
        "sections": [
            {
                "heading": s.heading,
                "body": s.body,
                "subsections": [{"label": b.label, "body": b.body} for b in s.subsections],
            }
            for s in j.sections
        ],
        "guiding_principles": j.gold_guiding_principles,
    }


def _ingest_jsonl(path: Path) -> CorpusStore:
    store = CorpusStore()
    duplicates: list[str] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path}:{lineno}"
            try:
                record = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"{where}: invalid JSON: {exc}") from exc
            judgment = judgment_from_record(record, where)
            if judgment.id in seen:
                duplicates.append(judgment.id)
                continue
            seen.add(judgment.id)
            store.add(judgment)
    if duplicates:
        raise DataError(f"duplicate judgment ids: {', '.join(sorted(set(duplicates)))}")
    return store


def _text(elem: ET.Element | None) -> str:
    if elem is None or elem.text is None:
        return ""
    return elem.text


def _ingest_xml_dir(path: Path) -> CorpusStore:
    store = CorpusStore()
    duplicates: list[str] = []
    seen: set[str] = set()
    files = sorted(path.glob("*.xml"))
    if not files:
        return store
    for file in files:
        where = str(file)
        try:
            root = ET.parse(file).getroot()
        except ET.ParseError as exc:
            raise DataError(f"{where}: invalid XML: {exc}") from exc
        record = {
            "id": root.get("id", ""),
            "date": root.get("date", ""),
            "court": root.get("court", ""),
            "guiding_principles": _text(root.find("guiding_principles")),
            "sections": [
                {
                    "heading": sec.get("heading", ""),
                    "body": _text(sec.find("body")),
                    "subsections": [
                        {"label": sub.get("label", ""), "body": _text(sub.find("body"))}
                        for sub in sec.findall("subsection")
                    ],
                }
                for sec in root.findall("section")
            ],
        }
        judgment = judgment_from_record(record, where)
        if judgment.id in seen:
            duplicates.append(judgment.id)
            continue
        seen.add(judgment.id)
        store.add(judgment)
    if duplicates:
        raise DataError(f"duplicate judgment ids: {', '.join(sorted(set(duplicates)))}")
    return store


def ingest(path: str | Path, format: str = "jsonl") -> CorpusStore:
    """Load a corpus from a JSONL file or a directory of XML judgment files."""
    p = Path(path)
    if not p.exists():
        raise DataError(f"corpus path does not exist: {p}")
    if format == "jsonl":
        return _ingest_jsonl(p)
    if format == "xml-dir":
        if not p.is_dir():
            raise DataError(f"xml-dir ingestion needs a directory, got {p}")
        return _ingest_xml_dir(p)
    raise ConfigError(f"unknown corpus format: {format!r}")


def export_jsonl(store: CorpusStore, path: str | Path) -> None:
    """Write the canonical JSONL form; ingest(export(s)) reproduces s exactly."""
    p = Path(path)
    with p.open("w", encoding="utf-8") as fh:
        for judgment in store:
            fh.write(json.dumps(judgment_to_record(judgment), ensure_ascii=False))
            fh.write("\n")


def _normalize_heading(heading: str) -> str:
    return " ".join(heading.split()).casefold()


def _is_subsection_one(label: str) -> bool:
    return label.strip(_LABEL_TRIM) == "I"


def extract_reasons(j: Judgment, heading: str = DEFAULT_REASONS_HEADING) -> str:
    """Return the evaluable reasons text of a judgment.

    Picks the first section whose normalized heading equals `heading`
    (case-insensitive, whitespace-collapsed), drops the subsection labeled
    "I", and joins the remaining subsection bodies with a blank line. A
    section without subsections contributes its full body.
    """
    wanted = _normalize_heading(heading)
    for section in j.sections:
        if _normalize_heading(section.heading) != wanted:
            continue
        if not section.subsections:
            return section.body
        kept = [sub.body for sub in section.subsections if not _is_subsection_one(sub.label)]
        return "\n\n".join(kept)
    raise DataError(f"reasons section missing in judgment {j.id!r} (heading {heading!r})")


@dataclass
class SkipReport:
    """Judgments dropped during batch extraction, with the reason per id."""

    skipped: list[dict] = field(default_factory=list)

    def add(self, judgment_id: str, reason: str) -> None:
        self.skipped.append({"id": judgment_id, "reason": reason})

    @property
    def count(self) -> int:
        return len(self.skipped)

    def to_dict(self) -> dict:
        return {"skipped_count": self.count, "skipped": list(self.skipped)}


@dataclass(frozen=True)
class SourceGoldPair:
    judgment_id: str
    source: str
    gold: str


def make_pairs(
    store: CorpusStore, heading: str = DEFAULT_REASONS_HEADING
) -> tuple[list[SourceGoldPair], SkipReport]:
    """Extract (source, gold) pairs for every judgment, skipping the broken ones."""
    pairs: list[SourceGoldPair] = []
    report = SkipReport()
    for judgment in store:
        try:
            source = extract_reasons(judgment, heading)
        except DataError as exc:
            report.add(judgment.id, str(exc))
            continue
        pairs.append(
            SourceGoldPair(
                judgment_id=judgment.id,
                source=source,
                gold=judgment.gold_guiding_principles,
            )
        )
    return pairs, report


@dataclass(frozen=True)
class SplitAssignment:
    split: str
    judgment_ids: frozenset[str]


@dataclass(frozen=True)
class CorpusSplit:
    train: SplitAssignment
    valid: SplitAssignment
    test: SplitAssignment

    def sizes(self) -> tuple[int, int, int]:
        return (
            len(self.train.judgment_ids),
            len(self.valid.judgment_ids),
            len(self.test.judgment_ids),
        )

    def split_of(self, judgment_id: str) -> str:
        for part in (self.train, self.valid, self.test):
            if judgment_id in part.judgment_ids:
                return part.split
        raise DataError(f"judgment {judgment_id!r} is in no split")


def split_sizes(total: int, ratios: Sequence[float]) -> tuple[int, int, int]:
    """Largest-remainder apportionment of `total` across three ratios.

    Floors each exact share, then hands out the remainder by descending
    fractional part; ties go in train, valid, test order.
    """
    exact = [total * r for r in ratios]
    base = [int(math.floor(e + 1e-9)) for e in exact]
    fractions = [e - b for e, b in zip(exact, base)]
    remainder = total - sum(base)
    order = sorted(range(3), key=lambda i: (-fractions[i], i))
    while remainder < 0:
        # Only reachable through float snap artifacts; take back from the
        # smallest fractional part.
        base[order[-1]] -= 1
        remainder += 1
    for i in range(remainder):
        base[order[i % 3]] += 1
    return base[0], base[1], base[2]


def split_corpus(store: CorpusStore, ratios: Sequence[float], seed: int) -> CorpusSplit:
    """Deterministically partition the corpus into train/valid/test by seed."""
    if len(ratios) != 3:
        raise ConfigError(f"need exactly three split ratios, got {len(ratios)}")
    if any(r <= 0 for r in ratios):
        raise ConfigError(f"split ratios must be positive, got {tuple(ratios)}")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ConfigError(f"split ratios must sum to 1, got {sum(ratios)!r}")
    if len(store) == 0:
        raise DataError("cannot split an empty corpus")

    ids = store.ids()
    rng = random.Random(seed)
    rng.shuffle(ids)
    n_train, n_valid, n_test = split_sizes(len(ids), ratios)
    return CorpusSplit(
        train=SplitAssignment("train", frozenset(ids[:n_train])),
        valid=SplitAssignment("valid", frozenset(ids[n_train : n_train + n_valid])),
        test=SplitAssignment("test", frozenset(ids[n_train + n_valid :])),
    )


@dataclass(frozen=True)
class LengthStats:
    min: int
    mean: float
    max: int
    std: float

    def to_dict(self) -> dict:
        return {"min": self.min, "mean": self.mean, "max": self.max, "std": self.std}


def length_stats(texts: Sequence[str], counter: TokenCounter) -> LengthStats:
    """Token-count statistics over texts; std is the sample (n-1) estimator."""
    if not texts:
        raise DataError("length_stats needs at least one text")
    counts = counter.count_many(texts)
    std = statistics.stdev(counts) if len(counts) > 1 else 0.0
    return LengthStats(
        min=min(counts),
        mean=float(statistics.mean(counts)),
        max=max(counts),
        std=float(std),
    )


def stats_table(stats_by_split: dict[str, LengthStats]) -> dict:
    """Rows (split name) by columns (min/mean/max/std), JSON-ready."""
    return {name: st.to_dict() for name, st in stats_by_split.items()}


@dataclass
class ExclusionReport:
    """Gold-length outlier filtering: who was dropped and at what count."""

    threshold: int
    excluded: list[dict] = field(default_factory=list)
    kept_count: int = 0

    def to_dict(self) -> dict:
        return {
            "max_gold_tokens": self.threshold,
            "excluded_count": len(self.excluded),
            "kept_count": self.kept_count,
            "excluded": list(self.excluded),
        }


def filter_gold_outliers(
    pairs: Sequence[SourceGoldPair], max_gold_tokens: int, counter: TokenCounter
) -> tuple[list[SourceGoldPair], ExclusionReport]:
    """Drop pairs whose gold summary exceeds the token threshold."""
    if max_gold_tokens <= 0:
        raise ConfigError(f"max_gold_tokens must be positive, got {max_gold_tokens}")
    report = ExclusionReport(threshold=max_gold_tokens)
    kept: list[SourceGoldPair] = []
    counts = counter.count_many([p.gold for p in pairs])
    for pair, count in zip(pairs, counts):
        if count <= max_gold_tokens:
            kept.append(pair)
        else:
            report.excluded.append({"id": pair.judgment_id, "gold_tokens": count})
    report.kept_count = len(kept)
    return kept, report
