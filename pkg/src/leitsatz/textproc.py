"""Tokenization and sentence segmentation tuned to German court judgments.

Generic splitters mangle the citation apparatus of legal German: "§ 125 BGB"
must stay three tokens ("§", "125", "bgb"), docket numbers like "75/19" must
not be split at the slash, and a sentence must not end after "Abs." or inside
a parenthesised citation. The rules here are deliberately small and
deterministic; the abbreviation list ships as an editable data file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Protocol, Sequence

from collections import Counter

from .errors import DataError, TransportError

# Token classes, tried in order: numbers with internal punctuation (decimals,
# dates, dockets like 75/19), plain numerals with an optional statute letter
# (305a), letter runs, section signs, any other single punctuation character.
_TOKEN_RE = re.compile(
    r"\d+(?:[.,/]\d+)+[a-z]?"
    r"|\d+[a-z]?"
    r"|[^\W\d_]+"
    r"|§+"
    r"|[^\w\s]",
    re.UNICODE,
)

_TERMINALS = ".!?"
_CLOSING_QUOTES = "\"'“”‘’»«"


@dataclass
class TokenStream:
    """Lowercased tokens plus their (start, end) offsets into the source."""

    tokens: list[str]
    offsets: list[tuple[int, int]]

    def __len__(self) -> int:
        return len(self.tokens)


@dataclass
class Sentence:
    text: str
    start: int
    end: int


@dataclass
class SentenceList:
    sentences: list[Sentence]

    def texts(self) -> list[str]:
        return [s.text for s in self.sentences]

    def __len__(self) -> int:
        return len(self.sentences)


def tokenize(text: str) -> TokenStream:
    """Split text into lowercased tokens, keeping legal number/citation tokens whole."""
    tokens: list[str] = []
    offsets: list[tuple[int, int]] = []
    for m in _TOKEN_RE.finditer(text):
        tokens.append(m.group(0).lower())
        offsets.append((m.start(), m.end()))
    return TokenStream(tokens=tokens, offsets=offsets)


def _default_abbreviation_path():
    return resources.files("leitsatz").joinpath("data/abbreviations_de.txt")


def load_abbreviations(path: str | Path | None = None) -> tuple[str, ...]:
    """Read the sentence-protecting abbreviation list (one entry per line, UTF-8)."""
    if path is None:
        raw = _default_abbreviation_path().read_text(encoding="utf-8")
    else:
        raw = Path(path).read_text(encoding="utf-8")
    entries = []
    for line in raw.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            entries.append(line)
    return tuple(entries)


_DEFAULT_ABBREVIATIONS: tuple[str, ...] | None = None


def _abbreviations() -> tuple[str, ...]:
    global _DEFAULT_ABBREVIATIONS
    if _DEFAULT_ABBREVIATIONS is None:
        _DEFAULT_ABBREVIATIONS = load_abbreviations()
    return _DEFAULT_ABBREVIATIONS


def _is_letter(ch: str) -> bool:
    return ch.isalpha()


def _ends_with_abbreviation(text: str, end: int, abbreviations: Sequence[str]) -> bool:
    """True if text[:end] (ending at a terminal '.') closes a protected abbreviation."""
    head = text[:end]
    low = head.casefold()
    for entry in abbreviations:
        e = entry.casefold()
        if e.endswith("."):
            if low.endswith(e):
                before = end - len(e) - 1
                if before < 0 or not _is_letter(text[before]):
                    return True
        else:
            # Entries without a dot protect "ENTRY." as a whole.
            if low.endswith(e + "."):
                before = end - len(e) - 2
                if before < 0 or not _is_letter(text[before]):
                    return True
    # Single-letter words before a dot are abbreviated phrases ("z. B.", "u. a.").
    if end >= 2 and _is_letter(text[end - 2]):
        if end == 2 or not _is_letter(text[end - 3]):
            return True
    # A dot directly after a digit is an ordinal ("12. März", "2. Auflage").
    if end >= 2 and text[end - 2].isdigit():
        return True
    return False


def _starts_sentence(ch: str) -> bool:
    return ch.isupper() or ch.isdigit() or ch in "§„“\"(»"


def split_sentences(text: str, abbreviations: Sequence[str] | None = None) -> SentenceList:
    """Segment text into sentences, protecting abbreviations and parenthesised citations.

    A boundary needs terminal punctuation, following whitespace, and a
    capital/paragraph/number marker starting the next sentence. Returned spans
    are ordered, non-overlapping, and cover every non-whitespace character.
    """
    abbrevs = _abbreviations() if abbreviations is None else tuple(abbreviations)
    n = len(text)
    boundaries: list[int] = []
    depth = 0
    i = 0
    while i < n:
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth = max(0, depth - 1)
        elif ch in _TERMINALS and depth == 0:
            j = i + 1
            while j < n and text[j] in _TERMINALS:
                j += 1
            term_end = j
            while j < n and text[j] in _CLOSING_QUOTES:
                j += 1
            k = j
            while k < n and text[k].isspace():
                k += 1
            if (
                k > j
                and k < n
                and _starts_sentence(text[k])
                and not _ends_with_abbreviation(text, term_end, abbrevs)
            ):
                boundaries.append(j)
            i = j
            continue
        i += 1

    sentences: list[Sentence] = []
    prev = 0
    for bound in boundaries + [n]:
        seg = text[prev:bound]
        stripped = seg.strip()
        if stripped:
            start = prev + (len(seg) - len(seg.lstrip()))
            end = prev + len(seg.rstrip())
            sentences.append(Sentence(text=text[start:end], start=start, end=end))
        prev = bound
    return SentenceList(sentences=sentences)


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """Multiset of consecutive n-token tuples; exactly max(0, len - n + 1) items."""
    if n < 1:
        raise DataError(f"n-gram order must be >= 1, got {n}")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


class TokenCounter(Protocol):
    """Counting contract used wherever texts are measured in tokens.

    Counts are non-negative and roughly additive: count(a + b) may exceed
    count(a) + count(b) by at most one token of slack (a boundary merge).
    """

    def count(self, text: str) -> int: ...

    def count_many(self, texts: Sequence[str]) -> list[int]: ...


class WordTokenCounter:
    """Fallback counter: the length of the word tokenization above (zero slack)."""

    def count(self, text: str) -> int:
        return len(tokenize(text))

    def count_many(self, texts: Sequence[str]) -> list[int]:
        return [self.count(t) for t in texts]


@dataclass
class RemoteTokenCounter:
    """Client for a tokenizer service: POST {base_url}/count {"texts": [...]}."""

    base_url: str
    timeout: float = 30.0
    _session: object = field(default=None, repr=False)

    def count_many(self, texts: Sequence[str]) -> list[int]:
        import requests

        session = self._session or requests
        try:
            resp = session.post(
                self.base_url.rstrip("/") + "/count",
                json={"texts": list(texts)},
                timeout=self.timeout,
            )
            resp.raise_for_status()
            payload = resp.json()
        except requests.RequestException as exc:
            raise TransportError(f"tokenizer service at {self.base_url}: {exc}") from exc
        counts = payload.get("counts")
        if not isinstance(counts, list) or len(counts) != len(texts):
            raise TransportError(
                f"tokenizer service returned {len(counts) if isinstance(counts, list) else 'no'} "
                f"counts for {len(texts)} texts"
            )
        return [int(c) for c in counts]

    def count(self, text: str) -> int:
        return self.count_many([text])[0]


def count_tokens(text: str, counter: TokenCounter) -> int:
    """Count tokens under the given counter contract."""
    c = counter.count(text)
    if c < 0:
        raise DataError(f"token counter returned a negative count: {c}")
    return c
