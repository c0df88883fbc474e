"""Corpus ingestion, disaster-phase assignment, bot and keyword filtering."""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import date, datetime, timezone
from typing import Iterable, Optional, Sequence

from .textprep import clean, tokenize


class CorpusError(Exception):
    """Raised on unrecoverable corpus problems (duplicate ids, hard-fail parse)."""


@dataclass(frozen=True)
class TweetRecord:
    """One ingested geotagged post."""

    id: str
    timestamp: datetime  # always timezone-aware UTC
    user_id: str
    text: str
    lat: Optional[float] = None
    lon: Optional[float] = None
    region: Optional[str] = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("record id must be nonempty")
        if self.timestamp.tzinfo is None:
            raise ValueError("timestamp must be timezone-aware")
        if self.lat is not None and not -90.0 <= self.lat <= 90.0:
            raise ValueError(f"lat out of range: {self.lat}")
        if self.lon is not None and not -180.0 <= self.lon <= 180.0:
            raise ValueError(f"lon out of range: {self.lon}")


@dataclass(frozen=True)
class PhaseWindow:
    name: str
    start: date  # inclusive
    end: date  # inclusive


@dataclass(frozen=True)
class PhaseWindows:
    """Ordered, non-overlapping [start, end] calendar-date windows."""

    phases: tuple[PhaseWindow, ...]

    def __post_init__(self):
        prev_end = None
        for w in self.phases:
            if w.end < w.start:
                raise ValueError(f"phase {w.name!r} ends before it starts")
            if prev_end is not None and w.start <= prev_end:
                raise ValueError("phase windows must be ordered and non-overlapping")
            prev_end = w.end

    @classmethod
    def irma_default(cls) -> "PhaseWindows":
        return cls(
            (
                PhaseWindow("before", date(2017, 9, 1), date(2017, 9, 9)),
                PhaseWindow("during", date(2017, 9, 10), date(2017, 9, 11)),
                PhaseWindow("after", date(2017, 9, 12), date(2017, 9, 30)),
            )
        )

    def names(self) -> list[str]:
        return [w.name for w in self.phases]


DEFAULT_KEYWORDS = frozenset(
    {"blackout", "electric", "electricity", "outage", "power", "dukeenergy", "fpl"}
)
DEFAULT_ABBREVIATIONS = {"pwr": "power"}
DEFAULT_LOCAL_ENTITIES = frozenset({"dukeenergy", "fpl"})


@dataclass(frozen=True)
class KeywordScheme:
    """Filter keywords, alias->canonical abbreviations, and utility-company names."""

    keywords: frozenset[str] = DEFAULT_KEYWORDS
    abbreviations: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_ABBREVIATIONS))
    local_entities: frozenset[str] = DEFAULT_LOCAL_ENTITIES

    def __post_init__(self):
        for alias, canon in self.abbreviations.items():
            if canon not in self.keywords:
                raise ValueError(f"abbreviation {alias!r} maps to unknown keyword {canon!r}")
        if not self.local_entities <= self.keywords:
            raise ValueError("local entities must be a subset of keywords")


@dataclass
class LoadError:
    line_no: int
    message: str


@dataclass
class LoadResult:
    records: list[TweetRecord]
    errors: list[LoadError]


_CANONICAL_FIELDS = ("id", "timestamp", "user_id", "text", "lat", "lon", "region")


def _parse_timestamp(value: str) -> datetime:
    ts = datetime.fromisoformat(value.replace("Z", "+00:00"))
    if ts.tzinfo is None:
        ts = ts.replace(tzinfo=timezone.utc)
    return ts.astimezone(timezone.utc)


def record_from_dict(obj: dict, schema: Optional[dict[str, str]] = None) -> TweetRecord:
    """Build a TweetRecord from a parsed line, remapping field names via schema
    (canonical name -> source name)."""
    schema = schema or {}

    def get(name):
        return obj.get(schema.get(name, name))

    for required in ("id", "timestamp", "user_id", "text"):
        if get(required) is None:
            raise ValueError(f"missing field {required!r}")
    lat, lon = get("lat"), get("lon")
    return TweetRecord(
        id=str(get("id")),
        timestamp=_parse_timestamp(str(get("timestamp"))),
        user_id=str(get("user_id")),
        text=str(get("text")),
        lat=float(lat) if lat is not None else None,
        lon=float(lon) if lon is not None else None,
        region=get("region"),
    )


def load_corpus(
    path,
    schema: Optional[dict[str, str]] = None,
    fail_hard: bool = False,
) -> LoadResult:
    """Read newline-delimited JSON records.

    Malformed lines go to the error report (or raise, with fail_hard).
    Duplicate ids always raise: double-counting corrupts every downstream count.
    """
    records: list[TweetRecord] = []
    errors: list[LoadError] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                rec = record_from_dict(json.loads(line), schema)
            except (ValueError, KeyError, TypeError) as exc:
                if fail_hard:
                    raise CorpusError(f"line {line_no}: {exc}") from exc
                errors.append(LoadError(line_no, str(exc)))
                continue
            if rec.id in seen:
                raise CorpusError(f"line {line_no}: duplicate record id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return LoadResult(records, errors)


def assign_phase(record: TweetRecord, windows: PhaseWindows) -> Optional[str]:
    """Phase whose inclusive date window contains the record's UTC calendar date."""
    day = record.timestamp.astimezone(timezone.utc).date()
    for w in windows.phases:
        if w.start <= day <= w.end:
            return w.name
    return None


def filter_bots(
    corpus: Sequence[TweetRecord], max_posts: int = 10
) -> tuple[list[TweetRecord], set[str]]:
    """Drop every post from users with more than max_posts posts in the corpus."""
    if max_posts < 1:
        raise ValueError("max_posts must be >= 1")
    per_user = Counter(r.user_id for r in corpus)
    removed = {u for u, c in per_user.items() if c > max_posts}
    kept = [r for r in corpus if r.user_id not in removed]
    return kept, removed


def match_keywords(text: str, scheme: KeywordScheme) -> set[str]:
    """Canonical keywords whose token (or alias token) occurs in the text.

    Matching is token-level after clean(): "powerful" does not match "power",
    while "@FPL" and "#power" do match.
    """
    matched: set[str] = set()
    for tok in tokenize(clean(text)):
        if tok in scheme.keywords:
            matched.add(tok)
        elif tok in scheme.abbreviations:
            matched.add(scheme.abbreviations[tok])
    return matched


def filter_keywords(
    corpus: Sequence[TweetRecord], scheme: Optional[KeywordScheme] = None
) -> tuple[list[tuple[TweetRecord, set[str]]], dict[str, int]]:
    """Keep records containing at least one scheme token; count matches per
    canonical keyword (a record may count toward several keywords)."""
    scheme = scheme or KeywordScheme()
    matched: list[tuple[TweetRecord, set[str]]] = []
    counts: Counter[str] = Counter({k: 0 for k in sorted(scheme.keywords)})
    for rec in corpus:
        hits = match_keywords(rec.text, scheme)
        if hits:
            matched.append((rec, hits))
            for k in hits:
                counts[k] += 1
    return matched, dict(counts)
