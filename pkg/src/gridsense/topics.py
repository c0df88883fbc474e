"""Top-k term identification, topic aggregation, and engagement metrics.

Terms are unigrams or merged bigram/trigram tokens; a topic's count (ATC) is
the sum of its included term counts in a (phase, region) scope, and topic
engagement is TE = ATC / NT with NT the number of posts in scope.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence

from .phrases import JOIN
from .textprep import StopwordList, TokenDoc, remove_stopwords

ALL_REGIONS = "ALL"
UNKNOWN_REGION = "UNKNOWN"

DEFAULT_ENTITY_MAP = {"fpl": "utility_company", "dukeenergy": "utility_company"}

# Default aggregated-topic definitions (term -> display form with spaces).
DEFAULT_TOPICS: dict[str, tuple[str, ...]] = {
    "no-power": (
        "power outage",
        "lose power",
        "no power",
        "without power",
        "still without power",
        "power out",
        "still no power",
        "power go out",
    ),
    "have-power": (
        "have power",
        "still have power",
        "power back on",
        "power back",
        "get power",
    ),
    "safety-check": ("good", "safe"),
    "damage": ("tree", "damage", "fall power cable", "power line"),
    "restoration": ("utility company", "restore"),
}


class TopicError(Exception):
    pass


@dataclass(frozen=True)
class TermCount:
    term: str  # display form, words separated by spaces
    count: int


@dataclass(frozen=True)
class AggregatedTopic:
    name: str
    included_terms: frozenset[str]

    @classmethod
    def defaults(cls) -> list["AggregatedTopic"]:
        return [cls(name, frozenset(terms)) for name, terms in DEFAULT_TOPICS.items()]


def check_disjoint(topics: Sequence[AggregatedTopic]) -> None:
    seen: dict[str, str] = {}
    for t in topics:
        for term in t.included_terms:
            if term in seen:
                raise TopicError(f"term {term!r} in both {seen[term]!r} and {t.name!r}")
            seen[term] = t.name


def display_term(token: str) -> str:
    return token.replace(JOIN, " ")


def merge_entities(doc: TokenDoc, entity_map: Optional[Mapping[str, str]] = None) -> TokenDoc:
    """Replace utility-company tokens by their shared merged term."""
    if entity_map is None:
        entity_map = DEFAULT_ENTITY_MAP
    return doc.with_tokens([entity_map.get(t, t) for t in doc.tokens])


def remove_useless(
    doc: TokenDoc, stopwords: StopwordList, keywords: Iterable[str]
) -> TokenDoc:
    """Drop stop words plus the filter keywords that remain as unigrams."""
    return doc.with_tokens(remove_stopwords(doc.tokens, stopwords, keywords))


def prepare_topic_docs(
    docs: Sequence[TokenDoc],
    stopwords: StopwordList,
    keywords: Iterable[str],
    entity_map: Optional[Mapping[str, str]] = None,
) -> list[TokenDoc]:
    """Entity merge then useless-token removal, for phrase-merged docs."""
    keywords = frozenset(keywords)
    return [
        remove_useless(merge_entities(d, entity_map), stopwords, keywords) for d in docs
    ]


def term_counts(docs: Iterable[TokenDoc]) -> Counter:
    """Occurrence counts of display-form terms (a term twice in one post
    counts twice)."""
    counts: Counter[str] = Counter()
    for doc in docs:
        for tok in doc.tokens:
            counts[display_term(tok)] += 1
    return counts


def top_k_terms(docs: Sequence[TokenDoc], k: int) -> list[TermCount]:
    """k highest-count terms; ties broken lexicographically."""
    if k < 1:
        raise TopicError("k must be >= 1")
    counts = term_counts(docs)
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return [TermCount(t, c) for t, c in ranked[:k]]


def aggregate_topics(
    counts: Mapping[str, int], topics: Sequence[AggregatedTopic]
) -> dict[str, int]:
    """ATC per topic: sum of included term counts present in scope."""
    check_disjoint(topics)
    return {
        t.name: sum(counts.get(term, 0) for term in t.included_terms) for t in topics
    }


def topic_engagement(atc: int, nt: int) -> Fraction:
    """TE = ATC / NT, exact."""
    if nt <= 0:
        raise TopicError("NT must be > 0")
    return Fraction(atc, nt)


@dataclass(frozen=True)
class EngagementRow:
    phase: str
    region: str  # county name or ALL
    topic: str
    atc: int
    nt: int

    @property
    def te(self) -> Fraction:
        return topic_engagement(self.atc, self.nt)


@dataclass(frozen=True)
class EngagementReport:
    rows: tuple[EngagementRow, ...]

    def write_csv(self, path, with_region: bool = True) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            w = csv.writer(f, lineterminator="\n")
            header = ["phase", "topic", "ATC", "NT", "TE"]
            if with_region:
                header.insert(0, "region")
            w.writerow(header)
            for r in self.rows:
                te = f"{float(r.te):.4f}"
                row = [r.phase, r.topic, r.atc, r.nt, te]
                if with_region:
                    row.insert(0, r.region)
                w.writerow(row)


def _scope_rows(
    docs: Sequence[TokenDoc],
    topics: Sequence[AggregatedTopic],
    region: str,
    phase_order: Sequence[str],
) -> list[EngagementRow]:
    rows = []
    for phase in phase_order:
        scope = [d for d in docs if d.phase == phase]
        nt = len(scope)
        if nt == 0:
            continue  # undefined TE: row omitted
        atc = aggregate_topics(term_counts(scope), topics)
        for t in topics:
            rows.append(EngagementRow(phase, region, t.name, atc[t.name], nt))
    return rows


def engagement_report(
    docs: Sequence[TokenDoc],
    topics: Sequence[AggregatedTopic],
    phase_order: Sequence[str],
) -> EngagementReport:
    """Whole-corpus (ALL-region) engagement per phase and topic."""
    return EngagementReport(tuple(_scope_rows(docs, topics, ALL_REGIONS, phase_order)))


def region_doc_counts(docs: Iterable[TokenDoc]) -> dict[str, int]:
    counts: Counter[str] = Counter()
    for d in docs:
        counts[d.region if d.region else UNKNOWN_REGION] += 1
    return dict(counts)


def regional_breakdown(
    docs: Sequence[TokenDoc],
    topics: Sequence[AggregatedTopic],
    phase_order: Sequence[str],
    min_docs: int = 100,
) -> EngagementReport:
    """Per-region engagement for regions with at least min_docs posts; NT is
    region-local. Unlabeled docs fall in UNKNOWN and are excluded."""
    if min_docs < 1:
        raise TopicError("min_docs must be >= 1")
    counts = region_doc_counts(docs)
    regions = sorted(
        r for r, c in counts.items() if r != UNKNOWN_REGION and c >= min_docs
    )
    rows: list[EngagementRow] = []
    for region in regions:
        scope = [d for d in docs if d.region == region]
        rows.extend(_scope_rows(scope, topics, region, phase_order))
    return EngagementReport(tuple(rows))


def write_topk_csv(terms: Sequence[TermCount], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["rank", "term", "count"])
        for rank, tc in enumerate(terms, start=1):
            w.writerow([rank, tc.term, tc.count])
