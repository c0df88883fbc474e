"""Deterministic fixture corpus whose per-phase term counts reproduce the
reference top-20 tables.

Each term occurrence is planted verbatim; docs are padded with unique filler
tokens (count 1 each) that can never form phrases or reach the top-20, and
utility-company mentions are planted as raw company handles so entity merging
is exercised end to end.
"""

from __future__ import annotations

import random
from datetime import datetime, timedelta, timezone

from .corpus import TweetRecord

# (term, per-phase occurrence count); multi-word terms are planted as adjacent
# words and must survive phrase detection.
TOP20 = {
    "before": [
        ("power outage", 11), ("lose power", 9), ("ready", 7), ("nb sb", 7),
        ("power out", 6), ("go", 6), ("cook", 6), ("sfltraffic", 6),
        ("still have power", 5), ("the avenue", 5), ("street", 5),
        ("power go out", 5), ("good", 4), ("wind", 4), ("still", 4),
        ("make", 4), ("stay", 4), ("forecast", 4), ("home", 3), ("tomorrow", 3),
    ],
    "during": [
        ("no power", 68), ("still have power", 52), ("still", 48),
        ("lose power", 48), ("tree", 43), ("good", 40), ("safe", 39),
        ("power out", 37), ("wind", 36), ("go", 31), ("damage", 31),
        ("power go out", 28), ("have power", 28), ("power outage", 26),
        ("without power", 25), ("make", 22), ("power line", 21), ("road", 20),
        ("house", 20), ("time", 20),
    ],
    "after": [
        ("have power", 101), ("no power", 86), ("home", 67),
        ("still no power", 62), ("day", 62), ("utility company", 61),
        ("without power", 60), ("power back", 59), ("power outage", 58),
        ("back", 58), ("still", 51), ("restore", 45), ("work", 45),
        ("open", 45), ("water", 42), ("get power", 42), ("today", 39),
        ("thank you", 38), ("week", 35), ("house", 35),
    ],
}

# Number of posts per phase (the NT values).
PHASE_SIZES = {"before": 77, "during": 550, "after": 1136}

# Below-top-20 occurrences that lift global bigram counts over the minimum
# count: "the avenue" has exactly 5 before-phase occurrences, which alone
# would score zero under the discounting.
EXTRA_OCCURRENCES = {"after": [("the avenue", 10)]}

PHASE_DATES = {
    "before": (datetime(2017, 9, 1, tzinfo=timezone.utc), 9),
    "during": (datetime(2017, 9, 10, tzinfo=timezone.utc), 2),
    "after": (datetime(2017, 9, 12, tzinfo=timezone.utc), 19),
}

# Electricity-related post counts per county; five counties clear the
# min-docs=100 cut, a handful stay small, the rest are unlabeled.
COUNTY_COUNTS = {
    "Miami-Dade": 287,
    "Broward": 215,
    "Orange": 186,
    "Pinellas": 140,
    "Palm Beach": 110,
    "Alachua": 9,
    "Duval": 8,
    "Leon": 7,
    "Monroe": 6,
    "Collier": 5,
}

FILLERS_PER_DOC = 2  # pads corpus size so genuine phrases clear the threshold


def _term_tokens(term: str, alternator: list[int]) -> list[str]:
    if term == "utility company":
        # planted as raw company handles, merged later by merge_entities
        alternator[0] += 1
        return ["fpl"] if alternator[0] % 2 else ["dukeenergy"]
    return term.split()


def table2_corpus(seed: int = 7) -> list[TweetRecord]:
    """Build the full fixture corpus (1,763 records across three phases)."""
    rng = random.Random(seed)
    filler_counter = [0]
    entity_alternator = [0]

    def filler() -> str:
        filler_counter[0] += 1
        return f"zq{filler_counter[0]:05d}"

    records: list[TweetRecord] = []
    for phase, n_docs in PHASE_SIZES.items():
        occurrences: list[list[str]] = []
        for term, count in TOP20[phase] + EXTRA_OCCURRENCES.get(phase, []):
            for _ in range(count):
                occurrences.append(_term_tokens(term, entity_alternator))
        rng.shuffle(occurrences)

        docs: list[list[str]] = [[] for _ in range(n_docs)]
        for i, occ in enumerate(occurrences):
            bucket = docs[i % n_docs]
            if bucket:
                bucket.append(filler())
            bucket.extend(occ)
        for bucket in docs:
            for _ in range(FILLERS_PER_DOC):
                bucket.append(filler())

        start, n_days = PHASE_DATES[phase]
        for i, tokens in enumerate(docs):
            ts = start + timedelta(days=i % n_days, hours=10, minutes=i % 60)
            rid = f"t-{phase}-{i:04d}"
            records.append(
                TweetRecord(
                    id=rid,
                    timestamp=ts,
                    user_id=f"u-{phase}-{i:04d}",
                    text=" ".join(tokens),
                )
            )

    # region assignment over the whole corpus, seeded shuffle
    regions: list = []
    for county, count in COUNTY_COUNTS.items():
        regions.extend([county] * count)
    regions.extend([None] * (len(records) - len(regions)))
    rng.shuffle(regions)
    records = [
        TweetRecord(
            id=r.id, timestamp=r.timestamp, user_id=r.user_id, text=r.text,
            lat=r.lat, lon=r.lon, region=region,
        )
        for r, region in zip(records, regions)
    ]
    return records
