"""Seeded synthetic corpus generator for pipeline testing.

Produces raw records with controllable phase/region distributions, planted
formulaic expressions, hyperactive (bot) accounts, and keyword-free noise.
The real dataset behind the method is private; this stands in for it.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from datetime import datetime, timedelta, timezone
from typing import Optional

from .classify import NEGATIVE_LABEL, POSITIVE_LABEL
from .corpus import PhaseWindows, TweetRecord

DEFAULT_PLANTED = {
    "no power": 0.30,
    "still no power": 0.10,
    "still have power": 0.10,
    "lose power": 0.15,
    "power back": 0.10,
}

ELECTRIC_FILLER = [
    "since", "last", "night", "house", "whole", "street", "dark", "hot",
    "hope", "crew", "fix", "soon", "generator", "candle", "flashlight",
]

NOISE_VOCAB = [
    "stocking", "bread", "milk", "gas", "station", "traffic", "beach",
    "closed", "school", "game", "weekend", "coffee", "morning", "rain",
    "family", "dog", "cat", "movie", "music", "lunch", "store", "friend",
]

# Keyword-bearing but non-electricity contexts ("God's power and strength"):
# these survive the keyword filter yet are negative samples.
CONFUSABLE_VOCAB = [
    "god", "strength", "manifested", "gym", "workout", "ranger", "song",
    "nap", "girl", "vibe", "flower", "prayer", "spirit", "love", "win",
]
CONFUSABLE_KEYWORDS = ["power", "electric"]

DEFAULT_REGIONS = {
    "Miami-Dade": 0.3, "Broward": 0.25, "Orange": 0.2,
    "Pinellas": 0.15, "Palm Beach": 0.1,
}


@dataclass(frozen=True)
class SynthParams:
    n_records: int = 2000
    noise_fraction: float = 0.5  # fraction of organic records with no keyword
    confusable_fraction: float = 0.1  # keyword-matched negatives
    planted: dict = field(default_factory=lambda: dict(DEFAULT_PLANTED))
    regions: dict = field(default_factory=lambda: dict(DEFAULT_REGIONS))
    phase_weights: dict = field(
        default_factory=lambda: {"before": 0.2, "during": 0.3, "after": 0.5}
    )
    n_bots: int = 0
    bot_posts: int = 15
    doc_len: int = 8

    def __post_init__(self):
        if self.n_records < 0 or not 0.0 <= self.noise_fraction <= 1.0:
            raise ValueError("invalid synth params")
        if self.noise_fraction + self.confusable_fraction > 1.0:
            raise ValueError("noise and confusable fractions exceed 1")


def _sample_weighted(rng: random.Random, weights: dict):
    items = sorted(weights.items())
    total = sum(w for _, w in items)
    x = rng.random() * total
    acc = 0.0
    for key, w in items:
        acc += w
        if x <= acc:
            return key
    return items[-1][0]


def _timestamp_in(rng: random.Random, windows: PhaseWindows, phase: str) -> datetime:
    w = next(p for p in windows.phases if p.name == phase)
    span_days = (w.end - w.start).days + 1
    day = rng.randrange(span_days)
    seconds = rng.randrange(86400)
    base = datetime(w.start.year, w.start.month, w.start.day, tzinfo=timezone.utc)
    return base + timedelta(days=day, seconds=seconds)


def generate(
    params: SynthParams,
    seed: int = 42,
    windows: Optional[PhaseWindows] = None,
) -> tuple[list[TweetRecord], dict[str, str]]:
    """Generate (records, labels). Labels mark electricity vs noise records;
    bot posts are unlabeled noise on top."""
    rng = random.Random(seed)
    windows = windows or PhaseWindows.irma_default()
    records: list[TweetRecord] = []
    labels: dict[str, str] = {}

    for i in range(params.n_records):
        rid = f"s{i:06d}"
        phase = _sample_weighted(rng, params.phase_weights)
        region = _sample_weighted(rng, params.regions) if params.regions else None
        ts = _timestamp_in(rng, windows, phase)
        draw = rng.random()
        if draw < params.noise_fraction:
            words = [rng.choice(NOISE_VOCAB) for _ in range(params.doc_len)]
            labels[rid] = NEGATIVE_LABEL
        elif draw < params.noise_fraction + params.confusable_fraction:
            words = [rng.choice(CONFUSABLE_KEYWORDS)]
            while len(words) < params.doc_len:
                words.append(rng.choice(CONFUSABLE_VOCAB))
            rng.shuffle(words)
            labels[rid] = NEGATIVE_LABEL
        else:
            words = []
            for phrase, p in sorted(params.planted.items()):
                if rng.random() < p:
                    words.extend(phrase.split())
                    words.append(rng.choice(ELECTRIC_FILLER))
            if not words:
                words = ["power", "outage", rng.choice(ELECTRIC_FILLER)]
            while len(words) < params.doc_len:
                words.append(rng.choice(ELECTRIC_FILLER))
            labels[rid] = POSITIVE_LABEL
        records.append(
            TweetRecord(
                id=rid, timestamp=ts, user_id=f"user{i:06d}",
                text=" ".join(words), region=region,
            )
        )

    for b in range(params.n_bots):
        for j in range(params.bot_posts):
            rid = f"bot{b:03d}p{j:03d}"
            phase = _sample_weighted(rng, params.phase_weights)
            records.append(
                TweetRecord(
                    id=rid,
                    timestamp=_timestamp_in(rng, windows, phase),
                    user_id=f"bot{b:03d}",
                    text=" ".join(rng.choice(NOISE_VOCAB) for _ in range(params.doc_len)),
                )
            )
    return records, labels


def write_corpus(records: list[TweetRecord], path) -> None:
    """Newline-delimited JSON in the pipeline interchange format."""
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            obj = {
                "id": r.id,
                "timestamp": r.timestamp.isoformat().replace("+00:00", "Z"),
                "user_id": r.user_id,
                "text": r.text,
            }
            if r.lat is not None:
                obj["lat"] = r.lat
            if r.lon is not None:
                obj["lon"] = r.lon
            if r.region is not None:
                obj["region"] = r.region
            f.write(json.dumps(obj, sort_keys=True) + "\n")


def write_labels(labels: dict[str, str], path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rid in sorted(labels):
            f.write(json.dumps({"record_id": rid, "label": labels[rid]}) + "\n")


def load_labels(path) -> dict[str, str]:
    labels: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            line = line.strip()
            if line:
                obj = json.loads(line)
                labels[str(obj["record_id"])] = str(obj["label"])
    return labels
