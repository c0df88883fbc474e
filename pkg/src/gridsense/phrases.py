"""Bigram/trigram phrase detection with a discounted association score.

A bigram (a, b) is accepted when its adjacent-pair count clears a minimum and

    score(a, b) = (C_ab - C_min) * n / (C_a * C_b)

exceeds a threshold, where n is the corpus size. Trigrams are built in a
second pass from accepted bigrams merged into single units plus the remaining
unigrams, under the same constraints.
"""

from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .textprep import TokenDoc

JOIN = "_"

TOKEN_MODE = "tokens"  # n = total token count
VOCAB_MODE = "vocab"  # n = distinct unit count


class PhraseError(Exception):
    pass


def score_bigram(c_ab: int, c_a: int, c_b: int, c_min: int, n: int) -> float:
    """Discounted association score; <= 0 whenever c_ab <= c_min."""
    if c_a < 1 or c_b < 1:
        raise PhraseError("unigram counts must be >= 1")
    if n < 1:
        raise PhraseError("corpus size must be >= 1")
    return (c_ab - c_min) * n / (c_a * c_b)


@dataclass(frozen=True)
class PhraseEntry:
    words: tuple[str, ...]  # underlying 2 or 3 words
    count: int
    score: float

    @property
    def token(self) -> str:
        return JOIN.join(self.words)

    @property
    def display(self) -> str:
        return " ".join(self.words)


@dataclass(frozen=True)
class PhraseTable:
    """Accepted phrases keyed by their underlying word tuple."""

    entries: dict[tuple[str, ...], PhraseEntry]
    min_count: int
    threshold: float
    corpus_size: int

    def __contains__(self, words: tuple[str, ...]) -> bool:
        return words in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["phrase", "count", "score"])
            for words in sorted(self.entries):
                e = self.entries[words]
                w.writerow([e.display, e.count, repr(e.score)])


def _corpus_size(unit_counts: Counter, mode: str) -> int:
    if mode == TOKEN_MODE:
        return sum(unit_counts.values())
    if mode == VOCAB_MODE:
        return len(unit_counts)
    raise PhraseError(f"unknown corpus_size_mode {mode!r}")


def _merge_bigrams(tokens: Sequence[str], accepted: set[tuple[str, str]]) -> list[tuple[str, ...]]:
    """Leftmost non-overlapping merge of accepted bigrams; each output unit is
    the tuple of its underlying words (singletons stay 1-tuples)."""
    out: list[tuple[str, ...]] = []
    i = 0
    while i < len(tokens):
        if i + 1 < len(tokens) and (tokens[i], tokens[i + 1]) in accepted:
            out.append((tokens[i], tokens[i + 1]))
            i += 2
        else:
            out.append((tokens[i],))
            i += 1
    return out


def build_phrase_tables(
    docs: Sequence[TokenDoc],
    min_count: int = 5,
    threshold: float = 1.0,
    corpus_size_mode: str = TOKEN_MODE,
) -> tuple[PhraseTable, PhraseTable]:
    """Two-pass phrase construction over lemmatized, pre-stopword-removal docs.

    Pass 1 counts unigrams and within-doc adjacent bigrams and accepts bigrams
    with count >= min_count and score > threshold. Pass 2 rewrites every doc
    with accepted bigrams merged (leftmost, non-overlapping), recounts the
    resulting units, and accepts adjacent (merged-bigram, unigram) pairs, in
    either order, as trigrams under the same constraints.
    """
    if not docs or all(not d.tokens for d in docs):
        raise PhraseError("empty corpus")

    unigrams: Counter[str] = Counter()
    bigram_counts: Counter[tuple[str, str]] = Counter()
    for doc in docs:
        toks = doc.tokens
        unigrams.update(toks)
        for i in range(len(toks) - 1):
            bigram_counts[(toks[i], toks[i + 1])] += 1

    n1 = _corpus_size(unigrams, corpus_size_mode)
    bigram_entries: dict[tuple[str, ...], PhraseEntry] = {}
    for (a, b), c_ab in bigram_counts.items():
        if c_ab < min_count:
            continue
        s = score_bigram(c_ab, unigrams[a], unigrams[b], min_count, n1)
        if s > threshold:
            bigram_entries[(a, b)] = PhraseEntry((a, b), c_ab, s)
    bigram_table = PhraseTable(bigram_entries, min_count, threshold, n1)

    accepted = set(bigram_entries)
    unit_counts: Counter[tuple[str, ...]] = Counter()
    pair_counts: Counter[tuple[tuple[str, ...], tuple[str, ...]]] = Counter()
    for doc in docs:
        units = _merge_bigrams(doc.tokens, accepted)
        unit_counts.update(units)
        for i in range(len(units) - 1):
            u, v = units[i], units[i + 1]
            # a trigram is one merged bigram plus one remaining unigram
            if len(u) + len(v) == 3:
                pair_counts[(u, v)] += 1

    n2 = _corpus_size(unit_counts, corpus_size_mode)
    trigram_entries: dict[tuple[str, ...], PhraseEntry] = {}
    for (u, v), c_uv in pair_counts.items():
        if c_uv < min_count:
            continue
        s = score_bigram(c_uv, unit_counts[u], unit_counts[v], min_count, n2)
        if s > threshold:
            words = u + v
            trigram_entries[words] = PhraseEntry(words, c_uv, s)
    trigram_table = PhraseTable(trigram_entries, min_count, threshold, n2)
    return bigram_table, trigram_table


def apply_phrases(
    doc: TokenDoc, bigrams: PhraseTable, trigrams: PhraseTable
) -> TokenDoc:
    """Greedy leftmost, longest-match-first rewrite: trigram before bigram,
    non-overlapping; unmatched tokens unchanged."""
    toks = doc.tokens
    out: list[str] = []
    i = 0
    while i < len(toks):
        if i + 2 < len(toks) and (toks[i], toks[i + 1], toks[i + 2]) in trigrams:
            out.append(JOIN.join(toks[i : i + 3]))
            i += 3
        elif i + 1 < len(toks) and (toks[i], toks[i + 1]) in bigrams:
            out.append(JOIN.join(toks[i : i + 2]))
            i += 2
        else:
            out.append(toks[i])
            i += 1
    return doc.with_tokens(out)


def apply_phrases_all(
    docs: Iterable[TokenDoc], bigrams: PhraseTable, trigrams: PhraseTable
) -> list[TokenDoc]:
    return [apply_phrases(d, bigrams, trigrams) for d in docs]
