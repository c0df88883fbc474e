"""Text preprocessing: cleaning, tokenization, lemmatization, stop-word removal.

All functions are pure and deterministic; the same input text always yields
the same token sequence on every platform.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional, Sequence

_URL_RE = re.compile(r"(?:https?://|www\.)\S+", re.IGNORECASE)
_NON_TOKEN_RE = re.compile(r"[^a-z0-9'\s]+")
_WS_RE = re.compile(r"\s+")
_HAS_ALNUM_RE = re.compile(r"[a-z0-9]")
_HAS_DIGIT_RE = re.compile(r"[0-9]")

VOWELS = set("aeiou")


def _load_data_lines(name: str) -> list[str]:
    text = resources.files("gridsense.data").joinpath(name).read_text(encoding="utf-8")
    out = []
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            out.append(line)
    return out


@dataclass(frozen=True)
class StopwordList:
    """A set of lowercase stop words; defaults to the standard English list."""

    words: frozenset[str]

    def __post_init__(self):
        if not self.words:
            raise ValueError("stopword list must be nonempty")

    @classmethod
    def default(cls) -> "StopwordList":
        return cls(frozenset(_load_data_lines("stopwords_en.txt")))

    @classmethod
    def from_file(cls, path) -> "StopwordList":
        with open(path, encoding="utf-8") as f:
            words = frozenset(
                w.strip().lower() for w in f if w.strip() and not w.startswith("#")
            )
        return cls(words)

    def __contains__(self, token: str) -> bool:
        return token in self.words


@dataclass(frozen=True)
class TokenDoc:
    """Cleaned, lemmatized token sequence for one record."""

    record_id: str
    tokens: tuple[str, ...]
    phase: Optional[str] = None
    region: Optional[str] = None

    def with_tokens(self, tokens: Sequence[str]) -> "TokenDoc":
        return TokenDoc(self.record_id, tuple(tokens), self.phase, self.region)


def clean(text: str) -> str:
    """Strip URLs, drop everything but letters/digits/apostrophes, lowercase,
    collapse whitespace. Idempotent."""
    text = _URL_RE.sub(" ", text)
    text = text.lower()
    text = _NON_TOKEN_RE.sub(" ", text)
    return _WS_RE.sub(" ", text).strip()


def tokenize(text: str) -> list[str]:
    """Whitespace-split clean() output; drops tokens with no letter or digit
    and trims edge apostrophes."""
    tokens = []
    for tok in text.split():
        tok = tok.strip("'")
        if tok and _HAS_ALNUM_RE.search(tok):
            tokens.append(tok)
    return tokens


def _load_exceptions() -> dict[str, str]:
    table = {}
    for line in _load_data_lines("lemma_exceptions.txt"):
        parts = line.split()
        if len(parts) == 2:
            table[parts[0]] = parts[1]
    return table


_DEFAULT_EXCEPTIONS = _load_exceptions()

# Suffixes whose final -s is organic, not a plural/3rd-person marker.
_S_PROTECT = ("ss", "us", "is", "'s")
# Consonants undoubled after stripping -ed/-ing (stopped -> stop); ll/ss kept
# (called -> call).
_UNDOUBLE = set("bdgmnprt")


def _strip_suffix(token: str) -> str:
    if token.endswith("ies") and len(token) > 4:
        return token[:-3] + "y"
    if token.endswith("sses") or token.endswith("xes") or token.endswith("zes") \
            or token.endswith("ches") or token.endswith("shes"):
        return token[:-2]
    if token.endswith("s") and len(token) > 3 and not token.endswith(_S_PROTECT):
        return token[:-1]
    for suffix in ("ed", "ing"):
        if token.endswith(suffix) and len(token) - len(suffix) >= 3:
            stem = token[: -len(suffix)]
            if len(stem) >= 2 and stem[-1] == stem[-2] and stem[-1] in _UNDOUBLE:
                return stem[:-1]
            # e-restoration on short CVC stems: los -> lose, mak -> make
            if (
                len(stem) == 3
                and stem[0] not in VOWELS
                and stem[1] in VOWELS
                and stem[2] not in VOWELS
                and stem[2] not in "wxy"
            ):
                return stem + "e"
            return stem
    return token


def lemmatize_token(token: str, exceptions: Optional[Mapping[str, str]] = None) -> str:
    """Map one lowercase token to its base form via the exception table and
    deterministic suffix rules."""
    if exceptions is None:
        exceptions = _DEFAULT_EXCEPTIONS
    if token in exceptions:
        return exceptions[token]
    if "'" in token or _HAS_DIGIT_RE.search(token) or "_" in token:
        return token
    return _strip_suffix(token)


def lemmatize(tokens: Sequence[str], exceptions: Optional[Mapping[str, str]] = None) -> list[str]:
    """Lemmatize a token list; length-preserving."""
    return [lemmatize_token(t, exceptions) for t in tokens]


def remove_stopwords(
    tokens: Sequence[str],
    stopwords: StopwordList,
    extra: Iterable[str] = (),
) -> list[str]:
    """Drop tokens in the stop-word list or the extra set; order preserved."""
    drop = stopwords.words | frozenset(extra)
    return [t for t in tokens if t not in drop]


def prepare_doc(
    record_id: str,
    text: str,
    phase: Optional[str] = None,
    region: Optional[str] = None,
    exceptions: Optional[Mapping[str, str]] = None,
) -> TokenDoc:
    """clean -> tokenize -> lemmatize one record into a TokenDoc."""
    tokens = lemmatize(tokenize(clean(text)), exceptions)
    return TokenDoc(record_id=record_id, tokens=tuple(tokens), phase=phase, region=region)
