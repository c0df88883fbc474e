"""Single-file pipeline configuration with strict validation.

Defaults target the 2017 Hurricane Irma event: its keyword scheme, phase
windows, bot threshold, phrase constraints, k, and topic definitions.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date
from typing import Optional

import yaml

from .corpus import (
    DEFAULT_ABBREVIATIONS,
    DEFAULT_KEYWORDS,
    DEFAULT_LOCAL_ENTITIES,
    KeywordScheme,
    PhaseWindow,
    PhaseWindows,
)
from .topics import DEFAULT_ENTITY_MAP, DEFAULT_TOPICS, AggregatedTopic


class ConfigError(Exception):
    pass


@dataclass(frozen=True)
class ClassifierConfig:
    trainer: str = "lr"
    mode: str = "bow"
    learning_rate: Optional[float] = None  # None -> trainer default
    l2: float = 1e-4
    epochs: int = 500
    tol: float = 1e-8
    threshold: float = 0.5
    min_df: int = 1


@dataclass(frozen=True)
class PhraseConfig:
    min_count: int = 5
    threshold: float = 1.0
    corpus_size_mode: str = "tokens"


@dataclass(frozen=True)
class SynthConfig:
    n_records: int = 2000
    noise_fraction: float = 0.5
    confusable_fraction: float = 0.1
    n_bots: int = 0
    bot_posts: int = 15


@dataclass(frozen=True)
class PipelineConfig:
    input: Optional[str] = None
    labels: Optional[str] = None
    scores: Optional[str] = None
    output_dir: str = "out"
    seed: int = 42
    bot_max_posts: int = 10
    keyword_fraction_bound: Optional[float] = None
    scheme: KeywordScheme = field(default_factory=KeywordScheme)
    windows: PhaseWindows = field(default_factory=PhaseWindows.irma_default)
    classifier: ClassifierConfig = field(default_factory=ClassifierConfig)
    phrases: PhraseConfig = field(default_factory=PhraseConfig)
    topics: tuple[AggregatedTopic, ...] = field(
        default_factory=lambda: tuple(AggregatedTopic.defaults())
    )
    entity_map: dict = field(default_factory=lambda: dict(DEFAULT_ENTITY_MAP))
    top_k: int = 20
    region_min_docs: int = 100
    stopwords_file: Optional[str] = None
    synth: SynthConfig = field(default_factory=SynthConfig)

    def validate(self) -> None:
        if self.bot_max_posts < 1:
            raise ConfigError("bot_max_posts must be >= 1")
        if self.top_k < 1:
            raise ConfigError("top_k must be >= 1")
        if self.region_min_docs < 1:
            raise ConfigError("region_min_docs must be >= 1")
        if self.phrases.min_count < 1:
            raise ConfigError("phrases.min_count must be >= 1")
        if self.classifier.trainer not in ("lr", "svm"):
            raise ConfigError(f"unknown trainer {self.classifier.trainer!r}")
        if self.classifier.mode not in ("bow", "tfidf"):
            raise ConfigError(f"unknown mode {self.classifier.mode!r}")
        if self.phrases.corpus_size_mode not in ("tokens", "vocab"):
            raise ConfigError(
                f"unknown corpus_size_mode {self.phrases.corpus_size_mode!r}"
            )


def _check_keys(obj: dict, allowed: set[str], where: str) -> None:
    unknown = set(obj) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys in {where}: {sorted(unknown)}")


def _parse_date(value, where: str) -> date:
    if isinstance(value, date):
        return value
    try:
        return date.fromisoformat(str(value))
    except ValueError as exc:
        raise ConfigError(f"bad date {value!r} in {where}") from exc


def _sub(dc_cls, obj: dict, where: str):
    fields = {f for f in dc_cls.__dataclass_fields__}
    _check_keys(obj, fields, where)
    try:
        return dc_cls(**obj)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {where} section: {exc}") from exc


TOP_KEYS = {
    "input", "labels", "scores", "output_dir", "seed", "bot_max_posts",
    "keyword_fraction_bound", "keywords", "abbreviations", "local_entities",
    "phases", "classifier", "phrases", "topics", "entity_map", "top_k",
    "region_min_docs", "stopwords_file", "synth",
}


def config_from_dict(obj: dict) -> PipelineConfig:
    _check_keys(obj, TOP_KEYS, "top level")
    kwargs: dict = {}
    for plain in (
        "input", "labels", "scores", "output_dir", "seed", "bot_max_posts",
        "keyword_fraction_bound", "top_k", "region_min_docs", "stopwords_file",
    ):
        if plain in obj:
            kwargs[plain] = obj[plain]

    if any(k in obj for k in ("keywords", "abbreviations", "local_entities")):
        try:
            kwargs["scheme"] = KeywordScheme(
                keywords=frozenset(
                    str(k).lower() for k in obj.get("keywords", sorted(DEFAULT_KEYWORDS))
                ),
                abbreviations={
                    str(k).lower(): str(v).lower()
                    for k, v in obj.get("abbreviations", DEFAULT_ABBREVIATIONS).items()
                },
                local_entities=frozenset(
                    str(k).lower()
                    for k in obj.get("local_entities", sorted(DEFAULT_LOCAL_ENTITIES))
                ),
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if "phases" in obj:
        windows = []
        for i, w in enumerate(obj["phases"]):
            _check_keys(w, {"name", "start", "end"}, f"phases[{i}]")
            windows.append(
                PhaseWindow(
                    str(w["name"]),
                    _parse_date(w["start"], f"phases[{i}]"),
                    _parse_date(w["end"], f"phases[{i}]"),
                )
            )
        try:
            kwargs["windows"] = PhaseWindows(tuple(windows))
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    if "classifier" in obj:
        kwargs["classifier"] = _sub(ClassifierConfig, obj["classifier"], "classifier")
    if "phrases" in obj:
        kwargs["phrases"] = _sub(PhraseConfig, obj["phrases"], "phrases")
    if "synth" in obj:
        kwargs["synth"] = _sub(SynthConfig, obj["synth"], "synth")
    if "topics" in obj:
        kwargs["topics"] = tuple(
            AggregatedTopic(str(name), frozenset(str(t) for t in terms))
            for name, terms in obj["topics"].items()
        )
    if "entity_map" in obj:
        kwargs["entity_map"] = {str(k): str(v) for k, v in obj["entity_map"].items()}

    cfg = PipelineConfig(**kwargs)
    cfg.validate()
    return cfg


def load_config(path) -> PipelineConfig:
    with open(path, encoding="utf-8") as f:
        obj = yaml.safe_load(f) or {}
    if not isinstance(obj, dict):
        raise ConfigError("config file must hold a mapping")
    return config_from_dict(obj)
