"""Stage orchestration: filter, train, classify, topics, and the single-shot
run. All outputs are CSV/NDJSON, written atomically, byte-stable for a fixed
config and seed."""

from __future__ import annotations

import csv
import json
import os
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

from . import classify as clf
from . import corpus as cp
from . import phrases as ph
from . import synth
from . import topics as tp
from .config import PipelineConfig
from .textprep import StopwordList, TokenDoc, prepare_doc


class DataError(Exception):
    pass


def atomic_path(path: Path):
    """Temp-file path in the same directory, for write-then-rename."""
    return path.parent / f".tmp.{path.name}"


def _commit(tmp: Path, final: Path) -> None:
    os.replace(tmp, final)


def write_csv_atomic(path: Path, header: list, rows: list) -> None:
    tmp = atomic_path(path)
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
    _commit(tmp, path)


def _out(cfg: PipelineConfig) -> Path:
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _stopwords(cfg: PipelineConfig) -> StopwordList:
    if cfg.stopwords_file:
        return StopwordList.from_file(cfg.stopwords_file)
    return StopwordList.default()


@dataclass
class FilterStats:
    n_raw: int
    n_after_bots: int
    n_matched: int
    removed_users: int

    @property
    def reduction_ratio(self) -> float:
        return self.n_matched / self.n_raw if self.n_raw else 0.0


def stage_filter(cfg: PipelineConfig) -> FilterStats:
    """Ingest, drop hyperactive accounts, keyword-filter; emit the filtered
    corpus and per-keyword match counts."""
    if not cfg.input:
        raise DataError("config has no input path")
    out = _out(cfg)
    result = cp.load_corpus(cfg.input)
    if result.errors:
        tmp = atomic_path(out / "load_errors.csv")
        with open(tmp, "w", encoding="utf-8", newline="\n") as f:
            w = csv.writer(f, lineterminator="\n")
            w.writerow(["line", "error"])
            for e in result.errors:
                w.writerow([e.line_no, e.message])
        _commit(tmp, out / "load_errors.csv")

    kept, removed = cp.filter_bots(result.records, cfg.bot_max_posts)
    matched, counts = cp.filter_keywords(kept, cfg.scheme)

    tmp = atomic_path(out / "filtered.ndjson")
    synth.write_corpus([r for r, _ in matched], tmp)
    _commit(tmp, out / "filtered.ndjson")

    write_csv_atomic(
        out / "keyword_counts.csv",
        ["keyword", "count"],
        [[k, counts[k]] for k in sorted(counts)],
    )
    return FilterStats(
        n_raw=len(result.records),
        n_after_bots=len(kept),
        n_matched=len(matched),
        removed_users=len(removed),
    )


def _load_filtered(cfg: PipelineConfig) -> list[cp.TweetRecord]:
    path = Path(cfg.output_dir) / "filtered.ndjson"
    if not path.exists():
        raise DataError(f"{path} not found; run the filter stage first")
    return cp.load_corpus(path).records


def _labeled_examples(
    cfg: PipelineConfig, records: Sequence[cp.TweetRecord]
) -> list[clf.LabeledExample]:
    if not cfg.labels:
        raise DataError("config has no labels path")
    labels = synth.load_labels(cfg.labels)
    examples = []
    for r in records:
        if r.id in labels:
            doc = prepare_doc(r.id, r.text)
            examples.append(clf.LabeledExample(r.id, doc.tokens, labels[r.id]))
    if not examples:
        raise DataError("no labeled records found in the filtered corpus")
    return examples


def _hyper(cfg: PipelineConfig) -> clf.Hyper:
    c = cfg.classifier
    lr = c.learning_rate
    if lr is None:
        lr = 0.1 if c.trainer == "lr" else 0.01
    return clf.Hyper(learning_rate=lr, l2=c.l2, epochs=c.epochs, tol=c.tol, seed=cfg.seed)


def stage_train(cfg: PipelineConfig) -> clf.EvalReport:
    """60/20/20 protocol: retrain on train+val, evaluate on test, save model."""
    out = _out(cfg)
    records = _load_filtered(cfg)
    data = _labeled_examples(cfg, records)
    model, report, split_ids = clf.train_with_protocol(
        data,
        trainer=cfg.classifier.trainer,
        mode=cfg.classifier.mode,
        hyper=_hyper(cfg),
        seed=cfg.seed,
        min_df=cfg.classifier.min_df,
    )
    tmp = atomic_path(out / "model.json")
    clf.save_model(model, tmp)
    _commit(tmp, out / "model.json")

    tmp = atomic_path(out / "splits.json")
    with open(tmp, "w", encoding="utf-8") as f:
        json.dump(split_ids, f, indent=0, sort_keys=True)
    _commit(tmp, out / "splits.json")

    write_csv_atomic(
        out / "eval_report.csv",
        ["metric", "value"],
        [
            ["tp", report.tp], ["fp", report.fp],
            ["fn", report.fn], ["tn", report.tn],
            ["precision", _fmt_metric(report.precision)],
            ["recall", _fmt_metric(report.recall)],
            ["f1", _fmt_metric(report.f1)],
        ],
    )
    return report


def _fmt_metric(v: Optional[float]) -> str:
    return "undefined" if v is None else f"{v:.6f}"


def stage_classify(cfg: PipelineConfig) -> set[str]:
    """Union labeled positives with model (or external-score) positives on the
    unlabeled remainder; emit the positive-id list."""
    out = _out(cfg)
    records = _load_filtered(cfg)
    if not cfg.labels:
        raise DataError("config has no labels path")
    labels = synth.load_labels(cfg.labels)
    unlabeled = {
        r.id: prepare_doc(r.id, r.text).tokens for r in records if r.id not in labels
    }
    labeled = {r.id: labels[r.id] for r in records if r.id in labels}

    model = scores = None
    if cfg.scores:
        scores = clf.load_external_scores(cfg.scores, known_ids=set(unlabeled))
        missing = set(unlabeled) - set(scores)
        if missing:
            raise DataError(f"score file missing {len(missing)} record ids")
    else:
        model_path = Path(cfg.output_dir) / "model.json"
        if not model_path.exists():
            raise DataError(f"{model_path} not found; run the train stage first")
        model = clf.load_model(model_path)

    positives = clf.classify_corpus(
        unlabeled, labeled, model=model, scores=scores,
        threshold=cfg.classifier.threshold,
    )
    tmp = atomic_path(out / "positives.txt")
    with open(tmp, "w", encoding="utf-8", newline="\n") as f:
        for rid in sorted(positives):
            f.write(rid + "\n")
    _commit(tmp, out / "positives.txt")
    return positives


def stage_topics(cfg: PipelineConfig) -> None:
    """Phrase modeling plus all topic/engagement outputs over the classified
    electricity-related corpus."""
    out = _out(cfg)
    records = _load_filtered(cfg)
    pos_path = out / "positives.txt"
    if not pos_path.exists():
        raise DataError(f"{pos_path} not found; run the classify stage first")
    with open(pos_path, encoding="utf-8") as f:
        positives = {line.strip() for line in f if line.strip()}
    elec = [r for r in records if r.id in positives]
    if not elec:
        raise DataError("classified corpus is empty")

    docs = [
        prepare_doc(r.id, r.text, phase=cp.assign_phase(r, cfg.windows), region=r.region)
        for r in elec
    ]
    docs = [d for d in docs if d.phase is not None]

    bigrams, trigrams = ph.build_phrase_tables(
        docs,
        min_count=cfg.phrases.min_count,
        threshold=cfg.phrases.threshold,
        corpus_size_mode=cfg.phrases.corpus_size_mode,
    )
    for name, table in (("bigrams.csv", bigrams), ("trigrams.csv", trigrams)):
        tmp = atomic_path(out / name)
        table.write_csv(tmp)
        _commit(tmp, out / name)

    merged = ph.apply_phrases_all(docs, bigrams, trigrams)
    topic_docs = tp.prepare_topic_docs(
        merged, _stopwords(cfg), cfg.scheme.keywords, cfg.entity_map
    )

    phase_order = cfg.windows.names()
    topics = list(cfg.topics)

    for phase in phase_order:
        scope = [d for d in topic_docs if d.phase == phase]
        terms = tp.top_k_terms(scope, cfg.top_k) if scope else []
        tmp = atomic_path(out / f"topk_terms_{phase}.csv")
        tp.write_topk_csv(terms, tmp)
        _commit(tmp, out / f"topk_terms_{phase}.csv")

    report = tp.engagement_report(topic_docs, topics, phase_order)
    tmp = atomic_path(out / "engagement.csv")
    report.write_csv(tmp, with_region=False)
    _commit(tmp, out / "engagement.csv")

    county = tp.regional_breakdown(topic_docs, topics, phase_order, cfg.region_min_docs)
    tmp = atomic_path(out / "county_engagement.csv")
    county.write_csv(tmp, with_region=True)
    _commit(tmp, out / "county_engagement.csv")

    region_counts = tp.region_doc_counts(topic_docs)
    write_csv_atomic(
        out / "region_counts.csv",
        ["region", "count"],
        [[r, region_counts[r]] for r in sorted(region_counts)],
    )

    daily = Counter(r.timestamp.date().isoformat() for r in elec)
    write_csv_atomic(
        out / "daily_counts.csv",
        ["date", "count"],
        [[d, daily[d]] for d in sorted(daily)],
    )


def stage_synth(cfg: PipelineConfig, output: Optional[str] = None) -> Path:
    """Generate a synthetic raw corpus plus labels from the config seed."""
    out = _out(cfg)
    params = synth.SynthParams(
        n_records=cfg.synth.n_records,
        noise_fraction=cfg.synth.noise_fraction,
        confusable_fraction=cfg.synth.confusable_fraction,
        n_bots=cfg.synth.n_bots,
        bot_posts=cfg.synth.bot_posts,
    )
    records, labels = synth.generate(params, seed=cfg.seed, windows=cfg.windows)
    corpus_path = Path(output) if output else out / "synthetic.ndjson"
    tmp = atomic_path(corpus_path)
    synth.write_corpus(records, tmp)
    _commit(tmp, corpus_path)
    labels_path = corpus_path.with_name(corpus_path.stem + "_labels.ndjson")
    tmp = atomic_path(labels_path)
    synth.write_labels(labels, tmp)
    _commit(tmp, labels_path)
    return corpus_path


def run_all(cfg: PipelineConfig) -> FilterStats:
    """filter -> train -> classify -> topics with one config and one seed."""
    stats = stage_filter(cfg)
    if cfg.keyword_fraction_bound is not None and stats.n_raw:
        if stats.reduction_ratio > cfg.keyword_fraction_bound:
            raise DataError(
                f"keyword-filtered fraction {stats.reduction_ratio:.4f} exceeds "
                f"bound {cfg.keyword_fraction_bound}"
            )
    if not cfg.scores:
        stage_train(cfg)
    stage_classify(cfg)
    stage_topics(cfg)
    return stats
