"""Fine-tune a bidirectional-transformer encoder with a single sigmoid output
unit over the pooled [CLS] representation, and export per-record probabilities.

Training follows the same 60/20/20 protocol as the pipeline's built-in
classifiers: split, train on train+validation, report metrics on the held-out
test split. Default hyperparameters target desk-scale CPU runs; the encoder
is any locally available pretrained checkpoint directory or hub id.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import torch
from transformers import AutoModel, AutoTokenizer

from .data import POSITIVE_LABEL, DataError, load_corpus_texts, load_labels

logger = logging.getLogger(__name__)

HEAD_FILE = "sigmoid_head.pt"
META_FILE = "scorer_meta.json"


@dataclass(frozen=True)
class ScorerHyper:
    learning_rate: float = 2e-5
    epochs: int = 3
    batch_size: int = 16
    max_length: int = 128
    seed: int = 42


@dataclass(frozen=True)
class Example:
    record_id: str
    text: str
    y: float  # 1.0 positive, 0.0 negative


class SigmoidScorer(torch.nn.Module):
    """Encoder plus one linear unit; sigmoid applied at scoring time."""

    def __init__(self, encoder: torch.nn.Module):
        super().__init__()
        self.encoder = encoder
        self.head = torch.nn.Linear(encoder.config.hidden_size, 1)

    def forward(self, **enc) -> torch.Tensor:
        out = self.encoder(**enc)
        pooled = getattr(out, "pooler_output", None)
        if pooled is None:
            pooled = out.last_hidden_state[:, 0]
        return self.head(pooled).squeeze(-1)


def _seed_everything(seed: int) -> None:
    random.seed(seed)
    np.random.seed(seed)
    torch.manual_seed(seed)


def split_examples(
    examples: Sequence[Example], seed: int
) -> tuple[list[Example], list[Example], list[Example]]:
    """60/20/20 split by seeded permutation, cut points rounded cumulatively."""
    order = np.random.default_rng(seed).permutation(len(examples))
    cut1 = round(0.6 * len(examples))
    cut2 = round(0.8 * len(examples))
    shuffled = [examples[i] for i in order]
    return shuffled[:cut1], shuffled[cut1:cut2], shuffled[cut2:]


def _encode(tokenizer, texts: list[str], max_length: int):
    return tokenizer(
        texts,
        padding=True,
        truncation=True,
        max_length=max_length,
        return_tensors="pt",
    )


def _count_truncated(tokenizer, texts: list[str], max_length: int) -> int:
    lengths = [len(ids) for ids in tokenizer(texts)["input_ids"]]
    return sum(1 for n in lengths if n > max_length)


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def precision(self) -> Optional[float]:
        d = self.tp + self.fp
        return self.tp / d if d else None

    @property
    def recall(self) -> Optional[float]:
        d = self.tp + self.fn
        return self.tp / d if d else None

    @property
    def f1(self) -> Optional[float]:
        p, r = self.precision, self.recall
        if p is None or r is None or p + r == 0:
            return None
        return 2 * p * r / (p + r)

    def as_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn, "tn": self.tn,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
        }


def _evaluate(model: SigmoidScorer, tokenizer, examples: Sequence[Example],
              hyper: ScorerHyper) -> Metrics:
    tp = fp = fn = tn = 0
    model.eval()
    with torch.no_grad():
        for start in range(0, len(examples), hyper.batch_size):
            batch = examples[start:start + hyper.batch_size]
            enc = _encode(tokenizer, [ex.text for ex in batch], hyper.max_length)
            probs = torch.sigmoid(model(**enc))
            for ex, p in zip(batch, probs.tolist()):
                pred = p >= 0.5
                if ex.y == 1.0:
                    tp, fn = tp + int(pred), fn + int(not pred)
                else:
                    fp, tn = fp + int(pred), tn + int(not pred)
    return Metrics(tp=tp, fp=fp, fn=fn, tn=tn)


def _examples_from_files(corpus_path, labels_path) -> list[Example]:
    texts = load_corpus_texts(corpus_path)
    labels = load_labels(labels_path)
    missing = set(labels) - set(texts)
    if missing:
        raise DataError(f"labels reference {len(missing)} ids absent from the corpus")
    examples = [
        Example(rid, texts[rid], 1.0 if labels[rid] == POSITIVE_LABEL else 0.0)
        for rid in sorted(labels)
    ]
    if len({ex.y for ex in examples}) < 2:
        raise DataError("labeled data holds a single class; training needs both")
    return examples


def finetune(
    corpus_path,
    labels_path,
    encoder: str,
    output_dir,
    hyper: ScorerHyper = ScorerHyper(),
    seed: Optional[int] = None,
) -> Metrics:
    """Train the sigmoid head (and encoder) on the labeled records; save a
    checkpoint directory; return held-out test metrics."""
    seed = hyper.seed if seed is None else seed
    _seed_everything(seed)

    examples = _examples_from_files(corpus_path, labels_path)
    train, val, test = split_examples(examples, seed)
    fit = train + val

    tokenizer = AutoTokenizer.from_pretrained(encoder)
    model = SigmoidScorer(AutoModel.from_pretrained(encoder))
    opt = torch.optim.AdamW(model.parameters(), lr=hyper.learning_rate)
    loss_fn = torch.nn.BCEWithLogitsLoss()
    shuffler = random.Random(seed)

    model.train()
    for _ in range(hyper.epochs):
        order = list(range(len(fit)))
        shuffler.shuffle(order)
        for start in range(0, len(order), hyper.batch_size):
            batch = [fit[i] for i in order[start:start + hyper.batch_size]]
            enc = _encode(tokenizer, [ex.text for ex in batch], hyper.max_length)
            y = torch.tensor([ex.y for ex in batch])
            opt.zero_grad()
            loss = loss_fn(model(**enc), y)
            loss.backward()
            opt.step()

    metrics = _evaluate(model, tokenizer, test, hyper)

    out = Path(output_dir)
    out.mkdir(parents=True, exist_ok=True)
    model.encoder.save_pretrained(out)
    tokenizer.save_pretrained(out)
    torch.save(model.head.state_dict(), out / HEAD_FILE)
    with open(out / META_FILE, "w", encoding="utf-8") as f:
        json.dump(
            {"hyper": asdict(hyper), "seed": seed, "metrics": metrics.as_dict(),
             "splits": {"train": len(train), "val": len(val), "test": len(test)}},
            f, indent=2,
        )
    return metrics


def load_checkpoint(checkpoint_dir) -> tuple[SigmoidScorer, object, ScorerHyper]:
    path = Path(checkpoint_dir)
    head_path = path / HEAD_FILE
    if not head_path.exists():
        raise DataError(f"{checkpoint_dir} is not a scorer checkpoint")
    tokenizer = AutoTokenizer.from_pretrained(path)
    model = SigmoidScorer(AutoModel.from_pretrained(path))
    model.head.load_state_dict(torch.load(head_path, weights_only=True))
    with open(path / META_FILE, encoding="utf-8") as f:
        meta = json.load(f)
    return model, tokenizer, ScorerHyper(**meta["hyper"])


def score(checkpoint_dir, corpus_path) -> dict[str, float]:
    """One probability per corpus record; over-length texts are truncated at
    the encoder maximum and logged."""
    model, tokenizer, hyper = load_checkpoint(checkpoint_dir)
    texts = load_corpus_texts(corpus_path)
    ids = sorted(texts)
    truncated = _count_truncated(tokenizer, [texts[r] for r in ids], hyper.max_length)
    if truncated:
        logger.warning(
            "%d of %d records exceeded max_length=%d and were truncated",
            truncated, len(ids), hyper.max_length,
        )
    scores: dict[str, float] = {}
    model.eval()
    with torch.no_grad():
        for start in range(0, len(ids), hyper.batch_size):
            chunk = ids[start:start + hyper.batch_size]
            enc = _encode(tokenizer, [texts[r] for r in chunk], hyper.max_length)
            probs = torch.sigmoid(model(**enc)).tolist()
            scores.update(zip(chunk, probs))
    return scores
