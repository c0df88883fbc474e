"""Binary electricity/non-electricity classification.

From-scratch BOW/TFIDF featurization with logistic-regression and linear-SVM
trainers, a sigmoid decision head, the 60/20/20 evaluation protocol, and an
adapter for externally produced scores.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

POSITIVE_LABEL = "electricity"
NEGATIVE_LABEL = "non-electricity"

BOW = "bow"
TFIDF = "tfidf"


class ClassifyError(Exception):
    pass


@dataclass(frozen=True)
class LabeledExample:
    record_id: str
    tokens: tuple[str, ...]
    label: str  # POSITIVE_LABEL or NEGATIVE_LABEL

    def __post_init__(self):
        if self.label not in (POSITIVE_LABEL, NEGATIVE_LABEL):
            raise ValueError(f"bad label {self.label!r}")

    @property
    def y(self) -> int:
        return 1 if self.label == POSITIVE_LABEL else 0


@dataclass(frozen=True)
class Vocabulary:
    """term -> dense column index, with training-split document frequencies."""

    index: dict[str, int]
    df: dict[str, int]
    n_docs: int

    def __len__(self) -> int:
        return len(self.index)

    def idf(self, term: str) -> float:
        return math.log(self.n_docs / self.df[term])


def build_vocabulary(train: Sequence[LabeledExample], min_df: int = 1) -> Vocabulary:
    """Index terms with document frequency >= min_df, in lexicographic order."""
    if not train:
        raise ClassifyError("empty training set")
    df: dict[str, int] = {}
    for ex in train:
        for term in set(ex.tokens):
            df[term] = df.get(term, 0) + 1
    kept = sorted(t for t, c in df.items() if c >= min_df)
    return Vocabulary(
        index={t: i for i, t in enumerate(kept)},
        df={t: df[t] for t in kept},
        n_docs=len(train),
    )


@dataclass(frozen=True)
class FeatureVector:
    """Sparse (index, value) pairs with strictly increasing indices."""

    pairs: tuple[tuple[int, float], ...]
    mode: str

    def to_dense(self, size: int) -> np.ndarray:
        x = np.zeros(size)
        for i, v in self.pairs:
            x[i] = v
        return x


def featurize(tokens: Sequence[str], vocab: Vocabulary, mode: str) -> FeatureVector:
    """Term-frequency (BOW) or tf*ln(n_docs/df) (TFIDF) vector; OOV ignored."""
    if mode not in (BOW, TFIDF):
        raise ValueError(f"unknown mode {mode!r}")
    tf: dict[int, int] = {}
    for tok in tokens:
        i = vocab.index.get(tok)
        if i is not None:
            tf[i] = tf.get(i, 0) + 1
    if mode == BOW:
        pairs = tuple((i, float(c)) for i, c in sorted(tf.items()))
    else:
        inv = {i: t for t, i in vocab.index.items()}
        pairs = tuple((i, c * vocab.idf(inv[i])) for i, c in sorted(tf.items()))
    return FeatureVector(pairs=pairs, mode=mode)


def design_matrix(
    examples: Sequence[LabeledExample], vocab: Vocabulary, mode: str
) -> tuple[np.ndarray, np.ndarray]:
    X = np.zeros((len(examples), len(vocab)))
    y = np.zeros(len(examples))
    for row, ex in enumerate(examples):
        for i, v in featurize(ex.tokens, vocab, mode).pairs:
            X[row, i] = v
        y[row] = ex.y
    return X, y


@dataclass(frozen=True)
class Hyper:
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 500
    tol: float = 1e-8
    seed: int = 42


@dataclass(frozen=True)
class ClassifierModel:
    weights: np.ndarray
    bias: float
    vocab: Vocabulary
    mode: str
    trainer: str  # "lr" | "svm"
    hyper: Hyper
    threshold: float = 0.5

    def __post_init__(self):
        if len(self.weights) != len(self.vocab):
            raise ValueError("weight/vocabulary size mismatch")


def sigmoid(z):
    """Numerically stable logistic function; no overflow for |z| <= 700."""
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out if out.ndim else float(out)


def sigmoid_score(model: ClassifierModel, x: FeatureVector) -> float:
    """P(positive) = sigmoid(w.x + b)."""
    z = model.bias
    for i, v in x.pairs:
        z += model.weights[i] * v
    return float(sigmoid(z))


def _check_two_classes(train: Sequence[LabeledExample]):
    labels = {ex.label for ex in train}
    if labels != {POSITIVE_LABEL, NEGATIVE_LABEL}:
        raise ClassifyError(f"training set needs both classes, got {sorted(labels)}")


def lr_loss_grad(
    w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss with L2 penalty on w (not bias), and its gradient."""
    z = X @ w + b
    p = sigmoid(z)
    eps = 1e-12
    loss = -float(np.mean(y * np.log(p + eps) + (1 - y) * np.log(1 - p + eps)))
    loss += 0.5 * l2 * float(w @ w)
    n = len(y)
    gw = X.T @ (p - y) / n + l2 * w
    gb = float(np.sum(p - y) / n)
    return loss, gw, gb


def train_lr(
    train: Sequence[LabeledExample],
    mode: str = BOW,
    hyper: Hyper = Hyper(),
    vocab: Optional[Vocabulary] = None,
    min_df: int = 1,
) -> ClassifierModel:
    """Full-batch gradient descent on L2-regularized log-loss; zero init, so a
    fixed configuration is bit-reproducible."""
    _check_two_classes(train)
    vocab = vocab or build_vocabulary(train, min_df)
    X, y = design_matrix(train, vocab, mode)
    w = np.zeros(len(vocab))
    b = 0.0
    for _ in range(hyper.epochs):
        _, gw, gb = lr_loss_grad(w, b, X, y, hyper.l2)
        gnorm = math.sqrt(float(gw @ gw) + gb * gb)
        if gnorm < hyper.tol:
            break
        w = w - hyper.learning_rate * gw
        b = b - hyper.learning_rate * gb
    return ClassifierModel(w, b, vocab, mode, "lr", hyper)


def svm_objective(
    w: np.ndarray, b: float, X: np.ndarray, ys: np.ndarray, l2: float
) -> float:
    """Mean hinge loss + 0.5*l2*|w|^2 with labels in {-1, +1}."""
    margins = ys * (X @ w + b)
    return float(np.mean(np.maximum(0.0, 1.0 - margins))) + 0.5 * l2 * float(w @ w)


def svm_subgradient(
    w: np.ndarray, b: float, X: np.ndarray, ys: np.ndarray, l2: float
) -> tuple[np.ndarray, float]:
    margins = ys * (X @ w + b)
    active = margins < 1.0
    n = len(ys)
    gw = -(X[active].T @ ys[active]) / n + l2 * w
    gb = -float(np.sum(ys[active])) / n
    return gw, gb


def train_svm(
    train: Sequence[LabeledExample],
    mode: str = BOW,
    hyper: Hyper = Hyper(learning_rate=0.01),
    vocab: Optional[Vocabulary] = None,
    min_df: int = 1,
) -> ClassifierModel:
    """Soft-margin linear SVM by deterministic subgradient descent: per-epoch
    seeded shuffle, per-sample updates."""
    _check_two_classes(train)
    vocab = vocab or build_vocabulary(train, min_df)
    X, y = design_matrix(train, vocab, mode)
    ys = 2.0 * y - 1.0
    w = np.zeros(len(vocab))
    b = 0.0
    n = len(ys)
    rng = np.random.default_rng(hyper.seed)
    for _ in range(hyper.epochs):
        order = rng.permutation(n)
        for i in order:
            margin = ys[i] * (X[i] @ w + b)
            if margin < 1.0:
                gw = hyper.l2 * w - ys[i] * X[i]
                gb = -ys[i]
            else:
                gw = hyper.l2 * w
                gb = 0.0
            w = w - hyper.learning_rate * gw
            b = b - hyper.learning_rate * gb
    return ClassifierModel(w, b, vocab, mode, "svm", hyper)


def split_dataset(
    data: Sequence[LabeledExample],
    ratios: tuple[float, float, float] = (0.6, 0.2, 0.2),
    seed: int = 42,
) -> tuple[list[LabeledExample], list[LabeledExample], list[LabeledExample]]:
    """Seeded shuffle then contiguous split; exact partition of the input."""
    if abs(sum(ratios) - 1.0) > 1e-9 or any(r < 0 for r in ratios):
        raise ClassifyError(f"invalid split ratios {ratios}")
    items = list(data)
    rng = np.random.default_rng(seed)
    order = rng.permutation(len(items))
    shuffled = [items[i] for i in order]
    n = len(items)
    cut1 = round(ratios[0] * n)
    cut2 = round((ratios[0] + ratios[1]) * n)
    return shuffled[:cut1], shuffled[cut1:cut2], shuffled[cut2:]


@dataclass(frozen=True)
class EvalReport:
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


def predict(model: ClassifierModel, tokens: Sequence[str]) -> bool:
    return sigmoid_score(model, featurize(tokens, model.vocab, model.mode)) >= model.threshold


def evaluate(model: ClassifierModel, test: Sequence[LabeledExample]) -> EvalReport:
    """Confusion counts with electricity-related as the positive class."""
    if not test:
        raise ClassifyError("empty test set")
    tp = fp = fn = tn = 0
    for ex in test:
        pred = predict(model, ex.tokens)
        if pred and ex.y == 1:
            tp += 1
        elif pred and ex.y == 0:
            fp += 1
        elif not pred and ex.y == 1:
            fn += 1
        else:
            tn += 1
    return EvalReport(tp, fp, fn, tn)


def load_external_scores(path, known_ids: Optional[set[str]] = None) -> dict[str, float]:
    """Read newline-delimited {record_id, score} pairs from the transformer
    scorer; out-of-range scores and unknown ids are hard errors."""
    scores: dict[str, float] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            obj = json.loads(line)
            rid, score = str(obj["record_id"]), float(obj["score"])
            if not 0.0 <= score <= 1.0:
                raise ClassifyError(f"line {line_no}: score {score} outside [0, 1]")
            if known_ids is not None and rid not in known_ids:
                raise ClassifyError(f"line {line_no}: unknown record id {rid!r}")
            if rid in scores:
                raise ClassifyError(f"line {line_no}: duplicate record id {rid!r}")
            scores[rid] = score
    return scores


def classify_corpus(
    docs: Mapping[str, Sequence[str]],
    labeled: Mapping[str, str],
    model: Optional[ClassifierModel] = None,
    scores: Optional[Mapping[str, float]] = None,
    threshold: float = 0.5,
) -> set[str]:
    """Labeled positives unioned with predicted positives on the unlabeled rest.

    docs maps record_id -> tokens for the unlabeled remainder; labeled maps
    record_id -> label. Labeled negatives never pass.
    """
    if model is None and scores is None:
        raise ClassifyError("need a model or a score map")
    overlap = set(docs) & set(labeled)
    if overlap:
        raise ClassifyError(f"labeled ids overlap unlabeled docs: {sorted(overlap)[:3]}")
    positives = {rid for rid, lab in labeled.items() if lab == POSITIVE_LABEL}
    for rid, tokens in docs.items():
        if scores is not None:
            score = scores[rid]
        else:
            score = sigmoid_score(model, featurize(tokens, model.vocab, model.mode))
        if score >= threshold:
            positives.add(rid)
    return positives


def train_with_protocol(
    data: Sequence[LabeledExample],
    trainer: str = "lr",
    mode: str = BOW,
    hyper: Optional[Hyper] = None,
    seed: int = 42,
    min_df: int = 1,
) -> tuple[ClassifierModel, EvalReport, dict[str, list[str]]]:
    """60/20/20 split, retrain on train+val, evaluate on the held-out test set."""
    train, val, test = split_dataset(data, seed=seed)
    fn = {"lr": train_lr, "svm": train_svm}[trainer]
    if hyper is None:
        hyper = Hyper() if trainer == "lr" else Hyper(learning_rate=0.01)
    model = fn(train + val, mode=mode, hyper=hyper, min_df=min_df)
    report = evaluate(model, test)
    split_ids = {
        "train": [ex.record_id for ex in train],
        "val": [ex.record_id for ex in val],
        "test": [ex.record_id for ex in test],
    }
    return model, report, split_ids


def save_model(model: ClassifierModel, path) -> None:
    """JSON container; float repr round-trips bit-exactly in Python 3."""
    terms = [None] * len(model.vocab)
    for t, i in model.vocab.index.items():
        terms[i] = t
    payload = {
        "format": "gridsense-model-v1",
        "trainer": model.trainer,
        "mode": model.mode,
        "threshold": model.threshold,
        "bias": model.bias,
        "weights": [float(w) for w in model.weights],
        "terms": terms,
        "df": [model.vocab.df[t] for t in terms],
        "n_docs": model.vocab.n_docs,
        "hyper": {
            "learning_rate": model.hyper.learning_rate,
            "l2": model.hyper.l2,
            "epochs": model.hyper.epochs,
            "tol": model.hyper.tol,
            "seed": model.hyper.seed,
        },
    }
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f)


def load_model(path) -> ClassifierModel:
    with open(path, encoding="utf-8") as f:
        payload = json.load(f)
    if payload.get("format") != "gridsense-model-v1":
        raise ClassifyError(f"unrecognized model file {path}")
    terms = payload["terms"]
    vocab = Vocabulary(
        index={t: i for i, t in enumerate(terms)},
        df=dict(zip(terms, payload["df"])),
        n_docs=payload["n_docs"],
    )
    return ClassifierModel(
        weights=np.array(payload["weights"], dtype=float),
        bias=float(payload["bias"]),
        vocab=vocab,
        mode=payload["mode"],
        trainer=payload["trainer"],
        hyper=Hyper(**payload["hyper"]),
        threshold=float(payload["threshold"]),
    )
