"""Transformer-encoder scorer producing pipeline-interchange score files."""

from .data import (
    NEGATIVE_LABEL,
    POSITIVE_LABEL,
    DataError,
    load_corpus_texts,
    load_labels,
    write_scores,
)
from .model import (
    Example,
    Metrics,
    ScorerHyper,
    SigmoidScorer,
    finetune,
    load_checkpoint,
    score,
    split_examples,
)

__version__ = "0.1.0"

__all__ = [
    "DataError", "Example", "Metrics", "NEGATIVE_LABEL", "POSITIVE_LABEL",
    "ScorerHyper", "SigmoidScorer", "finetune", "load_checkpoint",
    "load_corpus_texts", "load_labels", "score", "split_examples",
    "write_scores", "__version__",
]
