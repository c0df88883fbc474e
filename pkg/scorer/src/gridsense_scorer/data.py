"""File interchange with the batch pipeline: corpus records, labels, scores.

All three formats are newline-delimited JSON. This package never imports the
pipeline's code; the files are the whole contract.
"""

from __future__ import annotations

import json

POSITIVE_LABEL = "electricity"
NEGATIVE_LABEL = "non-electricity"


class DataError(Exception):
    pass


def load_corpus_texts(path) -> dict[str, str]:
    """record_id -> text from a corpus file; ids must be unique."""
    texts: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                rid, text = str(obj["id"]), str(obj["text"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"line {line_no}: bad corpus record ({exc})") from exc
            if rid in texts:
                raise DataError(f"line {line_no}: duplicate record id {rid!r}")
            texts[rid] = text
    if not texts:
        raise DataError(f"{path}: empty corpus")
    return texts


def load_labels(path) -> dict[str, str]:
    """record_id -> label; only the two pipeline labels are accepted."""
    labels: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                rid, label = str(obj["record_id"]), str(obj["label"])
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                raise DataError(f"line {line_no}: bad label record ({exc})") from exc
            if label not in (POSITIVE_LABEL, NEGATIVE_LABEL):
                raise DataError(f"line {line_no}: unknown label {label!r}")
            if rid in labels:
                raise DataError(f"line {line_no}: duplicate record id {rid!r}")
            labels[rid] = label
    if not labels:
        raise DataError(f"{path}: empty label file")
    return labels


def write_scores(scores: dict[str, float], path) -> None:
    """One {record_id, score} row per record, id-sorted, scores in [0, 1]."""
    for rid, s in scores.items():
        if not 0.0 <= s <= 1.0:
            raise DataError(f"score {s} for {rid!r} outside [0, 1]")
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        for rid in sorted(scores):
            f.write(json.dumps({"record_id": rid, "score": scores[rid]}) + "\n")
