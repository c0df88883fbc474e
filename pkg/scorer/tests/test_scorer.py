import json

import pytest

from gridsense_scorer import (
    DataError,
    Example,
    Metrics,
    ScorerHyper,
    finetune,
    load_labels,
    score,
    split_examples,
    write_scores,
)
from gridsense_scorer.cli import EXIT_CONFIG, EXIT_DATA, EXIT_OK, main

from conftest import make_labeled_corpus

FAST = ScorerHyper(learning_rate=1e-3, epochs=6, batch_size=16, max_length=32)


class TestSplit:
    def test_sizes_60_20_20(self):
        examples = [Example(str(i), "x", float(i % 2)) for i in range(1000)]
        tr, va, te = split_examples(examples, seed=0)
        assert (len(tr), len(va), len(te)) == (600, 200, 200)

    def test_partition(self):
        examples = [Example(str(i), "x", 0.0) for i in range(97)]
        tr, va, te = split_examples(examples, seed=5)
        ids = [e.record_id for e in tr + va + te]
        assert sorted(ids, key=int) == [e.record_id for e in examples]

    def test_seed_changes_assignment(self):
        examples = [Example(str(i), "x", 0.0) for i in range(100)]
        a = split_examples(examples, seed=1)
        b = split_examples(examples, seed=2)
        assert [e.record_id for e in a[0]] != [e.record_id for e in b[0]]


class TestMetrics:
    def test_formulas(self):
        m = Metrics(tp=8, fp=2, fn=4, tn=6)
        assert m.precision == 0.8
        assert m.recall == pytest.approx(8 / 12)
        assert m.f1 == pytest.approx(2 * 0.8 * (8 / 12) / (0.8 + 8 / 12))

    def test_undefined(self):
        m = Metrics(tp=0, fp=0, fn=0, tn=5)
        assert m.precision is None and m.recall is None and m.f1 is None


class TestFinetune:
    def test_smoke_100_docs(self, tiny_encoder, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=100)
        metrics = finetune(
            corpus, labels, tiny_encoder, tmp_path / "ckpt",
            hyper=ScorerHyper(learning_rate=1e-3, epochs=1, batch_size=16,
                              max_length=32),
        )
        assert metrics.tp + metrics.fp + metrics.fn + metrics.tn == 20
        meta = json.loads((tmp_path / "ckpt" / "scorer_meta.json").read_text())
        assert meta["splits"] == {"train": 60, "val": 20, "test": 20}
        assert set(meta["metrics"]) == {
            "tp", "fp", "fn", "tn", "precision", "recall", "f1"
        }

    def test_separable_f1(self, tiny_encoder, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=120)
        metrics = finetune(corpus, labels, tiny_encoder, tmp_path / "ckpt",
                           hyper=FAST)
        assert metrics.f1 is not None and metrics.f1 >= 0.95

    def test_seeded_runs_identical(self, tiny_encoder, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=80)
        m1 = finetune(corpus, labels, tiny_encoder, tmp_path / "c1",
                      hyper=FAST, seed=11)
        m2 = finetune(corpus, labels, tiny_encoder, tmp_path / "c2",
                      hyper=FAST, seed=11)
        assert m1 == m2
        s1 = score(tmp_path / "c1", corpus)
        s2 = score(tmp_path / "c2", corpus)
        assert s1 == s2

    def test_single_class_rejected(self, tiny_encoder, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=30)
        rows = [json.loads(l) for l in open(labels, encoding="utf-8")]
        for r in rows:
            r["label"] = "electricity"
        with open(labels, "w", encoding="utf-8") as f:
            for r in rows:
                f.write(json.dumps(r) + "\n")
        with pytest.raises(DataError):
            finetune(corpus, labels, tiny_encoder, tmp_path / "ckpt", hyper=FAST)

    def test_missing_encoder(self, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=30)
        with pytest.raises(OSError):
            finetune(corpus, labels, str(tmp_path / "no-such-encoder"),
                     tmp_path / "ckpt", hyper=FAST)


@pytest.fixture(scope="module")
def checkpoint(tiny_encoder, tmp_path_factory):
    tmp = tmp_path_factory.mktemp("trained")
    corpus, labels = make_labeled_corpus(tmp, n=100)
    finetune(corpus, labels, tiny_encoder, tmp / "ckpt", hyper=FAST)
    return tmp / "ckpt"


class TestScore:
    def test_three_records_three_rows(self, checkpoint, tmp_path):
        corpus = tmp_path / "three.ndjson"
        with open(corpus, "w", encoding="utf-8") as f:
            for i, text in enumerate(["still no power", "bread milk", "power out"]):
                f.write(json.dumps({"id": f"x{i}", "text": text}) + "\n")
        scores = score(checkpoint, corpus)
        assert len(scores) == 3
        out = tmp_path / "scores.ndjson"
        write_scores(scores, out)
        assert len(out.read_text().splitlines()) == 3

    def test_range(self, checkpoint, tmp_path):
        corpus, _ = make_labeled_corpus(tmp_path, n=40, seed=9)
        scores = score(checkpoint, corpus)
        assert all(0.0 < s < 1.0 for s in scores.values())

    def test_overlength_truncated_and_logged(self, checkpoint, tmp_path, caplog):
        corpus = tmp_path / "long.ndjson"
        with open(corpus, "w", encoding="utf-8") as f:
            f.write(json.dumps({"id": "l0", "text": "power " * 500}) + "\n")
        with caplog.at_level("WARNING", logger="gridsense_scorer.model"):
            scores = score(checkpoint, corpus)
        assert len(scores) == 1 and 0.0 < scores["l0"] < 1.0
        assert any("truncated" in r.message for r in caplog.records)

    def test_thresholded_decisions_deterministic(self, checkpoint, tmp_path):
        corpus, _ = make_labeled_corpus(tmp_path, n=40, seed=4)
        d1 = {r: s >= 0.5 for r, s in score(checkpoint, corpus).items()}
        d2 = {r: s >= 0.5 for r, s in score(checkpoint, corpus).items()}
        assert d1 == d2


class TestCli:
    def test_train_then_score(self, tiny_encoder, tmp_path, capsys):
        corpus, labels = make_labeled_corpus(tmp_path, n=60)
        ckpt = tmp_path / "ckpt"
        code = main([
            "train", "--corpus", str(corpus), "--labels", str(labels),
            "--encoder", tiny_encoder, "--output-dir", str(ckpt),
            "--learning-rate", "1e-3", "--epochs", "4", "--max-length", "32",
        ])
        assert code == EXIT_OK
        assert "f1=" in capsys.readouterr().out

        out = tmp_path / "scores.ndjson"
        code = main([
            "score", "--checkpoint", str(ckpt), "--corpus", str(corpus),
            "--output", str(out),
        ])
        assert code == EXIT_OK
        assert len(out.read_text().splitlines()) == 60

    def test_bad_hyper_is_config_error(self, tiny_encoder, tmp_path):
        corpus, labels = make_labeled_corpus(tmp_path, n=20)
        code = main([
            "train", "--corpus", str(corpus), "--labels", str(labels),
            "--encoder", tiny_encoder, "--output-dir", str(tmp_path / "c"),
            "--epochs", "0",
        ])
        assert code == EXIT_CONFIG

    def test_missing_corpus_is_data_error(self, tmp_path):
        code = main([
            "score", "--checkpoint", str(tmp_path), "--corpus",
            str(tmp_path / "nope.ndjson"), "--output", str(tmp_path / "s.ndjson"),
        ])
        assert code == EXIT_DATA


class TestLabelIo:
    def test_load_labels_rejects_unknown(self, tmp_path):
        p = tmp_path / "labels.ndjson"
        p.write_text('{"record_id": "a", "label": "maybe"}\n', encoding="utf-8")
        with pytest.raises(DataError):
            load_labels(p)

    def test_write_scores_rejects_out_of_range(self, tmp_path):
        with pytest.raises(DataError):
            write_scores({"a": 1.5}, tmp_path / "s.ndjson")
