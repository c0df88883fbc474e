import json
import random

import pytest
import torch
from tokenizers import Tokenizer
from tokenizers.models import WordPiece
from tokenizers.normalizers import BertNormalizer
from tokenizers.pre_tokenizers import BertPreTokenizer
from tokenizers.processors import TemplateProcessing
from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

POSITIVE_WORDS = [
    "power", "outage", "no", "still", "lose", "back", "electricity", "dark",
    "generator", "blackout", "pwr", "since", "night", "house", "street",
    "hot", "hope", "crew", "fix", "soon", "candle", "flashlight", "whole",
    "last", "have", "out", "go", "fpl", "dukeenergy",
]
NEGATIVE_WORDS = [
    "bread", "milk", "gas", "station", "traffic", "beach", "closed",
    "school", "game", "weekend", "coffee", "morning", "rain", "family",
    "dog", "cat", "movie", "music", "lunch", "store", "friend", "stocking",
    "god", "strength", "manifested", "gym", "workout", "ranger", "song",
    "nap", "girl", "vibe", "flower", "prayer", "spirit", "love", "win",
    "and", "the",
]


@pytest.fixture(scope="session")
def tiny_encoder(tmp_path_factory):
    """A randomly initialized miniature encoder saved locally, so tests never
    resolve a hub id."""
    path = tmp_path_factory.mktemp("encoder")
    words = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    words += sorted(set(POSITIVE_WORDS + NEGATIVE_WORDS))
    vocab = {w: i for i, w in enumerate(words)}

    backend = Tokenizer(WordPiece(vocab, unk_token="[UNK]"))
    backend.normalizer = BertNormalizer(lowercase=True)
    backend.pre_tokenizer = BertPreTokenizer()
    backend.post_processor = TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B [SEP]",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])],
    )
    tokenizer = PreTrainedTokenizerFast(
        tokenizer_object=backend, unk_token="[UNK]", pad_token="[PAD]",
        cls_token="[CLS]", sep_token="[SEP]", mask_token="[MASK]",
    )

    torch.manual_seed(0)
    config = BertConfig(
        vocab_size=len(vocab),
        hidden_size=32,
        num_hidden_layers=2,
        num_attention_heads=2,
        intermediate_size=64,
        max_position_embeddings=64,
    )
    BertModel(config).save_pretrained(path)
    tokenizer.save_pretrained(path)
    return str(path)


def make_labeled_corpus(tmp_path, n=100, seed=3, doc_len=6, name="toy"):
    """A separable corpus + labels in the pipeline file formats."""
    rng = random.Random(seed)
    corpus_path = tmp_path / f"{name}_corpus.ndjson"
    labels_path = tmp_path / f"{name}_labels.ndjson"
    with open(corpus_path, "w", encoding="utf-8") as cf, \
            open(labels_path, "w", encoding="utf-8") as lf:
        for i in range(n):
            rid = f"r{i:05d}"
            positive = i % 2 == 0
            pool = POSITIVE_WORDS if positive else NEGATIVE_WORDS
            words = ["still", "no", "power"] if positive else ["bread", "milk"]
            while len(words) < doc_len:
                words.append(rng.choice(pool))
            cf.write(json.dumps({
                "id": rid,
                "timestamp": "2017-09-11T12:00:00Z",
                "user_id": f"u{i:05d}",
                "text": " ".join(words),
            }) + "\n")
            lf.write(json.dumps({
                "record_id": rid,
                "label": "electricity" if positive else "non-electricity",
            }) + "\n")
    return corpus_path, labels_path
