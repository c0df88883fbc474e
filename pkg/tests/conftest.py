import pytest

from gridsense.corpus import DEFAULT_KEYWORDS, PhaseWindows, assign_phase
from gridsense.fixtures import table2_corpus
from gridsense.phrases import apply_phrases_all, build_phrase_tables
from gridsense.textprep import StopwordList, prepare_doc
from gridsense.topics import prepare_topic_docs

PHASES = ("before", "during", "after")


@pytest.fixture(scope="session")
def stopwords():
    return StopwordList.default()


@pytest.fixture(scope="session")
def table2_records():
    return table2_corpus()


@pytest.fixture(scope="session")
def table2_docs(table2_records):
    """Raw fixture records pushed through clean/tokenize/lemmatize with phases."""
    windows = PhaseWindows.irma_default()
    return [
        prepare_doc(r.id, r.text, phase=assign_phase(r, windows), region=r.region)
        for r in table2_records
    ]


@pytest.fixture(scope="session")
def table2_topic_docs(table2_docs, stopwords):
    """Fixture docs after phrase merging, entity merging, and useless-token
    removal: the input scope for top-k and engagement."""
    bigrams, trigrams = build_phrase_tables(table2_docs)
    merged = apply_phrases_all(table2_docs, bigrams, trigrams)
    return prepare_topic_docs(merged, stopwords, DEFAULT_KEYWORDS)
