"""gridsense: mining electricity-infrastructure condition signals from
geotagged social-media corpora."""

from .corpus import (
    KeywordScheme,
    PhaseWindow,
    PhaseWindows,
    TweetRecord,
    assign_phase,
    filter_bots,
    filter_keywords,
    load_corpus,
)
from .textprep import StopwordList, TokenDoc, clean, lemmatize, prepare_doc, remove_stopwords, tokenize
from .classify import (
    ClassifierModel,
    EvalReport,
    Hyper,
    LabeledExample,
    Vocabulary,
    build_vocabulary,
    classify_corpus,
    evaluate,
    featurize,
    load_external_scores,
    sigmoid_score,
    split_dataset,
    train_lr,
    train_svm,
    train_with_protocol,
)
from .phrases import PhraseTable, apply_phrases, build_phrase_tables, score_bigram
from .topics import (
    AggregatedTopic,
    EngagementReport,
    aggregate_topics,
    merge_entities,
    regional_breakdown,
    top_k_terms,
    topic_engagement,
)
from .config import PipelineConfig, load_config

__version__ = "0.1.0"
