"""Per-phase and per-county topic-engagement reports.

Takes the bundled storm-outage corpus through the full topic path (phrase
merge, utility-entity merge, stop/keyword removal), ranks the top-20 terms
per disaster phase, folds them into the five aggregated topics, and prints
engagement = topic count / posts in scope. Run from the repository root:

    python3 demos/03_engagement_reports.py
"""

from gridsense.corpus import DEFAULT_KEYWORDS, PhaseWindows, assign_phase
from gridsense.fixtures import table2_corpus
from gridsense.phrases import apply_phrases_all, build_phrase_tables
from gridsense.textprep import StopwordList, prepare_doc
from gridsense.topics import (
    AggregatedTopic,
    engagement_report,
    prepare_topic_docs,
    regional_breakdown,
    top_k_terms,
)

PHASES = ("before", "during", "after")


def main():
    windows = PhaseWindows.irma_default()
    records = table2_corpus()
    docs = [
        prepare_doc(r.id, r.text, phase=assign_phase(r, windows), region=r.region)
        for r in records
    ]
    bigrams, trigrams = build_phrase_tables(docs)
    merged = apply_phrases_all(docs, bigrams, trigrams)
    topic_docs = prepare_topic_docs(merged, StopwordList.default(), DEFAULT_KEYWORDS)

    for phase in PHASES:
        scope = [d for d in topic_docs if d.phase == phase]
        print(f"\ntop terms, {phase} phase ({len(scope)} posts):")
        for t in top_k_terms(scope, 10):
            print(f"  {t.term:<22} {t.count}")

    topics = AggregatedTopic.defaults()
    print("\nwhole-corpus engagement (topic count / posts in phase):")
    report = engagement_report(topic_docs, topics, PHASES)
    for row in report.rows:
        print(f"  {row.phase:<8} {row.topic:<14} {row.atc:>4}/{row.nt:<5} "
              f"TE={float(row.te):.4f}")

    print("\nno-power engagement by county (counties with >= 100 posts):")
    county = regional_breakdown(topic_docs, topics, PHASES, min_docs=100)
    for row in county.rows:
        if row.topic == "no-power" and row.phase == "after":
            print(f"  {row.region:<12} {row.atc:>4}/{row.nt:<5} TE={float(row.te):.4f}")


if __name__ == "__main__":
    main()
