"""Mining formulaic expressions from the bundled storm-outage corpus.

Walks the phrase-modeling path by hand: clean/tokenize/lemmatize the raw
records, score adjacent word pairs with the discounted association statistic,
rewrite the corpus with accepted bigrams, and pick up trigrams on the second
pass. Run from the repository root:

    python3 demos/01_phrase_mining.py
"""

from gridsense.corpus import PhaseWindows, assign_phase
from gridsense.fixtures import table2_corpus
from gridsense.phrases import apply_phrases_all, build_phrase_tables, score_bigram
from gridsense.textprep import prepare_doc


def main():
    windows = PhaseWindows.irma_default()
    records = table2_corpus()
    print(f"corpus: {len(records)} records across {len(windows.phases)} phases")

    docs = [
        prepare_doc(r.id, r.text, phase=assign_phase(r, windows), region=r.region)
        for r in records
    ]

    # the statistic discounts the pair count by the acceptance minimum, so a
    # pair sitting exactly at min_count always scores zero:
    demo = score_bigram(c_ab=5, c_a=40, c_b=50, c_min=5, n=10_000)
    print(f"\npair at the count floor scores {demo} (never accepted)")
    demo = score_bigram(c_ab=25, c_a=40, c_b=50, c_min=5, n=10_000)
    print(f"a strongly associated pair scores {demo:.1f}")

    bigrams, trigrams = build_phrase_tables(docs, min_count=5, threshold=1.0)
    print(f"\naccepted bigrams ({len(bigrams)}):")
    for words in sorted(bigrams.entries, key=lambda w: -bigrams.entries[w].count):
        e = bigrams.entries[words]
        print(f"  {e.display:<20} count={e.count:<4} score={e.score:.2f}")

    print(f"\naccepted trigrams ({len(trigrams)}):")
    for words, e in sorted(trigrams.entries.items()):
        print(f"  {e.display:<20} count={e.count:<4} score={e.score:.2f}")

    merged = apply_phrases_all(docs, bigrams, trigrams)
    before = next(d for d in docs if "still" in d.tokens and "no" in d.tokens)
    after = next(d for d in merged if d.record_id == before.record_id)
    print("\none record, before and after phrase merging:")
    print("  ", " ".join(before.tokens))
    print("  ", " ".join(after.tokens))


if __name__ == "__main__":
    main()
