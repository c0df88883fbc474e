import random
from fractions import Fraction

import pytest

from gridsense.textprep import TokenDoc
from gridsense.topics import (
    AggregatedTopic,
    TopicError,
    aggregate_topics,
    engagement_report,
    merge_entities,
    region_doc_counts,
    regional_breakdown,
    term_counts,
    top_k_terms,
    topic_engagement,
)

PHASES = ("before", "during", "after")


def doc(tokens, rid="d", phase="during", region=None):
    return TokenDoc(rid, tuple(tokens), phase=phase, region=region)


class TestMergeEntities:
    def test_fpl(self):
        assert merge_entities(doc(["fpl", "restore"])).tokens == ("utility_company", "restore")

    def test_dukeenergy(self):
        assert merge_entities(doc(["dukeenergy"])).tokens == ("utility_company",)

    def test_identity_without_entities(self):
        d = doc(["tree", "down"])
        assert merge_entities(d).tokens == d.tokens


class TestTopKTerms:
    def test_table2_during_rank_one(self, table2_topic_docs):
        scope = [d for d in table2_topic_docs if d.phase == "during"]
        top = top_k_terms(scope, 20)
        assert (top[0].term, top[0].count) == ("no power", 68)

    def test_k_larger_than_distinct(self):
        docs = [doc(["a", "b"]), doc(["a"])]
        top = top_k_terms(docs, 100)
        assert [(t.term, t.count) for t in top] == [("a", 2), ("b", 1)]

    def test_matches_brute_force_sort(self):
        rng = random.Random(5)
        docs = [
            doc([rng.choice("abcdefgh") for _ in range(rng.randrange(1, 10))], rid=str(i))
            for i in range(300)
        ]
        top = top_k_terms(docs, 5)
        # independent count-and-sort oracle
        counts = {}
        for d in docs:
            for t in d.tokens:
                counts[t] = counts.get(t, 0) + 1
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        assert [(t.term, t.count) for t in top] == ranked[:5]

    def test_prefix_property(self):
        docs = [doc(list("aabbbc"))]
        full = top_k_terms(docs, 100)
        for k in range(1, len(full) + 1):
            assert top_k_terms(docs, k) == full[:k]

    def test_k_below_one(self):
        with pytest.raises(TopicError):
            top_k_terms([doc(["a"])], 0)


class TestAggregateTopics:
    def test_no_power_during_sum(self):
        counts = {
            "no power": 68, "lose power": 48, "power out": 37,
            "power outage": 26, "without power": 25, "power go out": 28,
        }
        topics = AggregatedTopic.defaults()
        atc = aggregate_topics(counts, topics)
        assert atc["no-power"] == 232

    def test_absent_terms_zero(self):
        atc = aggregate_topics({}, AggregatedTopic.defaults())
        assert all(v == 0 for v in atc.values())

    def test_single_term_topic(self):
        topics = [AggregatedTopic("solo", frozenset({"tree"}))]
        assert aggregate_topics({"tree": 43}, topics) == {"solo": 43}

    def test_overlapping_topics_rejected(self):
        topics = [
            AggregatedTopic("a", frozenset({"x"})),
            AggregatedTopic("b", frozenset({"x"})),
        ]
        with pytest.raises(TopicError):
            aggregate_topics({}, topics)

    def test_topic_sum_bounded_by_total(self, table2_topic_docs):
        scope = [d for d in table2_topic_docs if d.phase == "during"]
        counts = term_counts(scope)
        atc = aggregate_topics(counts, AggregatedTopic.defaults())
        assert sum(atc.values()) <= sum(counts.values())


class TestTopicEngagement:
    def test_exact_ratio(self):
        te = topic_engagement(68, 550)
        assert te == Fraction(68, 550)
        assert float(te) == pytest.approx(0.1236, abs=5e-5)

    def test_zero_atc(self):
        assert topic_engagement(0, 10) == 0

    def test_atc_equals_nt(self):
        assert topic_engagement(5, 5) == 1

    def test_nt_zero_rejected(self):
        with pytest.raises(TopicError):
            topic_engagement(1, 0)

    def test_duplication_invariance(self):
        docs = [doc(["no_power", "tree"], rid=str(i)) for i in range(10)]
        topics = AggregatedTopic.defaults()
        r1 = engagement_report(docs, topics, ["during"])
        r2 = engagement_report(docs + [TokenDoc(d.record_id + "x", d.tokens, d.phase) for d in docs],
                               topics, ["during"])
        te1 = {(r.phase, r.topic): r.te for r in r1.rows}
        te2 = {(r.phase, r.topic): r.te for r in r2.rows}
        assert te1 == te2


class TestRegionalBreakdown:
    def test_min_docs_cut_selects_seeded_counties(self, table2_topic_docs):
        report = regional_breakdown(
            table2_topic_docs, AggregatedTopic.defaults(), PHASES, min_docs=100
        )
        regions = sorted({r.region for r in report.rows})
        assert regions == ["Broward", "Miami-Dade", "Orange", "Palm Beach", "Pinellas"]

    def test_min_docs_one_includes_all_labeled(self, table2_topic_docs):
        report = regional_breakdown(
            table2_topic_docs, AggregatedTopic.defaults(), PHASES, min_docs=1
        )
        regions = {r.region for r in report.rows}
        counts = region_doc_counts(table2_topic_docs)
        assert regions == set(counts) - {"UNKNOWN"}

    def test_rows_match_brute_force_recount(self, table2_topic_docs):
        topics = AggregatedTopic.defaults()
        report = regional_breakdown(table2_topic_docs, topics, PHASES, min_docs=100)
        by_name = {t.name: t.included_terms for t in topics}
        for row in report.rows:
            scope = [
                d for d in table2_topic_docs
                if d.region == row.region and d.phase == row.phase
            ]
            assert row.nt == len(scope)
            atc = 0
            for d in scope:
                for tok in d.tokens:
                    if tok.replace("_", " ") in by_name[row.topic]:
                        atc += 1
            assert row.atc == atc
            assert row.te == Fraction(atc, len(scope))

    def test_unlabeled_excluded(self):
        docs = [doc(["tree"], rid=str(i), region=None) for i in range(200)]
        report = regional_breakdown(docs, AggregatedTopic.defaults(), ("during",), min_docs=1)
        assert report.rows == ()
