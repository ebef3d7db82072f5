import random
from collections import Counter

import pytest

from biblioscape.corpus import build_corpus
from biblioscape.performance import (citation_distribution, citation_series, corpus_stats,
                                     frequent_words, production_distribution,
                                     production_growth, timelines, word_cloud_data,
                                     word_trends)
from biblioscape.text import NormalizationConfig, terms_for

from conftest import random_corpus, record


def test_corpus_stats_hand_counts(small_corpus):
    stats = corpus_stats(small_corpus)
    assert stats.documents == 6
    assert stats.authors == 9
    assert stats.author_appearances == 12
    assert stats.single_authored_docs == 1
    assert stats.collaboration_index == pytest.approx(8 / 5)
    assert stats.authors_per_document == pytest.approx(9 / 6)
    assert stats.coauthors_per_document == pytest.approx(12 / 6)
    assert stats.avg_citations_per_doc == pytest.approx(7 / 6)
    assert stats.avg_dissertations_per_year == pytest.approx(6 / 7)
    assert stats.references_total == 9
    assert stats.reference_docs == 5
    assert stats.author_keywords_total == 6


def test_corpus_stats_brute_force_recount(small_corpus):
    stats = corpus_stats(small_corpus)
    records = small_corpus.records
    authors = {p for r in records for p in r.people}
    multi = [r for r in records if r.supervisors]
    multi_authors = {p for r in multi for p in r.people}
    assert stats.authors_per_document == pytest.approx(len(authors) / len(records))
    assert stats.coauthors_per_document == pytest.approx(
        sum(len(r.people) for r in records) / len(records))
    assert stats.collaboration_index == pytest.approx(len(multi_authors) / len(multi))


def test_collaboration_index_undefined_without_multi_authored():
    corpus = build_corpus([record("solo", 2015, "ana, a.")], (2015, 2015))
    stats = corpus_stats(corpus)
    assert stats.collaboration_index is None
    assert stats.authors == 1
    assert stats.author_appearances == 1


def test_citations_per_year_conventions(small_corpus):
    elapsed = corpus_stats(small_corpus, per_year_mode="elapsed")
    window = corpus_stats(small_corpus, per_year_mode="window")
    # elapsed: mean over docs of citations / (2016 - year + 1)
    expect = (3 / 6 + 1 / 5 + 0 + 2 / 3 + 0 + 1 / 1) / 6
    assert elapsed.avg_citations_per_year_per_doc == pytest.approx(expect)
    assert window.avg_citations_per_year_per_doc == pytest.approx(7 / 6 / 7)
    with pytest.raises(ValueError):
        corpus_stats(small_corpus, per_year_mode="per-paper")


def test_production_growth_zero_filled(small_corpus):
    ts = production_growth(small_corpus)
    assert dict(ts.points) == {2010: 0, 2011: 1, 2012: 2, 2013: 0, 2014: 1, 2015: 1, 2016: 1}
    assert sum(v for _, v in ts.points) == len(small_corpus)


def test_production_growth_matches_manual_tally(small_corpus):
    tally = Counter(r.year for r in small_corpus.records)
    for year, value in production_growth(small_corpus).points:
        assert value == tally.get(year, 0)


def test_citation_series_total_and_average(small_corpus):
    total = citation_series(small_corpus, "total")
    assert dict(total.points) == {2010: 0, 2011: 3, 2012: 1, 2013: 0, 2014: 2, 2015: 0, 2016: 1}
    average = citation_series(small_corpus, "average")
    assert dict(average.points) == {2011: 3.0, 2012: 0.5, 2014: 2.0, 2015: 0.0, 2016: 1.0}
    assert 2013 not in dict(average.points)  # no documents that year


def test_citation_series_average_arithmetic():
    corpus = build_corpus([record("a", 2018, "x, a.", citations=3),
                           record("b", 2018, "y, b.", citations=1)], (2018, 2018))
    assert citation_series(corpus, "average").points == ((2018, 2.0),)


def test_citation_series_all_zero_is_flat(small_corpus):
    records = [record(f"z{y}", y, "x, a.") for y in (2011, 2013)]
    corpus = build_corpus(records, (2010, 2014))
    assert all(v == 0 for _, v in citation_series(corpus, "total").points)


def test_production_distribution_supervisors(small_corpus):
    dist = production_distribution(small_corpus, "supervisor")
    assert dist == [("perez, p.", 3), ("gomez, g.", 2), ("ruiz, r.", 1)]
    top1 = production_distribution(small_corpus, "supervisor", top_n=1)
    assert top1 == [("perez, p.", 3)]


def test_production_distribution_groups(small_corpus):
    assert production_distribution(small_corpus, "group") == \
        [("SES", 3), ("MMAI", 2), ("GIC", 1)]


def test_shared_supervision_credits_each_supervisor_once():
    corpus = build_corpus(
        [record("a", 2015, "x, a.", ["p, s.", "q, s."])], (2015, 2015))
    assert production_distribution(corpus, "supervisor") == [("p, s.", 1), ("q, s.", 1)]


def test_citation_distribution_sorted_with_id_ties(small_corpus):
    assert citation_distribution(small_corpus) == \
        [("d1", 3), ("d4", 2), ("d2", 1), ("d6", 1), ("d3", 0), ("d5", 0)]


def test_timelines_match_group_by_oracle(small_corpus):
    for tl in timelines(small_corpus, "supervisor"):
        docs = [r for r in small_corpus.records if tl.entity in r.supervisors]
        by_year = Counter(r.year for r in docs)
        cites = Counter()
        for r in docs:
            cites[r.year] += r.citation_count
        assert tl.bubbles == tuple(sorted((y, c, cites[y]) for y, c in by_year.items()))
        assert all(count >= 1 for _, count, _ in tl.bubbles)


def test_timeline_totals_equal_production_distribution(small_corpus):
    dist = dict(production_distribution(small_corpus, "supervisor"))
    for tl in timelines(small_corpus, "supervisor"):
        assert sum(c for _, c, _ in tl.bubbles) == dist[tl.entity]


def test_single_doc_entity_has_one_bubble():
    corpus = build_corpus([record("a", 2020, "x, a.", ["p, s."], citations=2)], (2019, 2021))
    (tl,) = timelines(corpus, "supervisor")
    assert tl.bubbles == ((2020, 1, 2),)


def test_word_trends_prefix_sum_oracle(small_corpus):
    cfg = NormalizationConfig()
    series = word_trends(small_corpus, "author_keywords", top_n=10, config=cfg)
    per_term_year = {}
    for r in small_corpus.records:
        for t in terms_for(r, "author_keywords", cfg):
            per_term_year.setdefault(t, Counter())[r.year] += 1
    for ts in series:
        running = 0
        oracle = []
        for y in small_corpus.years:
            running += per_term_year[ts.label].get(y, 0)
            oracle.append((y, running))
        assert list(ts.points) == oracle


def test_word_trends_absent_term_not_reported(small_corpus):
    labels = {ts.label for ts in word_trends(small_corpus, "author_keywords", 10)}
    assert "paz" not in labels
    assert "dinamica de sistemas" in labels


def test_word_trend_final_equals_doc_frequency(small_corpus):
    freq = dict(frequent_words(small_corpus, "author_keywords"))
    for ts in word_trends(small_corpus, "author_keywords", top_n=6):
        assert ts.points[-1][1] == freq[ts.label]


def test_frequent_words_counting_oracle(small_corpus):
    cfg = NormalizationConfig(stopwords=frozenset(["de", "en", "la"]))
    got = frequent_words(small_corpus, "title", config=cfg)
    oracle = Counter()
    for r in small_corpus.records:
        oracle.update(set(terms_for(r, "title", cfg)))
    assert dict(got) == dict(oracle)
    counts = [c for _, c in got]
    assert counts == sorted(counts, reverse=True)
    for (t1, c1), (t2, c2) in zip(got, got[1:]):
        if c1 == c2:
            assert t1 < t2  # alphabetical tie-break


def test_frequent_words_empty_field(small_corpus):
    records = [record("a", 2015, "x, a.")]
    corpus = build_corpus(records, (2015, 2015))
    assert frequent_words(corpus, "abstract") == []


def test_word_cloud_mirrors_frequent_words(small_corpus):
    assert word_cloud_data(small_corpus, "title", 5) == \
        frequent_words(small_corpus, "title", 5)


def test_random_corpora_growth_sum_invariant():
    rng = random.Random(7)
    for _ in range(20):
        corpus = random_corpus(rng)
        ts = production_growth(corpus)
        assert sum(v for _, v in ts.points) == len(corpus)
