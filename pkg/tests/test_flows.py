import random
from collections import Counter

import pytest

from biblioscape.corpus import build_corpus
from biblioscape.flows import EmptyStage, flow

from conftest import random_corpus, record


def test_single_document_single_path():
    corpus = build_corpus(
        [record("d", 2015, "stud, s.", ["prof, p."], group="G", keywords=["k"])],
        (2015, 2015))
    diagram = flow(corpus, ["group", "author_keywords", "supervisors"])
    assert diagram.stages == ("group", "author_keywords", "supervisors")
    (hop1, hop2) = diagram.links
    assert [(l.from_node, l.to_node, l.weight) for l in hop1] == [("G", "k", 1)]
    assert [(l.from_node, l.to_node, l.weight) for l in hop2] == [("k", "prof, p.", 1)]


def test_multi_keyword_document_fans_out():
    corpus = build_corpus(
        [record("d", 2015, "stud, s.", ["prof, p."], group="G",
                keywords=["k1", "k2", "k3"])], (2015, 2015))
    diagram = flow(corpus, ["group", "author_keywords", "supervisors"])
    hop1 = {(l.from_node, l.to_node): l.weight for l in diagram.links[0]}
    assert hop1 == {("G", "k1"): 1, ("G", "k2"): 1, ("G", "k3"): 1}


def test_empty_stage_raises():
    corpus = build_corpus([record("d", 2015, "stud, s.")], (2015, 2015))
    with pytest.raises(EmptyStage):
        flow(corpus, ["group", "author_keywords"])


def test_stage_count_and_names_validated(small_corpus):
    with pytest.raises(ValueError):
        flow(small_corpus, ["group"])
    with pytest.raises(ValueError):
        flow(small_corpus, ["group", "venue"])
    with pytest.raises(ValueError):
        flow(small_corpus, ["group", "author_keywords", "supervisors", "year"])


def brute_force_links(corpus, stages, kept_sets):
    from biblioscape.flows import _stage_values
    tallies = [Counter() for _ in range(len(stages) - 1)]
    for r in corpus.records:
        values = [sorted(set(_stage_values(r, s)) & kept_sets[i])
                  for i, s in enumerate(stages)]
        for hop in range(len(stages) - 1):
            for a in values[hop]:
                for b in values[hop + 1]:
                    tallies[hop][(a, b)] += 1
    return tallies


def test_five_doc_fixture_matches_tally_oracle(small_corpus):
    stages = ("group", "author_keywords", "supervisors")
    diagram = flow(small_corpus, stages)
    kept_sets = [{n.label for n in stage_nodes} for stage_nodes in diagram.nodes]
    oracle = brute_force_links(small_corpus, stages, kept_sets)
    for hop, tally in zip(diagram.links, oracle):
        assert {(l.from_node, l.to_node): l.weight for l in hop} == dict(tally)
    assert all(l.weight >= 1 for hop in diagram.links for l in hop)


def test_top_n_restricts_nodes_and_links(small_corpus):
    diagram = flow(small_corpus, ("group", "author_keywords", "supervisors"), top_n=2)
    for stage_nodes in diagram.nodes:
        assert len(stage_nodes) <= 2
    labels = [{n.label for n in stage_nodes} for stage_nodes in diagram.nodes]
    for hop, (src, dst) in zip(diagram.links, zip(labels, labels[1:])):
        assert all(l.from_node in src and l.to_node in dst for l in hop)


def test_middle_stage_balance_when_adjacent_stages_single_valued():
    # group and student are single-valued per document, so inbound and
    # outbound totals of every middle keyword node must agree
    records = [
        record("d1", 2015, "s1, a.", group="G1", keywords=["k1", "k2"]),
        record("d2", 2016, "s2, b.", group="G2", keywords=["k1"]),
        record("d3", 2016, "s3, c.", group="G1", keywords=["k2"]),
    ]
    corpus = build_corpus(records, (2015, 2016))
    diagram = flow(corpus, ("group", "author_keywords", "student"))
    inbound = Counter()
    outbound = Counter()
    for l in diagram.links[0]:
        inbound[l.to_node] += l.weight
    for l in diagram.links[1]:
        outbound[l.from_node] += l.weight
    assert inbound == outbound


def test_two_stage_flow_and_year_stage(small_corpus):
    diagram = flow(small_corpus, ("year", "group"))
    assert len(diagram.links) == 1
    years = {n.label for n in diagram.nodes[0]}
    assert years <= {str(y) for y in small_corpus.years}


def test_random_corpora_match_oracle():
    rng = random.Random(77)
    for _ in range(15):
        corpus = random_corpus(rng)
        diagram = flow(corpus, ("group", "author_keywords", "supervisors"), top_n=5) \
            if any(r.supervisors for r in corpus.records) else None
        if diagram is None:
            continue
        kept_sets = [{n.label for n in stage} for stage in diagram.nodes]
        oracle = brute_force_links(corpus, diagram.stages, kept_sets)
        for hop, tally in zip(diagram.links, oracle):
            assert {(l.from_node, l.to_node): l.weight for l in hop} == dict(tally)
