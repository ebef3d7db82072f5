"""Social and intellectual structure networks.

Four builders over the immutable corpus: co-authorship cliques per document
(collaboration), shared references between authors' oeuvres (author
coupling), shared references between documents (manuscript coupling), and
joint citation of references (co-citation). Reference identity is exact
match of the normalized reference string; no disambiguation is attempted.

Reference-based networks carry a coverage note stating how many documents
actually supplied references, since archives often only hold them for recent
years.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations

from .corpus import Corpus
from .graphs import WeightedGraph, greedy_modularity_clusters, make_graph

__all__ = [
    "EmptyReferences",
    "author_coupling_network",
    "cocitation_network",
    "collaboration_network",
    "doc_coupling_network",
]


class EmptyReferences(Exception):
    """No record in the corpus carries references."""


def _coverage_note(corpus: Corpus) -> str:
    with_refs = sum(1 for r in corpus.records if r.references)
    total = len(corpus.records)
    return (f"references available for {with_refs}/{total} documents "
            f"({100.0 * with_refs / total:.0f}%)")


def _require_references(corpus: Corpus) -> None:
    if not any(r.references for r in corpus.records):
        raise EmptyReferences("no record in the corpus has references")


def collaboration_network(corpus: Corpus, top_n: int | None = None) -> WeightedGraph:
    """Co-authorship network of students and supervisors.

    Node weight is the person's document count; edge weight is the number of
    co-authored documents. ``top_n`` keeps the most productive people and
    builds the node-induced subgraph (edges only among the kept people).
    """
    doc_count = Counter()
    for r in corpus.records:
        doc_count.update(set(r.people))
    ranked = sorted(doc_count.items(), key=lambda kv: (-kv[1], kv[0]))
    keep = {name for name, _ in (ranked[:top_n] if top_n is not None else ranked)}

    pair_docs = Counter()
    for r in corpus.records:
        authors = sorted(set(r.people) & keep)
        pair_docs.update(combinations(authors, 2))

    node_ids = [name for name, _ in ranked if name in keep]
    nodes = [(name, name, float(doc_count[name])) for name in node_ids]
    edges = [(a, b, float(w)) for (a, b), w in pair_docs.items()]
    clusters = greedy_modularity_clusters(node_ids, edges)
    return make_graph("collaboration", nodes, edges, clusters)


def _oeuvre_references(corpus: Corpus) -> dict[str, set[str]]:
    oeuvres: dict[str, set[str]] = {}
    for r in corpus.records:
        for person in set(r.people):
            oeuvres.setdefault(person, set()).update(r.references)
    return oeuvres


def author_coupling_network(corpus: Corpus, min_shared: int = 1) -> WeightedGraph:
    """Authors linked by common references across their oeuvres.

    An author's oeuvre is the union of reference strings over every document
    they (co-)authored. Edge weight is the intersection size; pairs below
    ``min_shared`` are dropped. Authors whose oeuvres carry no references
    remain as isolated nodes.
    """
    _require_references(corpus)
    doc_count = Counter()
    for r in corpus.records:
        doc_count.update(set(r.people))
    oeuvres = _oeuvre_references(corpus)
    people = sorted(oeuvres, key=lambda p: (-doc_count[p], p))

    edges = []
    for a, b in combinations(sorted(people), 2):
        shared = len(oeuvres[a] & oeuvres[b])
        if shared >= max(min_shared, 1):
            edges.append((a, b, float(shared)))
    nodes = [(p, p, float(doc_count[p])) for p in people]
    clusters = greedy_modularity_clusters(people, edges)
    return make_graph("author_coupling", nodes, edges, clusters,
                      coverage_note=_coverage_note(corpus))


def doc_coupling_network(corpus: Corpus, min_shared: int = 1) -> WeightedGraph:
    """Documents linked when their bibliographies share references.

    This is B = A A^T over the document x reference incidence with the
    diagonal dropped; only documents that carry references become nodes.
    """
    _require_references(corpus)
    docs = [r for r in corpus.records if r.references]
    refs = {r.id: set(r.references) for r in docs}
    edges = []
    for a, b in combinations(sorted(refs), 2):
        shared = len(refs[a] & refs[b])
        if shared >= max(min_shared, 1):
            edges.append((a, b, float(shared)))
    node_ids = [r.id for r in docs]
    nodes = [(r.id, r.title or r.id, float(len(r.references))) for r in docs]
    clusters = greedy_modularity_clusters(node_ids, edges)
    return make_graph("doc_coupling", nodes, edges, clusters,
                      coverage_note=_coverage_note(corpus))


def cocitation_network(corpus: Corpus, top_n_refs: int | None = None) -> WeightedGraph:
    """Most-cited references linked by joint citation.

    Edge weight counts the documents citing both references (C = A^T A off
    the diagonal); node weight is the reference's citation count within the
    corpus.
    """
    _require_references(corpus)
    cited_by: dict[str, set[str]] = {}
    for r in corpus.records:
        for ref in r.references:
            cited_by.setdefault(ref, set()).add(r.id)
    ranked = sorted(cited_by, key=lambda ref: (-len(cited_by[ref]), ref))
    keep = ranked[:top_n_refs] if top_n_refs is not None else ranked

    edges = []
    for a, b in combinations(sorted(keep), 2):
        joint = len(cited_by[a] & cited_by[b])
        if joint:
            edges.append((a, b, float(joint)))
    nodes = [(ref, ref, float(len(cited_by[ref]))) for ref in keep]
    clusters = greedy_modularity_clusters(keep, edges)
    return make_graph("cocitation", nodes, edges, clusters,
                      coverage_note=_coverage_note(corpus))
