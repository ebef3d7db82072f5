"""Conceptual-structure walkthrough: the term-document matrix, keyword
co-occurrence, the 2D topic map with its Ward clusters, the matching
dendrogram cut, and the Callon thematic map quadrants.
"""

from pathlib import Path

from biblioscape import (NormalizationConfig, build_corpus, cooccurrence,
                         cooccurrence_network, dendrogram, load_stopwords,
                         mca_topic_map, parse_bib_file, term_document_matrix,
                         thematic_map)

DATA = Path(__file__).parent / "data"

records, warnings = parse_bib_file(DATA / "sample.bib")
corpus = build_corpus(records, (2010, 2020), warnings=warnings)
config = NormalizationConfig(stopwords=load_stopwords(DATA / "stopwords_es.txt"))

tdm = term_document_matrix(corpus, "author_keywords", min_doc_freq=2, config=config)
print(f"term-document matrix: {len(tdm.terms)} terms x {len(tdm.doc_ids)} documents")
for term, freq in zip(tdm.terms, tdm.doc_frequencies):
    print(f"  {freq:2d}  {term}")

co = cooccurrence(tdm)
print("\nstrongest co-occurrences")
pairs = sorted(((c, a, b) for a, b, c in co.triplets() if a != b), reverse=True)
for count, a, b in pairs[:5]:
    print(f"  {count:2d}  {a} + {b}")

k = 4
topic_map = mca_topic_map(tdm, k=k)
print(f"\ntopic map (k={k}, inertia {topic_map.explained_inertia[0]:.2f} / "
      f"{topic_map.explained_inertia[1]:.2f})")
for cid in range(1, k + 1):
    members = [t for t, _, _, c in topic_map.points if c == cid]
    print(f"  topic {cid}: {', '.join(members)}")

den = dendrogram(tdm, cut_k=k)
assert den.cut(k) == topic_map.partition()  # same Ward tree, same clusters
print("dendrogram cut reproduces the topic-map partition")

network = cooccurrence_network(co, top_n=len(co.terms))
print(f"\nco-word network: {len(network.nodes)} nodes, {len(network.edges)} edges, "
      f"{len(set(network.clusters.values()))} communities")

tm = thematic_map(co, cluster_count=4)
print("\nthematic map quadrants")
for theme in tm.themes:
    print(f"  [{theme.quadrant:18s}] {theme.label:24s} "
          f"centrality={theme.centrality:6.2f} density={theme.density:6.2f}")
