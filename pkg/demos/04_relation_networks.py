"""Social and intellectual structures: the collaboration network's
star/triangle shapes, author and manuscript coupling over shared references,
co-citation of influential works, and the GraphML/DOT exporters.
"""

from pathlib import Path

from biblioscape import (author_coupling_network, build_corpus, cocitation_network,
                         collaboration_network, doc_coupling_network, parse_bib_file,
                         to_dot, to_graphml, weighted_degrees)

DATA = Path(__file__).parent / "data"
OUT = Path(__file__).parent / "out"

records, warnings = parse_bib_file(DATA / "sample.bib")
corpus = build_corpus(records, (2010, 2020), warnings=warnings)

collab = collaboration_network(corpus)
print(f"collaboration: {len(collab.nodes)} people, {len(collab.edges)} links")
degrees = weighted_degrees(collab)
for name in sorted(degrees, key=lambda n: -degrees[n])[:5]:
    print(f"  {degrees[name]:4.0f}  {name} (cluster {collab.clusters[name]})")

coupling = author_coupling_network(corpus)
print(f"\nauthor coupling: {len(coupling.edges)} pairs share references")
print(f"  coverage: {coupling.coverage_note}")
for e in sorted(coupling.edges, key=lambda e: -e.weight)[:4]:
    print(f"  {e.weight:3.0f} shared  {e.a}  ~  {e.b}")

docs = doc_coupling_network(corpus)
print(f"\nmanuscript coupling: {len(docs.nodes)} documents, {len(docs.edges)} links")

cocit = cocitation_network(corpus, top_n_refs=10)
print(f"\nco-citation over the 10 most-cited references")
for n in cocit.nodes[:5]:
    print(f"  cited by {n.weight:2.0f}  {n.label}")

OUT.mkdir(exist_ok=True)
for name, graph in [("collaboration", collab), ("author_coupling", coupling),
                    ("doc_coupling", docs), ("cocitation", cocit)]:
    (OUT / f"{name}.graphml").write_text(to_graphml(graph), encoding="utf-8")
    (OUT / f"{name}.dot").write_text(to_dot(graph), encoding="utf-8")
print(f"\nGraphML/DOT files written to {OUT}")
