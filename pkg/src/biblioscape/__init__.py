"""Bibliometric landscape engine for dissertation corpora.

Parses BibTeX metadata, cleans it, and derives the production-dynamics
indicators, concept maps, collaboration/intellectual networks, and flow
diagrams that describe an academic programme's research landscape, as batch
tables, graph files, and SVG plots.
"""

from .corpus import (BibRecord, Corpus, DuplicateIdError, EmptyCorpus, ParseWarning,
                     Provenance, build_corpus, parse_bib, parse_bib_file,
                     records_to_bibtex, split_parsed)
from .text import (ANALYSIS_FIELDS, NormalizationConfig, TermList,
                   derive_unigram_keywords, keyword_term, load_stopwords,
                   load_synonyms, normalize, terms_for)
from .performance import (CorpusStats, TimeSeries, Timeline, citation_distribution,
                          citation_series, corpus_stats, frequent_words,
                          production_distribution, production_growth, timelines,
                          word_cloud_data, word_trends)
from .concepts import (CooccurrenceMatrix, DegenerateProjection, Dendrogram,
                       EmptyVocabulary, TermDocumentMatrix, ThematicMap, Theme,
                       TopicMap, ca_projection, cooccurrence, cooccurrence_network,
                       dendrogram, mca_topic_map, term_document_matrix, thematic_map)
from .graphs import (GraphEdge, GraphNode, WeightedGraph, graph_from_graphml,
                     greedy_modularity_clusters, make_graph, to_dot, to_edge_csv,
                     to_graphml, to_node_csv, validate_graph, weighted_degrees)
from .networks import (EmptyReferences, author_coupling_network, cocitation_network,
                       collaboration_network, doc_coupling_network)
from .flows import FLOW_FIELDS, EmptyStage, FlowDiagram, FlowLink, FlowNode, flow
from .pipeline import RunConfig, RunManifest, load_config, run
from .plots import render_plots

__version__ = "0.1.0"
