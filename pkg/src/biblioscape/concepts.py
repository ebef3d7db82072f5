"""Conceptual-structure analytics over the term-document incidence matrix.

The binary term x document matrix is the parent of everything here: the
co-occurrence matrix is its Gram product, the 2D topic map comes from a
correspondence analysis of it (chi-square metric, singular decomposition,
principal coordinates), the dendrogram is Ward agglomeration over those same
coordinates (so cutting it at k reproduces the topic-map partition by
construction), and the thematic map scores co-word clusters by Callon
centrality and density.

All tie-breaks are fixed (lowest index first), so every output is
deterministic for a given corpus.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .corpus import Corpus
from .graphs import WeightedGraph, greedy_modularity_clusters, make_graph
from .text import NormalizationConfig, terms_for

__all__ = [
    "CooccurrenceMatrix",
    "DegenerateProjection",
    "Dendrogram",
    "EmptyVocabulary",
    "TermDocumentMatrix",
    "ThematicMap",
    "Theme",
    "TopicMap",
    "ca_projection",
    "cooccurrence",
    "cooccurrence_network",
    "cut_merges",
    "dendrogram",
    "mca_topic_map",
    "term_document_matrix",
    "thematic_map",
    "ward_linkage",
]


class EmptyVocabulary(Exception):
    """No term survived frequency pruning."""


class DegenerateProjection(Exception):
    """The chi-square residual matrix cannot support a 2D projection."""

    def __init__(self, rank: int):
        self.rank = rank
        super().__init__(f"degenerate projection: residual matrix has rank {rank} < 2")


@dataclass(frozen=True, eq=False)
class TermDocumentMatrix:
    """Binary incidence of retained terms (rows) against documents (columns)."""

    terms: tuple[str, ...]
    doc_ids: tuple[str, ...]
    cells: np.ndarray  # shape (terms, docs), values 0/1
    field: str

    @property
    def doc_frequencies(self) -> np.ndarray:
        return self.cells.sum(axis=1)

    def triplets(self) -> list[tuple[str, str, int]]:
        rows, cols = np.nonzero(self.cells)
        return [(self.terms[i], self.doc_ids[j], 1) for i, j in zip(rows, cols)]


@dataclass(frozen=True, eq=False)
class CooccurrenceMatrix:
    """Document counts of term pairs; the diagonal is each term's frequency."""

    terms: tuple[str, ...]
    counts: np.ndarray  # symmetric (terms, terms)
    field: str

    @property
    def doc_frequencies(self) -> np.ndarray:
        return np.diagonal(self.counts)

    def triplets(self) -> list[tuple[str, str, int]]:
        out = []
        n = len(self.terms)
        for i in range(n):
            for j in range(i, n):
                if self.counts[i, j]:
                    out.append((self.terms[i], self.terms[j], int(self.counts[i, j])))
        return out


@dataclass(frozen=True)
class TopicMap:
    points: tuple[tuple[str, float, float, int], ...]  # (term, x, y, cluster_id)
    explained_inertia: tuple[float, float]
    k: int

    def partition(self) -> dict[str, int]:
        return {term: cid for term, _, _, cid in self.points}

    def as_dict(self) -> dict:
        return {
            "points": [{"term": t, "x": x, "y": y, "cluster": c} for t, x, y, c in self.points],
            "explained_inertia": list(self.explained_inertia),
            "k": self.k,
        }


@dataclass(frozen=True)
class Dendrogram:
    """Binary merge tree over terms with Ward heights.

    ``merges`` follows the usual linkage convention: row i joins clusters a
    and b (original terms are 0..n-1, merged clusters n, n+1, ...) at the
    given height, producing a cluster of the given size.
    """

    terms: tuple[str, ...]
    merges: tuple[tuple[int, int, float, int], ...]
    cut_k: int

    def cut(self, k: int | None = None) -> dict[str, int]:
        k = self.cut_k if k is None else k
        labels = cut_merges(self.merges, len(self.terms), k)
        return {t: labels[i] for i, t in enumerate(self.terms)}

    def as_dict(self) -> dict:
        return {
            "terms": list(self.terms),
            "merges": [[a, b, h, s] for a, b, h, s in self.merges],
            "cut_k": self.cut_k,
            "clusters": self.cut(),
        }


@dataclass(frozen=True)
class Theme:
    label: str
    members: tuple[str, ...]
    centrality: float
    density: float
    doc_share: float
    quadrant: str


@dataclass(frozen=True)
class ThematicMap:
    themes: tuple[Theme, ...]
    median_centrality: float
    median_density: float

    def as_dict(self) -> dict:
        return {
            "themes": [
                {"label": t.label, "members": list(t.members), "centrality": t.centrality,
                 "density": t.density, "doc_share": t.doc_share, "quadrant": t.quadrant}
                for t in self.themes
            ],
            "median_centrality": self.median_centrality,
            "median_density": self.median_density,
        }


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------

def term_document_matrix(corpus: Corpus, source_field: str = "author_keywords",
                         min_doc_freq: int = 1, max_terms: int | None = None,
                         config: NormalizationConfig | None = None) -> TermDocumentMatrix:
    """Binary incidence over terms at or above ``min_doc_freq`` documents.

    Term order is descending document frequency with alphabetical ties, so
    row 0 is always the most frequent term.
    """
    if min_doc_freq < 1:
        raise ValueError("min_doc_freq must be >= 1")
    doc_terms = [terms_for(r, source_field, config) for r in corpus.records]
    freq: dict[str, int] = {}
    for terms in doc_terms:
        for t in terms:
            freq[t] = freq.get(t, 0) + 1
    retained = sorted((t for t, c in freq.items() if c >= min_doc_freq),
                      key=lambda t: (-freq[t], t))
    if max_terms is not None:
        retained = retained[:max_terms]
    if not retained:
        raise EmptyVocabulary(
            f"no {source_field} term appears in >= {min_doc_freq} documents")
    row = {t: i for i, t in enumerate(retained)}
    cells = np.zeros((len(retained), len(corpus.records)), dtype=np.int64)
    for j, terms in enumerate(doc_terms):
        for t in terms:
            i = row.get(t)
            if i is not None:
                cells[i, j] = 1
    return TermDocumentMatrix(terms=tuple(retained),
                              doc_ids=tuple(r.id for r in corpus.records),
                              cells=cells, field=source_field)


def cooccurrence(tdm: TermDocumentMatrix) -> CooccurrenceMatrix:
    """Pairwise document counts, C = M @ M.T over the binary incidence."""
    counts = tdm.cells @ tdm.cells.T
    return CooccurrenceMatrix(terms=tdm.terms, counts=counts, field=tdm.field)


# --------------------------------------------------------------------------
# Correspondence analysis and Ward clustering
# --------------------------------------------------------------------------

def ca_projection(tdm: TermDocumentMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Correspondence analysis of the binary incidence table.

    Builds the relative-frequency matrix, centers it by the expected
    row/column mass product, scales to standardized residuals, and takes the
    singular decomposition. Returns the terms' first two principal
    coordinates and the full principal-inertia spectrum (squared singular
    values, descending).

    Zero-inertia input (all term profiles identical, e.g. duplicated
    documents) is a defined degenerate case: every term sits at the origin.
    Rank 1 raises :class:`DegenerateProjection` since no 2D projection
    exists.
    """
    live_cols = tdm.cells.sum(axis=0) > 0
    N = tdm.cells[:, live_cols].astype(float)
    total = N.sum()
    P = N / total
    r = P.sum(axis=1)
    c = P.sum(axis=0)
    expected = np.outer(r, c)
    S = (P - expected) / np.sqrt(expected)
    U, sigma, _ = np.linalg.svd(S, full_matrices=False)
    tol = max(S.shape) * np.finfo(float).eps * (sigma[0] if len(sigma) else 0.0)
    rank = int((sigma > max(tol, 1e-12)).sum())
    if rank == 0:
        return np.zeros((len(tdm.terms), 2)), np.zeros(min(S.shape))
    if rank < 2:
        raise DegenerateProjection(rank)
    coords = (U[:, :2] * sigma[:2]) / np.sqrt(r)[:, None]
    return coords, sigma ** 2


def ward_linkage(points: np.ndarray) -> list[tuple[int, int, float, int]]:
    """Agglomerative Ward merges with lowest-index tie-breaking.

    Heights follow the linkage convention sqrt(2 x ESS increase), so
    singleton merges sit at their Euclidean distance and heights are
    non-decreasing.
    """
    n = len(points)
    centroids: dict[int, np.ndarray] = {i: points[i].astype(float) for i in range(n)}
    sizes: dict[int, int] = {i: 1 for i in range(n)}
    merges: list[tuple[int, int, float, int]] = []
    next_id = n
    while len(centroids) > 1:
        best: tuple[float, int, int] | None = None
        active = sorted(centroids)
        for ai, a in enumerate(active):
            for b in active[ai + 1:]:
                diff = centroids[a] - centroids[b]
                ess = sizes[a] * sizes[b] / (sizes[a] + sizes[b]) * float(diff @ diff)
                if best is None or ess < best[0] - 1e-15 or (
                        abs(ess - best[0]) <= 1e-15 and (a, b) < best[1:]):
                    best = (ess, a, b)
        ess, a, b = best
        size = sizes[a] + sizes[b]
        merges.append((a, b, math.sqrt(2 * ess), size))
        centroids[next_id] = (sizes[a] * centroids.pop(a) + sizes[b] * centroids.pop(b)) / size
        sizes[next_id] = size
        del sizes[a], sizes[b]
        next_id += 1
    return merges


def cut_merges(merges: list[tuple[int, int, float, int]] | tuple, n: int, k: int) -> list[int]:
    """Partition labels (1..k, contiguous) after undoing the last k-1 merges.

    Cluster ids are assigned in order of each cluster's first original index.
    """
    if not 1 <= k <= n:
        raise ValueError(f"cut level {k} not in 1..{n}")
    parent = list(range(n + len(merges)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for step, (a, b, _, _) in enumerate(merges[: n - k]):
        new = n + step
        parent[find(a)] = new
        parent[find(b)] = new
    first_member: dict[int, int] = {}
    for i in range(n):
        root = find(i)
        first_member.setdefault(root, i)
    order = sorted(first_member.values())
    cluster_of_root = {root: order.index(first) + 1 for root, first in first_member.items()}
    return [cluster_of_root[find(i)] for i in range(n)]


def mca_topic_map(tdm: TermDocumentMatrix, k: int) -> TopicMap:
    """2D projection of terms with a k-cluster Ward partition.

    Requires at least 3 terms and 3 documents; ``k`` must lie in 1..terms.
    """
    n_terms, n_docs = tdm.cells.shape
    if n_terms < 3 or n_docs < 3:
        raise ValueError(f"need >= 3 terms and >= 3 documents, got {n_terms}x{n_docs}")
    if not 1 <= k <= n_terms:
        raise ValueError(f"k={k} not in 1..{n_terms}")
    coords, inertias = ca_projection(tdm)
    total = float(inertias.sum())
    share = (float(inertias[0]) / total, float(inertias[1]) / total) if total else (0.0, 0.0)
    labels = cut_merges(ward_linkage(coords), n_terms, k)
    points = tuple((t, float(coords[i, 0]), float(coords[i, 1]), labels[i])
                   for i, t in enumerate(tdm.terms))
    return TopicMap(points=points, explained_inertia=share, k=k)


def dendrogram(tdm: TermDocumentMatrix, cut_k: int, linkage: str = "ward") -> Dendrogram:
    """Ward merge tree over the same 2D coordinates as the topic map.

    Because the coordinates and the agglomeration are shared, cutting at the
    topic map's k reproduces its partition exactly.
    """
    if linkage != "ward":
        raise ValueError(f"only ward linkage is supported, got {linkage!r}")
    n_terms, n_docs = tdm.cells.shape
    if n_terms < 3 or n_docs < 3:
        raise ValueError(f"need >= 3 terms and >= 3 documents, got {n_terms}x{n_docs}")
    if not 1 <= cut_k <= n_terms:
        raise ValueError(f"cut_k={cut_k} not in 1..{n_terms}")
    coords, _ = ca_projection(tdm)
    merges = tuple(ward_linkage(coords))
    return Dendrogram(terms=tdm.terms, merges=merges, cut_k=cut_k)


# --------------------------------------------------------------------------
# Co-word networks and the thematic map
# --------------------------------------------------------------------------

def _equivalence_edges(coocc: CooccurrenceMatrix, indices: list[int],
                       normalization: str) -> list[tuple[str, str, float]]:
    if normalization not in ("association", "raw"):
        raise ValueError(f"normalization must be 'association' or 'raw', got {normalization!r}")
    counts = coocc.counts
    edges = []
    for pos_a, i in enumerate(indices):
        for j in indices[pos_a + 1:]:
            c_ij = counts[i, j]
            if not c_ij:
                continue
            if normalization == "association":
                w = float(c_ij) ** 2 / (float(counts[i, i]) * float(counts[j, j]))
            else:
                w = float(c_ij)
            edges.append((coocc.terms[i], coocc.terms[j], w))
    return edges


def cooccurrence_network(coocc: CooccurrenceMatrix, top_n: int | None = None,
                         normalization: str = "association") -> WeightedGraph:
    """Co-word network over the most frequent terms.

    Edge weights default to the equivalence index e_ij = c_ij^2 / (c_ii c_jj);
    ``normalization="raw"`` keeps plain joint-document counts. Zero-weight
    pairs are omitted. Clusters come from greedy modularity at its maximum.
    """
    n = len(coocc.terms)
    if top_n is not None and top_n > n:
        raise ValueError(f"top_n={top_n} exceeds term count {n}")
    df = coocc.doc_frequencies
    ranked = sorted(range(n), key=lambda i: (-int(df[i]), coocc.terms[i]))
    indices = ranked[:top_n] if top_n is not None else ranked
    node_ids = [coocc.terms[i] for i in indices]
    nodes = [(coocc.terms[i], coocc.terms[i], float(df[i])) for i in indices]
    edges = _equivalence_edges(coocc, indices, normalization)
    clusters = greedy_modularity_clusters(node_ids, edges)
    return make_graph("cooccurrence", nodes, edges, clusters)


def thematic_map(coocc: CooccurrenceMatrix, cluster_count: int,
                 normalization: str = "association") -> ThematicMap:
    """Callon strategic diagram of co-word themes.

    Themes are greedy-modularity communities of the keyword network, merged
    down to exactly ``cluster_count``. Centrality is 10x the summed link
    weight to other themes; density is 100x the internal link weight over
    the member count. Quadrants compare each theme against the medians:
    motor (both high), niche (dense only), emerging_declining (both low),
    basic (central only). ``doc_share`` is the theme's share of total
    term-document incidence mass, since the co-occurrence matrix does not
    retain per-document term sets.
    """
    n = len(coocc.terms)
    if cluster_count < 2:
        raise ValueError("a thematic map needs at least 2 themes")
    if cluster_count > n:
        raise ValueError(f"cluster_count={cluster_count} exceeds term count {n}")
    indices = list(range(n))
    edges = _equivalence_edges(coocc, indices, normalization)
    clusters = greedy_modularity_clusters(list(coocc.terms), edges, target=cluster_count)

    weight = {(a, b): w for a, b, w in ((min(a, b), max(a, b), w) for a, b, w in edges)}
    df = coocc.doc_frequencies
    freq = {t: int(df[i]) for i, t in enumerate(coocc.terms)}
    total_mass = float(df.sum())

    members_of: dict[int, list[str]] = {}
    for term in coocc.terms:
        members_of.setdefault(clusters[term], []).append(term)

    themes = []
    for cid in sorted(members_of):
        members = members_of[cid]
        member_set = set(members)
        internal = sum(w for (a, b), w in weight.items()
                       if a in member_set and b in member_set)
        external = sum(w for (a, b), w in weight.items()
                       if (a in member_set) != (b in member_set))
        label = sorted(members, key=lambda t: (-freq[t], t))[0]
        themes.append(Theme(
            label=label,
            members=tuple(sorted(members, key=lambda t: (-freq[t], t))),
            centrality=10.0 * external,
            density=100.0 * internal / len(members),
            doc_share=sum(freq[t] for t in members) / total_mass if total_mass else 0.0,
            quadrant="",
        ))

    med_c = _median([t.centrality for t in themes])
    med_d = _median([t.density for t in themes])
    placed = []
    for t in themes:
        high_c, high_d = t.centrality >= med_c, t.density >= med_d
        quadrant = ("motor" if high_c and high_d else
                    "niche" if high_d else
                    "basic" if high_c else
                    "emerging_declining")
        placed.append(Theme(t.label, t.members, t.centrality, t.density, t.doc_share, quadrant))
    placed.sort(key=lambda t: (-t.doc_share, t.label))
    return ThematicMap(themes=tuple(placed), median_centrality=med_c, median_density=med_d)


def _median(values: list[float]) -> float:
    ordered = sorted(values)
    n = len(ordered)
    mid = n // 2
    return ordered[mid] if n % 2 else (ordered[mid - 1] + ordered[mid]) / 2
