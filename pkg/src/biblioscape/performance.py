"""Production-dynamics indicators: the descriptive statistics block,
growth/citation series, production and citation distributions, per-entity
timelines, and term trend/frequency tables.

All term counting is per document (a term counts once however often it
repeats inside one record), matching the "term appears in 36 of 143
documents" style of reporting.
"""

from __future__ import annotations

from collections import Counter, defaultdict
from dataclasses import dataclass, asdict

from .corpus import Corpus
from .text import ANALYSIS_FIELDS, NormalizationConfig, keyword_term, terms_for

__all__ = [
    "CorpusStats",
    "TimeSeries",
    "Timeline",
    "citation_distribution",
    "citation_series",
    "corpus_stats",
    "frequent_words",
    "production_distribution",
    "production_growth",
    "timelines",
    "word_cloud_data",
    "word_trends",
]


@dataclass(frozen=True)
class CorpusStats:
    """The descriptive indicator block for one observation window.

    ``collaboration_index`` is the average number of distinct authors over
    multi-authored documents only; it is None (not 0) when every document is
    single-authored. Keyword totals count distinct normalized keywords.
    """

    timespan: tuple[int, int]
    documents: int
    avg_citations_per_doc: float
    avg_citations_per_year_per_doc: float
    author_keywords_total: int
    unigram_keywords_total: int
    avg_dissertations_per_year: float
    authors: int
    author_appearances: int
    single_authored_docs: int
    authors_per_document: float
    coauthors_per_document: float
    collaboration_index: float | None
    references_total: int
    reference_docs: int

    def as_dict(self) -> dict:
        d = asdict(self)
        d["timespan"] = list(self.timespan)
        return d


@dataclass(frozen=True)
class TimeSeries:
    label: str
    points: tuple[tuple[int, float], ...]

    def __post_init__(self) -> None:
        years = [y for y, _ in self.points]
        if years != sorted(set(years)):
            raise ValueError(f"series {self.label!r}: years must be strictly increasing")
        if any(v < 0 for _, v in self.points):
            raise ValueError(f"series {self.label!r}: negative value")


@dataclass(frozen=True)
class Timeline:
    """Per-year activity bubbles for one author or group; active years only."""

    entity: str
    bubbles: tuple[tuple[int, int, int], ...]  # (year, doc_count, citations_that_year)


def corpus_stats(corpus: Corpus, config: NormalizationConfig | None = None,
                 per_year_mode: str = "elapsed") -> CorpusStats:
    """Compute the indicator block.

    ``per_year_mode`` picks the divisor for citations-per-year-per-doc:
    "elapsed" averages each document's citations over the years since its
    completion (inclusive of the window end); "window" divides the plain
    per-document average by the window length.
    """
    if per_year_mode not in ("elapsed", "window"):
        raise ValueError(f"per_year_mode must be 'elapsed' or 'window', got {per_year_mode!r}")
    records = corpus.records
    n_docs = len(records)
    start, end = corpus.window
    n_years = end - start + 1

    total_citations = sum(r.citation_count for r in records)
    if per_year_mode == "elapsed":
        per_year = sum(r.citation_count / (end - r.year + 1) for r in records) / n_docs
    else:
        per_year = total_citations / n_docs / n_years

    people = Counter()
    appearances = 0
    multi_docs = 0
    multi_people: set[str] = set()
    for r in records:
        names = set(r.people)
        people.update(names)
        appearances += len(r.people)
        if not r.single_authored:
            multi_docs += 1
            multi_people.update(names)
    single_docs = n_docs - multi_docs
    collaboration = len(multi_people) / multi_docs if multi_docs else None

    keywords: set[str] = set()
    unigrams: set[str] = set()
    for r in records:
        keywords.update(terms_for(r, "author_keywords", config))
        unigrams.update(terms_for(r, "unigram_keywords", config))

    ref_docs = sum(1 for r in records if r.references)
    return CorpusStats(
        timespan=corpus.window,
        documents=n_docs,
        avg_citations_per_doc=total_citations / n_docs,
        avg_citations_per_year_per_doc=per_year,
        author_keywords_total=len(keywords),
        unigram_keywords_total=len(unigrams),
        avg_dissertations_per_year=n_docs / n_years,
        authors=len(people),
        author_appearances=appearances,
        single_authored_docs=single_docs,
        authors_per_document=len(people) / n_docs,
        coauthors_per_document=appearances / n_docs,
        collaboration_index=collaboration,
        references_total=sum(len(r.references) for r in records),
        reference_docs=ref_docs,
    )


def production_growth(corpus: Corpus) -> TimeSeries:
    """Documents completed per year, zero-filled across the window."""
    counts = Counter(r.year for r in corpus.records)
    return TimeSeries("production", tuple((y, counts.get(y, 0)) for y in corpus.years))


def citation_series(corpus: Corpus, mode: str = "total") -> TimeSeries:
    """Citations accumulated by each year's documents.

    "total" zero-fills empty years; "average" divides by that year's document
    count and omits years with no documents.
    """
    if mode not in ("total", "average"):
        raise ValueError(f"mode must be 'total' or 'average', got {mode!r}")
    cites = Counter()
    docs = Counter()
    for r in corpus.records:
        cites[r.year] += r.citation_count
        docs[r.year] += 1
    if mode == "total":
        points = tuple((y, cites.get(y, 0)) for y in corpus.years)
    else:
        points = tuple((y, cites[y] / docs[y]) for y in corpus.years if docs.get(y))
    return TimeSeries(f"citations_{mode}", points)


def _entity_values(record, by: str) -> tuple[str, ...]:
    if by == "supervisor":
        return record.supervisors
    if by == "group":
        return (record.group,) if record.group else ()
    raise ValueError(f"by must be 'supervisor' or 'group', got {by!r}")


def _top(counter: Counter, top_n: int | None) -> list[tuple[str, int]]:
    ranked = sorted(counter.items(), key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n] if top_n is not None else ranked


def production_distribution(corpus: Corpus, by: str = "supervisor",
                            top_n: int | None = None) -> list[tuple[str, int]]:
    """Documents per supervisor or group, descending (alphabetical ties).

    A document with k supervisors credits each of them once.
    """
    counts = Counter()
    for r in corpus.records:
        counts.update(set(_entity_values(r, by)))
    return _top(counts, top_n)


def citation_distribution(corpus: Corpus, top_n: int | None = None
                          ) -> list[tuple[str, int]]:
    """Per-document citation counts, descending (id ties)."""
    ranked = sorted(((r.id, r.citation_count) for r in corpus.records),
                    key=lambda kv: (-kv[1], kv[0]))
    return ranked[:top_n] if top_n is not None else ranked


def timelines(corpus: Corpus, by: str = "supervisor",
              top_n: int | None = None) -> list[Timeline]:
    """Activity timelines for the most productive entities.

    One bubble per active year: document count plus the citations those
    documents have accrued.
    """
    per_year: dict[str, dict[int, list[int]]] = defaultdict(lambda: defaultdict(lambda: [0, 0]))
    totals = Counter()
    for r in corpus.records:
        for entity in set(_entity_values(r, by)):
            totals[entity] += 1
            cell = per_year[entity][r.year]
            cell[0] += 1
            cell[1] += r.citation_count
    out = []
    for entity, _ in _top(totals, top_n):
        bubbles = tuple((y, c[0], c[1]) for y, c in sorted(per_year[entity].items()))
        out.append(Timeline(entity=entity, bubbles=bubbles))
    return out


def _doc_frequencies(corpus: Corpus, source_field: str,
                     config: NormalizationConfig | None) -> Counter:
    if source_field not in ANALYSIS_FIELDS:
        raise ValueError(f"unknown field {source_field!r}; expected one of {ANALYSIS_FIELDS}")
    freq = Counter()
    for r in corpus.records:
        freq.update(terms_for(r, source_field, config))
    return freq


def frequent_words(corpus: Corpus, source_field: str = "author_keywords",
                   top_n: int | None = None,
                   config: NormalizationConfig | None = None) -> list[tuple[str, int]]:
    """Document frequency of terms in one field, descending (alphabetical ties)."""
    return _top(_doc_frequencies(corpus, source_field, config), top_n)


def word_cloud_data(corpus: Corpus, source_field: str = "abstract",
                    top_n: int | None = None,
                    config: NormalizationConfig | None = None) -> list[tuple[str, int]]:
    """Term weights for a word cloud; weight is document frequency."""
    return frequent_words(corpus, source_field, top_n, config)


def word_trends(corpus: Corpus, source_field: str = "author_keywords",
                top_n: int = 10,
                config: NormalizationConfig | None = None) -> list[TimeSeries]:
    """Cumulative per-year document counts for the leading terms of a field.

    Terms are ranked by final cumulative count (alphabetical ties); each
    series spans every window year, so a term unused before some year shows
    an explicit 0 there.
    """
    per_term_year: dict[str, Counter] = defaultdict(Counter)
    for r in corpus.records:
        for term in terms_for(r, source_field, config):
            per_term_year[term][r.year] += 1
    finals = Counter({t: sum(c.values()) for t, c in per_term_year.items()})
    series = []
    for term, _ in _top(finals, top_n):
        cumulative = 0
        points = []
        for y in corpus.years:
            cumulative += per_term_year[term].get(y, 0)
            points.append((y, cumulative))
        series.append(TimeSeries(term, tuple(points)))
    return series
