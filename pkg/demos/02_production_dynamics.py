"""Production-dynamics walkthrough: growth and citation series, the most
prolific supervisors and groups, per-supervisor timelines, and keyword
trends. This is the descriptive half of a landscape report.
"""

from pathlib import Path

from biblioscape import (NormalizationConfig, build_corpus, citation_series,
                         frequent_words, load_stopwords, parse_bib_file,
                         production_distribution, production_growth, timelines,
                         word_trends)

DATA = Path(__file__).parent / "data"

records, warnings = parse_bib_file(DATA / "sample.bib")
corpus = build_corpus(records, (2010, 2020), warnings=warnings)
config = NormalizationConfig(stopwords=load_stopwords(DATA / "stopwords_es.txt"))

growth = production_growth(corpus)
print("dissertations per year")
for year, count in growth.points:
    print(f"  {year}  {'#' * int(count)}  {count}")

print("\ncitations accumulated by completion year")
for year, total in citation_series(corpus, "total").points:
    if total:
        print(f"  {year}  {total}")

print("\nmost prolific supervisors")
for name, count in production_distribution(corpus, "supervisor", top_n=5):
    print(f"  {count:2d}  {name}")

print("\nmost productive groups")
for name, count in production_distribution(corpus, "group"):
    print(f"  {count:2d}  {name}")

print("\nsupervisor timelines (year, documents, citations)")
for tl in timelines(corpus, "supervisor", top_n=3):
    cells = "  ".join(f"{y}:{c}d/{cit}c" for y, c, cit in tl.bubbles)
    print(f"  {tl.entity}: {cells}")

print("\nfastest-growing keywords (cumulative document counts)")
for ts in word_trends(corpus, "author_keywords", top_n=4, config=config):
    print(f"  {ts.label:28s} -> {ts.points[-1][1]} documents by {ts.points[-1][0]}")

print("\nmost frequent title terms")
for term, freq in frequent_words(corpus, "title", top_n=8, config=config):
    print(f"  {freq:2d}  {term}")
