"""End-to-end batch workflow: ingest -> clean -> analyses -> report bundle.

A run is driven by a TOML config (CLI flags can override the window, the
analysis selection, and the output directory), executes the enabled analyses
in dependency order over one shared corpus, and writes every table twice
(JSON and CSV) plus graph files and SVG plots under::

    out/
      manifest.json
      provenance.txt
      stats/  series/  maps/  networks/  flows/  plots/

The manifest records, per analysis, the inputs it consumed (fields and
parameters), the files it emitted, warnings, and timing. Identical configs
and inputs produce byte-identical artifacts; only the manifest's timing
fields vary between runs.
"""

from __future__ import annotations

import json
import sys
import time
from dataclasses import dataclass, field as dc_field
from pathlib import Path

if sys.version_info >= (3, 11):  # pragma: no cover
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from . import concepts, flows, networks, performance
from .corpus import Corpus, build_corpus, parse_bib, split_parsed
from .graphs import WeightedGraph, to_dot, to_edge_csv, to_graphml, to_node_csv
from .text import NormalizationConfig, load_stopwords, load_synonyms

__all__ = ["ANALYSES", "RunConfig", "RunManifest", "AnalysisRecord", "load_config", "run"]


# Default parameters per analysis, in execution order.
ANALYSES: dict[str, dict] = {
    "corpus_stats": {"per_year_mode": "elapsed"},
    "production_growth": {},
    "citation_series": {"mode": "total"},
    "production_distribution": {"by": "supervisor", "top_n": 12},
    "citation_distribution": {"top_n": 20},
    "timelines": {"by": "supervisor", "top_n": 10},
    "word_trends": {"field": "author_keywords", "top_n": 10},
    "frequent_words": {"field": "title", "top_n": 15},
    "word_cloud": {"field": "abstract", "top_n": 60},
    "term_matrix": {"field": "author_keywords", "min_doc_freq": 2, "max_terms": 75},
    "topic_map": {"field": "unigram_keywords", "k": 5, "min_doc_freq": 2, "max_terms": 50},
    "dendrogram": {"field": "unigram_keywords", "k": 5, "min_doc_freq": 2, "max_terms": 50},
    "cooccurrence_network": {"field": "author_keywords", "top_n": 30, "min_doc_freq": 2,
                             "max_terms": 75, "normalization": "association"},
    "thematic_map": {"field": "author_keywords", "clusters": 6, "min_doc_freq": 2,
                     "max_terms": 75, "normalization": "association"},
    "collaboration_network": {"top_n": 50},
    "author_coupling_network": {"min_shared": 1},
    "doc_coupling_network": {"min_shared": 1},
    "cocitation_network": {"top_n_refs": 30},
    "flow": {"stages": ["group", "author_keywords", "supervisors"], "top_n": 10},
}

_SKIPPABLE = (concepts.EmptyVocabulary, concepts.DegenerateProjection,
              networks.EmptyReferences, flows.EmptyStage, ValueError)


@dataclass
class RunConfig:
    inputs: list[str]
    window: tuple[int, int]
    citation_field: str = "citations"
    stopwords_path: str | None = None
    synonyms_path: str | None = None
    fold_diacritics: bool = True
    min_token_length: int = 2
    output_dir: str = "out"
    render_plots: bool = True
    only: list[str] | None = None
    analysis_params: dict[str, dict] = dc_field(default_factory=dict)

    def text_config(self) -> NormalizationConfig:
        stop = load_stopwords(self.stopwords_path) if self.stopwords_path else frozenset()
        syn = load_synonyms(self.synonyms_path) if self.synonyms_path else {}
        return NormalizationConfig(stopwords=stop, synonyms=syn,
                                   fold_diacritics=self.fold_diacritics,
                                   min_token_length=self.min_token_length)


@dataclass
class AnalysisRecord:
    name: str
    inputs: dict
    outputs: list[str] = dc_field(default_factory=list)
    warnings: list[str] = dc_field(default_factory=list)
    seconds: float = 0.0

    def as_dict(self) -> dict:
        return {"name": self.name, "inputs": self.inputs, "outputs": list(self.outputs),
                "warnings": list(self.warnings), "seconds": self.seconds}


@dataclass
class RunManifest:
    window: tuple[int, int]
    sources: list[str]
    output_dir: str
    analyses: list[AnalysisRecord] = dc_field(default_factory=list)
    field_usage: dict[str, list[str]] = dc_field(default_factory=dict)
    warnings: list[str] = dc_field(default_factory=list)

    def as_dict(self) -> dict:
        return {
            "window": list(self.window),
            "sources": list(self.sources),
            "analyses": [a.as_dict() for a in self.analyses],
            "field_usage": self.field_usage,
            "warnings": list(self.warnings),
        }

    def all_outputs(self) -> list[str]:
        return [p for a in self.analyses for p in a.outputs]

    def save(self, path: str | Path) -> None:
        Path(path).write_text(_json_text(self.as_dict()), encoding="utf-8")


def load_config(path: str | Path) -> RunConfig:
    """Read a run configuration from a TOML file."""
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    corpus_cfg = data.get("corpus", {})
    text_cfg = data.get("text", {})
    out_cfg = data.get("output", {})
    analyses_cfg = dict(data.get("analyses", {}))
    only = analyses_cfg.pop("only", None)
    params = {k: v for k, v in analyses_cfg.items() if isinstance(v, dict)}

    inputs = corpus_cfg.get("inputs", [])
    window = corpus_cfg.get("window")
    if not inputs or not window or len(window) != 2:
        raise ValueError("config must set corpus.inputs and corpus.window = [start, end]")
    base = Path(path).parent

    def resolve(p: str | None) -> str | None:
        return str(base / p) if p and not Path(p).is_absolute() else p

    return RunConfig(
        inputs=[resolve(p) for p in inputs],
        window=(int(window[0]), int(window[1])),
        citation_field=corpus_cfg.get("citation_field", "citations"),
        stopwords_path=resolve(text_cfg.get("stopwords")),
        synonyms_path=resolve(text_cfg.get("synonyms")),
        fold_diacritics=bool(text_cfg.get("fold_diacritics", True)),
        min_token_length=int(text_cfg.get("min_token_length", 2)),
        output_dir=resolve(out_cfg.get("dir", "out")),
        render_plots=bool(out_cfg.get("plots", True)),
        only=list(only) if only else None,
        analysis_params=params,
    )


# --------------------------------------------------------------------------
# Serialization helpers
# --------------------------------------------------------------------------

def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def _csv_text(header: str, rows: list[str]) -> str:
    return "\n".join([header] + rows) + "\n"


def _csv_cell(value) -> str:
    s = str(value)
    if any(c in s for c in ',"\n'):
        return '"' + s.replace('"', '""') + '"'
    return s


def _g(x: float) -> str:
    return f"{x:.12g}"


def _series_json(ts: performance.TimeSeries) -> dict:
    return {"label": ts.label, "points": [[y, v] for y, v in ts.points]}


def _series_csv(ts: performance.TimeSeries) -> str:
    return _csv_text("year,value", [f"{y},{_g(v)}" for y, v in ts.points])


def _items_csv(header: str, items) -> str:
    return _csv_text(header, [f"{_csv_cell(k)},{_g(v)}" for k, v in items])


# --------------------------------------------------------------------------
# Analysis implementations
# --------------------------------------------------------------------------

class _Ctx:
    """Per-run shared state: corpus, cleaning config, cached matrices."""

    def __init__(self, corpus: Corpus, text_config: NormalizationConfig):
        self.corpus = corpus
        self.text_config = text_config
        self._tdm_cache: dict[tuple, concepts.TermDocumentMatrix] = {}

    def tdm(self, field: str, min_doc_freq: int, max_terms: int | None):
        key = (field, min_doc_freq, max_terms)
        if key not in self._tdm_cache:
            self._tdm_cache[key] = concepts.term_document_matrix(
                self.corpus, field, min_doc_freq, max_terms, self.text_config)
        return self._tdm_cache[key]

    def coocc(self, field: str, min_doc_freq: int, max_terms: int | None):
        return concepts.cooccurrence(self.tdm(field, min_doc_freq, max_terms))


def _graph_artifacts(name: str, g: WeightedGraph) -> dict[str, str]:
    return {
        f"networks/{name}.graphml": to_graphml(g),
        f"networks/{name}.dot": to_dot(g),
        f"networks/{name}_nodes.csv": to_node_csv(g),
        f"networks/{name}_edges.csv": to_edge_csv(g),
    }


def _run_analysis(name: str, params: dict, ctx: _Ctx) -> tuple[dict[str, str], list[str]]:
    """Execute one analysis; returns {relative path: file text} and fields used."""
    corpus, cfg = ctx.corpus, ctx.text_config
    if name == "corpus_stats":
        stats = performance.corpus_stats(corpus, cfg, params["per_year_mode"])
        d = stats.as_dict()
        rows = [f"{k},{_csv_cell(v if v is not None else 'undefined')}" for k, v in d.items()]
        return ({"stats/corpus_stats.json": _json_text(d),
                 "stats/corpus_stats.csv": _csv_text("indicator,value", rows)},
                ["author", "year", "citations", "author_keywords", "unigram_keywords",
                 "references"])
    if name == "production_growth":
        ts = performance.production_growth(corpus)
        return ({"series/production_growth.json": _json_text(_series_json(ts)),
                 "series/production_growth.csv": _series_csv(ts)}, ["year"])
    if name == "citation_series":
        ts = performance.citation_series(corpus, params["mode"])
        return ({"series/citation_series.json": _json_text(_series_json(ts)),
                 "series/citation_series.csv": _series_csv(ts)}, ["year", "citations"])
    if name == "production_distribution":
        items = performance.production_distribution(corpus, params["by"], params["top_n"])
        src = "author" if params["by"] == "supervisor" else "journal"
        return ({"stats/production_distribution.json": _json_text({"items": [list(i) for i in items]}),
                 "stats/production_distribution.csv": _items_csv("name,documents", items)}, [src])
    if name == "citation_distribution":
        items = performance.citation_distribution(corpus, params["top_n"])
        return ({"stats/citation_distribution.json": _json_text({"items": [list(i) for i in items]}),
                 "stats/citation_distribution.csv": _items_csv("document,citations", items)},
                ["citations"])
    if name == "timelines":
        tls = performance.timelines(corpus, params["by"], params["top_n"])
        data = {"timelines": [{"entity": t.entity,
                               "bubbles": [list(b) for b in t.bubbles]} for t in tls]}
        rows = [f"{_csv_cell(t.entity)},{y},{c},{cit}"
                for t in tls for y, c, cit in t.bubbles]
        src = "author" if params["by"] == "supervisor" else "journal"
        return ({"series/timelines.json": _json_text(data),
                 "series/timelines.csv": _csv_text("entity,year,doc_count,citations", rows)},
                [src, "year", "citations"])
    if name == "word_trends":
        series = performance.word_trends(corpus, params["field"], params["top_n"], cfg)
        data = {"series": [_series_json(ts) for ts in series]}
        rows = [f"{_csv_cell(ts.label)},{y},{_g(v)}" for ts in series for y, v in ts.points]
        return ({"series/word_trends.json": _json_text(data),
                 "series/word_trends.csv": _csv_text("term,year,cumulative", rows)},
                [params["field"], "year"])
    if name == "frequent_words":
        items = performance.frequent_words(corpus, params["field"], params["top_n"], cfg)
        return ({"stats/frequent_words.json": _json_text({"items": [list(i) for i in items]}),
                 "stats/frequent_words.csv": _items_csv("term,doc_frequency", items)},
                [params["field"]])
    if name == "word_cloud":
        items = performance.word_cloud_data(corpus, params["field"], params["top_n"], cfg)
        return ({"stats/word_cloud.json": _json_text({"items": [list(i) for i in items]}),
                 "stats/word_cloud.csv": _items_csv("term,weight", items)},
                [params["field"]])
    if name == "term_matrix":
        tdm = ctx.tdm(params["field"], params["min_doc_freq"], params["max_terms"])
        co = concepts.cooccurrence(tdm)
        tdm_rows = [f"{_csv_cell(t)},{_csv_cell(d)},{v}" for t, d, v in tdm.triplets()]
        co_rows = [f"{_csv_cell(a)},{_csv_cell(b)},{v}" for a, b, v in co.triplets()]
        return ({"maps/term_document_matrix.csv": _csv_text("term,document,value", tdm_rows),
                 "maps/cooccurrence_matrix.csv": _csv_text("term_a,term_b,count", co_rows)},
                [params["field"]])
    if name == "topic_map":
        tdm = ctx.tdm(params["field"], params["min_doc_freq"], params["max_terms"])
        tm = concepts.mca_topic_map(tdm, params["k"])
        rows = [f"{_csv_cell(t)},{_g(x)},{_g(y)},{c}" for t, x, y, c in tm.points]
        return ({"maps/topic_map.json": _json_text(tm.as_dict()),
                 "maps/topic_map.csv": _csv_text("term,x,y,cluster", rows)},
                [params["field"]])
    if name == "dendrogram":
        tdm = ctx.tdm(params["field"], params["min_doc_freq"], params["max_terms"])
        den = concepts.dendrogram(tdm, params["k"])
        rows = [f"{i},{a},{b},{_g(h)},{s}" for i, (a, b, h, s) in enumerate(den.merges)]
        return ({"maps/dendrogram.json": _json_text(den.as_dict()),
                 "maps/dendrogram.csv": _csv_text("step,cluster_a,cluster_b,height,size", rows)},
                [params["field"]])
    if name == "cooccurrence_network":
        co = ctx.coocc(params["field"], params["min_doc_freq"], params["max_terms"])
        g = concepts.cooccurrence_network(co, min(params["top_n"], len(co.terms)),
                                          params["normalization"])
        return _graph_artifacts("cooccurrence_network", g), [params["field"]]
    if name == "thematic_map":
        co = ctx.coocc(params["field"], params["min_doc_freq"], params["max_terms"])
        tm = concepts.thematic_map(co, min(params["clusters"], len(co.terms)),
                                   params["normalization"])
        rows = [f"{_csv_cell(t.label)},{_g(t.centrality)},{_g(t.density)},"
                f"{_g(t.doc_share)},{t.quadrant},{_csv_cell('; '.join(t.members))}"
                for t in tm.themes]
        return ({"maps/thematic_map.json": _json_text(tm.as_dict()),
                 "maps/thematic_map.csv": _csv_text(
                     "label,centrality,density,doc_share,quadrant,members", rows)},
                [params["field"]])
    if name == "collaboration_network":
        g = networks.collaboration_network(corpus, params["top_n"])
        return _graph_artifacts("collaboration_network", g), ["author"]
    if name == "author_coupling_network":
        g = networks.author_coupling_network(corpus, params["min_shared"])
        return _graph_artifacts("author_coupling_network", g), ["author", "references"]
    if name == "doc_coupling_network":
        g = networks.doc_coupling_network(corpus, params["min_shared"])
        return _graph_artifacts("doc_coupling_network", g), ["references"]
    if name == "cocitation_network":
        g = networks.cocitation_network(corpus, params["top_n_refs"])
        return _graph_artifacts("cocitation_network", g), ["references"]
    if name == "flow":
        diagram = flows.flow(corpus, params["stages"], params["top_n"])
        return ({"flows/flow.json": _json_text(diagram.as_dict()),
                 "flows/flow.csv": diagram.links_csv()},
                list(params["stages"]))
    raise ValueError(f"unknown analysis {name!r}")


# --------------------------------------------------------------------------
# Orchestration
# --------------------------------------------------------------------------

def run(config: RunConfig) -> RunManifest:
    """Execute the configured workflow and write the report bundle.

    An empty corpus aborts the run; a failing individual analysis is
    recorded in the manifest and does not stop the others.
    """
    enabled = list(ANALYSES) if config.only is None else list(config.only)
    for name in enabled:
        if name not in ANALYSES:
            raise ValueError(f"unknown analysis {name!r} in selection")

    text_config = config.text_config()
    parsed = []
    for path in config.inputs:
        parsed.extend(parse_bib(path, config.citation_field))
    records, warnings = split_parsed(parsed)
    corpus = build_corpus(records, config.window, warnings=warnings, sources=config.inputs)

    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest(window=config.window, sources=list(config.inputs),
                           output_dir=str(out))

    t0 = time.perf_counter()
    (out / "provenance.txt").write_text(corpus.provenance.as_text() + "\n", encoding="utf-8")
    corpus_record = AnalysisRecord(
        name="corpus",
        inputs={"window": list(config.window), "citation_field": config.citation_field,
                "records": len(corpus.records)},
        outputs=["provenance.txt"],
        warnings=[str(w) for w in corpus.provenance.warnings],
        seconds=round(time.perf_counter() - t0, 6),
    )
    manifest.analyses.append(corpus_record)

    ctx = _Ctx(corpus, text_config)
    for name in enabled:
        params = dict(ANALYSES[name])
        params.update(config.analysis_params.get(name, {}))
        record = AnalysisRecord(name=name, inputs={"parameters": params})
        t0 = time.perf_counter()
        try:
            artifacts, fields = _run_analysis(name, params, ctx)
        except _SKIPPABLE as exc:
            record.warnings.append(f"skipped: {exc}")
            manifest.warnings.append(f"{name} skipped: {exc}")
        else:
            manifest.field_usage[name] = fields
            record.inputs["fields"] = fields
            for rel, text in artifacts.items():
                path = out / rel
                path.parent.mkdir(parents=True, exist_ok=True)
                path.write_text(text, encoding="utf-8")
                record.outputs.append(rel)
        record.seconds = round(time.perf_counter() - t0, 6)
        manifest.analyses.append(record)

    if config.render_plots:
        from .plots import render_plots
        render_plots(manifest, out)

    manifest.save(out / "manifest.json")
    return manifest
