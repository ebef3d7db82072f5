import json
from pathlib import Path

import pytest

from biblioscape.cli import main as cli_main
from biblioscape.pipeline import ANALYSES, RunConfig, load_config, run
from biblioscape.plots import svg_line_chart, svg_sankey

DATA = Path(__file__).parent / "data"
GOLDEN = DATA / "golden"


def make_config(tmp_path, out_name="out", **overrides):
    cfg = RunConfig(inputs=[str(DATA / "pipeline.bib")], window=(2010, 2020),
                    output_dir=str(tmp_path / out_name))
    for key, value in overrides.items():
        setattr(cfg, key, value)
    return cfg


def manifest_json(out_dir):
    return json.loads((Path(out_dir) / "manifest.json").read_text(encoding="utf-8"))


def strip_seconds(manifest_dict):
    for a in manifest_dict["analyses"]:
        a.pop("seconds")
    return manifest_dict


def test_full_run_emits_expected_bundle(tmp_path):
    config = make_config(tmp_path)
    manifest = run(config)
    names = [a.name for a in manifest.analyses]
    assert names == ["corpus"] + list(ANALYSES)
    assert len(manifest.all_outputs()) >= 15
    out = Path(config.output_dir)
    for rel in manifest.all_outputs():
        assert (out / rel).is_file(), rel
    assert not manifest.warnings  # every analysis ran on this corpus


def test_every_emitted_file_listed_exactly_once(tmp_path):
    config = make_config(tmp_path)
    manifest = run(config)
    out = Path(config.output_dir)
    listed = manifest.all_outputs()
    assert len(listed) == len(set(listed))
    on_disk = {str(p.relative_to(out)) for p in out.rglob("*") if p.is_file()}
    assert on_disk == set(listed) | {"manifest.json"}


def test_reruns_are_byte_identical(tmp_path):
    m1 = run(make_config(tmp_path, "out1"))
    m2 = run(make_config(tmp_path, "out2"))
    out1, out2 = Path(m1.output_dir), Path(m2.output_dir)
    files1 = sorted(p.relative_to(out1) for p in out1.rglob("*") if p.is_file())
    files2 = sorted(p.relative_to(out2) for p in out2.rglob("*") if p.is_file())
    assert files1 == files2
    for rel in files1:
        if rel.name == "manifest.json":
            continue
        assert (out1 / rel).read_bytes() == (out2 / rel).read_bytes(), rel
    assert strip_seconds(manifest_json(out1)) == strip_seconds(manifest_json(out2))


def test_only_selection_runs_single_analysis(tmp_path):
    config = make_config(tmp_path, only=["corpus_stats"])
    manifest = run(config)
    assert [a.name for a in manifest.analyses] == ["corpus", "corpus_stats"]
    stats = json.loads((Path(config.output_dir) / "stats/corpus_stats.json")
                       .read_text(encoding="utf-8"))
    assert stats["documents"] == 9  # the 2009 record is outside the window


def test_unknown_analysis_is_fatal(tmp_path):
    with pytest.raises(ValueError):
        run(make_config(tmp_path, only=["corpus_stats", "venue_breakdown"]))


def test_window_filtering_reaches_outputs(tmp_path):
    config = make_config(tmp_path, window=(2012, 2016), only=["production_growth"])
    run(config)
    growth = json.loads((Path(config.output_dir) / "series/production_growth.json")
                        .read_text(encoding="utf-8"))
    assert [p[0] for p in growth["points"]] == [2012, 2013, 2014, 2015, 2016]


def test_field_usage_covers_paper_associations(tmp_path):
    manifest = run(make_config(tmp_path))
    usage = manifest.field_usage
    assert "author_keywords" in usage["word_trends"]
    assert "references" in usage["author_coupling_network"]
    assert "references" in usage["doc_coupling_network"]
    assert "references" in usage["cocitation_network"]
    assert "title" in usage["frequent_words"]
    assert "abstract" in usage["word_cloud"]
    assert "citations" in usage["citation_series"]


def test_analysis_errors_recorded_not_fatal(tmp_path):
    # a window whose records carry no references: the four reference-based
    # analyses skip with warnings, everything else still runs
    config = make_config(tmp_path, window=(2010, 2014))
    manifest = run(config)
    skipped = {a.name for a in manifest.analyses if a.warnings}
    assert {"author_coupling_network", "doc_coupling_network",
            "cocitation_network"} <= skipped
    assert manifest.warnings
    ok = {a.name for a in manifest.analyses if a.outputs}
    assert "corpus_stats" in ok and "production_growth" in ok


def test_parameter_overrides_apply(tmp_path):
    config = make_config(tmp_path, only=["frequent_words"],
                         analysis_params={"frequent_words": {"top_n": 2}})
    run(config)
    items = json.loads((Path(config.output_dir) / "stats/frequent_words.json")
                       .read_text(encoding="utf-8"))["items"]
    assert len(items) == 2


# --------------------------------------------------------------------------
# Config file + CLI
# --------------------------------------------------------------------------

CONFIG_TOML = """
[corpus]
inputs = ["{bib}"]
window = [2010, 2020]

[text]
stopwords = "{stop}"

[output]
dir = "{out}"

[analyses]
only = ["corpus_stats", "production_growth", "word_trends"]

[analyses.word_trends]
field = "author_keywords"
top_n = 4
"""


def write_config(tmp_path, out_name="cli_out", only_line=True):
    stop = tmp_path / "stop.txt"
    stop.write_text("de\nla\nel\nen\npara\n", encoding="utf-8")
    text = CONFIG_TOML.format(bib=DATA / "pipeline.bib", stop=stop,
                              out=tmp_path / out_name)
    path = tmp_path / "run.toml"
    path.write_text(text, encoding="utf-8")
    return path


def test_load_config_resolves_and_parses(tmp_path):
    path = write_config(tmp_path)
    config = load_config(path)
    assert config.window == (2010, 2020)
    assert config.only == ["corpus_stats", "production_growth", "word_trends"]
    assert config.analysis_params["word_trends"]["top_n"] == 4
    assert config.stopwords_path.endswith("stop.txt")


def test_cli_successful_run(tmp_path, capsys):
    path = write_config(tmp_path)
    code = cli_main(["--config", str(path)])
    assert code == 0
    assert (tmp_path / "cli_out" / "manifest.json").is_file()
    assert "artifacts" in capsys.readouterr().out


def test_cli_window_and_out_overrides(tmp_path):
    path = write_config(tmp_path)
    code = cli_main(["--config", str(path), "--window", "2012:2014",
                     "--out", str(tmp_path / "other"), "--only", "production_growth"])
    assert code == 0
    growth = json.loads((tmp_path / "other" / "series/production_growth.json")
                        .read_text(encoding="utf-8"))
    assert [p[0] for p in growth["points"]] == [2012, 2013, 2014]


def test_cli_exit_codes(tmp_path, capsys, monkeypatch):
    assert cli_main(["--config", str(tmp_path / "missing.toml")]) == 1
    path = write_config(tmp_path)
    assert cli_main(["--config", str(path), "--only", "nope"]) == 1
    # empty window -> fatal corpus error
    assert cli_main(["--config", str(path), "--window", "1990:1991"]) == 1
    # corpus without references in window -> skipped analyses -> exit 2
    assert cli_main(["--config", str(path), "--window", "2010:2014",
                     "--only", "author_coupling_network"]) == 2
    capsys.readouterr()
    monkeypatch.delenv("BIBLIOSCAPE_CONFIG", raising=False)
    assert cli_main([]) == 1  # no config anywhere


def test_cli_env_var_default(tmp_path, monkeypatch):
    path = write_config(tmp_path, out_name="env_out")
    monkeypatch.setenv("BIBLIOSCAPE_CONFIG", str(path))
    assert cli_main(["--only", "corpus_stats"]) == 0
    assert (tmp_path / "env_out" / "stats" / "corpus_stats.json").is_file()


# --------------------------------------------------------------------------
# Plots
# --------------------------------------------------------------------------

def test_growth_polyline_has_one_vertex_per_year(tmp_path):
    config = make_config(tmp_path, only=["production_growth"])
    manifest = run(config)
    svg = (Path(config.output_dir) / "plots/production_growth.svg").read_text(encoding="utf-8")
    polyline = next(l for l in svg.splitlines() if l.startswith("<polyline"))
    vertices = polyline.split('points="')[1].split('"')[0].split()
    assert len(vertices) == 11  # 2010..2020


def test_empty_series_skipped_with_warning(tmp_path):
    # restrict to a window whose records carry no keywords -> no trend series
    config = make_config(tmp_path, only=["word_trends"],
                         analysis_params={"word_trends": {"field": "unigram_keywords",
                                                          "top_n": 0}})
    manifest = run(config)
    assert any("plot skipped" in w for w in manifest.warnings)
    assert not (Path(config.output_dir) / "plots/word_trends.svg").exists()


def test_line_chart_matches_golden():
    svg = svg_line_chart([{"label": "production",
                           "points": [[2010, 1], [2011, 0], [2012, 3], [2013, 2]]}],
                         "production growth")
    assert svg == (GOLDEN / "growth_fixture.svg").read_text(encoding="utf-8")


def test_sankey_matches_golden():
    svg = svg_sankey({"stages": ["group", "author_keywords"],
                      "nodes": [[{"label": "G1", "weight": 2}, {"label": "G2", "weight": 1}],
                                [{"label": "k1", "weight": 2}, {"label": "k2", "weight": 1}]],
                      "links": [[{"source": "G1", "target": "k1", "weight": 2},
                                 {"source": "G2", "target": "k2", "weight": 1}]]},
                     "flow")
    assert svg == (GOLDEN / "flow_fixture.svg").read_text(encoding="utf-8")
