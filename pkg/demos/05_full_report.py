"""Run the whole batch workflow programmatically: every analysis, the flow
diagram, SVG plots, and the run manifest, into demos/out/report/.

The same run is available from the command line:

    analyze --config demos/data/run.toml
"""

from pathlib import Path

from biblioscape import RunConfig, run

HERE = Path(__file__).parent

config = RunConfig(
    inputs=[str(HERE / "data" / "sample.bib")],
    window=(2010, 2020),
    stopwords_path=str(HERE / "data" / "stopwords_es.txt"),
    synonyms_path=str(HERE / "data" / "synonyms_es.txt"),
    output_dir=str(HERE / "out" / "report"),
    analysis_params={
        "topic_map": {"field": "author_keywords", "k": 4},
        "dendrogram": {"field": "author_keywords", "k": 4},
        "thematic_map": {"clusters": 4},
        "flow": {"stages": ["group", "author_keywords", "supervisors"], "top_n": 8},
    },
)

manifest = run(config)

print(f"analyses run: {len(manifest.analyses)}")
print(f"artifacts written: {len(manifest.all_outputs())}")
for record in manifest.analyses:
    status = "ok" if record.outputs else "skipped"
    print(f"  {record.name:26s} {status:8s} {len(record.outputs)} files")
if manifest.warnings:
    print("warnings:")
    for w in manifest.warnings:
        print(f"  {w}")
print(f"\nbundle at {manifest.output_dir}; open plots/*.svg for the figures")
