import random
from pathlib import Path

import pytest

from biblioscape.corpus import BibRecord, build_corpus

DATA_DIR = Path(__file__).parent / "data"


def record(id, year, student, supervisors=(), group="", keywords=(), title="",
           abstract="", references=(), citations=0, unigrams=()):
    return BibRecord(
        id=id, title=title or f"Title {id}", year=year, student=student,
        supervisors=tuple(supervisors), group=group,
        author_keywords=tuple(keywords), unigram_keywords=tuple(unigrams),
        abstract=abstract, references=tuple(references), citation_count=citations,
    )


@pytest.fixture
def small_corpus():
    """Six records, 2011-2016: mixed groups, supervisors, keywords, references."""
    records = [
        record("d1", 2011, "ana, a.", ["perez, p."], group="SES",
               keywords=["dinamica de sistemas", "logistica"],
               references=["ref one", "ref two"], citations=3,
               title="Modelo de Logística Urbana", abstract="modelo de simulacion urbana"),
        record("d2", 2012, "beto, b.", ["perez, p.", "gomez, g."], group="SES",
               keywords=["dinamica de sistemas", "competitividad"],
               references=["ref two", "ref three"], citations=1,
               title="Competitividad en Bogotá", abstract="analisis de competitividad"),
        record("d3", 2012, "carla, c.", ["gomez, g."], group="MMAI",
               keywords=["sistemas difusos"],
               references=["ref three"], citations=0,
               title="Sistemas Difusos", abstract="control difuso industrial"),
        record("d4", 2014, "dario, d.", [], group="MMAI",
               keywords=["logistica", "metaheuristicas"],
               citations=2, title="Metaheurísticas de Ruteo",
               abstract="ruteo con metaheuristicas"),
        record("d5", 2015, "elsa, e.", ["perez, p."], group="SES",
               keywords=["dinamica de sistemas"],
               references=["ref one", "ref four"], citations=0,
               title="Dinámica de Sistemas en Salud", abstract="modelo de salud publica"),
        record("d6", 2016, "fabio, f.", ["ruiz, r."], group="GIC",
               keywords=["logistica humanitaria", "logistica"],
               references=["ref four", "ref five"], citations=1,
               title="Logística Humanitaria", abstract="atencion de desastres"),
    ]
    return build_corpus(records, (2010, 2016))


def random_corpus(rng: random.Random, max_docs=30, max_terms=50):
    """Random synthetic corpus for oracle-equivalence sweeps."""
    vocab = [f"kw{i}" for i in range(rng.randint(3, max_terms))]
    refs = [f"ref {i}" for i in range(rng.randint(2, 40))]
    people = [f"person{i}, x." for i in range(rng.randint(3, 15))]
    groups = [f"G{i}" for i in range(rng.randint(1, 5))]
    n_docs = rng.randint(2, max_docs)
    records = []
    for d in range(n_docs):
        student = rng.choice(people)
        sups = rng.sample([p for p in people if p != student],
                          k=rng.randint(0, min(3, len(people) - 1)))
        records.append(record(
            f"doc{d}", rng.randint(2010, 2020), student, sups,
            group=rng.choice(groups),
            keywords=rng.sample(vocab, k=rng.randint(1, min(6, len(vocab)))),
            references=rng.sample(refs, k=rng.randint(0, min(8, len(refs)))),
            citations=rng.randint(0, 5),
        ))
    return build_corpus(records, (2010, 2020))
