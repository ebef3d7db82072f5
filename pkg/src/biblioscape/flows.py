"""Energy-flow (alluvial) diagram data between bibliographic fields.

A flow stacks two or three fields, e.g. group -> keyword -> supervisor, and
weights each band by the number of documents exhibiting both adjacent
values. A document with several keywords fans out into one unit link per
keyword; weights stay integral and auditable.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .corpus import BibRecord, Corpus

__all__ = ["EmptyStage", "FlowDiagram", "FlowLink", "FlowNode", "FLOW_FIELDS", "flow"]

FLOW_FIELDS = ("group", "author_keywords", "supervisors", "student", "year")


class EmptyStage(Exception):
    """A requested stage has no values anywhere in the corpus."""


@dataclass(frozen=True)
class FlowNode:
    stage: str
    label: str
    total_weight: int


@dataclass(frozen=True)
class FlowLink:
    from_node: str
    to_node: str
    weight: int


@dataclass(frozen=True)
class FlowDiagram:
    stages: tuple[str, ...]
    nodes: tuple[tuple[FlowNode, ...], ...]  # one tuple per stage
    links: tuple[tuple[FlowLink, ...], ...]  # one tuple per adjacent stage pair

    def as_dict(self) -> dict:
        return {
            "stages": list(self.stages),
            "nodes": [[{"label": n.label, "weight": n.total_weight} for n in stage]
                      for stage in self.nodes],
            "links": [[{"source": l.from_node, "target": l.to_node, "weight": l.weight}
                       for l in hop] for hop in self.links],
        }

    def links_csv(self) -> str:
        lines = ["stage,source,target,weight"]
        for i, hop in enumerate(self.links):
            for l in hop:
                lines.append(f"{i},{_csv(l.from_node)},{_csv(l.to_node)},{l.weight}")
        return "\n".join(lines) + "\n"


def _csv(value: str) -> str:
    if any(c in value for c in ',"\n'):
        return '"' + value.replace('"', '""') + '"'
    return value


def _stage_values(record: BibRecord, stage: str) -> list[str]:
    if stage == "group":
        return [record.group] if record.group else []
    if stage == "author_keywords":
        return list(record.author_keywords)
    if stage == "supervisors":
        return list(record.supervisors)
    if stage == "student":
        return [record.student]
    if stage == "year":
        return [str(record.year)]
    raise ValueError(f"unknown flow stage {stage!r}; expected one of {FLOW_FIELDS}")


def flow(corpus: Corpus, stages: tuple[str, ...] | list[str],
         top_n: int | None = None) -> FlowDiagram:
    """Build the alluvial diagram for 2 or 3 stages.

    Each stage keeps its ``top_n`` values by document count (alphabetical
    ties); links count the documents exhibiting both adjacent retained
    values, fanning out over multi-valued fields. Stage nodes and links are
    deterministically ordered.
    """
    stages = tuple(stages)
    if len(stages) not in (2, 3):
        raise ValueError(f"a flow needs 2 or 3 stages, got {len(stages)}")
    for s in stages:
        if s not in FLOW_FIELDS:
            raise ValueError(f"unknown flow stage {s!r}; expected one of {FLOW_FIELDS}")

    per_doc = [[sorted(set(_stage_values(r, s))) for s in stages] for r in corpus.records]

    kept: list[list[str]] = []
    for si, stage in enumerate(stages):
        counts = Counter()
        for values in per_doc:
            counts.update(values[si])
        if not counts:
            raise EmptyStage(f"stage {stage!r} has no values in the corpus")
        ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
        kept.append([v for v, _ in (ranked[:top_n] if top_n is not None else ranked)])

    kept_sets = [set(vals) for vals in kept]
    hop_counts: list[Counter] = [Counter() for _ in range(len(stages) - 1)]
    node_weight: list[Counter] = [Counter() for _ in stages]
    for values in per_doc:
        retained = [[v for v in values[si] if v in kept_sets[si]] for si in range(len(stages))]
        for si, vals in enumerate(retained):
            node_weight[si].update(vals)
        for hop in range(len(stages) - 1):
            for a in retained[hop]:
                for b in retained[hop + 1]:
                    hop_counts[hop][(a, b)] += 1

    nodes = tuple(
        tuple(FlowNode(stages[si], label, node_weight[si][label]) for label in kept[si])
        for si in range(len(stages)))
    links = tuple(
        tuple(FlowLink(a, b, w) for (a, b), w in sorted(hop.items()))
        for hop in hop_counts)
    return FlowDiagram(stages=stages, nodes=nodes, links=links)
